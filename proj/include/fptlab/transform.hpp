#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fptlab {

// A real-argument scalar transform lambda -> value with a declared open
// domain. FPT transforms live on (0, inf); bilateral density transforms
// are entire and use the full line.
struct TransformFn {
    std::function<double(double)> eval;
    double domain_lo = 0.0;
    double domain_hi = std::numeric_limits<double>::infinity();
    std::string label;

    double operator()(double lam) const {
        if (!(lam > domain_lo && lam < domain_hi))
            throw std::domain_error("TransformFn '" + label +
                                    "': argument outside domain");
        return eval(lam);
    }
};

inline TransformFn make_transform(std::function<double(double)> f,
                                  std::string label,
                                  double lo = 0.0,
                                  double hi = std::numeric_limits<double>::infinity()) {
    TransformFn t;
    t.eval = std::move(f);
    t.domain_lo = lo;
    t.domain_hi = hi;
    t.label = std::move(label);
    return t;
}

// Grid diagnostics for a function claiming to be the transform of an FPT
// law: ~1 near 0+, within [0,1], nonincreasing.
struct FptTransformCheck {
    bool normalized = false;
    bool in_unit_range = false;
    bool nonincreasing = false;
    double value_near_zero = 0.0;
    bool ok() const { return normalized && in_unit_range && nonincreasing; }
};

template <class F>
FptTransformCheck check_fpt_transform(F&& f, const std::vector<double>& grid,
                                      double eps = 1e-8, double norm_tol = 1e-4) {
    FptTransformCheck c;
    c.value_near_zero = f(eps);
    c.normalized = std::abs(c.value_near_zero - 1.0) <= norm_tol;
    c.in_unit_range = true;
    c.nonincreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (double lam : grid) {
        const double v = f(lam);
        if (!(v >= 0.0 && v <= 1.0 + norm_tol)) c.in_unit_range = false;
        if (v > prev + 1e-12) c.nonincreasing = false;
        prev = v;
    }
    return c;
}

} // namespace fptlab
