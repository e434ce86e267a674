#pragma once

#include <stdexcept>

namespace fptlab {

// Parameters of the drifted Brownian motion with holding-and-jumping
// boundary at 0: drift mu, barrier S, holding rate beta, start x.
// The transform formulas require mu <= 0; the simulator takes any mu.
struct DriftParams {
    double mu = 0.0;
    double S = 1.0;
    double beta = 1.0;
    double x = 0.0;

    void validate(bool require_nonpositive_drift = true) const {
        if (!(S > 0.0)) throw std::domain_error("DriftParams: S must be > 0");
        if (!(beta > 0.0)) throw std::domain_error("DriftParams: beta must be > 0");
        if (!(x >= 0.0 && x < S))
            throw std::domain_error("DriftParams: need 0 <= x < S");
        if (require_nonpositive_drift && !(mu <= 0.0))
            throw std::domain_error("DriftParams: transform formulas need mu <= 0");
    }
};

} // namespace fptlab
