#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fptlab {

// Minimal CSV with '#'-prefixed "key=value" comment headers. All outputs
// echo their parameter set this way so runs can be re-parsed by machine.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }

    const std::string* comment(const std::string& key) const {
        for (const auto& kv : comments)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }
};

namespace detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

inline bool parse_double(const std::string& s, double& v) {
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && end != s.c_str();
}
} // namespace detail

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable t;
    std::string line;
    bool saw_data = false;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = detail::trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                t.comments.emplace_back(detail::trim(body.substr(0, eq)),
                                        detail::trim(body.substr(eq + 1)));
            continue;
        }
        auto cells = detail::split(line, ',');
        if (cells.empty()) continue;
        std::vector<double> vals(cells.size());
        bool numeric = true;
        for (std::size_t i = 0; i < cells.size(); ++i)
            numeric = numeric && detail::parse_double(cells[i], vals[i]);
        if (!numeric) {
            if (saw_data)
                throw std::runtime_error(path + ": non-numeric row after data");
            t.header = cells;
            continue;
        }
        if (!saw_data) {
            t.columns.resize(cells.size());
            saw_data = true;
        }
        if (cells.size() != t.columns.size())
            throw std::runtime_error(path + ": ragged row");
        for (std::size_t i = 0; i < cells.size(); ++i)
            t.columns[i].push_back(vals[i]);
    }
    return t;
}

inline void write_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& comments,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& kv : comments)
        out << "# " << kv.first << "=" << kv.second << "\n";
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    if (!header.empty()) out << "\n";
    const std::size_t n = columns.empty() ? 0 : columns[0].size();
    char buf[40];
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", columns[c][r]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
}

// Grid specs: "linspace:a:b:n", "logspace:a:b:n" (a,b are endpoints, not
// exponents), or a plain comma list "x1,x2,...".
inline std::vector<double> parse_grid(const std::string& spec) {
    auto fail = [&]() -> std::vector<double> {
        throw std::invalid_argument("bad grid spec: " + spec);
    };
    if (spec.rfind("linspace:", 0) == 0 || spec.rfind("logspace:", 0) == 0) {
        const bool log = spec[1] == 'o';
        auto parts = detail::split(spec.substr(9), ':');
        if (parts.size() != 3) return fail();
        double a, b, nd;
        if (!detail::parse_double(parts[0], a) ||
            !detail::parse_double(parts[1], b) ||
            !detail::parse_double(parts[2], nd)) return fail();
        const int n = static_cast<int>(nd);
        if (n < 2 || !(b > a)) return fail();
        if (log && !(a > 0)) return fail();
        std::vector<double> g(n);
        if (log) {
            const double la = std::log(a), lb = std::log(b);
            for (int i = 0; i < n; ++i)
                g[i] = std::exp(la + (lb - la) * i / (n - 1));
        } else {
            for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
        }
        return g;
    }
    auto parts = detail::split(spec, ',');
    if (parts.empty()) return fail();
    std::vector<double> g(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (!detail::parse_double(parts[i], g[i])) return fail();
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) fail();
    return g;
}

} // namespace fptlab
