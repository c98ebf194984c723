#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"

namespace reswell {

struct BoundState {
    double E = 0.0;
    double K = 0.0;
    double sigma = 0.0;
    double A = 0.0;
    double B = 0.0;
    int branch = 0;
    double a = 1.0;
};

struct BoundSearch {
    std::vector<BoundState> states;
    std::vector<int> threshold_hits;  // branches whose root sits at E = V0
};

// Number of branches of tan(Ka) = -K/sigma below threshold.
inline int bound_state_count(const WellSpec& w) {
    double n = std::ceil(w.depth_parameter() / pi - 0.5);
    return n > 0.0 ? static_cast<int>(n) : 0;
}

namespace detail {

// sin(x) sqrt(X^2 - x^2) + x cos(x): zero iff tan x = -x / sqrt(X^2 - x^2), no poles.
inline double bound_condition(double x, double X) {
    return std::sin(x) * std::sqrt(std::max(0.0, X * X - x * x)) + x * std::cos(x);
}

inline BoundState make_bound_state(const WellSpec& w, double x, int branch) {
    const double X = w.depth_parameter();
    BoundState s;
    s.branch = branch;
    s.a = w.a;
    s.K = x / w.a;
    s.sigma = std::sqrt(std::max(0.0, X * X - x * x)) / w.a;
    s.E = w.kinetic() * s.K * s.K;
    const double Ka = x;
    const double sa = s.sigma * w.a;
    const double norm = 4.0 * pi * (w.a / 2.0 - std::sin(2.0 * Ka) / (4.0 * s.K) + std::sin(Ka) * std::sin(Ka) / (2.0 * s.sigma));
    s.A = 1.0 / std::sqrt(norm);
    s.B = s.A * std::sin(Ka) * std::exp(sa);
    return s;
}

}  // namespace detail

inline BoundSearch bound_search(const WellSpec& w) {
    w.validate();
    if (w.geometry != Geometry::radial3d) throw DomainError("bound states need a radial3d well");
    const double X = w.depth_parameter();
    const double tol_x = 0.5e-9 * X;  // |E - V0| < 1e-9 V0
    BoundSearch out;
    for (int n = 0;; ++n) {
        const double lo = (n + 0.5) * pi;
        if (lo >= X + tol_x) break;
        const double hi = std::min((n + 1) * pi, X);
        if (hi - lo <= tol_x) {
            out.threshold_hits.push_back(n);
            break;
        }
        auto g = [X](double x) { return detail::bound_condition(x, X); };
        double x;
        if (g(hi) == 0.0) {
            x = hi;
        } else {
            x = find_real_root(g, lo, hi, 1e-15 * hi);
        }
        if (std::abs(X * X - x * x) < 1e-9 * X * X) {
            out.threshold_hits.push_back(n);
            continue;
        }
        out.states.push_back(detail::make_bound_state(w, x, n));
    }
    return out;
}

inline std::vector<BoundState> bound_energies(const WellSpec& w) { return bound_search(w).states; }

inline cplx bound_wavefunction(const BoundState& s, double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (r < s.a) return s.A * std::sin(s.K * r) / r;
    return s.B * std::exp(-s.sigma * r) / r;
}

}  // namespace reswell
