#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "resonances.hpp"

namespace reswell {

struct Well1DResult {
    double E = 0.0;
    double T = 0.0;
    double R = 0.0;
    double X2 = 0.0;
    cplx C_over_A;
    cplx B_over_C;
};

inline void require_line(const WellSpec& w) {
    w.validate();
    if (w.geometry != Geometry::line1d) throw DomainError("this operation needs a line1d well");
}

inline Well1DResult transmission_reflection(const WellSpec& w, double E) {
    require_line(w);
    if (!(E > w.V0)) throw DomainError("transmission needs E > V0");
    const double c = w.kinetic();
    const double K = std::sqrt(E / c), k = std::sqrt((E - w.V0) / c);
    const double Ka = K * w.a, ka = k * w.a;
    const double s = std::sin(Ka);
    Well1DResult r;
    r.E = E;
    r.C_over_A = std::exp(-I * ka) / (std::cos(Ka) - I * s * (k * k + K * K) / (2.0 * k * K));
    r.B_over_C = I * s * (K * K - k * k) / (2.0 * k * K);
    r.X2 = w.V0 * w.V0 * s * s / (4.0 * E * (E - w.V0));
    r.T = 1.0 / (1.0 + r.X2);
    r.R = r.X2 / (1.0 + r.X2);
    return r;
}

inline std::vector<double> transmission_resonances_1d(const WellSpec& w, int n_max) {
    require_line(w);
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    std::vector<double> out;
    for (int n = 1; static_cast<int>(out.size()) < n_max; ++n) {
        const double E = n * n * pi * pi * w.hbar * w.hbar / (2.0 * w.m * w.a * w.a);
        if (E > w.V0) out.push_back(E);
    }
    return out;
}

// Denominator of C/A times (ka)(Ka): 2qw cos w - i(q^2 + w^2) sin w, w = Ka, q = ka.
inline cplx pole_function_1d(const WellSpec& w, cplx Ka) {
    const double X = w.depth_parameter();
    const cplx q = principal_sqrt(Ka * Ka - X * X);
    return 2.0 * q * Ka * std::cos(Ka) - I * (q * q + Ka * Ka) * std::sin(Ka);
}

// Scale-free form of the pole function at energy E.
inline double pole_residual_1d(const WellSpec& w, cplx E) {
    const cplx Ka = principal_sqrt(E / w.kinetic()) * w.a;
    const cplx G = pole_function_1d(w, Ka);
    return std::abs(G) / (std::norm(Ka) * (std::abs(std::cos(Ka)) + std::abs(std::sin(Ka))));
}

// C/A continued to complex E.
inline cplx transmission_amplitude_1d(const WellSpec& w, cplx E) {
    ComplexEnergy ce = complex_energy(w, E);
    const cplx K = ce.branch_K, k = ce.branch_k;
    const cplx Ka = K * w.a;
    return std::exp(-I * k * w.a) / (std::cos(Ka) - I * std::sin(Ka) * (k * k + K * K) / (2.0 * k * K));
}

inline BranchRoot solve_pole_branch_1d(const WellSpec& w, int n) {
    const double X = w.depth_parameter();
    const double u_lo = n * pi, u_hi = (n + 1) * pi;
    // stored root is (u, v) with v > 0; the outgoing pole of C/A sits at w = u - iv
    auto F = [&](double u, double v) {
        const cplx G = pole_function_1d(w, cplx{u, -v});
        const double s = std::norm(cplx{u, v}) * std::cosh(v);
        return Vec2{G.real() / s, G.imag() / s};
    };
    auto attempt = [&](Vec2 seed) -> BranchRoot {
        try {
            Newton2D r = newton2d(F, seed, 1e-12, 100);
            const double v = r.y;
            if (!(r.x > u_lo && r.x < u_hi)) return {false, 0, 0, 0, "root left the strip"};
            if (v < 1e-9) return {false, 0, 0, 0, "root not below the real axis"};
            return {true, r.x, v, pole_residual_1d(w, std::pow(cplx{r.x, -v} / w.a, 2) * w.kinetic()), ""};
        } catch (const Error& e) {
            return {false, 0, 0, 0, e.what()};
        }
    };
    BranchRoot r = attempt({n * pi + pi / 4.0, 0.3});
    if (r.found) return r;
    // |Im w| grows like 2 log(2|w|/X) as the depth shrinks
    const double v_hi = 1.5 * (2.0 * std::log(2.0 * (u_hi + 10.0) / X)) + 3.0;
    detail::StripSearch s{u_lo, u_hi, 0.0, std::max(v_hi, 4.0)};
    s.nx = 64;
    s.ny = 64;
    auto merit = [&](double u, double v) {
        Vec2 f = F(u, v);
        return std::log(std::hypot(f[0], f[1]) + 1e-300);
    };
    for (const Vec2& seed : detail::grid_minima(s, merit)) {
        BranchRoot t = attempt(seed);
        if (t.found) return t;
        r.reason = t.reason;
    }
    if (r.reason.empty()) r.reason = "no root in branch strip";
    return r;
}

inline ResonanceSearch pole_search_1d(const WellSpec& w, int n_max) {
    require_line(w);
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    auto roots = parallel_map<BranchRoot>(static_cast<std::size_t>(n_max),
                                          [&](std::size_t i) { return solve_pole_branch_1d(w, static_cast<int>(i) + 1); });
    ResonanceSearch out;
    for (int n = 1; n <= n_max; ++n) {
        const BranchRoot& r = roots[n - 1];
        if (r.found)
            out.pairs.push_back(make_resonance_pair(w, r.x, r.y, n, r.residual));
        else
            out.skipped.push_back({n, r.reason});
    }
    return out;
}

inline std::vector<ResonancePair> pole_pairs_1d(const WellSpec& w, int n_max) { return pole_search_1d(w, n_max).pairs; }

}  // namespace reswell
