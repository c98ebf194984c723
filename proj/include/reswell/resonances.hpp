#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"

namespace reswell {

enum class Member { plus, minus };

inline const char* to_string(Member m) { return m == Member::plus ? "plus" : "minus"; }

// E = (mu + i nu)^2 with nu > 0 stored; the partner is the conjugate.
struct ResonancePair {
    double E0 = 0.0;
    double Gamma = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    cplx K_plus, K_minus, k_plus, k_minus;
    int branch_index = 0;
    double residual = 0.0;
    WellSpec well;

    cplx energy(Member m) const { return m == Member::plus ? cplx{E0, Gamma} : cplx{E0, -Gamma}; }
    cplx K(Member m) const { return m == Member::plus ? K_plus : K_minus; }
    cplx k(Member m) const { return m == Member::plus ? k_plus : k_minus; }
};

struct SkippedBranch {
    int branch = 0;
    std::string reason;
};

struct ResonanceSearch {
    std::vector<ResonancePair> pairs;
    std::vector<SkippedBranch> skipped;
};

inline ResonancePair make_resonance_pair(const WellSpec& w, double x, double y, int branch, double residual) {
    const double g = w.gamma();
    ResonancePair p;
    p.well = w;
    p.branch_index = branch;
    p.residual = residual;
    p.mu = x / g;
    p.nu = y / g;
    p.E0 = p.mu * p.mu - p.nu * p.nu;
    p.Gamma = 2.0 * p.mu * p.nu;
    p.K_plus = cplx{x, y} / w.a;
    p.K_minus = std::conj(p.K_plus);
    p.k_plus = complex_energy(w, {p.E0, p.Gamma}).branch_k;
    p.k_minus = std::conj(p.k_plus);
    return p;
}

// The real pair of equations in x = gamma mu, y = gamma nu, with branch sign s = (-1)^n.
inline Vec2 resonance_system(double x, double y, double X, int branch) {
    const double s = (branch % 2 == 0) ? 1.0 : -1.0;
    return {std::sin(x) * std::cosh(y) - s * x / X, std::cos(x) * std::sinh(y) - s * y / X};
}

namespace detail {

struct StripSearch {
    double x_lo, x_hi, y_lo, y_hi;
    int nx = 48, ny = 48;
    int max_seeds = 10;
};

// Local minima of a scalar merit on a grid, best first.
template <class M>
std::vector<Vec2> grid_minima(const StripSearch& s, M&& merit) {
    const int nx = s.nx, ny = s.ny;
    std::vector<double> v(static_cast<std::size_t>(nx * ny));
    auto px = [&](int i) { return s.x_lo + (s.x_hi - s.x_lo) * (i + 0.5) / nx; };
    auto py = [&](int j) { return s.y_lo + (s.y_hi - s.y_lo) * (j + 0.5) / ny; };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) v[i * ny + j] = merit(px(i), py(j));
    std::vector<std::pair<double, Vec2>> mins;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double c = v[i * ny + j];
            if (!std::isfinite(c)) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    int a = i + di, b = j + dj;
                    if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= nx || b >= ny) continue;
                    if (v[a * ny + b] < c) {
                        is_min = false;
                        break;
                    }
                }
            if (is_min) mins.push_back({c, Vec2{px(i), py(j)}});
        }
    std::sort(mins.begin(), mins.end(), [](auto& l, auto& r) { return l.first < r.first; });
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < mins.size() && static_cast<int>(k) < s.max_seeds; ++k) out.push_back(mins[k].second);
    return out;
}

// Largest y allowed by sin^2 x + sinh^2 y = (x^2 + y^2) / X^2 with x <= x_max.
inline double resonance_y_bound(double x_max, double X) {
    auto f = [&](double y) { return std::sinh(y) - (x_max + y) / X; };
    double hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    double lo = 0.0;
    if (f(lo) >= 0.0) return hi;
    return find_real_root(f, lo, hi, 1e-6);
}

}  // namespace detail

struct BranchRoot {
    bool found = false;
    double x = 0.0, y = 0.0, residual = 0.0;
    std::string reason;
};

// Newton from the nominal seed, then from grid minima of the scaled residual inside the strip.
inline BranchRoot solve_resonance_branch(const WellSpec& w, int n) {
    const double X = w.depth_parameter();
    const double x_lo = n * pi, x_hi = (n + 0.5) * pi;
    auto F = [X, n](double x, double y) { return resonance_system(x, y, X, n); };
    auto accept = [&](const Newton2D& r) -> BranchRoot {
        double y = std::abs(r.y);
        if (!(r.x > x_lo && r.x < x_hi)) return {false, 0, 0, 0, "root left the strip"};
        if (y < 1e-9) return {false, 0, 0, 0, "root on the real axis"};
        Vec2 res = F(r.x, y);
        return {true, r.x, y, inf_norm(res), ""};
    };
    auto attempt = [&](Vec2 seed) -> BranchRoot {
        try {
            return accept(newton2d(F, seed, 1e-12, 100));
        } catch (const Error& e) {
            return {false, 0, 0, 0, e.what()};
        }
    };
    BranchRoot r = attempt({n * pi + pi / 4.0, 0.5});
    if (r.found) return r;
    detail::StripSearch s{x_lo, x_hi, 0.0, 1.2 * detail::resonance_y_bound(x_hi, X) + 0.5};
    auto merit = [&](double x, double y) {
        Vec2 f = F(x, y);
        return std::log(std::hypot(f[0], f[1]) / std::cosh(y) + 1e-300);
    };
    for (const Vec2& seed : detail::grid_minima(s, merit)) {
        BranchRoot t = attempt(seed);
        if (t.found) return t;
        r.reason = t.reason;
    }
    r.found = false;
    if (r.reason.empty()) r.reason = "no root in branch strip";
    return r;
}

inline ResonanceSearch resonance_search(const WellSpec& w, int n_max) {
    w.validate();
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    auto roots = parallel_map<BranchRoot>(static_cast<std::size_t>(n_max),
                                          [&](std::size_t i) { return solve_resonance_branch(w, static_cast<int>(i) + 1); });
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

inline std::vector<ResonancePair> resonance_pairs(const WellSpec& w, int n_max) { return resonance_search(w, n_max).pairs; }

// beta = k tan(Ka) / K, the bound-state condition being beta = -i.
inline cplx beta_of(const WellSpec& w, cplx E) {
    ComplexEnergy ce = complex_energy(w, E);
    return ce.branch_k * std::tan(ce.branch_K * w.a) / ce.branch_K;
}

inline double verify_pole_condition(const WellSpec& w, cplx E) {
    if (std::abs(E - w.V0) <= 1e-14 * w.V0) throw DomainError("E = V0 is the branch point");
    return std::abs(beta_of(w, E) + I);
}

inline cplx resonance_wavefunction(const ResonancePair& p, Member m, double r, double t) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    const double a = p.well.a;
    const cplx K = p.K(m), k = p.k(m), E = p.energy(m);
    const cplx phase = std::exp(-I * E * t / p.well.hbar);
    if (r < a) return std::sin(K * r) / r * phase;
    const cplx C = std::sin(K * a) * std::exp(-I * k * a);
    return C * std::exp(I * k * r) / r * phase;
}

// Radial derivative, piecewise.
inline cplx resonance_wavefunction_dr(const ResonancePair& p, Member m, double r, double t, bool outside) {
    const double a = p.well.a;
    const cplx K = p.K(m), k = p.k(m), E = p.energy(m);
    const cplx phase = std::exp(-I * E * t / p.well.hbar);
    if (!outside) return (K * std::cos(K * r) * r - std::sin(K * r)) / (r * r) * phase;
    const cplx C = std::sin(K * a) * std::exp(-I * k * a);
    return C * std::exp(I * k * r) * (I * k * r - 1.0) / (r * r) * phase;
}

inline std::vector<cplx> pt_norm_profile(const ResonancePair& p, double r, const std::vector<double>& t_samples) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (t_samples.size() < 2) throw DomainError("need at least two time samples");
    std::vector<cplx> out;
    out.reserve(t_samples.size());
    for (double t : t_samples)
        out.push_back(std::conj(resonance_wavefunction(p, Member::plus, r, t)) * resonance_wavefunction(p, Member::minus, r, t));
    return out;
}

}  // namespace reswell
