#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "core.hpp"

namespace reswell {

inline std::vector<double> exceptional_potentials(const WellSpec& tmpl, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    std::vector<double> out;
    const double unit = pi * pi * tmpl.hbar * tmpl.hbar / (8.0 * tmpl.m * tmpl.a * tmpl.a);
    for (int n = 0; n < n_max; ++n) out.push_back((2.0 * n + 1.0) * (2.0 * n + 1.0) * unit);
    return out;
}

// Distance of |sin(gamma sqrt V0)| from 1.
inline double exceptional_residual(const WellSpec& w) { return std::abs(1.0 - std::abs(std::sin(w.depth_parameter()))); }

inline bool is_exceptional(const WellSpec& w) { return exceptional_residual(w) < 1e-9; }

struct ThresholdModes {
    WellSpec well;  // V0 holds the exceptional depth
    int n = 0;
    double A1 = 1.0, B1 = 0.0;
    double A2 = 1.0, B2 = 0.0;

    double V0() const { return well.V0; }
    double K() const { return std::sqrt(2.0 * well.m * well.V0) / well.hbar; }
};

inline ThresholdModes threshold_modes(const WellSpec& tmpl, int n) {
    if (n < 0) throw DomainError("branch index must be non-negative");
    ThresholdModes tm;
    tm.well = tmpl;
    tm.well.V0 = exceptional_potentials(tmpl, n + 1).back();
    tm.n = n;
    const double s = std::sin(tm.K() * tm.well.a);
    tm.B1 = tm.A1 * s;
    tm.B2 = tm.A2 * s;
    return tm;
}

// Snap a user depth within the detection band onto the closed form.
inline ThresholdModes snap_threshold_modes(const WellSpec& w) {
    w.validate();
    if (!is_exceptional(w)) throw NotExceptional("depth is not at a threshold value");
    int n = static_cast<int>(std::lround(w.depth_parameter() / pi - 0.5));
    return threshold_modes(w, std::max(n, 0));
}

namespace detail {
inline void check_modes(const ThresholdModes& tm, double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (!is_exceptional(tm.well)) throw NotExceptional("stored depth fails the threshold condition");
}
}  // namespace detail

inline cplx threshold_mode_psi1(const ThresholdModes& tm, double r, double t) {
    detail::check_modes(tm, r);
    const WellSpec& w = tm.well;
    const cplx phase = std::exp(-I * w.V0 * t / w.hbar);
    if (r < w.a) return tm.A1 * phase * std::sin(tm.K() * r) / r;
    return tm.B1 * phase / r;
}

inline cplx threshold_mode_psi2(const ThresholdModes& tm, double r, double t) {
    detail::check_modes(tm, r);
    const WellSpec& w = tm.well;
    const double K = tm.K();
    const cplx phase = std::exp(-I * w.V0 * t / w.hbar);
    if (r < w.a)
        return tm.A2 * phase * (std::sin(K * r) * t / r + I * w.m * std::cos(K * r) / std::sqrt(2.0 * w.m * w.V0));
    return tm.B2 * phase * (t / r - I * w.m * (r - w.a) / w.hbar);
}

// Analytic time derivative of psi2.
inline cplx threshold_mode_psi2_dt(const ThresholdModes& tm, double r, double t) {
    detail::check_modes(tm, r);
    const WellSpec& w = tm.well;
    const cplx phase = std::exp(-I * w.V0 * t / w.hbar);
    const cplx linear = (r < w.a) ? tm.A2 * std::sin(tm.K() * r) / r : tm.B2 / r;
    return -I * w.V0 / w.hbar * threshold_mode_psi2(tm, r, t) + phase * linear;
}

struct CollapseReport {
    std::vector<double> gammas;
    std::vector<double> sum_error;   // max_t |(e^{-i(E0-iG)t} + e^{-i(E0+iG)t})/2 - e^{-iE0 t}|
    std::vector<double> diff_error;  // max_t |(e^{-i(E0-iG)t} - e^{-i(E0+iG)t})/(-2G) - t e^{-iE0 t}|
    bool monotone = true;
};

inline CollapseReport pair_collapse_check(double E0, const std::vector<double>& gamma_seq, const std::vector<double>& t_grid) {
    for (std::size_t i = 1; i < gamma_seq.size(); ++i)
        if (!(gamma_seq[i] < gamma_seq[i - 1])) throw DomainError("gamma sequence must be strictly decreasing");
    for (double g : gamma_seq)
        if (g < 0.0) throw DomainError("widths must be non-negative");
    CollapseReport rep;
    for (double G : gamma_seq) {
        double es = 0.0, ed = 0.0;
        for (double t : t_grid) {
            const cplx phase = std::exp(-I * E0 * t);
            // e^{-i(E0 -+ iG)t} = phase (1 + expm1(-+G t)), kept in expm1 form against cancellation
            const double dm = std::expm1(-G * t), dp = std::expm1(G * t);
            const cplx half_sum = phase * (1.0 + 0.5 * (dm + dp));
            es = std::max(es, std::abs(half_sum - phase));
            const cplx diff = (G == 0.0) ? phase * t : phase * (dm - dp) / (-2.0 * G);
            ed = std::max(ed, std::abs(diff - t * phase));
        }
        rep.gammas.push_back(G);
        rep.sum_error.push_back(es);
        rep.diff_error.push_back(ed);
    }
    for (std::size_t i = 1; i < rep.gammas.size(); ++i)
        if (rep.sum_error[i] > rep.sum_error[i - 1] || rep.diff_error[i] > rep.diff_error[i - 1]) rep.monotone = false;
    return rep;
}

}  // namespace reswell
