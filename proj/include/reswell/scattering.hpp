#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "core.hpp"

namespace reswell {

struct PhaseShiftPoint {
    double E = 0.0;
    double delta = 0.0;
    double alpha = 0.0;  // ka
    double beta = 0.0;   // k tan(Ka) / K
    bool near_singular = false;
};

// Reduce an angle to (-pi/2, pi/2].
inline double wrap_half_pi(double d) {
    d = std::remainder(d, pi);
    if (d <= -pi / 2) d += pi;
    return d;
}

inline PhaseShiftPoint phase_shift(const WellSpec& w, double E) {
    w.validate();
    if (!(E > w.V0)) throw DomainError("phase shift needs E > V0");
    const double c = w.kinetic();
    const double K = std::sqrt(E / c), k = std::sqrt((E - w.V0) / c);
    const double Ka = K * w.a, ka = k * w.a;
    PhaseShiftPoint p;
    p.E = E;
    p.alpha = ka;
    p.near_singular = std::abs(std::cos(Ka)) < 1e-12;
    p.beta = k * std::tan(Ka) / K;
    // ka + delta = arg(K cos Ka + i k sin Ka), finite through cos Ka = 0
    p.delta = wrap_half_pi(std::atan2(k * std::sin(Ka), K * std::cos(Ka)) - ka);
    return p;
}

// Continuous branch along increasing E.
inline std::vector<PhaseShiftPoint> phase_shift_sweep(const WellSpec& w, const std::vector<double>& energies) {
    std::vector<PhaseShiftPoint> out;
    out.reserve(energies.size());
    for (double E : energies) {
        PhaseShiftPoint p = phase_shift(w, E);
        if (!out.empty()) p.delta = out.back().delta + wrap_half_pi(p.delta - out.back().delta);
        out.push_back(p);
    }
    return out;
}

inline cplx scattering_amplitude(const WellSpec& w, double E) {
    const double d = phase_shift(w, E).delta;
    return std::exp(I * d) * std::sin(d);
}

// tan(delta) = (beta - tan alpha) / (beta tan alpha + 1) continued to complex E.
inline cplx tan_delta(const WellSpec& w, cplx E) {
    ComplexEnergy ce = complex_energy(w, E);
    const cplx beta = ce.branch_k * std::tan(ce.branch_K * w.a) / ce.branch_K;
    const cplx ta = std::tan(ce.branch_k * w.a);
    return (beta - ta) / (beta * ta + 1.0);
}

// Proportional to cos(delta): K cos(Ka) cos(ka) + k sin(Ka) sin(ka), smooth in E.
inline double resonance_condition(const WellSpec& w, double E) {
    const double c = w.kinetic();
    const double K = std::sqrt(E / c), k = std::sqrt((E - w.V0) / c);
    const double Ka = K * w.a, ka = k * w.a;
    return (K * std::cos(Ka) * std::cos(ka) + k * std::sin(Ka) * std::sin(ka)) / std::hypot(K, k);
}

inline std::vector<double> find_resonances_real_axis(const WellSpec& w, double lo, double hi, int n_scan) {
    w.validate();
    if (!(lo > w.V0)) throw DomainError("scan must start above V0");
    if (!(hi > lo)) throw DomainError("scan needs hi > lo");
    if (n_scan < 100) throw DomainError("n_scan must be at least 100");
    std::vector<double> out;
    auto g = [&](double E) { return resonance_condition(w, E); };
    double Ep = lo, gp = g(lo);
    for (int i = 1; i <= n_scan; ++i) {
        const double E = lo + (hi - lo) * i / n_scan;
        const double gv = g(E);
        if (gv == 0.0) {
            out.push_back(E);
        } else if (gp * gv < 0.0) {
            out.push_back(find_real_root(g, Ep, E, 1e-14 * E));
        }
        Ep = E;
        gp = gv;
    }
    return out;
}

struct BreitWignerFit {
    double Gamma = 0.0;         // least-squares width, canonical
    double E0 = 0.0;            // fitted center
    double Gamma_closed = 0.0;  // beta0 + 1/beta0, comparison only
    double window_lo = 0.0, window_hi = 0.0;
    int iterations = 0;
};

// Fits cot(delta) = (E0 - E) / Gamma on |E - E0| <= |Gamma| / 2, iterated to self-consistency.
inline BreitWignerFit fit_breit_wigner(const std::function<double(double)>& delta, double E0, double Gamma0, double E_floor,
                                       int samples = 41) {
    BreitWignerFit fit;
    fit.E0 = E0;
    fit.Gamma = Gamma0;
    for (int it = 1; it <= 200; ++it) {
        const double half = 0.5 * std::abs(fit.Gamma);
        const double lo = E0 - half, hi = E0 + half;
        if (!(lo > E_floor)) throw FitFailed("fit window reaches the threshold");
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < samples; ++i) {
            const double E = lo + (hi - lo) * i / (samples - 1);
            const double d = delta(E);
            const double cot = std::cos(d) / std::sin(d);
            sx += E;
            sy += cot;
            sxx += E * E;
            sxy += E * cot;
        }
        const double n = samples;
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / n;
        if (!std::isfinite(slope) || slope == 0.0) throw FitFailed("degenerate fit");
        const double G = -1.0 / slope;
        fit.iterations = it;
        fit.window_lo = lo;
        fit.window_hi = hi;
        const bool done = std::abs(G - fit.Gamma) <= 1e-11 * std::abs(G);
        fit.Gamma = G;
        fit.E0 = icpt * G;
        if (done) break;
    }
    return fit;
}

inline double wigner_time_delay(const WellSpec& w, double E, double h) {
    if (!(h > 0.0)) throw DomainError("step must be positive");
    if (!(E - h > w.V0)) throw DomainError("time delay needs E - h > V0");
    auto d = [&](double e) { return phase_shift(w, e).delta; };
    auto central = [&](double s) { return w.hbar * wrap_half_pi(d(E + s) - d(E - s)) / (2.0 * s); };
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

inline BreitWignerFit breit_wigner_width(const WellSpec& w, double E0) {
    w.validate();
    if (!(E0 > w.V0)) throw DomainError("resonance must lie above V0");
    const double slope = wigner_time_delay(w, E0, 1e-6 * std::max(1.0, E0 - w.V0)) / w.hbar;
    if (!(std::abs(slope) > 0.0)) throw FitFailed("flat phase at E0");
    auto delta = [&](double E) { return phase_shift(w, E).delta; };
    BreitWignerFit fit = fit_breit_wigner(delta, E0, 1.0 / slope, w.V0);
    const double b0 = phase_shift(w, E0).beta;
    fit.Gamma_closed = b0 + 1.0 / b0;
    return fit;
}

}  // namespace reswell
