#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bound_states.hpp"
#include "exceptional.hpp"
#include "pt_algebra.hpp"
#include "pu_oscillator.hpp"
#include "resonances.hpp"
#include "scattering.hpp"
#include "well1d.hpp"

namespace reswell {

struct InvariantCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string error;
};

namespace detail {

inline InvariantCheck run_check(const std::string& name, double tol, const std::function<double()>& f) {
    InvariantCheck c{name, false, 0.0, tol, ""};
    try {
        c.value = f();
        c.passed = std::isfinite(c.value) && c.value <= tol;
    } catch (const std::exception& e) {
        c.value = std::nan("");
        c.error = e.what();
    }
    return c;
}

inline double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace detail

// Quick self-consistency suite; every value is an error measure compared against its tolerance.
inline std::vector<InvariantCheck> run_invariant_checks() {
    using detail::run_check;
    std::vector<InvariantCheck> out;

    out.push_back(run_check("exceptional closed forms", 4e-16, [] {
        WellSpec w = WellSpec::natural(1.0);
        auto v = exceptional_potentials(w, 3);
        double e = 0.0;
        for (int n = 0; n < 3; ++n) e = std::max(e, std::abs(v[n] / ((2 * n + 1) * (2 * n + 1) * pi * pi / 4.0) - 1.0));
        return e;
    }));

    out.push_back(run_check("bound-state threshold gate", 0.0, [] {
        const double V1 = pi * pi / 4.0;
        double bad = 0.0;
        bad += bound_energies(WellSpec::natural(V1 * (1.0 - 1e-3))).size() != 0;
        bad += bound_energies(WellSpec::natural(V1 * (1.0 + 1e-3))).size() != 1;
        return bad;
    }));

    out.push_back(run_check("bound-state matching", 1e-10, [] {
        double e = 0.0;
        for (const BoundState& s : bound_energies(WellSpec::natural(50.0)))
            e = std::max(e, std::abs(std::sin(s.K) * s.sigma + s.K * std::cos(s.K)) / s.K);
        return e;
    }));

    const WellSpec shallow = WellSpec::natural(1.0);
    out.push_back(run_check("resonance pair system residual", 1e-10, [&] {
        ResonancePair p = resonance_pairs(shallow, 1).at(0);
        const double X = shallow.depth_parameter(), x = p.mu * shallow.gamma(), y = p.nu * shallow.gamma();
        Vec2 a = resonance_system(x, y, X, p.branch_index), b = resonance_system(x, -y, X, p.branch_index);
        return std::max(inf_norm(a), inf_norm(b));
    }));

    out.push_back(run_check("outgoing pole condition", 1e-8, [&] {
        ResonancePair p = resonance_pairs(shallow, 1).at(0);
        return verify_pole_condition(shallow, p.energy(Member::minus));
    }));

    out.push_back(run_check("incoming zero at the upper member", 1e-8, [&] {
        ResonancePair p = resonance_pairs(shallow, 1).at(0);
        return std::abs(beta_of(shallow, p.energy(Member::plus)) - I);
    }));

    out.push_back(run_check("pair norm time independence", 1e-10, [&] {
        ResonancePair p = resonance_pairs(shallow, 1).at(0);
        auto v = pt_norm_profile(p, 2.5, {0.0, 1.0 / p.Gamma, 10.0 / p.Gamma});
        double e = 0.0;
        for (const cplx& z : v) e = std::max(e, std::abs(z - v[0]) / std::abs(v[0]));
        return e;
    }));

    out.push_back(run_check("threshold mode matching", 1e-9, [] {
        ThresholdModes tm = threshold_modes(WellSpec::natural(1.0), 0);
        const double a = tm.well.a;
        const double in = std::abs(threshold_mode_psi1(tm, std::nextafter(a, 0.0), 0.3) - threshold_mode_psi1(tm, a, 0.3));
        const double in2 = std::abs(threshold_mode_psi2(tm, std::nextafter(a, 0.0), 0.3) - threshold_mode_psi2(tm, a, 0.3));
        return std::max(in, in2);
    }));

    out.push_back(run_check("collapse quadratic ratio", 0.025, [] {
        auto r = pair_collapse_check(1.5, {1e-2, 5e-3}, {1.0, 2.0});
        return std::abs(r.sum_error[1] / r.sum_error[0] - 0.25);
    }));

    out.push_back(run_check("phase shift at real-axis resonance", 1e-8, [] {
        WellSpec w = WellSpec::natural(50.0);
        double e = 0.0;
        for (double E0 : find_resonances_real_axis(w, 50.001, 300.0, 5000))
            e = std::max(e, std::abs(wrap_half_pi(phase_shift(w, E0).delta - pi / 2)));
        return e;
    }));

    out.push_back(run_check("1D flux conservation", 1e-12, [] {
        WellSpec w = WellSpec::natural(3.0, Geometry::line1d);
        double e = 0.0;
        for (int i = 1; i <= 1000; ++i) {
            Well1DResult r = transmission_reflection(w, 3.0 + 0.05 * i);
            e = std::max(e, std::abs(r.T + r.R - 1.0));
        }
        return e;
    }));

    out.push_back(run_check("1D pole residual", 1e-9, [] {
        WellSpec w = WellSpec::natural(5.0, Geometry::line1d);
        double e = 0.0;
        for (const ResonancePair& p : pole_pairs_1d(w, 3)) e = std::max(e, pole_residual_1d(w, p.energy(Member::minus)));
        return e;
    }));

    out.push_back(run_check("two-level spectrum taxonomy", 0.0, [] {
        double bad = 0.0;
        bad += classify_spectrum(m_of_s(2.0), 1e-9).classification != SpectrumClass::real_spectrum;
        bad += classify_spectrum(m_of_s(0.5), 1e-9).classification != SpectrumClass::conjugate_pairs;
        bad += classify_spectrum(m_of_s(1.0), 1e-6).classification != SpectrumClass::exceptional;
        return bad;
    }));

    out.push_back(run_check("two-level V-norm", 1e-12, [] {
        CMatrix g(2, 2);
        g << 0.0, -1.0, 1.0, 0.0;
        double e = 0.0;
        for (double t : {0.0, 0.5, 2.0}) {
            TwoLevelVNorm v = two_level_vnorm(1.0, 0.4, t);
            e = std::max({e, (v.gram - g).norm(), (v.closure - CMatrix::Identity(2, 2)).norm()});
        }
        return e;
    }));

    out.push_back(run_check("two-pole propagator sum", 1e-14, [] {
        PropagatorSpec p{2.0, 0.5, PropagatorKind::pt_pair, Contour::real_axis};
        double e = 0.0;
        for (double E = -3.0; E <= 7.0; E += 0.25) {
            const cplx c = propagator_energy(p, E);
            e = std::max(e, std::abs(propagator_energy_two_pole(p, E) - c) / std::abs(c));
        }
        return e;
    }));

    out.push_back(run_check("PU coefficients real for a pair", 1e-12, [] {
        PUCoefficients c = pu_hamiltonian_coefficients(PUSpec::pair(1.0, 0.5));
        return std::abs(c.x2.imag()) + std::abs(c.z2.imag());
    }));

    out.push_back(run_check("unit covariance of the first pair", 1e-9, [] {
        WellSpec base = WellSpec::natural(2.0);
        ResonancePair p0 = resonance_pairs(base, 1).at(0);
        double e = 0.0;
        for (double lam : {0.1, 10.0}) {
            ResonancePair p = resonance_pairs(base.rescaled(lam), 1).at(0);
            e = std::max({e, std::abs(p.E0 * lam * lam / p0.E0 - 1.0), std::abs(p.Gamma * lam * lam / p0.Gamma - 1.0)});
        }
        return e;
    }));

    return out;
}

}  // namespace reswell
