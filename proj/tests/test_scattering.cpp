#include <gtest/gtest.h>

#include <cmath>

#include "reswell/pt_algebra.hpp"
#include "reswell/resonances.hpp"
#include "reswell/scattering.hpp"

using namespace reswell;

namespace {

// K tan(ka + delta) = k tan(Ka) solved for delta in (-pi/2, pi/2) by bisection on the sine form.
double delta_oracle(double V0, double E) {
    const double K = std::sqrt(E), k = std::sqrt(E - V0);
    auto h = [&](double d) { return K * std::sin(k + d) * std::cos(K) - k * std::cos(k + d) * std::sin(K); };
    const int n = 10000;
    double lo = -pi / 2, hlo = h(lo);
    for (int i = 1; i <= n; ++i) {
        double hi = -pi / 2 + pi * i / n, hhi = h(hi);
        if (hlo * hhi <= 0.0) {
            for (int k2 = 0; k2 < 200; ++k2) {
                double mid = 0.5 * (lo + hi);
                if (h(mid) * hlo <= 0.0)
                    hi = mid;
                else
                    lo = mid, hlo = h(mid);
            }
            return 0.5 * (lo + hi);
        }
        lo = hi;
        hlo = hhi;
    }
    return std::nan("");
}

double mod_pi_distance(double a, double b) { return std::abs(wrap_half_pi(a - b)); }

}  // namespace

TEST(PhaseShift, GenericPointMatchesRootFind) {
    PhaseShiftPoint p = phase_shift(WellSpec::natural(1.0), 2.0);
    double o = delta_oracle(1.0, 2.0);
    EXPECT_LT(mod_pi_distance(p.delta, o), 1e-10);
    EXPECT_NEAR(p.delta, 0.351129917745237, 1e-10);  // frozen from the oracle
}

TEST(PhaseShift, SatisfiesMatchingAndSinCosForms) {
    WellSpec w{3.0, 1.2, 0.6, 1.1, Geometry::radial3d};
    for (double E = 3.05; E < 80.0; E += 0.731) {
        PhaseShiftPoint p = phase_shift(w, E);
        const double c = w.kinetic();
        const double K = std::sqrt(E / c), k = std::sqrt((E - w.V0) / c);
        EXPECT_NEAR(K * std::sin(k * w.a + p.delta) * std::cos(K * w.a) - k * std::cos(k * w.a + p.delta) * std::sin(K * w.a), 0.0,
                    1e-10 * (K + k));
        const double b = p.beta, a = p.alpha, n = std::sqrt(1.0 + b * b);
        const double sd = (b * std::cos(a) - std::sin(a)) / n, cd = (b * std::sin(a) + std::cos(a)) / n;
        // delta is defined mod pi, so compare up to a common sign
        const double sgn = (std::sin(p.delta) * sd + std::cos(p.delta) * cd) >= 0.0 ? 1.0 : -1.0;
        EXPECT_NEAR(std::sin(p.delta), sgn * sd, 1e-10);
        EXPECT_NEAR(std::cos(p.delta), sgn * cd, 1e-10);
        if (!p.near_singular) {
            EXPECT_NEAR(std::tan(p.delta), (b - std::tan(a)) / (b * std::tan(a) + 1.0), 1e-10 * (1.0 + std::abs(std::tan(p.delta))));
        }
    }
}

TEST(PhaseShift, VanishingDepth) {
    WellSpec w = WellSpec::natural(1e-12);
    for (double E : {0.5, 3.0, 17.0}) EXPECT_LT(mod_pi_distance(phase_shift(w, E).delta, 0.0), 1e-9);
}

TEST(PhaseShift, NearSingularStaysFinite) {
    const double E = std::pow(1.5 * pi, 2);  // cos(Ka) = 0
    PhaseShiftPoint p = phase_shift(WellSpec::natural(1.0), E);
    EXPECT_TRUE(p.near_singular);
    EXPECT_TRUE(std::isfinite(p.delta));
    EXPECT_LT(mod_pi_distance(p.delta, pi / 2 - p.alpha), 1e-10);
    EXPECT_THROW(phase_shift(WellSpec::natural(1.0), 1.0), DomainError);
}

TEST(ScatteringAmplitude, UnitarityAndSpecialValues) {
    WellSpec w = WellSpec::natural(7.0);
    for (double E = 7.01; E < 200.0; E += 0.37) {
        cplx f = scattering_amplitude(w, E);
        double d = phase_shift(w, E).delta;
        EXPECT_LT(std::abs(f - std::exp(I * d) * std::sin(d)), 1e-10);
        EXPECT_LT(std::abs(f.imag() - std::norm(f)), 1e-12);
        EXPECT_NEAR(std::abs(std::exp(2.0 * I * d)), 1.0, 1e-12);
    }
    // f = i exactly when delta = pi/2
    auto res = find_resonances_real_axis(WellSpec::natural(50.0), 50.001, 300.0, 20000);
    ASSERT_FALSE(res.empty());
    EXPECT_LT(std::abs(scattering_amplitude(WellSpec::natural(50.0), res[0]) - I), 1e-8);
}

TEST(PhaseSweep, UnwrappedHasNoJumps) {
    WellSpec w = WellSpec::natural(50.0);
    std::vector<double> Es;
    for (int i = 1; i <= 60000; ++i) Es.push_back(50.0 + 0.005 * i);
    auto sw = phase_shift_sweep(w, Es);
    for (std::size_t i = 1; i < sw.size(); ++i) EXPECT_LT(std::abs(sw[i].delta - sw[i - 1].delta), pi / 2);
}

TEST(RealAxisResonances, HalfPiAndPoleProximity) {
    WellSpec w = WellSpec::natural(50.0);
    auto res = find_resonances_real_axis(w, 50.001, 300.0, 20000);
    ASSERT_EQ(res.size(), 2u);
    EXPECT_NEAR(res[0], 54.20398, 1e-4);
    EXPECT_NEAR(res[1], 264.72056, 1e-4);
    auto pairs = resonance_pairs(w, 8);
    for (double E0 : res) {
        EXPECT_LT(mod_pi_distance(phase_shift(w, E0).delta, pi / 2), 1e-8);
        bool near = false;
        for (const ResonancePair& p : pairs) near = near || std::abs(E0 - p.E0) < 2.0 * p.Gamma;
        EXPECT_TRUE(near) << E0;
    }
    EXPECT_TRUE(find_resonances_real_axis(w, 50.001, 54.0, 1000).empty());
}

TEST(RealAxisResonances, ShallowWellHasNone) {
    // the phase of the V0 = 1 well never climbs to pi/2
    WellSpec w = WellSpec::natural(1.0);
    EXPECT_TRUE(find_resonances_real_axis(w, 1.001, 2000.0, 200000).empty());
    double mx = 0.0;
    for (double E = 1.001; E < 2000.0; E += 0.01) mx = std::max(mx, phase_shift(w, E).delta);
    EXPECT_LT(mx, 0.4);
    EXPECT_THROW(find_resonances_real_axis(w, 0.5, 2.0, 1000), DomainError);
}

TEST(BreitWigner, SyntheticExactRecovery) {
    auto delta = [](double E) { return std::atan2(0.3, 5.0 - E); };
    BreitWignerFit f = fit_breit_wigner(delta, 5.0, 0.2, 0.0);
    EXPECT_NEAR(f.Gamma, 0.3, 1e-10);
    EXPECT_NEAR(f.E0, 5.0, 1e-10);
    EXPECT_THROW(fit_breit_wigner(delta, 5.0, 0.3, 4.9), FitFailed);
}

TEST(BreitWigner, SquareWellWidthNearPairWidth) {
    WellSpec w = WellSpec::natural(50.0);
    const double E0 = find_resonances_real_axis(w, 50.001, 100.0, 5000).at(0);
    BreitWignerFit f = breit_wigner_width(w, E0);
    const ResonancePair p = resonance_pairs(w, 2).at(0);
    EXPECT_EQ(p.branch_index, 2);
    EXPECT_NEAR(std::abs(f.Gamma) / p.Gamma, 1.0, 0.2);
    EXPECT_TRUE(std::isfinite(f.Gamma_closed));
    EXPECT_LT(f.Gamma, 0.0);  // the crossing is a time advance
    EXPECT_THROW(breit_wigner_width(w, 49.0), DomainError);
}

TEST(WignerDelay, MatchesWidthAtResonance) {
    WellSpec w = WellSpec::natural(50.0);
    for (double E0 : find_resonances_real_axis(w, 50.001, 300.0, 20000)) {
        BreitWignerFit f = breit_wigner_width(w, E0);
        const double dt = wigner_time_delay(w, E0, 1e-3);
        EXPECT_NEAR(dt * f.Gamma / w.hbar, 1.0, 0.25);
    }
}

TEST(WignerDelay, RichardsonStable) {
    WellSpec w = WellSpec::natural(20.0);
    for (double E : {25.0, 46.07, 90.0}) {
        double a = wigner_time_delay(w, E, 1e-2), b = wigner_time_delay(w, E, 2.5e-3);
        EXPECT_LT(std::abs(a - b), 1e-6 * std::abs(b));
    }
    EXPECT_THROW(wigner_time_delay(w, 20.001, 0.01), DomainError);
}

TEST(WignerDelay, LorentzianForExactBreitWignerPhase) {
    // finite differences of the model phase reproduce the delay profile
    const double E0 = 5.0, G = 0.3;
    auto delta = [&](double E) { return std::atan2(G, E0 - E); };
    for (double u = -1.0; u <= 1.0; u += 0.125) {
        const double E = E0 + u * G, h = 1e-4;
        const double d = (4.0 * (delta(E + h / 2) - delta(E - h / 2)) / h - (delta(E + h) - delta(E - h)) / (2 * h)) / 3.0;
        EXPECT_NEAR(d, time_delay_profile(E0, G, E), 1e-8);
    }
}

TEST(ComplexContinuation, TanDeltaAtPairMembers) {
    for (double V0 : {1.0, 6.0}) {
        WellSpec w = WellSpec::natural(V0);
        for (const ResonancePair& p : resonance_pairs(w, 3)) {
            EXPECT_LT(std::abs(tan_delta(w, p.energy(Member::minus)) + I), 1e-6);
            EXPECT_LT(std::abs(tan_delta(w, p.energy(Member::plus)) - I), 1e-6);
        }
    }
}
