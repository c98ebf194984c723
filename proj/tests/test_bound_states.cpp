#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "reswell/bound_states.hpp"

using namespace reswell;

namespace {

// Sign changes of tan(Ka) + K/sigma on a uniform E grid, skipping the tan poles.
std::vector<double> grid_oracle(double V0, int points) {
    auto f = [V0](double E) {
        const double K = std::sqrt(E), s = std::sqrt(V0 - E);
        return std::tan(K) + K / s;
    };
    std::vector<double> roots;
    double Ep = V0 / points, fp = f(Ep);
    for (int i = 2; i < points; ++i) {
        const double E = V0 * i / points;
        const double fv = f(E);
        if (fp < 0.0 && fv > 0.0) {
            // tan pole jumps + to -; a root crosses - to +
            double lo = Ep, hi = E;
            for (int k = 0; k < 200; ++k) {
                double mid = 0.5 * (lo + hi);
                (f(mid) < 0.0 ? lo : hi) = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        Ep = E;
        fp = fv;
    }
    return roots;
}

double quad_norm(const BoundState& s) {
    using boost::math::quadrature::gauss_kronrod;
    auto in = [&](double r) { return 4.0 * pi * r * r * std::norm(bound_wavefunction(s, r)); };
    double inner = gauss_kronrod<double, 61>::integrate(in, 1e-300, s.a, 15, 1e-14);
    double outer = gauss_kronrod<double, 61>::integrate(in, s.a, std::numeric_limits<double>::infinity(), 15, 1e-14);
    return inner + outer;
}

}  // namespace

TEST(BoundEnergies, V0Fifty_MatchesGridOracle) {
    auto oracle = grid_oracle(50.0, 1000000);
    auto states = bound_energies(WellSpec::natural(50.0));
    ASSERT_EQ(states.size(), oracle.size());
    ASSERT_EQ(states.size(), 2u);
    for (std::size_t i = 0; i < states.size(); ++i) EXPECT_NEAR(states[i].E, oracle[i], 1e-8);
    // frozen from the oracle
    EXPECT_NEAR(states[0].E, 7.525096239781, 1e-9);
    EXPECT_NEAR(states[1].E, 29.285888998567, 1e-9);
}

TEST(BoundEnergies, BelowFirstThresholdIsEmpty) {
    EXPECT_TRUE(bound_energies(WellSpec::natural(pi * pi / 4.0 * (1.0 - 1e-6))).empty());
    EXPECT_EQ(bound_energies(WellSpec::natural(pi * pi / 4.0 * (1.0 + 1e-3))).size(), 1u);
    // closer than this the root is inside the threshold gate
    EXPECT_EQ(bound_search(WellSpec::natural(pi * pi / 4.0 * (1.0 + 1e-6))).threshold_hits.size(), 1u);
}

TEST(BoundEnergies, SecondThresholdExcludedAndFlagged) {
    BoundSearch s = bound_search(WellSpec::natural(9.0 * pi * pi / 4.0));
    EXPECT_EQ(s.states.size(), 1u);
    ASSERT_EQ(s.threshold_hits.size(), 1u);
    EXPECT_EQ(s.threshold_hits[0], 1);
}

TEST(BoundEnergies, RejectsLineGeometry) {
    EXPECT_THROW(bound_energies(WellSpec::natural(10.0, Geometry::line1d)), DomainError);
}

TEST(BoundEnergies, CountLawAgainstOracle) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double V0 = u(rng);
        WellSpec w = WellSpec::natural(V0);
        const auto states = bound_energies(w);
        EXPECT_EQ(static_cast<int>(states.size()), bound_state_count(w)) << V0;
        EXPECT_EQ(states.size(), grid_oracle(V0, 20000).size()) << V0;
    }
}

TEST(BoundState, InvariantsHold) {
    for (double V0 : {3.0, 25.0, 50.0, 99.0}) {
        WellSpec w{V0, 1.3, 0.7, 1.1, Geometry::radial3d};
        double prev = 0.0;
        for (const BoundState& s : bound_energies(w)) {
            EXPECT_GT(s.E, prev);
            prev = s.E;
            EXPECT_LT(s.E, V0);
            EXPECT_NEAR(w.kinetic() * s.K * s.K, s.E, 1e-12 * V0);
            EXPECT_NEAR(w.kinetic() * s.sigma * s.sigma, V0 - s.E, 1e-12 * V0);
            EXPECT_NEAR(std::sin(s.K * w.a) * s.sigma + s.K * std::cos(s.K * w.a), 0.0, 1e-10 * s.K);
            EXPECT_NEAR(s.A * std::sin(s.K * w.a), s.B * std::exp(-s.sigma * w.a), 1e-10 * std::abs(s.B * std::exp(-s.sigma * w.a)));
            EXPECT_NEAR(s.A * s.K * std::cos(s.K * w.a), -s.B * s.sigma * std::exp(-s.sigma * w.a),
                        1e-10 * std::abs(s.B * s.sigma * std::exp(-s.sigma * w.a)));
            EXPECT_NEAR(std::abs(std::sin(s.K * w.a)), std::sqrt(s.E / V0), 1e-10);
        }
    }
}

TEST(BoundState, EnergiesRiseWithDepthWhileBindingDeepens) {
    // E itself rises toward the hard-wall value as V0 grows; E - V0 falls
    std::vector<double> prevE(4, 0.0), prevB(4, 0.0);
    bool first = true;
    for (double V0 = 30.0; V0 <= 120.0; V0 += 2.5) {
        auto states = bound_energies(WellSpec::natural(V0));
        for (std::size_t n = 0; n < std::min<std::size_t>(states.size(), 2); ++n) {
            if (!first) {
                EXPECT_GT(states[n].E, prevE[n]);
                EXPECT_LT(states[n].E - V0, prevB[n]);
            }
            prevE[n] = states[n].E;
            prevB[n] = states[n].E - V0;
        }
        first = false;
    }
}

TEST(BoundWavefunction, ContinuityAndAsymptotics) {
    auto states = bound_energies(WellSpec::natural(50.0));
    for (const BoundState& s : states) {
        const double a = s.a;
        cplx left = bound_wavefunction(s, std::nextafter(a, 0.0));
        cplx right = bound_wavefunction(s, a);
        EXPECT_LE(std::abs(left - right), 1e-10 * std::abs(right));
        const double r = 30.0;
        EXPECT_NEAR(std::abs(bound_wavefunction(s, r)) * r * std::exp(s.sigma * r), std::abs(s.B), 1e-10 * std::abs(s.B));
    }
    EXPECT_THROW(bound_wavefunction(states[0], 0.0), DomainError);
}

TEST(BoundWavefunction, UnitNormByQuadrature) {
    for (const BoundState& s : bound_energies(WellSpec::natural(50.0))) EXPECT_NEAR(quad_norm(s), 1.0, 1e-8);
    WellSpec w{80.0, 0.6, 1.4, 0.9, Geometry::radial3d};
    for (const BoundState& s : bound_energies(w)) EXPECT_NEAR(quad_norm(s), 1.0, 1e-8);
}
