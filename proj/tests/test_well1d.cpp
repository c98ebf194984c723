#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "reswell/well1d.hpp"

using namespace reswell;

namespace {

WellSpec line(double V0) { return WellSpec::natural(V0, Geometry::line1d); }

// Direct 4x4 matching solve for a wave incident from the left on a well of width a centred at 0.
cplx transmission_oracle(double V0, double E) {
    const double k = std::sqrt(E - V0), K = std::sqrt(E), h = 0.5;
    // unknowns: r, A_in, B_in, t ; psi_left = e^{ikx} + r e^{-ikx}, psi_in = A e^{iKx} + B e^{-iKx}, psi_right = t e^{ikx}
    Eigen::Matrix4cd M;
    Eigen::Vector4cd b;
    auto e = [](cplx z) { return std::exp(z); };
    M << e(I * k * h), -e(-I * K * h), -e(I * K * h), 0.0,
         -I * k * e(I * k * h), -I * K * e(-I * K * h), I * K * e(I * K * h), 0.0,
         0.0, e(I * K * h), e(-I * K * h), -e(I * k * h),
         0.0, I * K * e(I * K * h), -I * K * e(-I * K * h), -I * k * e(I * k * h);
    b << -e(-I * k * h), -I * k * e(-I * k * h), 0.0, 0.0;
    Eigen::Vector4cd x = M.partialPivLu().solve(b);
    return x(3);
}

}  // namespace

TEST(Transmission, MatchesDirectMatchingSolve) {
    for (double V0 : {0.5, 3.0, 20.0})
        for (double E = V0 * 1.01; E < V0 + 60.0; E += 1.37) {
            Well1DResult r = transmission_reflection(line(V0), E);
            cplx t = transmission_oracle(V0, E);
            EXPECT_NEAR(r.T, std::norm(t), 1e-12);
        }
}

TEST(Transmission, ProbabilityConservationSweep) {
    WellSpec w{4.0, 1.3, 0.8, 0.9, Geometry::line1d};
    for (int i = 1; i <= 10000; ++i) {
        const double E = 4.0 + 0.01 * i;
        Well1DResult r = transmission_reflection(w, E);
        EXPECT_NEAR(r.T + r.R, 1.0, 1e-12);
        EXPECT_NEAR(r.T, std::norm(r.C_over_A), 1e-12);
        EXPECT_NEAR(std::norm(r.C_over_A) + std::norm(r.C_over_A * r.B_over_C), 1.0, 1e-12);
        EXPECT_GE(r.T, 0.0);
        EXPECT_LE(r.T, 1.0);
    }
}

TEST(Transmission, ResonancesAreFullTransmission) {
    WellSpec w = line(1.0);
    auto Es = transmission_resonances_1d(w, 4);
    ASSERT_EQ(Es.size(), 4u);
    EXPECT_DOUBLE_EQ(Es[0], pi * pi);
    for (double E : Es) {
        Well1DResult r = transmission_reflection(w, E);
        EXPECT_NEAR(r.T, 1.0, 1e-12);
        EXPECT_NEAR(r.X2, 0.0, 1e-12);
    }
    auto deep = transmission_resonances_1d(line(50.0), 2);
    EXPECT_GT(deep[0], 50.0);
    EXPECT_DOUBLE_EQ(deep[0], 9.0 * pi * pi);
}

TEST(Transmission, NoBarrierLimitAndDomain) {
    WellSpec w = line(1e-12);
    for (double E : {1.0, 5.0, 40.0}) EXPECT_NEAR(transmission_reflection(w, E).T, 1.0, 1e-12);
    EXPECT_THROW(transmission_reflection(line(2.0), 1.0), DomainError);
    EXPECT_THROW(transmission_reflection(WellSpec::natural(2.0), 3.0), DomainError);
}

TEST(Poles1D, LocationsAndConjugation) {
    ResonanceSearch s = pole_search_1d(line(20.0), 4);
    ASSERT_EQ(s.pairs.size(), 4u);
    // frozen from a lower half-plane grid scan of the C/A denominator
    EXPECT_NEAR(s.pairs[0].mu / pi, 1.7356, 1e-4);
    EXPECT_NEAR(s.pairs[0].nu, 1.5888, 1e-4);
    for (const ResonancePair& p : s.pairs) {
        EXPECT_EQ(p.K_minus, std::conj(p.K_plus));
        EXPECT_EQ(p.k_minus, std::conj(p.k_plus));
        EXPECT_LT(pole_residual_1d(p.well, p.energy(Member::minus)), 1e-9);
        EXPECT_LT(1.0 / std::abs(transmission_amplitude_1d(p.well, p.energy(Member::minus))), 1e-6);
    }
}

TEST(Poles1D, UpperMemberIsZeroOfIncomingAmplitude) {
    // conjugation maps the outgoing denominator to cos(Ka) + i sin(Ka)(k^2+K^2)/(2kK)
    for (const ResonancePair& p : pole_pairs_1d(line(5.0), 4)) {
        ComplexEnergy ce = complex_energy(p.well, p.energy(Member::plus));
        const cplx K = ce.branch_K, k = ce.branch_k, Ka = K * p.well.a;
        cplx incoming = std::cos(Ka) + I * std::sin(Ka) * (k * k + K * K) / (2.0 * k * K);
        EXPECT_LT(std::abs(incoming), 1e-9 * (std::abs(std::cos(Ka)) + std::abs(std::sin(Ka))));
        EXPECT_GT(pole_residual_1d(p.well, p.energy(Member::plus)), 1e-3);
    }
}

TEST(Poles1D, RealPartsNearTransmissionResonances) {
    for (double V0 : {1.0, 20.0}) {
        WellSpec w = line(V0);
        auto res = transmission_resonances_1d(w, 6);
        for (const ResonancePair& p : pole_pairs_1d(w, 4)) {
            bool near = false;
            for (double E : res) near = near || std::abs(p.E0 - E) < 2.0 * p.Gamma;
            EXPECT_TRUE(near);
        }
    }
}

TEST(Poles1D, SkippedBranchReported) {
    ResonanceSearch s = pole_search_1d(line(50.0), 3);
    ASSERT_EQ(s.skipped.size(), 1u);
    EXPECT_EQ(s.skipped[0].branch, 1);
    EXPECT_EQ(s.pairs.size(), 2u);
}

TEST(Poles1D, UnitCovariance) {
    WellSpec base = line(3.0);
    auto ref = pole_pairs_1d(base, 3);
    for (double e = -1.5; e <= 1.5; e += 0.5) {
        const double lam = std::pow(10.0, e);
        auto got = pole_pairs_1d(base.rescaled(lam), 3);
        ASSERT_EQ(got.size(), ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            EXPECT_NEAR(got[i].E0 * lam * lam, ref[i].E0, 1e-9 * std::abs(ref[i].E0));
            EXPECT_NEAR(got[i].Gamma * lam * lam, ref[i].Gamma, 1e-9 * ref[i].Gamma);
        }
        auto tr = transmission_resonances_1d(base.rescaled(lam), 3);
        auto t0 = transmission_resonances_1d(base, 3);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(tr[i] * lam * lam, t0[i], 1e-12 * t0[i]);
    }
}
