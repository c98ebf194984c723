#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "pt_algebra.hpp"

namespace reswell {

enum class Realization { unequal_real, equal_real, conjugate_pair };

inline const char* to_string(Realization r) {
    switch (r) {
        case Realization::unequal_real: return "unequal_real";
        case Realization::equal_real: return "equal_real";
        case Realization::conjugate_pair: return "conjugate_pair";
    }
    return "?";
}

struct PUSpec {
    cplx omega1;
    cplx omega2;
    Realization realization = Realization::unequal_real;

    static PUSpec unequal(double w1, double w2) { return checked({w1, 0.0}, {w2, 0.0}, Realization::unequal_real); }
    static PUSpec equal(double w) { return checked({w, 0.0}, {w, 0.0}, Realization::equal_real); }
    static PUSpec pair(double a, double b) { return checked({a, b}, {a, -b}, Realization::conjugate_pair); }

    static PUSpec checked(cplx w1, cplx w2, Realization r) {
        PUSpec s{w1, w2, r};
        s.validate();
        return s;
    }

    double sum() const { return (omega1 + omega2).real(); }
    double product() const { return (omega1 * omega2).real(); }

    void validate() const {
        const cplx S = omega1 + omega2, P = omega1 * omega2;
        const double eps = 1e-12;
        if (std::abs(S.imag()) > eps * std::abs(S) || std::abs(P.imag()) > eps * std::abs(P))
            throw DomainError("omega1 + omega2 and omega1 omega2 must be real");
        if (!(S.real() > 0.0) || !(P.real() > 0.0)) throw DomainError("omega1 + omega2 and omega1 omega2 must be positive");
        const bool real = std::abs(omega1.imag()) <= eps * std::abs(omega1) && std::abs(omega2.imag()) <= eps * std::abs(omega2);
        const bool same = std::abs(omega1 - omega2) <= eps * std::abs(omega1);
        bool ok = false;
        switch (realization) {
            case Realization::unequal_real: ok = real && !same; break;
            case Realization::equal_real: ok = real && same; break;
            case Realization::conjugate_pair: ok = !real && std::abs(omega2 - std::conj(omega1)) <= eps * std::abs(omega1); break;
        }
        if (!ok) throw DomainError("realization does not match the frequencies");
    }
};

// psi(y, x) = exp(-(1/2) S p y^2 - p y x - (1/2) S x^2)
inline cplx pu_wavefunction(const PUSpec& s, double y, double x) {
    const double S = s.sum(), p = s.product();
    return std::exp(-0.5 * S * p * y * y - p * y * x - 0.5 * S * x * x);
}

// Eigenvalues of the exponent's quadratic form in (y, x), ascending.
inline std::array<double, 2> pu_exponent_eigenvalues(const PUSpec& s) {
    const double S = s.sum(), p = s.product();
    const double a = -0.5 * S * p, b = -0.5 * p, d = -0.5 * S;
    const double tr = a + d, disc = std::sqrt((a - d) * (a - d) + 4.0 * b * b);
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

struct PUCoefficients {
    cplx pz2;  // p_z^2
    cplx pzx;  // p_z x
    cplx x2;
    cplx z2;
};

inline PUCoefficients pu_hamiltonian_coefficients(const PUSpec& s) {
    s.validate();
    const cplx w1 = s.omega1, w2 = s.omega2;
    return {0.5, 1.0, 0.5 * (w1 * w1 + w2 * w2), -0.5 * w1 * w1 * w2 * w2};
}

struct PUGrid {
    double L = 8.0;
    int N = 512;
};

struct PUResult {
    cplx E_est;
    double residual = 0.0;
    double ratio_to_sum = 0.0;  // E_est / (omega1 + omega2)
    double h = 0.0;
};

// H' = -(1/2) d_x^2 - x d_y + (1/2)(w1^2 + w2^2) x^2 + (1/2) w1^2 w2^2 y^2 by central differences.
inline PUResult pu_rayleigh_and_residual(const PUSpec& s, const PUGrid& g) {
    s.validate();
    if (!(g.L > 0.0)) throw DomainError("grid extent must be positive");
    if (g.N < 16) throw DomainError("grid needs at least 16 points per axis");
    const int N = g.N;
    const double h = 2.0 * g.L / (N - 1);
    const double S = s.sum(), p = s.product();
    const double cx = 0.5 * (S * S - 2.0 * p), cy = 0.5 * p * p;
    auto coord = [&](int i) { return -g.L + h * i; };
    std::vector<double> psi(static_cast<std::size_t>(N) * N);
    double edge = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double v = pu_wavefunction(s, coord(j), coord(i)).real();
            psi[static_cast<std::size_t>(i) * N + j] = v;  // i indexes x, j indexes y
            if (i == 0 || j == 0 || i == N - 1 || j == N - 1) edge = std::max(edge, std::abs(v));
        }
    if (edge > 1e-8) throw BoundaryLeak("wavefunction is not negligible on the grid boundary");
    auto at = [&](int i, int j) { return psi[static_cast<std::size_t>(i) * N + j]; };
    auto Hpsi = [&](int i, int j) {
        const double x = coord(i), y = coord(j);
        const double dxx = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (h * h);
        const double dy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
        return -0.5 * dxx - x * dy + (cx * x * x + cy * y * y) * at(i, j);
    };
    struct Row { double num = 0, den = 0; };
    auto rows = parallel_map<Row>(static_cast<std::size_t>(N - 2), [&](std::size_t r) {
        const int i = static_cast<int>(r) + 1;
        Row acc;
        for (int j = 1; j < N - 1; ++j) {
            acc.num += at(i, j) * Hpsi(i, j);
            acc.den += at(i, j) * at(i, j);
        }
        return acc;
    });
    double num = 0, den = 0;
    for (const Row& r : rows) num += r.num, den += r.den;
    const double E = num / den;
    auto res_rows = parallel_map<double>(static_cast<std::size_t>(N - 2), [&](std::size_t r) {
        const int i = static_cast<int>(r) + 1;
        double acc = 0;
        for (int j = 1; j < N - 1; ++j) {
            const double d = Hpsi(i, j) - E * at(i, j);
            acc += d * d;
        }
        return acc;
    });
    double rr = 0;
    for (double v : res_rows) rr += v;
    PUResult out;
    out.E_est = E;
    out.residual = std::sqrt(rr / den);
    out.ratio_to_sum = E / S;
    out.h = h;
    return out;
}

// Normal-mode structure from the companion matrix of w^2 - S w + p.
inline SpectrumClass pu_taxonomy(const PUSpec& s) {
    CMatrix C(2, 2);
    C << s.sum(), -s.product(), 1.0, 0.0;
    return classify_spectrum(FiniteOperator(C), 1e-6).classification;
}

}  // namespace reswell
