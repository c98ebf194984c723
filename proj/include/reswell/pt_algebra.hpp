#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace reswell {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct FiniteOperator {
    CMatrix matrix;

    FiniteOperator() = default;
    explicit FiniteOperator(CMatrix m) : matrix(std::move(m)) {
        if (matrix.rows() != matrix.cols()) throw DomainError("operator must be square");
        if (matrix.rows() < 2 || matrix.rows() > 64) throw DomainError("operator dimension must be in 2..64");
        if (!matrix.allFinite()) throw DomainError("operator has non-finite entries");
    }
    Eigen::Index dim() const { return matrix.rows(); }
};

enum class SpectrumClass { real_spectrum, conjugate_pairs, exceptional, mixed, unpaired };

inline const char* to_string(SpectrumClass c) {
    switch (c) {
        case SpectrumClass::real_spectrum: return "real-spectrum";
        case SpectrumClass::conjugate_pairs: return "conjugate-pairs";
        case SpectrumClass::exceptional: return "exceptional";
        case SpectrumClass::mixed: return "mixed";
        case SpectrumClass::unpaired: return "unpaired";
    }
    return "?";
}

struct EigenCluster {
    cplx eigenvalue;
    int algebraic = 0;
    int geometric = 0;
    std::vector<CVector> chain;  // eigenvectors, then generalized vectors when defective
};

struct SpectrumReport {
    SpectrumClass classification = SpectrumClass::real_spectrum;
    CVector eigenvalues;
    CMatrix right;  // columns
    CMatrix left;   // columns of H^dagger eigenvectors matched to conj(eigenvalues)
    std::vector<EigenCluster> clusters;
};

namespace detail {

inline double op_scale(const CMatrix& H) {
    double s = H.norm();
    return s > 0.0 ? s : 1.0;
}

// Null space of A from singular values below thresh, as columns.
inline CMatrix null_space(const CMatrix& A, double thresh) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    const Eigen::Index n = A.cols();
    return svd.matrixV().rightCols(n - rank);
}

}  // namespace detail

inline SpectrumReport classify_spectrum(const FiniteOperator& H, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const CMatrix& M = H.matrix;
    const Eigen::Index n = M.rows();
    const double scale = detail::op_scale(M);
    SpectrumReport rep;
    Eigen::ComplexEigenSolver<CMatrix> es(M);
    rep.eigenvalues = es.eigenvalues();
    rep.right = es.eigenvectors();
    Eigen::ComplexEigenSolver<CMatrix> ea(M.adjoint());
    rep.left = CMatrix::Zero(n, n);
    {
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = -1;
            double bd = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (used[j]) continue;
                double d = std::abs(ea.eigenvalues()(j) - std::conj(rep.eigenvalues(i)));
                if (best < 0 || d < bd) best = j, bd = d;
            }
            used[best] = true;
            rep.left.col(i) = ea.eigenvectors().col(best);
        }
    }

    // cluster eigenvalues within tol * scale
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        EigenCluster c;
        label[i] = static_cast<int>(rep.clusters.size());
        cplx sum = rep.eigenvalues(i);
        int count = 1;
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (label[j] < 0 && std::abs(rep.eigenvalues(j) - rep.eigenvalues(i)) <= tol * scale) {
                label[j] = label[i];
                sum += rep.eigenvalues(j);
                ++count;
            }
        c.eigenvalue = sum / double(count);
        c.algebraic = count;
        rep.clusters.push_back(c);
    }
    bool defective = false;
    for (auto& c : rep.clusters) {
        CMatrix A = M - c.eigenvalue * CMatrix::Identity(n, n);
        CMatrix N = detail::null_space(A, 1e-8 * scale);
        c.geometric = static_cast<int>(N.cols());
        for (Eigen::Index k = 0; k < N.cols(); ++k) c.chain.push_back(N.col(k));
        if (c.geometric < c.algebraic) {
            defective = true;
            // generalized vectors: A v_{j+1} = v_j
            CVector v = c.chain.empty() ? CVector(CVector::Zero(n)) : c.chain.front();
            for (int j = c.geometric; j < c.algebraic && v.size() > 0; ++j) {
                CVector next = A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(v);
                c.chain.push_back(next);
                v = next;
            }
        }
    }

    bool all_real = true, any_real = false;
    for (const auto& c : rep.clusters) {
        bool real = std::abs(c.eigenvalue.imag()) <= tol * scale;
        all_real = all_real && real;
        any_real = any_real || real;
    }
    bool paired = true;
    for (const auto& c : rep.clusters) {
        if (std::abs(c.eigenvalue.imag()) <= tol * scale) continue;
        bool found = false;
        for (const auto& d : rep.clusters)
            if (std::abs(d.eigenvalue - std::conj(c.eigenvalue)) <= tol * scale && d.algebraic == c.algebraic) found = true;
        paired = paired && found;
    }
    if (defective)
        rep.classification = SpectrumClass::exceptional;
    else if (all_real)
        rep.classification = SpectrumClass::real_spectrum;
    else if (!paired)
        rep.classification = SpectrumClass::unpaired;
    else
        rep.classification = any_real ? SpectrumClass::mixed : SpectrumClass::conjugate_pairs;
    return rep;
}

inline double intertwiner_residual(const CMatrix& H, const CMatrix& V) {
    return (V * H - H.adjoint() * V).norm() / detail::op_scale(H);
}

struct Intertwiner {
    FiniteOperator V;
    double residual = 0.0;   // ||VH - H^dagger V||_F / ||H||_F
    double condition = 0.0;  // sigma_max / sigma_min of V
    int kernel_dim = 0;
};

namespace detail {

inline double condition_number(const CMatrix& V) {
    Eigen::JacobiSVD<CMatrix> svd(V);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

// sigma_min / sigma_max of a Hermitian combination.
inline double hermitian_quality(const CMatrix& B) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(B, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues().cwiseAbs();
    const double mx = ev.maxCoeff();
    return mx > 0.0 ? ev.minCoeff() / mx : 0.0;
}

}  // namespace detail

inline Intertwiner solve_intertwiner(const FiniteOperator& Hop) {
    const CMatrix& H = Hop.matrix;
    const Eigen::Index n = H.rows();
    const double scale = detail::op_scale(H);
    // vec(VH - H^dagger V) = (H^T kron I - I kron H^dagger) vec(V), column-major
    const Eigen::Index N = n * n;
    CMatrix L = CMatrix::Zero(N, N);
    const CMatrix Hd = H.adjoint();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) {
            if (H(l, j) != cplx{0.0}) L.block(j * n, l * n, n, n) += H(l, j) * CMatrix::Identity(n, n);
            if (j == l) L.block(j * n, l * n, n, n) -= Hd;
        }
    Eigen::BDCSVD<CMatrix> svd(L, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = 1e-11 * std::max(sv(0), scale);
    std::vector<CMatrix> kernel;
    for (Eigen::Index i = 0; i < N; ++i)
        if (sv(i) <= thresh) kernel.push_back(CMatrix::Map(svd.matrixV().col(i).data(), n, n));
    if (kernel.empty()) throw NoInvertibleIntertwiner("intertwining equation has only the zero solution");

    // Hermitian spanning set, orthonormalized as real vectors
    const Eigen::Index R = 2 * N;
    Eigen::MatrixXd stack(R, 2 * static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        CMatrix h1 = 0.5 * (kernel[k] + kernel[k].adjoint());
        CMatrix h2 = (kernel[k] - kernel[k].adjoint()) / (2.0 * I);
        for (Eigen::Index e = 0; e < N; ++e) {
            stack(e, 2 * k) = h1.data()[e].real();
            stack(N + e, 2 * k) = h1.data()[e].imag();
            stack(e, 2 * k + 1) = h2.data()[e].real();
            stack(N + e, 2 * k + 1) = h2.data()[e].imag();
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(stack, Eigen::ComputeThinU);
    std::vector<CMatrix> basis;
    const double rmax = rsvd.singularValues()(0);
    for (Eigen::Index i = 0; i < rsvd.singularValues().size(); ++i) {
        if (rsvd.singularValues()(i) <= 1e-8 * rmax) break;
        CMatrix B(n, n);
        for (Eigen::Index e = 0; e < N; ++e) B.data()[e] = cplx{rsvd.matrixU()(e, i), rsvd.matrixU()(N + e, i)};
        basis.push_back(0.5 * (B + B.adjoint()));
    }
    const std::size_t d = basis.size();
    auto combine = [&](const std::vector<double>& c) {
        CMatrix V = CMatrix::Zero(n, n);
        for (std::size_t k = 0; k < d; ++k) V += c[k] * basis[k];
        return V;
    };
    auto quality = [&](const std::vector<double>& c) { return detail::hermitian_quality(combine(c)); };

    // coarse deterministic search over real combinations
    std::mt19937 rng(20240601u);
    std::normal_distribution<double> gauss;
    std::vector<double> best(d, 0.0);
    double best_q = -1.0;
    auto consider = [&](const std::vector<double>& c) {
        double q = quality(c);
        if (q > best_q) best_q = q, best = c;
    };
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> c(d, 0.0);
        c[k] = 1.0;
        consider(c);
    }
    const int samples = d > 1 ? 256 : 0;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> c(d);
        for (auto& x : c) x = gauss(rng);
        consider(c);
    }
    double step = 0.5;
    for (int round = 0; round < 60 && d > 1 && best_q < 1.0 - 1e-12; ++round) {
        bool improved = false;
        for (std::size_t k = 0; k < d; ++k)
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> c = best;
                double nrm = 0.0;
                for (double x : c) nrm += x * x;
                c[k] += sgn * step * std::sqrt(nrm);
                double q = quality(c);
                if (q > best_q) {
                    best_q = q;
                    best = c;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }

    CMatrix V = combine(best);
    Eigen::JacobiSVD<CMatrix> vs(V);
    V /= vs.singularValues()(0);
    Intertwiner out;
    out.V.matrix = V;
    out.kernel_dim = static_cast<int>(kernel.size());
    out.residual = intertwiner_residual(H, V);
    out.condition = detail::condition_number(V);
    if (!(out.condition <= 1e8)) throw NoInvertibleIntertwiner("every intertwiner found is singular");
    return out;
}

// PT with P a permutation-like matrix and T complex conjugation: ||P conj(M) P^-1 - M||.
inline double pt_commutation_residual(const CMatrix& M, const CMatrix& P) {
    return (P * M.conjugate() * P.inverse() - M).norm();
}

inline CMatrix sigma1() {
    CMatrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

inline CMatrix sigma2() {
    CMatrix s(2, 2);
    s << 0, -I, I, 0;
    return s;
}

inline FiniteOperator m_of_s(double s) {
    if (!(s > 0.0)) throw DomainError("s must be positive");
    CMatrix M(2, 2);
    M << cplx{1, 1}, s, s, cplx{1, -1};
    return FiniteOperator(M);
}

// Solution of i dpsi/dt = M(1) psi that is not an eigenvector.
inline CVector m1_nonstationary(double t) {
    CVector v(2);
    const cplx ph = std::exp(-I * t);
    v << (1.0 + t) * ph, -I * t * ph;
    return v;
}

struct TwoLevelVNorm {
    CMatrix gram;     // [[u+^dag V u+, u+^dag V u-], [u-^dag V u+, u-^dag V u-]]
    CMatrix closure;  // u+ u-^dag V - u- u+^dag V
};

inline TwoLevelVNorm two_level_vnorm(double E0, double Gamma, double t) {
    if (!(Gamma > 0.0)) throw DomainError("Gamma must be positive");
    const CMatrix V = -I * sigma2();
    CVector up(2), um(2);
    up << std::exp(-I * E0 * t + Gamma * t), 0.0;
    um << 0.0, std::exp(-I * E0 * t - Gamma * t);
    TwoLevelVNorm out;
    out.gram.resize(2, 2);
    const CVector* u[2] = {&up, &um};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.gram(i, j) = (u[i]->adjoint() * V * *u[j])(0, 0);
    out.closure = up * um.adjoint() * V - um * up.adjoint() * V;
    return out;
}

enum class PropagatorKind { breit_wigner, pt_pair };
enum class Contour { real_axis, deformed_lower };

inline const char* to_string(PropagatorKind k) { return k == PropagatorKind::breit_wigner ? "breit_wigner" : "pt_pair"; }
inline const char* to_string(Contour c) { return c == Contour::real_axis ? "real_axis" : "deformed_lower"; }

struct PropagatorSpec {
    double E0 = 0.0;
    double Gamma = 1.0;
    PropagatorKind kind = PropagatorKind::breit_wigner;
    Contour contour = Contour::real_axis;

    void validate() const {
        if (!(Gamma > 0.0) || !std::isfinite(Gamma)) throw DomainError("Gamma must be positive");
        if (!std::isfinite(E0)) throw DomainError("E0 must be finite");
    }
};

inline cplx propagator_energy(const PropagatorSpec& p, double E) {
    p.validate();
    const double d = E - p.E0;
    if (p.kind == PropagatorKind::breit_wigner) return 1.0 / cplx{d, p.Gamma};
    return cplx{0.0, -2.0 * p.Gamma / (d * d + p.Gamma * p.Gamma)};
}

// Sum over the pole pair with V-norm residues +1 and -1.
inline cplx propagator_energy_two_pole(const PropagatorSpec& p, double E) {
    p.validate();
    return 1.0 / (E - cplx{p.E0, -p.Gamma}) - 1.0 / (E - cplx{p.E0, p.Gamma});
}

inline double step_theta(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? 0.0 : 0.5); }

inline cplx propagator_time(const PropagatorSpec& p, double t) {
    p.validate();
    const cplx osc = std::exp(-I * p.E0 * t);
    if (p.kind == PropagatorKind::pt_pair && p.contour == Contour::real_axis) return -I * osc * std::exp(-p.Gamma * std::abs(t));
    if (t < 0.0) return 0.0;
    const double th = step_theta(t);
    if (p.kind == PropagatorKind::breit_wigner) return -I * th * osc * std::exp(-p.Gamma * t);
    return -I * th * osc * (std::exp(-p.Gamma * t) - std::exp(p.Gamma * t));
}

inline double time_delay_profile(double E0, double Gamma, double E, double hbar = 1.0) {
    const double d = E - E0;
    return hbar * Gamma / (d * d + Gamma * Gamma);
}

inline double time_advance_profile(double E0, double Gamma, double E, double hbar = 1.0) {
    const double d = E - E0;
    return -hbar * Gamma / (d * d + Gamma * Gamma);
}

}  // namespace reswell
