#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace reswell {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error { using Error::Error; };
struct NoSignChange : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };
struct NotExceptional : Error { using Error::Error; };
struct FitFailed : Error { using Error::Error; };
struct NoInvertibleIntertwiner : Error { using Error::Error; };
struct BoundaryLeak : Error { using Error::Error; };

enum class Geometry { radial3d, line1d };

inline const char* to_string(Geometry g) { return g == Geometry::radial3d ? "radial3d" : "line1d"; }

// Square well: zero inside radius a (or width a in 1D), V0 outside.
struct WellSpec {
    double V0 = 1.0;
    double a = 1.0;
    double m = 0.5;
    double hbar = 1.0;
    Geometry geometry = Geometry::radial3d;

    static WellSpec natural(double V0, Geometry g = Geometry::radial3d) {
        return WellSpec{V0, 1.0, 0.5, 1.0, g};
    }

    void validate() const {
        auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!ok(V0)) throw DomainError("well depth V0 must be positive and finite");
        if (!ok(a)) throw DomainError("well radius a must be positive and finite");
        if (!ok(m)) throw DomainError("mass m must be positive and finite");
        if (!ok(hbar)) throw DomainError("hbar must be positive and finite");
    }

    double gamma() const { return a * std::sqrt(2.0 * m) / hbar; }
    // E = kinetic() * K^2
    double kinetic() const { return hbar * hbar / (2.0 * m); }
    // gamma * sqrt(V0), the dimensionless depth
    double depth_parameter() const { return gamma() * std::sqrt(V0); }

    // a -> lambda a, V0 -> V0 / lambda^2
    WellSpec rescaled(double lambda) const {
        WellSpec w = *this;
        w.a *= lambda;
        w.V0 /= lambda * lambda;
        return w;
    }
};

// Principal root with Re >= 0, and Im >= 0 on the cut.
inline cplx principal_sqrt(cplx z) {
    cplx r = std::sqrt(z);
    if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
    return r;
}

struct ComplexEnergy {
    cplx value;
    cplx branch_k;  // outside the well
    cplx branch_K;  // inside the well
};

inline ComplexEnergy complex_energy(const WellSpec& w, cplx E) {
    const double c = w.kinetic();
    return ComplexEnergy{E, principal_sqrt((E - w.V0) / c), principal_sqrt(E / c)};
}

template <class F>
double find_real_root(F&& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw DomainError("root tolerance must be positive");
    if (!(lo < hi)) throw DomainError("bracket must satisfy lo < hi");
    auto g = [&](double x) {
        double v = f(x);
        if (!std::isfinite(v)) throw NonFinite("function is not finite at x = " + std::to_string(x));
        return v;
    };
    double flo = g(lo), fhi = g(hi);
    if (!(flo * fhi < 0.0)) throw NoSignChange("no sign change on bracket");
    auto done = [tol](double l, double h) {
        double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(l), std::abs(h));
        return std::abs(h - l) <= std::max(tol, floor);
    };
    std::uintmax_t iters = 400;
    auto [l, h] = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, done, iters);
    double fl = g(l), fh = g(h);
    if (fl == 0.0) return l;
    if (fh == 0.0) return h;
    return std::abs(fl) <= std::abs(fh) ? l : h;
}

struct Newton2D {
    double x = 0.0;
    double y = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

using Vec2 = std::array<double, 2>;

inline double inf_norm(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

template <class F>
Newton2D newton2d(F&& F_, Vec2 seed, double tol, int max_iter) {
    if (!(tol > 0.0)) throw DomainError("newton tolerance must be positive");
    Vec2 p = seed;
    Vec2 r = F_(p[0], p[1]);
    double norm = inf_norm(r);
    if (!std::isfinite(norm)) throw NonFinite("residual not finite at seed");
    int it = 0;
    for (; it < max_iter; ++it) {
        if (norm <= tol) return {p[0], p[1], it, norm};
        double J[2][2];
        for (int j = 0; j < 2; ++j) {
            double h = std::max(1e-7, 1e-7 * std::abs(p[j]));
            Vec2 pp = p, pm = p;
            pp[j] += h;
            pm[j] -= h;
            Vec2 fp = F_(pp[0], pp[1]), fm = F_(pm[0], pm[1]);
            J[0][j] = (fp[0] - fm[0]) / (2.0 * h);
            J[1][j] = (fp[1] - fm[1]) / (2.0 * h);
        }
        // singular values of a 2x2 in closed form
        double s1 = J[0][0] * J[0][0] + J[0][1] * J[0][1] + J[1][0] * J[1][0] + J[1][1] * J[1][1];
        double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        double disc = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * det * det));
        double smax = std::sqrt(0.5 * (s1 + disc));
        double smin = std::abs(det) / (smax > 0.0 ? smax : 1.0);
        if (!(smax > 0.0) || !(smin > 0.0) || smax / smin > 1e12)
            throw SingularJacobian("finite-difference Jacobian is numerically singular");
        Vec2 step{-(J[1][1] * r[0] - J[0][1] * r[1]) / det, -(-J[1][0] * r[0] + J[0][0] * r[1]) / det};
        double lam = 1.0;
        bool improved = false;
        for (int k = 0; k <= 20; ++k) {
            Vec2 q{p[0] + lam * step[0], p[1] + lam * step[1]};
            Vec2 rq = F_(q[0], q[1]);
            double nq = inf_norm(rq);
            if (std::isfinite(nq) && nq < norm) {
                p = q;
                r = rq;
                norm = nq;
                improved = true;
                break;
            }
            lam *= 0.5;
        }
        if (!improved) {
            if (norm <= tol) break;
            throw NoConvergence("newton stalled at residual " + std::to_string(norm));
        }
    }
    if (norm <= tol) return {p[0], p[1], it, norm};
    throw NoConvergence("newton did not converge in " + std::to_string(max_iter) + " iterations");
}

}  // namespace reswell
