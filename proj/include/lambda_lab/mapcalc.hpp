#pragma once

// The analytic lambda pipeline for domains given as conformal images of the
// model annulus B_1 - closure(B_beta) (or of the disk when beta = 0).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lambda_lab/curve.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/models.hpp"
#include "lambda_lab/series.hpp"

namespace lambda_lab {

struct AnnulusMapSpec {
    LaurentSeries f;
    double beta = 0.0;  // 0: disk mode
    LaurentSeries g;    // g^2 f' = 1
    int winding_fprime = 0;
    bool outer_normalized = false;

    bool disk_mode() const { return beta == 0.0; }
};

struct BTProfile {
    std::vector<double> ts;
    std::vector<double> A;
    std::vector<double> B;
};

struct LambdaReport {
    double lambda = 0.0;
    double boundary_length = 0.0;
    double c3_integral = 0.0;  // closed integral of c3 dl over the outer boundary
    double lower_bound = 0.0;
    double defect = 0.0;
    std::optional<double> b_tail_norm;
    std::optional<double> holder_defect;
    std::optional<bool> equality;
};

struct RigidityReport {
    bool is_mobius = false;
    bool is_similarity = false;
    std::string form = "none";  // affine, inversion, mobius, none
    cplx C1, C2, C3;
};

namespace detail {

/// Radius used for image checks of the "inner" circle in disk mode.
inline double inner_probe_radius(double beta) { return beta > 0.0 ? beta : 0.5; }

}  // namespace detail

/// Computes g, the winding of f' and the outer-normalization flag. With
/// require_outer, a map whose unit-circle image is not the outermost, positively
/// traversed boundary is rejected.
inline AnnulusMapSpec build_map(const LaurentSeries& f, double beta, bool require_outer = true) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ValidationError("build_map: beta must lie in [0, 1)");
    if (!f.in_validity(1.0)) throw ValidationError("build_map: f is not declared valid on |z| = 1");
    if (beta > 0.0 && !f.in_validity(beta)) {
        throw ValidationError("build_map: f is not declared valid on |z| = beta");
    }
    if (beta == 0.0 && f.kmin() < 0) throw ValidationError("build_map: disk mode needs a Taylor series");

    AnnulusMapSpec m;
    m.f = f;
    m.beta = beta;
    const LaurentSeries fp = derivative(f);
    const double rmid = 0.5 * (beta + 1.0);
    m.winding_fprime = winding_number(fp, rmid);
    m.g = sqrt_reciprocal_derivative(f);

    // Orientation and nesting of the boundary images.
    bool outer_ok = m.winding_fprime == 0;
    if (outer_ok) {
        const auto outer = BoundaryCurve::from_series(f, 1.0);
        const auto cc = check_curve(outer);
        outer_ok = cc.simple && outer.orientation() == Orientation::positive;
        if (outer_ok) {
            const double rp = detail::inner_probe_radius(beta);
            const auto inner = BoundaryCurve::from_series(f, rp);
            outer_ok = check_curve(inner).simple;
            // both curves are simple, so a few hundred inner points settle the nesting
            const auto& ds = inner.dense_samples();
            const std::size_t stride = std::max<std::size_t>(1, ds.size() / 512);
            for (std::size_t j = 0; j < ds.size() && outer_ok; j += stride) {
                if (!outer.encloses(ds[j])) outer_ok = false;
            }
        }
    }
    m.outer_normalized = outer_ok;
    if (require_outer && !outer_ok) {
        throw ValidationError("build_map: f does not send the unit circle to the outermost boundary "
                              "with positive orientation (winding of f' = " +
                              std::to_string(m.winding_fprime) + ")");
    }
    return m;
}

/// f(beta / z): swaps the roles of the two boundary circles.
inline LaurentSeries renormalize_outer(const LaurentSeries& f, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("renormalize_outer: needs beta in (0, 1)");
    std::vector<cplx> c;
    for (int k = f.kmax(); k >= f.kmin(); --k) c.push_back(f.coeff(k) * std::pow(beta, k));
    const double rin = beta / f.r_outer();
    const double rout = f.r_inner() > 0.0 ? beta / f.r_inner() : 1e300;
    return LaurentSeries(-f.kmax(), std::move(c), rin, rout);
}

/// C1 + C2 / (z + C3) as a finitely banded series: Taylor when |C3| > 1,
/// principal-part series in 1/z when |C3| < beta. Truncated at 1e-17 relative.
inline LaurentSeries mobius_series(cplx C1, cplx C2, cplx C3, double beta) {
    const double a = std::abs(C3);
    if (a > 1.0) {
        std::vector<cplx> c{C1 + C2 / C3};
        cplx term = C2 / C3;
        const double stop = 1e-17 * std::abs(term);
        for (int k = 1;; ++k) {
            term *= -1.0 / C3;
            if (std::abs(term) <= stop) break;
            c.push_back(term);
            if (k > 100000) throw NumericalError("mobius_series: too many terms");
        }
        return LaurentSeries(0, std::move(c), 0.0, 1.0);
    }
    if (beta > 0.0 && a < beta) {
        // C2/z sum_k (-C3/z)^k
        std::vector<cplx> neg;  // coefficients of z^{-1}, z^{-2}, ...
        cplx term = C2;
        for (int k = 0;; ++k) {
            if (std::abs(term) * std::pow(beta, -(k + 1)) <= 1e-17 * std::abs(C2) / beta) break;
            neg.push_back(term);
            term *= -C3;
            if (k > 100000) throw NumericalError("mobius_series: too many terms");
        }
        std::vector<cplx> c(neg.rbegin(), neg.rend());
        c.push_back(C1);
        return LaurentSeries(-static_cast<int>(neg.size()), std::move(c), beta, 1.0);
    }
    throw ValidationError("mobius_series: pole -C3 must lie outside the closed annulus");
}

/// A(t) = sum |b_k|^2 e^{2kt}.
inline double profile_A(const LaurentSeries& g, double t) {
    double s = 0.0;
    for (int k = g.kmin(); k <= g.kmax(); ++k) s += std::norm(g.coeff(k)) * std::exp(2.0 * k * t);
    return s;
}

/// B(t) = sum |b_k|^2 2k(2k-2) e^{2kt}; every term is nonnegative.
inline double profile_B(const LaurentSeries& g, double t) {
    double s = 0.0;
    for (int k = g.kmin(); k <= g.kmax(); ++k) {
        s += std::norm(g.coeff(k)) * (2.0 * k) * (2.0 * k - 2.0) * std::exp(2.0 * k * t);
    }
    return s;
}

/// Circle mean of 1/|f'| on |z| = e^t by the trapezoid rule, refined until stable.
inline double circle_mean_inverse_speed(const LaurentSeries& fp, double t) {
    const double r = std::exp(t);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n = 256; n <= (std::size_t{1} << 16); n *= 2) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += 1.0 / std::abs(fp(std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n))));
        }
        s /= static_cast<double>(n);
        if (std::abs(s - prev) <= 1e-15 * std::abs(s)) return s;
        prev = s;
    }
    return prev;
}

inline void require_t(const AnnulusMapSpec& m, double t) {
    const double lo = m.disk_mode() ? -std::numeric_limits<double>::infinity() : std::log(m.beta);
    if (!(t > lo && t < 0.0)) {
        throw ValidationError("profile: t = " + std::to_string(t) + " outside (ln beta, 0)");
    }
}

/// A and B on the given t values, with B cross-checked at three pseudo-random t
/// against fourth-order differences of the numerically integrated circle mean of 1/|f'|.
inline BTProfile profile(const AnnulusMapSpec& m, const std::vector<double>& ts) {
    BTProfile p;
    for (double t : ts) {
        require_t(m, t);
        p.ts.push_back(t);
        p.A.push_back(profile_A(m.g, t));
        p.B.push_back(profile_B(m.g, t));
    }

    const LaurentSeries fp = derivative(m.f);
    std::mt19937_64 rng(0x5eed);
    const double lo = m.disk_mode() ? -2.0 : std::log(m.beta);
    std::uniform_real_distribution<double> U(0.2, 0.8);
    for (int i = 0; i < 3; ++i) {
        const double t = lo * U(rng);
        const double h = std::min(1e-3, 0.2 * std::min(-t, t - lo));
        double a[5];
        for (int j = -2; j <= 2; ++j) a[j + 2] = circle_mean_inverse_speed(fp, t + j * h);
        const double At = (a[0] - 8.0 * a[1] + 8.0 * a[3] - a[4]) / (12.0 * h);
        const double Att = (-a[0] + 16.0 * a[1] - 30.0 * a[2] + 16.0 * a[3] - a[4]) / (12.0 * h * h);
        const double Bfd = Att - 2.0 * At;
        const double Bs = profile_B(m.g, t);
        double scale = 0.0;
        for (int k = m.g.kmin(); k <= m.g.kmax(); ++k) {
            scale += std::norm(m.g.coeff(k)) * (4.0 * k * k + 2.0 * std::abs(k) + 1.0) * std::exp(2.0 * k * t);
        }
        if (std::abs(Bfd - Bs) > 1e-6 * std::max(1.0, scale)) {
            throw NumericalError("profile: series B(" + std::to_string(t) + ") = " + std::to_string(Bs) +
                                 " disagrees with finite differences " + std::to_string(Bfd));
        }
    }
    return p;
}

inline void require_outer_normalized(const AnnulusMapSpec& m, const char* who) {
    if (!m.outer_normalized) {
        throw ValidationError(std::string(who) + ": map is not outer-normalized");
    }
}

/// Closed integral of -6 c3 dl over the outer image boundary:
/// [(pi/ln beta)^2 + 1] 2 pi sum|b_k|^2 + 2 pi B(0), or 2 pi B(0) in disk mode.
inline double c3_integral_via_map(const AnnulusMapSpec& m) {
    require_outer_normalized(m, "c3_integral_via_map");
    const double b0 = profile_B(m.g, 0.0);
    const double two_pi = 2.0 * std::numbers::pi;
    if (m.disk_mode()) return two_pi * b0;
    return modulus_factor(m.beta) * two_pi * m.g.norm2() + two_pi * b0;
}

/// Length of f(unit circle) = closed integral of 1/|g|^2 d theta.
inline double boundary_length_via_map(const AnnulusMapSpec& m) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = std::max<std::size_t>(64, next_power_of_two(min_recovery_samples(m.g.kmin(), m.g.kmax())));
    for (; n <= (std::size_t{1} << 16); n *= 2) {
        auto c = eval_circle(m.g, 1.0, n);
        double s = 0.0;
        for (const auto& v : c.values) s += 1.0 / std::norm(v);
        s *= 2.0 * std::numbers::pi / static_cast<double>(n);
        if (std::abs(s - prev) <= 1e-10 * std::abs(s)) return s;
        prev = s;
    }
    throw NumericalError("boundary_length_via_map: trapezoid rule not converged at n = 65536");
}

struct EqualityTolerance {
    double tol = 1e-8;
};

inline double b_tail_norm(const LaurentSeries& g) {
    double s = 0.0;
    for (int k = g.kmin(); k <= g.kmax(); ++k)
        if (k != 0 && k != 1) s += std::norm(g.coeff(k));
    return s;
}

inline LambdaReport lambda_via_map(const AnnulusMapSpec& m, double tol = 1e-8) {
    require_outer_normalized(m, "lambda_via_map");
    LambdaReport r;
    const double I6 = c3_integral_via_map(m);
    r.boundary_length = boundary_length_via_map(m);
    r.c3_integral = -I6 / 6.0;
    r.lambda = r.boundary_length * I6 / 6.0;
    r.lower_bound = m.disk_mode() ? 0.0 : constants(m.beta).lambda_bound;
    r.defect = r.lambda - r.lower_bound;
    const double n2 = m.g.norm2();
    r.b_tail_norm = b_tail_norm(m.g);
    r.holder_defect = 2.0 * std::numbers::pi * n2 * r.boundary_length - 4.0 * std::numbers::pi * std::numbers::pi;
    r.equality = (*r.b_tail_norm < tol * n2) && (*r.holder_defect < tol * 4.0 * std::numbers::pi * std::numbers::pi);
    return r;
}

inline RigidityReport classify_rigidity(const AnnulusMapSpec& m, double tol = 1e-8) {
    RigidityReport r;
    const double n2 = m.g.norm2();
    r.is_mobius = b_tail_norm(m.g) < tol * n2;
    if (!r.is_mobius) return r;
    const cplx b0 = m.g.coeff(0), b1 = m.g.coeff(1);
    const bool b0_zero = std::norm(b0) < tol * n2;
    const bool b1_zero = std::norm(b1) < tol * n2;
    r.is_similarity = b0_zero || b1_zero;
    const cplx f1 = m.f(1.0);
    if (b1_zero) {
        r.form = "affine";
        r.C2 = 1.0 / (b0 * b0);
        r.C1 = f1 - r.C2;
        r.C3 = 0.0;
    } else if (b0_zero) {
        r.form = "inversion";
        r.C2 = -1.0 / (b1 * b1);
        r.C1 = f1 - r.C2;
        r.C3 = 0.0;
    } else {
        r.form = "mobius";
        r.C3 = b0 / b1;
        r.C2 = -1.0 / (b1 * b1);
        r.C1 = f1 - r.C2 / (1.0 + r.C3);
    }
    return r;
}

/// (f(z), v_beta(|z|) |f'(z)|): the boundary defining function transported to the image domain.
inline std::vector<std::pair<cplx, double>> pullback_v(const AnnulusMapSpec& m, const std::vector<cplx>& points) {
    const LaurentSeries fp = derivative(m.f);
    std::vector<std::pair<cplx, double>> out;
    out.reserve(points.size());
    for (const auto& z : points) {
        const double r = std::abs(z);
        if (!(r > m.beta && r < 1.0)) throw ValidationError("pullback_v: point outside the open annulus");
        const double v = m.disk_mode() ? v_disk(r) : v_annulus(m.beta, r);
        out.emplace_back(m.f(z), v * std::abs(fp(z)));
    }
    return out;
}

inline nlohmann::json to_json(const LambdaReport& r) {
    nlohmann::json j{{"lambda", r.lambda},
                     {"boundary_length", r.boundary_length},
                     {"c3_integral", r.c3_integral},
                     {"lower_bound", r.lower_bound},
                     {"defect", r.defect}};
    j["b_tail_norm"] = r.b_tail_norm ? nlohmann::json(*r.b_tail_norm) : nlohmann::json(nullptr);
    j["holder_defect"] = r.holder_defect ? nlohmann::json(*r.holder_defect) : nlohmann::json(nullptr);
    j["equality"] = r.equality ? nlohmann::json(*r.equality) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const RigidityReport& r) {
    return {{"is_mobius", r.is_mobius}, {"is_similarity", r.is_similarity}, {"form", r.form},
            {"C1", to_json_value(r.C1)},  {"C2", to_json_value(r.C2)},        {"C3", to_json_value(r.C3)}};
}

}  // namespace lambda_lab
