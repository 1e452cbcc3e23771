#pragma once

// Boundary-expansion coefficients v = d - kappa d^2 / 2 + c3 d^3 + ... along
// the outer boundary of a numerical v field, and the lambda functional built
// from them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "lambda_lab/curve.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/field.hpp"
#include "lambda_lab/liouville.hpp"
#include "lambda_lab/mapcalc.hpp"

namespace lambda_lab {

enum class ExpansionMethod { normal_fit, flux };

inline const char* to_string(ExpansionMethod m) { return m == ExpansionMethod::normal_fit ? "normal_fit" : "flux"; }

struct ExpansionProfile {
    ExpansionMethod method = ExpansionMethod::normal_fit;
    std::vector<BoundaryFrame> frames;
    std::vector<double> c3;
    std::vector<double> kappa_fit;
    std::vector<double> residual;   // fit: RMS misfit of v; flux: |intercept + 2 kappa|
    std::vector<double> intercept;  // flux only: Delta v extrapolated to the boundary
    bool kappa_ok = true;           // every kappa_fit within 5% of the frame curvature
};

struct FitWindow {
    double d_lo = 0.0;
    double d_hi = 0.0;
};

namespace detail {

inline void require_outer_frames(const ScalarField& v, const std::vector<BoundaryFrame>& frames) {
    const auto& outer = v.grid().geom->domain().outer();
    const double scale = v.grid().geom->domain().scale();
    for (const auto& f : frames) {
        if (outer.nearest(f.point).distance > 1e-8 * scale) {
            throw ValidationError("mixed-component frames: frame point is not on the outer boundary");
        }
    }
}

inline double outer_reach(const ScalarField& v) { return v.grid().geom->domain().outer().reach(); }

}  // namespace detail

/// Default fit window [6h, 0.08 scale].
inline FitWindow default_window(const ScalarField& v) {
    return {6.0 * v.grid().h, 0.08 * v.grid().geom->domain().scale()};
}

/// Least-squares fit of v - d + kappa d^2 / 2 by c3 d^3 + c4 d^4 + c5 d^5 at
/// 12 depths along each inward normal (kappa pinned from the geometry). The free
/// refit v - d = a d^2 + ... gives the diagnostic kappa_fit = -2a.
inline ExpansionProfile extract_c3_fit(const ScalarField& v, const std::vector<BoundaryFrame>& frames, FitWindow window,
                                       double fit_tol = -1.0, int depths = 12) {
    if (v.kind() != FieldKind::v) throw ValidationError("extract_c3_fit: needs a v field");
    const double h = v.grid().h;
    const double scale = v.grid().geom->domain().scale();
    if (!(window.d_lo > 4.0 * h && window.d_hi > window.d_lo && window.d_hi < 0.5 * detail::outer_reach(v))) {
        throw ValidationError("extract_c3_fit: window outside valid band (4h, reach/2)");
    }
    if (fit_tol < 0) fit_tol = 1e-5 * scale;
    detail::require_outer_frames(v, frames);

    ExpansionProfile p;
    p.method = ExpansionMethod::normal_fit;
    p.frames = frames;
    Eigen::VectorXd d(depths);
    for (int k = 0; k < depths; ++k) d[k] = window.d_lo + (window.d_hi - window.d_lo) * k / (depths - 1);
    Eigen::MatrixXd A(depths, 3), Af(depths, 4);
    for (int k = 0; k < depths; ++k) {
        const double x = d[k];
        A(k, 0) = x * x * x;
        A(k, 1) = A(k, 0) * x;
        A(k, 2) = A(k, 1) * x;
        Af(k, 0) = x * x;
        Af.block(k, 1, 1, 3) = A.row(k);
    }
    const auto qr = A.colPivHouseholderQr();
    const auto qrf = Af.colPivHouseholderQr();
    std::vector<std::string> bad;
    for (const auto& f : frames) {
        Eigen::VectorXd vals(depths), w(depths), free(depths);
        for (int k = 0; k < depths; ++k) {
            vals[k] = v.sample(f.point + d[k] * f.inward_normal);
            w[k] = vals[k] - d[k] + 0.5 * f.curvature * d[k] * d[k];
            free[k] = vals[k] - d[k];
        }
        const Eigen::VectorXd c = qr.solve(w);
        const Eigen::VectorXd cf = qrf.solve(free);
        const double rms = std::sqrt((A * c - w).squaredNorm() / depths);
        const double kfit = -2.0 * cf[0];
        p.c3.push_back(c[0]);
        p.kappa_fit.push_back(kfit);
        p.residual.push_back(rms);
        const double kref = std::abs(f.curvature);
        if (std::abs(kfit - f.curvature) > 0.05 * std::max(kref, 1.0 / scale)) p.kappa_ok = false;
        if (!(rms < fit_tol)) bad.push_back(std::to_string(f.param));
    }
    if (!bad.empty()) {
        throw NumericalError("extract_c3_fit: cubic-model misfit above " + std::to_string(fit_tol) + " at " +
                             std::to_string(bad.size()) + " frame(s), first t = " + bad.front());
    }
    return p;
}

/// 5-point Laplacian of the node values wherever all four neighbours are active.
inline ScalarField discrete_laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    const auto& a = f.values();
    std::vector<double> out(a.size(), std::numeric_limits<double>::quiet_NaN());
    const double h2 = g.h * g.h;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const double c = a[g.id(i, j)];
            const double l = a[g.id(i - 1, j)], r = a[g.id(i + 1, j)], d = a[g.id(i, j - 1)], u = a[g.id(i, j + 1)];
            if (std::isnan(c) || std::isnan(l) || std::isnan(r) || std::isnan(d) || std::isnan(u)) continue;
            out[g.id(i, j)] = (l + r + d + u - 4.0 * c) / h2;
        }
    }
    return ScalarField(f.grid_ptr(), FieldKind::plain, std::move(out));
}

/// Default flux depth max(8h, 0.03 scale).
inline double default_flux_depth(const ScalarField& v) {
    return std::max(8.0 * v.grid().h, 0.03 * v.grid().geom->domain().scale());
}

/// c3 = (d/dd) Delta v / 6 at the boundary: Delta_h v is interpolated at depths
/// D - 2h, D, D + 2h along the inward normal, and its slope is carried back to
/// d = 0 with the local second difference. The leftover bias of that
/// extrapolation grows like D^2, so the stencil is repeated at 1.25 D and the
/// two estimates are combined to cancel it. The extrapolated Delta v intercept
/// (which should equal -2 kappa) is kept as a consistency check.
inline ExpansionProfile extract_c3_flux(const ScalarField& v, const std::vector<BoundaryFrame>& frames, double depth) {
    if (v.kind() != FieldKind::v) throw ValidationError("extract_c3_flux: needs a v field");
    const double h = v.grid().h;
    const double hp = 2.0 * h;
    const double depth2 = 1.25 * depth;
    if (!(depth - hp > 4.0 * h && depth2 < 0.5 * detail::outer_reach(v))) {
        throw ValidationError("extract_c3_flux: depth outside valid band (4h, reach/2)");
    }
    detail::require_outer_frames(v, frames);
    const ScalarField lap = discrete_laplacian(v);
    ExpansionProfile p;
    p.method = ExpansionMethod::flux;
    p.frames = frames;
    // (slope at 0, intercept) from the three-point stencil centred at D
    auto stencil = [&](const BoundaryFrame& f, double D) {
        double L[3];
        for (int k = 0; k < 3; ++k) {
            try {
                L[k] = lap.sample(f.point + (D + (k - 1) * hp) * f.inward_normal);
            } catch (const ValidationError&) {
                throw ValidationError("extract_c3_flux: stencil leaves mask at frame t = " + std::to_string(f.param));
            }
        }
        const double slope = (L[2] - L[0]) / (2.0 * hp);
        const double curv = (L[2] - 2.0 * L[1] + L[0]) / (hp * hp);
        return std::pair{slope - D * curv, L[1] - D * slope + 0.5 * D * D * curv};
    };
    const double w1 = depth2 * depth2 / (depth2 * depth2 - depth * depth);
    const double w2 = 1.0 - w1;
    for (const auto& f : frames) {
        const auto [s1, i1] = stencil(f, depth);
        const auto [s2, i2] = stencil(f, depth2);
        const double s0 = w1 * s1 + w2 * s2;
        const double icpt = w1 * i1 + w2 * i2;
        p.c3.push_back(s0 / 6.0);
        p.kappa_fit.push_back(-0.5 * icpt);
        p.intercept.push_back(icpt);
        p.residual.push_back(std::abs(icpt + 2.0 * f.curvature));
    }
    return p;
}

/// lambda = -L * closed integral of c3 dl over the frames. lower_bound is supplied
/// by the caller (sharp bound from the modulus, 2 pi^2/3 for punctured domains, 0 otherwise).
inline LambdaReport lambda_numeric(const ExpansionProfile& p, double lower_bound = 0.0) {
    if (p.frames.empty()) throw ValidationError("lambda_numeric: empty profile");
    LambdaReport r;
    double L = 0.0, I = 0.0;
    for (std::size_t k = 0; k < p.frames.size(); ++k) {
        L += p.frames[k].arc_weight;
        I += p.c3[k] * p.frames[k].arc_weight;
    }
    r.boundary_length = L;
    r.c3_integral = I;
    r.lambda = -L * I;
    r.lower_bound = lower_bound;
    r.defect = r.lambda - lower_bound;
    return r;
}

inline nlohmann::json to_json(const ExpansionProfile& p) {
    nlohmann::json fr = nlohmann::json::array();
    for (std::size_t k = 0; k < p.frames.size(); ++k) {
        nlohmann::json e{{"s", p.frames[k].param},
                         {"kappa", p.frames[k].curvature},
                         {"c3", p.c3[k]},
                         {"kappa_fit", p.kappa_fit[k]},
                         {"residual", p.residual[k]}};
        if (!p.intercept.empty()) e["intercept"] = p.intercept[k];
        fr.push_back(e);
    }
    return {{"method", to_string(p.method)}, {"kappa_ok", p.kappa_ok}, {"frames", fr}};
}

}  // namespace lambda_lab
