#pragma once

// Boundary blow-up solver for Delta u = e^{2u} by exhaustion, and the
// Laplace solver behind the conformal modulus.
//
// Each stage writes u = -log s + w with s the product of boundary weights
// vanishing on the stage boundary, so the blow-up is carried by s and the
// unknown w stays bounded:  Delta w = e^{2w}/s^2 + Delta log s.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>
#include <nlohmann/json.hpp>

#include "lambda_lab/domain.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/field.hpp"
#include "lambda_lab/grid.hpp"
#include "lambda_lab/models.hpp"

namespace lambda_lab {

struct LiouvilleOptions {
    enum class Init { log_distance, barrier_max };
    Init init = Init::log_distance;
    double newton_tol = 1e-10;  // max_i |F_i| / |J_ii|
    int max_newton = 50;
    int max_halvings = 30;
    double monotone_tol = 1e-6;
    double delta_fraction = 0.2;      // regularizer width, x domain scale
    double puncture_radius0 = 0.1;    // stage m carves radius puncture_radius0 * 2^-m * scale
    bool final_stage = true;          // finish with a stage on the true boundary
    bool check_barriers = true;
    int barrier_samples = 100;
    std::uint64_t seed = 1;
};

struct NewtonRecord {
    int stage = 0;
    int iteration = 0;
    double residual = 0.0;         // max |F_i| / |J_ii| before the step
    double damping = 1.0;
    double max_update = 0.0;
};

struct ExhaustionState {
    int m = 0;
    double epsilon_m = 0.0;
    double puncture_radius = 0.0;
    bool final_stage = false;
    ScalarField field;  // u
    double residual_norm = 0.0;
    bool monotone_ok = true;
    double max_increase = 0.0;  // max over the common mask of u_m - u_{m-1}
    int newton_iterations = 0;
    std::size_t unknowns = 0;
};

struct BarrierReport {
    std::size_t component = 0;
    int samples = 0;
    double lower_radius = 0.0;
    double shell_outer = 0.0;
    double shell_inner = 0.0;
    double min_lower_slack = 0.0;  // min of u - lower barrier
    double min_upper_slack = 0.0;  // min of upper barrier - u
    bool ok = true;
};

struct LiouvilleSolution {
    std::vector<ExhaustionState> stages;
    ScalarField u;
    std::vector<NewtonRecord> log;
    std::vector<BarrierReport> barriers;
    double h = 0.0;
    double delta = 0.0;
};

namespace detail {

struct StageSystem {
    Eigen::SparseMatrix<double> L;
    Eigen::VectorXd rhs;
    Eigen::VectorXd log_s;
    Eigen::VectorXd lap_log_s;
    Eigen::VectorXd inv_s2;
    std::vector<int> diag_pos;
};

/// Inscribed radius of the disk around puncture c that avoids all other components.
inline double puncture_clearance(const DomainGeometry& dom, std::size_t c) {
    const cplx p = dom.components()[c].center();
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dom.components().size(); ++k) {
        if (k == c) continue;
        const auto& comp = dom.components()[k];
        if (comp.kind() == Component::Kind::point) {
            r = std::min(r, 0.5 * std::abs(comp.center() - p));
        } else {
            r = std::min(r, comp.nearest(p).distance);
        }
    }
    return r;
}

/// Exact solution on B_R(p) - {p}: the printed punctured-disk form is exact for
/// R = 1 and picks up + ln R under rescaling.
inline double punctured_exact(double R, cplx p, cplx x) { return u_punctured_disk(R, p, x) + std::log(R); }

inline Regularizer make_regularizer(const Grid& g, double delta) {
    std::vector<double> off;
    for (std::size_t c = 0; c < g.geom->n_components(); ++c) off.push_back(g.reg_offset(c));
    return Regularizer(g.geom->domain_ptr(), std::move(off), delta);
}

inline StageSystem assemble(const Grid& g, const Regularizer& reg, const std::vector<double>& clearance) {
    const std::size_t nu = g.n_unknowns();
    const std::size_t nc = g.geom->n_components();
    const auto& comps = g.geom->domain().components();
    StageSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nu));
    sys.log_s.resize(static_cast<Eigen::Index>(nu));
    sys.lap_log_s.resize(static_cast<Eigen::Index>(nu));
    sys.inv_s2.resize(static_cast<Eigen::Index>(nu));

    parallel_for(nu, [&](std::size_t k) {
        const std::size_t id = g.nodes[k];
        double ls = 0.0, lls = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            double a, b;
            reg.factor(g.geom->sd(c, id) - g.reg_offset(c), g.geom->lap(c, id), a, b);
            ls += a;
            lls += b;
        }
        const auto kk = static_cast<Eigen::Index>(k);
        sys.log_s[kk] = ls;
        sys.lap_log_s[kk] = lls;
        sys.inv_s2[kk] = std::exp(-2.0 * ls);
    });

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * nu);
    static const int di[4] = {-1, 1, 0, 0};
    static const int dj[4] = {0, 0, -1, 1};
    for (std::size_t k = 0; k < nu; ++k) {
        const std::size_t id = g.nodes[k];
        const int i = static_cast<int>(id % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(id / static_cast<std::size_t>(g.nx));
        double diag = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            const int lm = 2 * axis, lp = 2 * axis + 1;
            const double hm = g.cut[k][static_cast<std::size_t>(lm)] * g.h;
            const double hp = g.cut[k][static_cast<std::size_t>(lp)] * g.h;
            const double cm = 2.0 / (hm * (hm + hp));
            const double cp = 2.0 / (hp * (hm + hp));
            diag -= cm + cp;
            for (int l : {lm, lp}) {
                const double coef = l == lm ? cm : cp;
                const int comp = g.cut_comp[k][static_cast<std::size_t>(l)];
                if (comp < 0) {
                    const int nb = g.index[g.id(i + di[l], j + dj[l])];
                    trip.emplace_back(static_cast<int>(k), nb, coef);
                } else {
                    const cplx xb = g.cut_point[k][static_cast<std::size_t>(l)];
                    const auto c = static_cast<std::size_t>(comp);
                    double wb;
                    if (g.finite_data(c)) {
                        wb = punctured_exact(clearance[c], comps[c].center(), xb) + reg.log_s(xb);
                    } else {
                        wb = reg.log_s_except(xb, c);
                    }
                    sys.rhs[static_cast<Eigen::Index>(k)] += coef * wb;
                }
            }
        }
        trip.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
    }
    const auto n = static_cast<Eigen::Index>(nu);
    sys.L.resize(n, n);
    sys.L.setFromTriplets(trip.begin(), trip.end());
    sys.L.makeCompressed();
    sys.diag_pos.resize(nu);
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index p = sys.L.outerIndexPtr()[col]; p < sys.L.outerIndexPtr()[col + 1]; ++p) {
            if (sys.L.innerIndexPtr()[p] == col) sys.diag_pos[static_cast<std::size_t>(col)] = static_cast<int>(p);
        }
    }
    return sys;
}

inline Eigen::VectorXd residual(const StageSystem& s, const Eigen::VectorXd& w) {
    Eigen::VectorXd F = s.L * w + s.rhs;
    for (Eigen::Index k = 0; k < w.size(); ++k) F[k] -= std::exp(2.0 * w[k]) * s.inv_s2[k] + s.lap_log_s[k];
    return F;
}

inline Eigen::VectorXd jacobian_diagonal(const StageSystem& s, const Eigen::VectorXd& w) {
    Eigen::VectorXd d(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        d[k] = s.L.valuePtr()[s.diag_pos[static_cast<std::size_t>(k)]] - 2.0 * std::exp(2.0 * w[k]) * s.inv_s2[k];
    }
    return d;
}

inline double scaled_max(const Eigen::VectorXd& F, const Eigen::VectorXd& jd) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < F.size(); ++k) m = std::max(m, std::abs(F[k] / jd[k]));
    return m;
}

inline double scaled_norm(const Eigen::VectorXd& F, const Eigen::VectorXd& jd) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < F.size(); ++k) {
        const double r = F[k] / jd[k];
        m += r * r;
    }
    return std::sqrt(m);
}

/// Damped Newton on the stage system. Returns w and appends to the log.
inline Eigen::VectorXd newton(const StageSystem& sys, Eigen::VectorXd w, const LiouvilleOptions& opt, int stage,
                              std::vector<NewtonRecord>& log, int& iterations, double& final_residual) {
    Eigen::SparseMatrix<double> J = sys.L;
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(J);
    iterations = 0;
    for (int it = 0;; ++it) {
        const Eigen::VectorXd F = residual(sys, w);
        const Eigen::VectorXd jd = jacobian_diagonal(sys, w);
        const double res = scaled_max(F, jd);
        final_residual = res;
        if (!std::isfinite(res)) throw NumericalError("Newton: non-finite residual in stage " + std::to_string(stage));
        if (res < opt.newton_tol) {
            log.push_back({stage, it, res, 0.0, 0.0});
            iterations = it;
            return w;
        }
        if (it >= opt.max_newton) {
            throw NumericalError("Newton stagnation: scaled residual " + std::to_string(res) + " after " +
                                 std::to_string(it) + " iterations in stage " + std::to_string(stage));
        }
        std::copy(sys.L.valuePtr(), sys.L.valuePtr() + sys.L.nonZeros(), J.valuePtr());
        for (Eigen::Index k = 0; k < w.size(); ++k) J.valuePtr()[sys.diag_pos[static_cast<std::size_t>(k)]] = jd[k];
        lu.factorize(J);
        if (lu.info() != Eigen::Success) throw NumericalError("Newton: sparse LU factorization failed");
        const Eigen::VectorXd negF = -F;
        const Eigen::VectorXd dw = lu.solve(negF);
        const double base = scaled_norm(F, jd);
        double lam = 1.0;
        bool accepted = false;
        Eigen::VectorXd trial;
        for (int k = 0; k <= opt.max_halvings; ++k) {
            trial = w + lam * dw;
            const Eigen::VectorXd Ft = residual(sys, trial);
            const double n = scaled_norm(Ft, jd);
            if (std::isfinite(n) && n < base) {
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        log.push_back({stage, it, res, accepted ? lam : 0.0, accepted ? lam * dw.cwiseAbs().maxCoeff() : 0.0});
        if (!accepted) {
            // Rounding plateau just above the tolerance is accepted; anything else is a failure.
            if (res < 1e3 * opt.newton_tol) {
                iterations = it;
                return w;
            }
            throw NumericalError("Newton: line search failed after " + std::to_string(opt.max_halvings) +
                                 " halvings (scaled residual " + std::to_string(res) + ") in stage " +
                                 std::to_string(stage));
        }
        w = trial;
    }
}

}  // namespace detail

/// Solves one exhaustion stage on a prepared grid. clearance[c] is the radius of
/// the punctured disk whose exact solution supplies finite data on puncture c.
inline ScalarField solve_stage(std::shared_ptr<const Grid> grid, double delta, const LiouvilleOptions& opt,
                               const std::vector<double>& clearance, int stage, std::vector<NewtonRecord>& log,
                               int& iterations, double& final_residual) {
    const Grid& g = *grid;
    auto reg = std::make_shared<const Regularizer>(detail::make_regularizer(g, delta));
    const auto sys = detail::assemble(g, *reg, clearance);
    const std::size_t nu = g.n_unknowns();
    Eigen::VectorXd w(static_cast<Eigen::Index>(nu));
    for (std::size_t k = 0; k < nu; ++k) {
        const std::size_t id = g.nodes[k];
        double phi = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < g.geom->n_components(); ++c) {
            if (g.finite_data(c)) continue;
            phi = std::min(phi, g.geom->sd(c, id) - g.offset(c));
        }
        double u0 = -std::log(phi);
        if (opt.init == LiouvilleOptions::Init::barrier_max) u0 += std::log(2.0);
        w[static_cast<Eigen::Index>(k)] = u0 + sys.log_s[static_cast<Eigen::Index>(k)];
    }
    w = detail::newton(sys, std::move(w), opt, stage, log, iterations, final_residual);

    std::vector<double> uvals(g.mask.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> wvals(g.mask.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < nu; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        wvals[g.nodes[k]] = w[kk];
        uvals[g.nodes[k]] = w[kk] - sys.log_s[kk];
    }
    return ScalarField(grid, FieldKind::u, std::move(uvals), std::move(wvals), reg);
}

/// Lower and upper closed-form barriers around each puncture, checked at
/// pseudo-random samples of the annulus between the carved disk and the clearance.
inline std::vector<BarrierReport> check_puncture_barriers(const ScalarField& u, const std::vector<double>& clearance,
                                                          int samples, std::uint64_t seed) {
    std::vector<BarrierReport> out;
    const Grid& g = u.grid();
    const auto& dom = g.geom->domain();
    std::mt19937_64 rng(seed);
    for (std::size_t c = 0; c < dom.components().size(); ++c) {
        const auto& comp = dom.components()[c];
        if (comp.kind() != Component::Kind::point) continue;
        const cplx p = comp.center();
        BarrierReport r;
        r.component = c;
        double far = 0.0;
        for (const auto& q : dom.outer_curve().dense_samples()) far = std::max(far, std::abs(q - p));
        // The printed punctured-disk form is a subsolution on any disk of radius >= 1
        // containing the domain; the 5% margin keeps it strictly below the exact solution.
        r.lower_radius = 1.05 * std::max(1.0, far);
        r.shell_outer = clearance[c];
        r.shell_inner = 0.5 * g.stage.puncture_radius;
        const double rho_lo = g.stage.puncture_radius + 3.0 * g.h;
        const double rho_hi = 0.9 * r.shell_outer;
        if (!(rho_hi > rho_lo)) throw ValidationError("barrier check: no room between carved disk and clearance");
        std::uniform_real_distribution<double> U(0.0, 1.0);
        r.min_lower_slack = r.min_upper_slack = std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples; ++s) {
            const double rho = rho_lo + (rho_hi - rho_lo) * U(rng);
            const double th = 2.0 * std::numbers::pi * U(rng);
            const cplx x = p + std::polar(rho, th);
            const double val = u.sample(x);
            const double lower = u_punctured_disk(r.lower_radius, p, x);
            const double R = r.shell_outer;
            const double upper = u_shell(r.shell_inner / R, 0.0, (x - p) / R) - std::log(R);
            r.min_lower_slack = std::min(r.min_lower_slack, val - lower);
            r.min_upper_slack = std::min(r.min_upper_slack, upper - val);
        }
        r.samples = samples;
        r.ok = r.min_lower_slack >= -1e-8 && r.min_upper_slack >= -1e-8;
        out.push_back(r);
    }
    return out;
}

/// Exhaustion: stages on offset domains (schedule of absolute epsilons, strictly
/// decreasing) with blow-up on each stage boundary, followed by a final stage on
/// the true boundary. Checks monotone decrease between consecutive stages and,
/// for punctured domains, bracketing by the closed-form barriers.
inline LiouvilleSolution solve_liouville(const DomainSpec& spec, double h, const std::vector<double>& schedule,
                                         const LiouvilleOptions& opt = {}) {
    require_valid(spec);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw ValidationError("schedule entries must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1])) throw ValidationError("schedule must be strictly decreasing");
    }
    if (schedule.empty() && !opt.final_stage) throw ValidationError("empty schedule without final stage");

    auto geom = std::make_shared<const GridGeometry>(spec, h);
    const auto& dom = geom->domain();
    const double scale = dom.scale();
    double min_reach = std::numeric_limits<double>::infinity();
    std::vector<double> clearance(dom.components().size(), 0.0);
    for (std::size_t c = 0; c < dom.components().size(); ++c) {
        if (dom.components()[c].kind() == Component::Kind::point) {
            clearance[c] = detail::puncture_clearance(dom, c);
        } else {
            min_reach = std::min(min_reach, dom.components()[c].reach());
        }
    }
    LiouvilleSolution sol;
    sol.h = h;
    sol.delta = std::min(opt.delta_fraction * scale, 0.5 * min_reach);

    std::vector<StageBoundary> stages;
    for (std::size_t m = 0; m < schedule.size(); ++m) {
        stages.push_back({schedule[m], opt.puncture_radius0 * scale * std::ldexp(1.0, -static_cast<int>(m + 1)), false});
    }
    if (opt.final_stage) {
        const double rho = stages.empty() ? 0.5 * opt.puncture_radius0 * scale : stages.back().puncture_radius;
        stages.push_back({0.0, rho, true});
    }

    const ScalarField* prev = nullptr;
    for (std::size_t m = 0; m < stages.size(); ++m) {
        auto grid = std::make_shared<const Grid>(rasterize(geom, stages[m]));
        ExhaustionState st;
        st.m = static_cast<int>(m + 1);
        st.epsilon_m = stages[m].epsilon;
        st.puncture_radius = stages[m].puncture_radius;
        st.final_stage = stages[m].finite_punctures;
        st.unknowns = grid->n_unknowns();
        st.field = solve_stage(grid, sol.delta, opt, clearance, st.m, sol.log, st.newton_iterations, st.residual_norm);
        if (prev) {
            double worst = -std::numeric_limits<double>::infinity();
            const auto& a = prev->values();
            const auto& b = st.field.values();
            for (std::size_t id = 0; id < a.size(); ++id) {
                if (std::isnan(a[id]) || std::isnan(b[id])) continue;
                worst = std::max(worst, b[id] - a[id]);
            }
            st.max_increase = worst;
            st.monotone_ok = worst <= opt.monotone_tol;
        }
        sol.stages.push_back(std::move(st));
        if (!sol.stages.back().monotone_ok) {
            throw NumericalError("monotonicity violation: stage " + std::to_string(m + 1) + " exceeds stage " +
                                 std::to_string(m) + " by " + std::to_string(sol.stages.back().max_increase) +
                                 " (discretization too coarse)");
        }
        prev = &sol.stages.back().field;
    }
    sol.u = sol.stages.back().field;

    if (opt.check_barriers && opt.final_stage) {
        sol.barriers = check_puncture_barriers(sol.u, clearance, opt.barrier_samples, opt.seed);
        for (const auto& b : sol.barriers) {
            if (!b.ok) {
                throw NumericalError("bracketing violation near puncture component " + std::to_string(b.component) +
                                     ": lower slack " + std::to_string(b.min_lower_slack) + ", upper slack " +
                                     std::to_string(b.min_upper_slack));
            }
        }
    }
    return sol;
}

/// Pointwise e^{-u}; large u underflows to 0.
inline ScalarField to_v(const ScalarField& u) {
    std::vector<double> vals(u.values().size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double x = u.values()[i];
        vals[i] = std::isnan(x) ? x : std::exp(-x);
    }
    return ScalarField(u.grid_ptr(), FieldKind::v, std::move(vals), u.smooth(), u.regularizer());
}

/// max |v Delta_h v - |grad_h v|^2 + 1| over nodes whose 9x9 neighbourhood is active.
inline double residual_v(const ScalarField& v) {
    const Grid& g = v.grid();
    const auto& a = v.values();
    double worst = 0.0;
    const double h = g.h;
    for (int j = 4; j < g.ny - 4; ++j) {
        for (int i = 4; i < g.nx - 4; ++i) {
            bool ok = true;
            for (int b = -4; b <= 4 && ok; ++b)
                for (int c = -4; c <= 4 && ok; ++c)
                    if (std::isnan(a[g.id(i + c, j + b)])) ok = false;
            if (!ok) continue;
            const double v0 = a[g.id(i, j)];
            const double vxp = a[g.id(i + 1, j)], vxm = a[g.id(i - 1, j)];
            const double vyp = a[g.id(i, j + 1)], vym = a[g.id(i, j - 1)];
            const double lap = (vxp + vxm + vyp + vym - 4.0 * v0) / (h * h);
            const double gx = (vxp - vxm) / (2.0 * h), gy = (vyp - vym) / (2.0 * h);
            worst = std::max(worst, std::abs(v0 * lap - gx * gx - gy * gy + 1.0));
        }
    }
    return worst;
}

// ---------------------------------------------------------------- modulus

struct ModulusLevel {
    double h = 0.0;
    double flux = 0.0;
    double beta = 0.0;
};

struct ModulusResult {
    double beta = 0.0;
    double flux = 0.0;  // Richardson-extrapolated flux of the harmonic measure
    std::vector<ModulusLevel> grid_levels;
};

namespace detail {

/// Harmonic H with H = 0 on the outer and 1 on the inner component; returns the
/// discrete flux through the level set H = 1/2 (sum of H differences over grid
/// edges crossing it, which is what the 5-point stencil conserves).
inline double harmonic_flux(const DomainSpec& spec, double h) {
    auto geom = std::make_shared<const GridGeometry>(spec, h);
    const Grid g = rasterize(geom, StageBoundary{0.0, 0.0, false});
    const std::size_t nu = g.n_unknowns();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * nu);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nu));
    static const int di[4] = {-1, 1, 0, 0};
    static const int dj[4] = {0, 0, -1, 1};
    for (std::size_t k = 0; k < nu; ++k) {
        const std::size_t id = g.nodes[k];
        const int i = static_cast<int>(id % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(id / static_cast<std::size_t>(g.nx));
        double diag = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            const int lm = 2 * axis, lp = lm + 1;
            const double hm = g.cut[k][static_cast<std::size_t>(lm)] * h;
            const double hp = g.cut[k][static_cast<std::size_t>(lp)] * h;
            const double cm = 2.0 / (hm * (hm + hp)), cp = 2.0 / (hp * (hm + hp));
            diag -= cm + cp;
            for (int l : {lm, lp}) {
                const double coef = l == lm ? cm : cp;
                const int comp = g.cut_comp[k][static_cast<std::size_t>(l)];
                if (comp < 0) {
                    trip.emplace_back(static_cast<int>(k), g.index[g.id(i + di[l], j + dj[l])], coef);
                } else if (comp == 1) {
                    rhs[static_cast<Eigen::Index>(k)] -= coef;
                }
            }
        }
        trip.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(nu));
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu(A);
    if (lu.info() != Eigen::Success) throw NumericalError("modulus: sparse LU factorization failed");
    const Eigen::VectorXd H = lu.solve(rhs);

    double flux = 0.0;
    for (std::size_t k = 0; k < nu; ++k) {
        const std::size_t id = g.nodes[k];
        const int i = static_cast<int>(id % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(id / static_cast<std::size_t>(g.nx));
        const double a = H[static_cast<Eigen::Index>(k)];
        for (int l : {1, 3}) {
            const int ii = i + di[l], jj = j + dj[l];
            if (ii >= g.nx || jj >= g.ny) continue;
            const int nb = g.index[g.id(ii, jj)];
            if (nb < 0) continue;
            const double b = H[nb];
            if ((a < 0.5) != (b < 0.5)) flux += std::abs(b - a);
        }
    }
    return flux;
}

}  // namespace detail

/// Conformal modulus beta = exp(-2 pi / flux) of a doubly-connected domain, from
/// two grids (h = scale/128 and scale/256) and Richardson extrapolation of the flux.
inline ModulusResult modulus(const DomainSpec& spec, int base_cells = 128) {
    require_valid(spec);
    DomainGeometry dom(spec);
    if (!dom.doubly_connected()) throw ValidationError("modulus requires a doubly-connected domain");
    const double scale = dom.scale();
    ModulusResult r;
    for (int level = 0; level < 2; ++level) {
        const double h = scale / (base_cells << level);
        const double f = detail::harmonic_flux(spec, h);
        r.grid_levels.push_back({h, f, std::exp(-2.0 * std::numbers::pi / f)});
    }
    const double fc = r.grid_levels[0].flux, ff = r.grid_levels[1].flux;
    r.flux = (4.0 * ff - fc) / 3.0;
    r.beta = std::exp(-2.0 * std::numbers::pi / r.flux);
    if (std::abs(r.grid_levels[0].beta - r.grid_levels[1].beta) > 1e-3) {
        throw NumericalError("modulus: flux not grid-converged (beta " + std::to_string(r.grid_levels[0].beta) +
                             " vs " + std::to_string(r.grid_levels[1].beta) + ")");
    }
    return r;
}

inline nlohmann::json to_json(const ModulusResult& m) {
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& l : m.grid_levels) lv.push_back({{"h", l.h}, {"flux", l.flux}, {"beta", l.beta}});
    return {{"beta", m.beta}, {"flux", m.flux}, {"grid_levels", lv}};
}

}  // namespace lambda_lab
