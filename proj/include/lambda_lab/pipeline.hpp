#pragma once

// End-to-end numeric lambda: exhaustion solve, expansion extraction on the
// outer boundary, and the lower bound appropriate to the domain's topology.

#include <chrono>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "lambda_lab/domain.hpp"
#include "lambda_lab/expansion.hpp"
#include "lambda_lab/liouville.hpp"
#include "lambda_lab/models.hpp"

namespace lambda_lab {

/// Lengths in units of the domain scale.
struct PdeConfig {
    double h = 1.0 / 256.0;
    std::vector<double> schedule{0.08, 0.04, 0.02, 0.01};
    int n_frames = 64;
    std::optional<FitWindow> window;   // absolute lengths; default [6h, 0.08 scale]
    std::optional<double> flux_depth;  // absolute; default max(8h, 0.03 scale)
    LiouvilleOptions options;
};

struct PdeRun {
    double scale = 1.0;
    double h = 0.0;
    std::vector<double> schedule;  // absolute
    LiouvilleSolution solution;
    ScalarField v;
    ExpansionProfile fit;
    ExpansionProfile flux;
    LambdaReport report;  // from the normal fit
    LambdaReport flux_report;
    std::optional<double> modulus_beta;
    double solve_seconds = 0.0;
};

/// Sharp lower bound for lambda on the domain: (2 pi^2/3)[(pi/ln beta)^2 + 1] for
/// doubly-connected domains (beta known or computed), 2 pi^2/3 with punctures, else 0.
inline double lower_bound_for(const DomainSpec& spec, std::optional<double>* computed_beta = nullptr) {
    if (const auto* a = std::get_if<Annulus>(&spec)) return constants(a->beta).lambda_bound;
    if (const auto* m = std::get_if<MappedAnnulus>(&spec)) return m->beta > 0 ? constants(m->beta).lambda_bound : 0.0;
    if (const auto* p = std::get_if<Punctured>(&spec)) return p->punctures.empty() ? 0.0 : constants(0.0).lambda_bound;
    if (const auto* c = std::get_if<CurveBounded>(&spec)) {
        if (!c->inner) return 0.0;
        const double beta = modulus(spec).beta;
        if (computed_beta) *computed_beta = beta;
        return constants(beta).lambda_bound;
    }
    return 0.0;
}

inline PdeRun run_pde(const DomainSpec& spec, const PdeConfig& cfg = {}) {
    PdeRun run;
    run.scale = domain_scale(spec);
    run.h = cfg.h * run.scale;
    for (double e : cfg.schedule) run.schedule.push_back(e * run.scale);
    const auto t0 = std::chrono::steady_clock::now();
    run.solution = solve_liouville(spec, run.h, run.schedule, cfg.options);
    run.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run.v = to_v(run.solution.u);
    const auto fr = frames(run.v.grid().geom->domain().outer_curve(), cfg.n_frames);
    run.fit = extract_c3_fit(run.v, fr, cfg.window.value_or(default_window(run.v)));
    run.flux = extract_c3_flux(run.v, fr, cfg.flux_depth.value_or(default_flux_depth(run.v)));
    const double lb = lower_bound_for(spec, &run.modulus_beta);
    run.report = lambda_numeric(run.fit, lb);
    run.flux_report = lambda_numeric(run.flux, lb);
    return run;
}

}  // namespace lambda_lab
