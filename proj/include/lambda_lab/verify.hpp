#pragma once

// Acceptance harness: the nine numbered checks (closed-form values, randomized
// map sweeps, PDE cross-validation, modulus, exhaustion properties, estimator
// coherence) plus a map-level similarity-invariance property, grouped in suites.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lambda_lab/domain.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/mapcalc.hpp"
#include "lambda_lab/models.hpp"
#include "lambda_lab/pipeline.hpp"
#include "lambda_lab/reference_values.hpp"

namespace lambda_lab {

enum class Suite { paper, properties, cross, all };

inline const char* to_string(Suite s) {
    switch (s) {
        case Suite::paper:
            return "paper";
        case Suite::properties:
            return "properties";
        case Suite::cross:
            return "cross";
        default:
            return "all";
    }
}

inline Suite suite_from_string(const std::string& s) {
    if (s == "paper") return Suite::paper;
    if (s == "properties") return Suite::properties;
    if (s == "cross") return Suite::cross;
    if (s == "all") return Suite::all;
    throw ValidationError("unknown suite '" + s + "' (paper, properties, cross, all)");
}

struct CheckResult {
    int id = 0;  // acceptance criterion number; 0 for auxiliary properties
    std::string name;
    bool passed = false;
    double measured = 0.0;  // worst observed value of the governing quantity
    double required = 0.0;  // its tolerance
    std::string detail;
    double seconds = 0.0;
    std::map<std::string, double> timings;  // per-part wall times; kept out of detail
};

struct VerifySummary {
    Suite suite = Suite::all;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

namespace verify_detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

inline cplx random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    return std::polar(1.0, U(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline LaurentSeries identity_map() { return LaurentSeries::monomial(1, 1.0, 0.0, 1.0); }

/// a (z + c z^k) + b style maps share this: scale an analytic series by a, shift by b.
inline LaurentSeries affine_compose(const LaurentSeries& s, cplx a, cplx b) {
    std::vector<cplx> c = s.coeffs();
    for (auto& x : c) x *= a;
    auto out = LaurentSeries(s.kmin(), std::move(c), s.r_inner(), s.r_outer());
    if (out.kmin() <= 0 && out.kmax() >= 0) {
        std::vector<cplx> cc = out.coeffs();
        cc[static_cast<std::size_t>(-out.kmin())] += b;
        return LaurentSeries(out.kmin(), std::move(cc), out.r_inner(), out.r_outer());
    }
    // extend the band to hold the constant term
    const int kmin = std::min(out.kmin(), 0), kmax = std::max(out.kmax(), 0);
    std::vector<cplx> cc(static_cast<std::size_t>(kmax - kmin + 1), 0.0);
    for (int k = out.kmin(); k <= out.kmax(); ++k) cc[static_cast<std::size_t>(k - kmin)] = out.coeff(k);
    cc[static_cast<std::size_t>(-kmin)] += b;
    return LaurentSeries(kmin, std::move(cc), out.r_inner(), out.r_outer());
}

/// Random outer-normalized Mobius map C1 + C2 / (z + C3) with |C3| in (1.05, 10).
inline LaurentSeries random_mobius(std::mt19937_64& rng, double beta) {
    double r3 = uniform(rng, 1.05, 10.0);
    if (r3 == 1.05) r3 = std::nextafter(1.05, 10.0);
    const cplx C3 = r3 * random_unit(rng);
    const cplx C2 = uniform(rng, 0.1, 10.0) * random_unit(rng);
    const cplx C1(uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0));
    return mobius_series(C1, C2, C3, beta);
}

enum class Family { affine, mobius, taylor_perturbed, laurent_perturbed };

struct RandomMap {
    Family family;
    LaurentSeries f;
    double beta;
};

/// Maps for the rigidity sweep; only the affine family is a similarity.
inline RandomMap random_map(std::mt19937_64& rng, Family fam) {
    const double beta = uniform(rng, 0.2, 0.8);
    const cplx a = uniform(rng, 0.2, 5.0) * random_unit(rng);
    const cplx b(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    switch (fam) {
        case Family::affine:
            return {fam, LaurentSeries(0, {b, a}, 0.0, 1.0), beta};
        case Family::mobius:
            return {fam, random_mobius(rng, beta), beta};
        case Family::taylor_perturbed: {
            // z + c z^k with k|c| < 1 has Re f' > 0 on the closed disk, hence univalent
            const int k = 2 + static_cast<int>(rng() % 3);
            const cplx c = uniform(rng, 0.01, 0.9 / k) * random_unit(rng);
            std::vector<cplx> co(static_cast<std::size_t>(k + 1), 0.0);
            co[1] = 1.0;
            co[static_cast<std::size_t>(k)] = c;
            return {fam, affine_compose(LaurentSeries(0, std::move(co), 0.0, 1.0), a, b), beta};
        }
        default: {
            // |c| < beta^(k+1) / (2k) keeps z + c z^-k univalent on |z| >= beta
            const int k = 1 + static_cast<int>(rng() % 2);
            const cplx c = uniform(rng, 0.01, 0.5) * std::pow(beta, k + 1) / k * random_unit(rng);
            std::vector<cplx> co(static_cast<std::size_t>(k + 2), 0.0);
            co[0] = c;
            co[static_cast<std::size_t>(k + 1)] = 1.0;
            return {fam, affine_compose(LaurentSeries(-k, std::move(co), beta, 1.0), a, b), beta};
        }
    }
}

/// Univalent Taylor map a (z + sum_{k>=2} c_k z^k) + b with sum k|c_k| <= 0.9.
inline LaurentSeries random_taylor(std::mt19937_64& rng) {
    const int K = 2 + static_cast<int>(rng() % 7);
    std::vector<double> w(static_cast<std::size_t>(K - 1));
    double total = 0.0;
    for (auto& x : w) total += (x = uniform(rng, 0.0, 1.0));
    const double budget = uniform(rng, 0.05, 0.9);
    std::vector<cplx> co(static_cast<std::size_t>(K + 1), 0.0);
    co[1] = 1.0;
    for (int k = 2; k <= K; ++k) {
        co[static_cast<std::size_t>(k)] = budget * w[static_cast<std::size_t>(k - 2)] / total / k * random_unit(rng);
    }
    const cplx a = uniform(rng, 0.2, 5.0) * random_unit(rng);
    const cplx b(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    return affine_compose(LaurentSeries(0, std::move(co), 0.0, 1.0), a, b);
}

}  // namespace verify_detail

// ---------------------------------------------------------------- fixtures

/// The domains the PDE checks run on.
struct PdeFixtures {
    static DomainSpec annulus() { return Annulus{0.5}; }
    static DomainSpec disk() { return UnitDisk{}; }
    static LaurentSeries mobius_map() { return mobius_series(0.0, -1.0, 2.0, 0.5); }
    static DomainSpec mobius_image() { return MappedAnnulus{mobius_map(), 0.5}; }
    /// Image of the 0.5-annulus under z + 0.1/z, given by its two boundary curves.
    static LaurentSeries joukowski_map() { return LaurentSeries(-1, {0.1, 0.0, 1.0}, 0.5, 1.0); }
    static DomainSpec curve_bounded() {
        const auto f = joukowski_map();
        return CurveBounded{BoundaryCurve::from_series(f, 1.0), BoundaryCurve::from_series(f, 0.5)};
    }
    static DomainSpec punctured_disk() { return Punctured{BoundaryCurve::circle(0.0, 1.0), {cplx(0.0, 0.0)}}; }

    static PdeConfig config() {
        PdeConfig c;
        c.h = 1.0 / 256.0;
        c.schedule = {0.04, 0.02, 0.01};
        return c;
    }
};

/// Lazily computed PDE runs shared by the cross-validation checks. A failed run
/// keeps its error message so that every dependent check can report it.
class PdeCache {
public:
    struct Entry {
        std::optional<PdeRun> run;
        std::string error;
        double seconds = 0.0;
    };

    const Entry& get(const std::string& name) {
        auto it = runs_.find(name);
        if (it != runs_.end()) return it->second;
        Entry e;
        const auto t0 = verify_detail::Clock::now();
        try {
            e.run = run_pde(domain(name), PdeFixtures::config());
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        e.seconds = verify_detail::since(t0);
        return runs_.emplace(name, std::move(e)).first->second;
    }

    static DomainSpec domain(const std::string& name) {
        if (name == "annulus") return PdeFixtures::annulus();
        if (name == "disk") return PdeFixtures::disk();
        if (name == "mobius") return PdeFixtures::mobius_image();
        if (name == "curve_bounded") return PdeFixtures::curve_bounded();
        throw ValidationError("unknown fixture " + name);
    }

private:
    std::map<std::string, Entry> runs_;
};

// ---------------------------------------------------------------- checks

inline CheckResult check_sharp_values() {
    using namespace verify_detail;
    CheckResult r{1, "sharp value on the identity map", true, 0.0, 1e-10, "", 0.0};
    const auto t0 = Clock::now();
    const std::pair<double, double> cases[] = {{0.5, reference::bound_half},
                                               {std::exp(-std::numbers::pi), reference::bound_exp_minus_pi},
                                               {0.9, reference::bound_0_9}};
    double slowest = 0.0;
    for (const auto& [beta, ref] : cases) {
        const auto t1 = Clock::now();
        const auto rep = lambda_via_map(build_map(identity_map(), beta));
        const double dt = since(t1);
        slowest = std::max(slowest, dt);
        const double e = rel_err(rep.lambda, ref);
        r.measured = std::max(r.measured, e);
        r.timings["beta=" + fmt(beta)] = dt;
        r.detail += "beta=" + fmt(beta) + " lambda=" + fmt(rep.lambda) + " rel_err=" + fmt(e) + "; ";
        if (!(e <= r.required)) r.passed = false;
    }
    if (slowest >= 1.0) {
        r.passed = false;
        r.detail += "runtime limit 1 s exceeded; ";
    }
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_strict_inequality(std::uint64_t seed) {
    using namespace verify_detail;
    CheckResult r{2, "strict inequality off the model", true, 0.0, 1e-6, "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    double min_defect = std::numeric_limits<double>::infinity();
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        const double beta = uniform(rng, 0.1, 0.9);
        try {
            const auto rep = lambda_via_map(build_map(random_mobius(rng, beta), beta));
            min_defect = std::min(min_defect, rep.defect);
            if (!(rep.defect > 0.0)) ++failures;
        } catch (const std::exception& e) {
            ++failures;
            r.detail += std::string("map ") + std::to_string(i) + ": " + e.what() + "; ";
        }
    }
    const auto fx = lambda_via_map(build_map(PdeFixtures::mobius_map(), 0.5));
    r.measured = std::abs(fx.lambda - reference::mobius_fixture_lambda);
    const double dt = since(t0);
    r.passed = failures == 0 && r.measured <= r.required && dt < 5.0;
    r.detail += "50 random maps, min defect " + fmt(min_defect) + ", failures " + std::to_string(failures) +
                "; fixture lambda " + fmt(fx.lambda) + " vs " + fmt(reference::mobius_fixture_lambda) +
                (dt < 5.0 ? "" : "; runtime limit 5 s exceeded");
    r.seconds = dt;
    return r;
}

inline CheckResult check_rigidity(std::uint64_t seed) {
    using namespace verify_detail;
    CheckResult r{3, "rigidity of the equality case", true, 0.0, -1e-12, "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    int wrong = 0, similarities = 0, errors = 0;
    double min_B = std::numeric_limits<double>::infinity();
    int b_samples = 0;
    const Family fams[] = {Family::affine, Family::mobius, Family::taylor_perturbed, Family::laurent_perturbed};
    for (int i = 0; i < 500; ++i) {
        const auto rm = random_map(rng, fams[i % 4]);
        try {
            const auto m = build_map(rm.f, rm.beta);
            const auto rep = lambda_via_map(m, 1e-8);
            const bool sim = rm.family == Family::affine;
            similarities += sim;
            if (*rep.equality != sim) {
                ++wrong;
                r.detail += "map " + std::to_string(i) + " equality=" + (*rep.equality ? "true" : "false") + "; ";
            }
            if (i < 100) {
                std::vector<double> ts(100);
                for (auto& t : ts) {
                    t = uniform(rng, std::log(rm.beta), 0.0);
                    if (t == std::log(rm.beta)) t = 0.5 * std::log(rm.beta);
                }
                const auto p = profile(m, ts);
                for (double b : p.B) min_B = std::min(min_B, b);
                b_samples += static_cast<int>(ts.size());
            }
        } catch (const std::exception& e) {
            ++errors;
            r.detail += "map " + std::to_string(i) + ": " + e.what() + "; ";
        }
    }
    r.measured = min_B;
    r.passed = wrong == 0 && errors == 0 && b_samples == 10000 && min_B >= r.required;
    r.detail += "500 maps (" + std::to_string(similarities) + " similarities), misclassified " + std::to_string(wrong) +
                ", errors " + std::to_string(errors) + "; min B over " + std::to_string(b_samples) +
                " (map, t) pairs " + fmt(min_B);
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_disk_recovery(std::uint64_t seed) {
    using namespace verify_detail;
    CheckResult r{4, "disk recovery", true, 0.0, -1e-8, "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed ^ 0xd15c);
    double min_lambda = std::numeric_limits<double>::infinity();
    int errors = 0;
    for (int i = 0; i < 200; ++i) {
        try {
            const auto rep = lambda_via_map(build_map(random_taylor(rng), 0.0));
            min_lambda = std::min(min_lambda, rep.lambda);
        } catch (const std::exception& e) {
            ++errors;
            r.detail += "map " + std::to_string(i) + ": " + e.what() + "; ";
        }
    }
    double max_affine = 0.0;
    for (int i = 0; i < 20; ++i) {
        const cplx a = uniform(rng, 0.2, 5.0) * random_unit(rng);
        const cplx b(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
        const auto rep = lambda_via_map(build_map(LaurentSeries(0, {b, a}, 0.0, 1.0), 0.0));
        max_affine = std::max(max_affine, std::abs(rep.lambda));
    }
    r.measured = min_lambda;
    r.passed = errors == 0 && min_lambda >= r.required && max_affine <= 1e-10;
    r.detail += "min lambda over 200 Taylor maps " + fmt(min_lambda) + "; max |lambda| over 20 affine maps " +
                fmt(max_affine) + " (limit 1e-10)";
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_gap_constant() {
    using namespace verify_detail;
    CheckResult r{5, "gap constant as beta -> 0", true, 0.0, 1e-12, "", 0.0};
    const auto t0 = Clock::now();
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (int k = 1; k <= 6; ++k) {
        const double b = constants(std::pow(10.0, -k)).lambda_bound;
        const double e = rel_err(b, reference::bound_decades[k - 1]);
        r.measured = std::max(r.measured, e);
        if (!(b < prev && b > reference::bound_limit)) decreasing = false;
        prev = b;
        r.detail += "1e-" + std::to_string(k) + ": " + fmt(b) + "; ";
    }
    const double lim = rel_err(constants(0.0).lambda_bound, reference::bound_limit);
    r.measured = std::max(r.measured, lim);
    r.passed = decreasing && r.measured <= r.required;
    r.detail += std::string("decreasing towards 2 pi^2/3 = ") + fmt(reference::bound_limit) + ": " +
                (decreasing ? "yes" : "no");
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_pde_cross_validation(PdeCache& cache) {
    using namespace verify_detail;
    CheckResult r{6, "PDE cross-validation", true, 0.0, 0.05, "", 0.0};
    const auto t0 = Clock::now();
    auto fail = [&](const std::string& name, const PdeCache::Entry& e) {
        r.passed = false;
        r.detail += name + " failed: " + e.error + "; ";
    };
    auto timed = [&](const std::string& name, const PdeCache::Entry& e) {
        r.timings[name] = e.seconds;
        if (e.seconds >= 180.0) {
            r.passed = false;
            r.detail += name + " exceeded the 180 s runtime limit; ";
        }
    };
    {
        const auto& e = cache.get("annulus");
        if (!e.run) {
            fail("annulus", e);
        } else {
            double worst = 0.0;
            for (double c : e.run->fit.c3) worst = std::max(worst, rel_err(c, reference::c3_half));
            const double le = rel_err(e.run->report.lambda, reference::bound_half);
            r.measured = std::max({r.measured, worst, le});
            if (worst > 0.05 || le > 0.05) r.passed = false;
            r.detail += "annulus lambda " + fmt(e.run->report.lambda) + " (rel " + fmt(le) + "), worst frame c3 rel " +
                        fmt(worst) + "; ";
            timed("annulus", e);
        }
    }
    {
        const auto& e = cache.get("disk");
        if (!e.run) {
            fail("disk", e);
        } else {
            const double l = e.run->report.lambda;
            if (!(std::abs(l) < 0.3)) r.passed = false;
            r.detail += "disk lambda " + fmt(l) + " (limit |lambda| < 0.3); ";
            timed("disk", e);
        }
    }
    {
        const auto& e = cache.get("mobius");
        if (!e.run) {
            fail("mobius", e);
        } else {
            const double analytic = lambda_via_map(build_map(PdeFixtures::mobius_map(), 0.5)).lambda;
            const double le = rel_err(e.run->report.lambda, analytic);
            r.measured = std::max(r.measured, le);
            if (le > 0.05) r.passed = false;
            r.detail += "mobius lambda " + fmt(e.run->report.lambda) + " vs analytic " + fmt(analytic) + " (rel " +
                        fmt(le) + "); ";
            timed("mobius", e);
        }
    }
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_modulus() {
    using namespace verify_detail;
    CheckResult r{7, "modulus recovery", true, 0.0, 1e-3, "", 0.0};
    const auto t0 = Clock::now();
    const std::pair<const char*, DomainSpec> cases[] = {{"annulus", PdeFixtures::annulus()},
                                                        {"mobius", PdeFixtures::mobius_image()}};
    for (const auto& [name, spec] : cases) {
        const auto t1 = Clock::now();
        try {
            const auto m = modulus(spec);
            const double dt = since(t1);
            const double e = std::abs(m.beta - 0.5);
            r.measured = std::max(r.measured, e);
            r.timings[name] = dt;
            if (e > r.required) r.passed = false;
            if (dt >= 60.0) {
                r.passed = false;
                r.detail += std::string(name) + " exceeded the 60 s runtime limit; ";
            }
            r.detail += std::string(name) + " beta " + fmt(m.beta) + "; ";
        } catch (const std::exception& ex) {
            r.passed = false;
            r.detail += std::string(name) + " failed: " + ex.what() + "; ";
        }
    }
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_exhaustion_properties(PdeCache& cache, std::uint64_t seed) {
    using namespace verify_detail;
    CheckResult r{8, "exhaustion scheme properties", true, 0.0, 1e-6, "", 0.0};
    const auto t0 = Clock::now();
    double worst_increase = -std::numeric_limits<double>::infinity();
    for (const char* name : {"annulus", "disk", "mobius", "curve_bounded"}) {
        const auto& e = cache.get(name);
        if (!e.run) {
            r.passed = false;
            r.detail += std::string(name) + " failed: " + e.error + "; ";
            continue;
        }
        for (std::size_t s = 1; s < e.run->solution.stages.size(); ++s) {
            worst_increase = std::max(worst_increase, e.run->solution.stages[s].max_increase);
        }
    }
    const auto cfg = PdeFixtures::config();
    std::vector<double> sched;
    for (double x : cfg.schedule) sched.push_back(x);  // scale 1
    try {
        LiouvilleOptions a = cfg.options, b = cfg.options;
        a.seed = b.seed = seed;
        a.barrier_samples = b.barrier_samples = 100;
        a.init = LiouvilleOptions::Init::log_distance;
        b.init = LiouvilleOptions::Init::barrier_max;
        const auto sa = solve_liouville(PdeFixtures::punctured_disk(), cfg.h, sched, a);
        const auto sb = solve_liouville(PdeFixtures::punctured_disk(), cfg.h, sched, b);
        for (std::size_t s = 1; s < sa.stages.size(); ++s) {
            worst_increase = std::max({worst_increase, sa.stages[s].max_increase, sb.stages[s].max_increase});
        }
        double diff = 0.0;
        const auto& ua = sa.u.values();
        const auto& ub = sb.u.values();
        for (std::size_t i = 0; i < ua.size(); ++i) {
            if (!std::isnan(ua[i]) && !std::isnan(ub[i])) diff = std::max(diff, std::abs(ua[i] - ub[i]));
        }
        const auto& br = sa.barriers.at(0);
        const bool bracketed = br.ok && br.samples == 100;
        if (!bracketed || diff > 1e-6) r.passed = false;
        r.detail += "punctured disk: barrier slack lower " + fmt(br.min_lower_slack) + ", upper " +
                    fmt(br.min_upper_slack) + " at " + std::to_string(br.samples) + " samples; init difference " +
                    fmt(diff) + " (limit 1e-6); ";
    } catch (const std::exception& ex) {
        r.passed = false;
        r.detail += std::string("punctured disk failed: ") + ex.what() + "; ";
    }
    r.measured = worst_increase;
    if (!(worst_increase <= r.required)) r.passed = false;
    r.detail += "largest stage-to-stage increase " + fmt(worst_increase);
    r.seconds = since(t0);
    return r;
}

inline CheckResult check_estimator_coherence(PdeCache& cache) {
    using namespace verify_detail;
    CheckResult r{9, "estimator coherence", true, 0.0, 1.0, "", 0.0};
    const auto t0 = Clock::now();
    for (const char* name : {"annulus", "disk", "mobius", "curve_bounded"}) {
        const auto& e = cache.get(name);
        if (!e.run) {
            r.passed = false;
            r.detail += std::string(name) + " failed: " + e.error + "; ";
            continue;
        }
        // disagreement in units of the allowed band max(5% |c3|, 0.05)
        double worst = 0.0;
        for (std::size_t k = 0; k < e.run->fit.c3.size(); ++k) {
            const double a = e.run->fit.c3[k], b = e.run->flux.c3[k];
            worst = std::max(worst, std::abs(a - b) / std::max(0.05 * std::abs(a), 0.05));
        }
        r.measured = std::max(r.measured, worst);
        r.detail += std::string(name) + " agreement ratio " + fmt(worst) + "; ";
        if (std::string(name) == "annulus") {
            double wi = 0.0;
            for (double i : e.run->flux.intercept) wi = std::max(wi, std::abs(i + 2.0) / 2.0);
            if (wi > 0.05) r.passed = false;
            r.detail += "annulus intercept worst rel deviation from -2: " + fmt(wi) + "; ";
        }
    }
    if (r.measured > r.required) r.passed = false;
    r.seconds = since(t0);
    return r;
}

/// lambda_via_map is unchanged under f -> a f + b.
inline CheckResult check_similarity_invariance(std::uint64_t seed) {
    using namespace verify_detail;
    CheckResult r{0, "similarity invariance of lambda", true, 0.0, 1e-10, "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed ^ 0x51a1);
    const Family fams[] = {Family::mobius, Family::taylor_perturbed, Family::laurent_perturbed};
    for (int i = 0; i < 30; ++i) {
        const auto rm = random_map(rng, fams[i % 3]);
        const cplx a = uniform(rng, 0.1, 10.0) * random_unit(rng);
        const cplx b(uniform(rng, -10.0, 10.0), uniform(rng, -10.0, 10.0));
        try {
            const double l0 = lambda_via_map(build_map(rm.f, rm.beta)).lambda;
            const double l1 = lambda_via_map(build_map(affine_compose(rm.f, a, b), rm.beta)).lambda;
            r.measured = std::max(r.measured, rel_err(l1, l0));
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail += std::string("map ") + std::to_string(i) + ": " + e.what() + "; ";
        }
    }
    if (r.measured > r.required) r.passed = false;
    r.detail += "30 maps, worst relative drift " + fmt(r.measured);
    r.seconds = since(t0);
    return r;
}

/// Runs the checks of a suite in order. paper: closed-form values (1, 2, 4, 5);
/// properties: randomized invariants (3, 8, similarity); cross: analytic vs PDE (6, 7, 9).
inline VerifySummary verify(Suite suite, std::uint64_t seed) {
    VerifySummary s;
    s.suite = suite;
    s.seed = seed;
    PdeCache cache;
    const bool all = suite == Suite::all;
    auto want = [&](Suite g) { return all || suite == g; };
    if (want(Suite::paper)) s.checks.push_back(check_sharp_values());
    if (want(Suite::paper)) s.checks.push_back(check_strict_inequality(seed));
    if (want(Suite::properties)) s.checks.push_back(check_rigidity(seed));
    if (want(Suite::paper)) s.checks.push_back(check_disk_recovery(seed));
    if (want(Suite::paper)) s.checks.push_back(check_gap_constant());
    if (want(Suite::cross)) s.checks.push_back(check_pde_cross_validation(cache));
    if (want(Suite::cross)) s.checks.push_back(check_modulus());
    if (want(Suite::properties)) s.checks.push_back(check_exhaustion_properties(cache, seed));
    if (want(Suite::cross)) s.checks.push_back(check_estimator_coherence(cache));
    if (want(Suite::properties)) s.checks.push_back(check_similarity_invariance(seed));
    return s;
}

/// Deterministic part of the summary (no timings).
inline nlohmann::json to_json(const VerifySummary& s) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : s.checks) {
        checks.push_back({{"id", c.id},
                          {"name", c.name},
                          {"passed", c.passed},
                          {"measured", c.measured},
                          {"required", c.required},
                          {"detail", c.detail}});
    }
    return {{"suite", to_string(s.suite)}, {"seed", s.seed}, {"passed", s.passed()}, {"checks", checks}};
}

inline nlohmann::json timings_json(const VerifySummary& s) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& c : s.checks) {
        nlohmann::json e{{"total", c.seconds}};
        for (const auto& [k, v] : c.timings) e[k] = v;
        t[c.name] = e;
    }
    return t;
}

}  // namespace lambda_lab
