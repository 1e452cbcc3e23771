#pragma once

// Command layer behind the lambda_lab executable: run configuration, the JSON
// report envelope, side files (binary field, CSV, SVG) and exit codes
// (0 success, 2 invalid input, 3 numerical failure).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lambda_lab/domain.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/mapcalc.hpp"
#include "lambda_lab/models.hpp"
#include "lambda_lab/pipeline.hpp"
#include "lambda_lab/verify.hpp"

namespace lambda_lab {

inline constexpr const char* tool_version = "0.1.0";

enum class Command { models, lambda_map, lambda_pde, modulus, bt_profile, verify };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::models:
            return "models";
        case Command::lambda_map:
            return "lambda-map";
        case Command::lambda_pde:
            return "lambda-pde";
        case Command::modulus:
            return "modulus";
        case Command::bt_profile:
            return "bt-profile";
        default:
            return "verify";
    }
}

/// Lengths (h, schedule) are in units of the domain scale.
struct RunConfig {
    Command command = Command::models;
    std::string domain_path;
    std::string map_path;
    std::optional<double> beta;
    std::optional<double> h;
    std::optional<std::vector<double>> schedule;
    std::string out;  // empty: stdout
    bool emit_svg = false;
    std::string svg_path;
    std::string csv_path;
    std::string field_path;
    int n = 64;  // bt-profile samples
    int frames = 64;
    bool renormalize_outer = false;
    std::string init = "log_distance";
    std::string suite = "paper";
    std::uint64_t seed = 7;
};

struct ReportEnvelope {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::string status = "ok";  // ok, validation_error, numerical_error
    std::optional<std::string> error;
    nlohmann::json payload = nlohmann::json::object();
    nlohmann::json convergence = nlohmann::json::object();
    nlohmann::json timings = nlohmann::json::object();
};

inline nlohmann::json to_json(const ReportEnvelope& e) {
    return {{"tool_version", tool_version},
            {"command", e.command},
            {"config", e.config},
            {"status", e.status},
            {"error", e.error ? nlohmann::json(*e.error) : nlohmann::json(nullptr)},
            {"payload", e.payload},
            {"convergence", e.convergence},
            {"timings", e.timings}};
}

// ---------------------------------------------------------------- parsing helpers

/// Accepts "0.00390625" or a fraction such as "1/256".
inline double parse_length(const std::string& s) {
    try {
        const auto slash = s.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(s, &used);
            if (used != s.size()) throw ValidationError("");
            return v;
        }
        const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        const double num = std::stod(a, &used);
        if (used != a.size()) throw ValidationError("");
        const double den = std::stod(b, &used);
        if (used != b.size() || den == 0.0) throw ValidationError("");
        return num / den;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse length '" + s + "'");
    }
}

/// Comma-separated lengths, e.g. "0.04,0.02,0.01".
inline std::vector<double> parse_schedule(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_length(item));
    }
    if (out.empty()) throw ValidationError("empty schedule '" + s + "'");
    return out;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// A Laurent series object, or {"mobius": {"C1": .., "C2": .., "C3": ..}}.
inline LaurentSeries map_from_json(const nlohmann::json& j, double beta) {
    if (j.contains("mobius")) {
        const auto& m = j.at("mobius");
        try {
            return mobius_series(complex_from_json(m.at("C1")), complex_from_json(m.at("C2")),
                                 complex_from_json(m.at("C3")), beta);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("mobius map JSON: ") + e.what());
        }
    }
    return laurent_from_json(j);
}

// ---------------------------------------------------------------- side files

/// int64 nx, int64 ny, double h, double origin_x, double origin_y, then nx*ny
/// doubles row by row (x fastest), NaN outside the domain.
inline void write_field(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    const Grid& g = f.grid();
    const std::int64_t nx = g.nx, ny = g.ny;
    const double hdr[3] = {g.h, g.origin.real(), g.origin.imag()};
    out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
    out.write(reinterpret_cast<const char*>(&ny), sizeof ny);
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.values().size() * sizeof(double)));
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
}

inline std::string frames_csv(const ExpansionProfile& p) {
    std::ostringstream os;
    os.precision(17);
    os << "s,kappa,c3,residual\n";
    for (std::size_t k = 0; k < p.frames.size(); ++k) {
        os << p.frames[k].param << ',' << p.frames[k].curvature << ',' << p.c3[k] << ',' << p.residual[k] << '\n';
    }
    return os.str();
}

inline std::string profile_csv(const BTProfile& p) {
    std::ostringstream os;
    os.precision(17);
    os << "t,A,B\n";
    for (std::size_t k = 0; k < p.ts.size(); ++k) os << p.ts[k] << ',' << p.A[k] << ',' << p.B[k] << '\n';
    return os.str();
}

/// Static line plot of A(t) and B(t).
inline std::string profile_svg(const BTProfile& p) {
    const double W = 640, H = 400, m = 50;
    double t0 = p.ts.front(), t1 = p.ts.back();
    if (t1 == t0) t1 = t0 + 1.0;
    double y0 = 0.0, y1 = 0.0;
    for (std::size_t k = 0; k < p.ts.size(); ++k) {
        y0 = std::min({y0, p.A[k], p.B[k]});
        y1 = std::max({y1, p.A[k], p.B[k]});
    }
    if (y1 == y0) y1 = y0 + 1.0;
    auto X = [&](double t) { return m + (W - 2 * m) * (t - t0) / (t1 - t0); };
    auto Y = [&](double y) { return H - m - (H - 2 * m) * (y - y0) / (y1 - y0); };
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << Y(0.0) << "\" x2=\"" << W - m << "\" y2=\"" << Y(0.0)
       << "\" stroke=\"#999\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"#999\"/>\n";
    auto line = [&](const std::vector<double>& ys, const char* colour) {
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < ys.size(); ++k) os << X(p.ts[k]) << ',' << Y(ys[k]) << ' ';
        os << "\"/>\n";
    };
    line(p.A, "#1f77b4");
    line(p.B, "#d62728");
    os << "<text x=\"" << W - m - 60 << "\" y=\"" << m - 20 << "\" fill=\"#1f77b4\">A(t)</text>\n";
    os << "<text x=\"" << W - m - 60 << "\" y=\"" << m - 5 << "\" fill=\"#d62728\">B(t)</text>\n";
    os << "<text x=\"" << m << "\" y=\"" << H - 15 << "\">t = " << t0 << "</text>\n";
    os << "<text x=\"" << W - m - 60 << "\" y=\"" << H - 15 << "\">t = " << t1 << "</text>\n";
    os << "<text x=\"5\" y=\"" << m - 5 << "\">" << y1 << "</text>\n";
    os << "<text x=\"5\" y=\"" << H - m << "\">" << y0 << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------- commands

namespace cli_detail {

inline double require_beta(const RunConfig& c) {
    if (!c.beta) throw ValidationError(std::string(to_string(c.command)) + " requires --beta");
    return *c.beta;
}

inline nlohmann::json config_echo(const RunConfig& c) {
    nlohmann::json j{{"command", to_string(c.command)}};
    if (!c.domain_path.empty()) j["domain"] = c.domain_path;
    if (!c.map_path.empty()) j["map"] = c.map_path;
    if (c.beta) j["beta"] = *c.beta;
    if (c.h) j["h"] = *c.h;
    if (c.schedule) j["schedule"] = *c.schedule;
    switch (c.command) {
        case Command::lambda_map:
            j["renormalize_outer"] = c.renormalize_outer;
            break;
        case Command::bt_profile:
            j["n"] = c.n;
            break;
        case Command::lambda_pde:
            j["frames"] = c.frames;
            j["init"] = c.init;
            break;
        case Command::verify:
            j["suite"] = c.suite;
            j["seed"] = c.seed;
            break;
        default:
            break;
    }
    return j;
}

inline void cmd_models(const RunConfig& c, ReportEnvelope& e) {
    const auto k = constants(require_beta(c));
    e.payload = {{"beta", k.beta}, {"c3", k.c3}, {"lambda_bound", k.lambda_bound}, {"kappa", k.kappa}};
}

inline AnnulusMapSpec load_map(const RunConfig& c, bool require_outer) {
    if (c.map_path.empty()) throw ValidationError(std::string(to_string(c.command)) + " requires --map");
    const double beta = require_beta(c);
    LaurentSeries f = map_from_json(read_json_file(c.map_path), beta);
    if (c.renormalize_outer) f = renormalize_outer(f, beta);
    return build_map(f, beta, require_outer);
}

inline void cmd_lambda_map(const RunConfig& c, ReportEnvelope& e) {
    const auto m = load_map(c, true);
    e.payload = to_json(lambda_via_map(m));
    e.payload["rigidity"] = to_json(classify_rigidity(m));
    e.payload["winding_fprime"] = m.winding_fprime;
    e.payload["g"] = to_json(m.g);
}

inline void cmd_bt_profile(const RunConfig& c, ReportEnvelope& e) {
    if (c.n < 2) throw ValidationError("bt-profile: --n must be at least 2");
    const auto m = load_map(c, false);
    const double lo = m.disk_mode() ? -2.0 : std::log(m.beta);
    std::vector<double> ts(static_cast<std::size_t>(c.n));
    for (int k = 0; k < c.n; ++k) ts[static_cast<std::size_t>(k)] = lo * (1.0 - (k + 0.5) / c.n);
    const auto p = profile(m, ts);
    double minB = std::numeric_limits<double>::infinity();
    for (double b : p.B) minB = std::min(minB, b);
    e.payload = {{"t", p.ts}, {"A", p.A}, {"B", p.B}, {"min_B", minB}, {"outer_normalized", m.outer_normalized}};
    if (!c.csv_path.empty()) write_text(c.csv_path, profile_csv(p));
    if (c.emit_svg) write_text(c.svg_path, profile_svg(p));
}

inline void cmd_lambda_pde(const RunConfig& c, ReportEnvelope& e) {
    if (c.domain_path.empty()) throw ValidationError("lambda-pde requires --domain");
    const DomainSpec spec = domain_from_json(read_json_file(c.domain_path));
    PdeConfig cfg;
    if (c.h) cfg.h = *c.h;
    if (c.schedule) cfg.schedule = *c.schedule;
    cfg.n_frames = c.frames;
    if (c.init == "barrier_max") {
        cfg.options.init = LiouvilleOptions::Init::barrier_max;
    } else if (c.init != "log_distance") {
        throw ValidationError("unknown --init '" + c.init + "' (log_distance, barrier_max)");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const PdeRun run = run_pde(spec, cfg);
    e.timings["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    e.timings["solve_seconds"] = run.solve_seconds;

    e.payload = {{"domain", variant_name(spec)},
                 {"scale", run.scale},
                 {"h", run.h},
                 {"schedule", run.schedule},
                 {"report", to_json(run.report)},
                 {"flux_report", to_json(run.flux_report)},
                 {"fit", to_json(run.fit)},
                 {"flux", to_json(run.flux)},
                 {"residual_v", residual_v(run.v)}};
    if (run.modulus_beta) e.payload["modulus_beta"] = *run.modulus_beta;

    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : run.solution.stages) {
        stages.push_back({{"m", s.m},
                          {"epsilon", s.epsilon_m},
                          {"puncture_radius", s.puncture_radius},
                          {"final", s.final_stage},
                          {"unknowns", s.unknowns},
                          {"newton_iterations", s.newton_iterations},
                          {"residual", s.residual_norm},
                          {"max_increase", s.m > 1 ? nlohmann::json(s.max_increase) : nlohmann::json(nullptr)},
                          {"monotone", s.monotone_ok}});
    }
    nlohmann::json newton = nlohmann::json::array();
    for (const auto& r : run.solution.log) {
        newton.push_back({{"stage", r.stage},
                          {"iteration", r.iteration},
                          {"residual", r.residual},
                          {"damping", r.damping},
                          {"max_update", r.max_update}});
    }
    nlohmann::json barriers = nlohmann::json::array();
    for (const auto& b : run.solution.barriers) {
        barriers.push_back({{"component", b.component},
                            {"samples", b.samples},
                            {"lower_radius", b.lower_radius},
                            {"shell_outer", b.shell_outer},
                            {"shell_inner", b.shell_inner},
                            {"min_lower_slack", b.min_lower_slack},
                            {"min_upper_slack", b.min_upper_slack},
                            {"ok", b.ok}});
    }
    e.convergence = {{"stages", stages}, {"newton", newton}, {"barriers", barriers}};
    if (!c.field_path.empty()) write_field(c.field_path, run.solution.u);
    if (!c.csv_path.empty()) write_text(c.csv_path, frames_csv(run.fit));
}

inline void cmd_modulus(const RunConfig& c, ReportEnvelope& e) {
    if (c.domain_path.empty()) throw ValidationError("modulus requires --domain");
    e.payload = to_json(modulus(domain_from_json(read_json_file(c.domain_path))));
}

/// Returns false when a check failed.
inline bool cmd_verify(const RunConfig& c, ReportEnvelope& e, std::ostream& log) {
    const auto s = verify(suite_from_string(c.suite), c.seed);
    e.payload = to_json(s);
    e.timings = timings_json(s);
    for (const auto& r : s.checks) {
        log << (r.passed ? "PASS " : "FAIL ") << (r.id ? "[" + std::to_string(r.id) + "] " : "[-] ") << r.name
            << ": measured " << r.measured << ", required " << r.required << '\n';
    }
    return s.passed();
}

}  // namespace cli_detail

/// Executes one command, writes the envelope (to c.out or `out`) and returns the exit code.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
    ReportEnvelope e;
    e.command = to_string(c.command);
    e.config = cli_detail::config_echo(c);
    int code = 0;
    try {
        switch (c.command) {
            case Command::models:
                cli_detail::cmd_models(c, e);
                break;
            case Command::lambda_map:
                cli_detail::cmd_lambda_map(c, e);
                break;
            case Command::bt_profile:
                cli_detail::cmd_bt_profile(c, e);
                break;
            case Command::lambda_pde:
                cli_detail::cmd_lambda_pde(c, e);
                break;
            case Command::modulus:
                cli_detail::cmd_modulus(c, e);
                break;
            case Command::verify:
                if (!cli_detail::cmd_verify(c, e, log)) {
                    e.status = "numerical_error";
                    e.error = "one or more checks failed";
                    code = 3;
                }
                break;
        }
    } catch (const ValidationError& ex) {
        e.status = "validation_error";
        e.error = ex.what();
        code = 2;
    } catch (const NumericalError& ex) {
        e.status = "numerical_error";
        e.error = ex.what();
        code = 3;
    } catch (const std::exception& ex) {
        e.status = "validation_error";
        e.error = ex.what();
        code = 2;
    }
    if (e.error) log << "error: " << *e.error << '\n';
    const std::string text = to_json(e).dump(2) + "\n";
    if (c.out.empty()) {
        out << text;
    } else {
        std::ofstream f(c.out);
        if (!f) {
            log << "error: cannot write '" << c.out << "'\n";
            out << text;
            return 2;
        }
        f << text;
    }
    return code;
}

}  // namespace lambda_lab
