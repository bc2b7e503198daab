#include "cvswap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "cvswap/analytics.hpp"
#include "cvswap/config.hpp"
#include "cvswap/error.hpp"
#include "cvswap/montecarlo.hpp"
#include "cvswap/swap.hpp"

namespace cvswap::cli {

namespace {

using nlohmann::json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 1;
    bool json = false;
};

constexpr const char* kConventions = R"(Conventions:
  Variances are in shot-noise units (SNL = 1); dB values are 10*log10 of
  those, negative below the SNL. Config efficiencies are intensity values
  (xi^2, eta^2) and are converted to amplitudes (xi, eta) once on load.
  Squeezing may be given as r or as dB below the SNL (r = dB*ln(10)/20).
Exit codes: 0 ok, 2 config error, 3 physics rejection, 4 verification
  failure, 5 output not writable, 64 bad command line, 1 internal error.)";

ExperimentParams load_params(const GlobalOptions& g) {
    if (g.config_path.empty()) throw UsageError("--config PATH is required for this command");
    return config::load_config(g.config_path).to_params();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(fmt::format("cannot write output file '{}'", path));
    return file;
}

void finish_output(std::ofstream& file, const std::string& path) {
    file.flush();
    if (!file) throw IoError(fmt::format("error while writing '{}'", path));
}

std::string verdict_word(bool entangled) { return entangled ? "yes" : "no"; }

// "a:b" -> {a, b}
std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError(fmt::format("range '{}' must look like LO:HI", text));
    try {
        std::size_t used = 0;
        const std::string lo_text = text.substr(0, colon);
        const std::string hi_text = text.substr(colon + 1);
        const double lo = std::stod(lo_text, &used);
        if (used != lo_text.size()) throw std::invalid_argument("trailing");
        const double hi = std::stod(hi_text, &used);
        if (used != hi_text.size()) throw std::invalid_argument("trailing");
        if (!(lo >= 0.0) || !(hi >= lo)) throw UsageError(fmt::format("range '{}' needs 0 <= LO <= HI", text));
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError(fmt::format("range '{}' must look like LO:HI with numeric bounds", text));
    }
}

std::vector<double> build_axis(std::pair<double, double> range, int steps, double config_value) {
    std::vector<double> axis;
    axis.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i < steps; ++i) {
        axis.push_back(steps == 1 ? range.first
                                  : range.first + (range.second - range.first) * i / static_cast<double>(steps - 1));
    }
    // Keep the configured operating point on the grid when the range covers it.
    if (config_value >= range.first && config_value <= range.second) {
        const bool present = std::any_of(axis.begin(), axis.end(),
                                         [&](double v) { return std::abs(v - config_value) <= 1e-12; });
        if (!present) {
            axis.push_back(config_value);
            std::sort(axis.begin(), axis.end());
        }
    }
    return axis;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const GlobalOptions& g, std::ostream& out) {
    const ExperimentParams params = load_params(g);
    const swap::VarianceReport report = swap::run_experiment(params);
    const auto verdict = analytics::duan_verdict(report.v_plus, report.v_minus);

    std::optional<double> electronic;
    if (!params.channel_blocked && params.mirror_R < 1.0 && params.eta > 0.0 && params.xi1 > 0.0) {
        electronic = analytics::gain_to_electronic(report.g_swap_used, params);
    }
    std::optional<double> with_enl_db;
    std::optional<double> corrected_db;
    if (params.enl_db) {
        with_enl_db = -analytics::enl_degrade(-report.v_plus_db, *params.enl_db);
        corrected_db = -analytics::enl_correct(-*with_enl_db, *params.enl_db);
    }

    if (g.json) {
        json doc = {
            {"g_swap", report.g_swap_used},
            {"gain_mode", params.channel_blocked ? "blocked" : (params.gain.is_optimal() ? "optimal" : "fixed")},
            {"v_plus", report.v_plus},
            {"v_minus", report.v_minus},
            {"v_plus_db", report.v_plus_db},
            {"v_minus_db", report.v_minus_db},
            {"entangled", report.entangled},
            {"margin", verdict.margin},
            {"params", config::params_to_json(params)},
        };
        if (electronic) doc["electronic_gain"] = *electronic;
        if (with_enl_db) {
            doc["enl_db"] = *params.enl_db;
            doc["v_with_enl_floor_db"] = *with_enl_db;
            doc["v_enl_corrected_db"] = *corrected_db;
        }
        out << doc.dump(2) << "\n";
    } else {
        const char* gain_label = params.channel_blocked ? "g_swap" : (params.gain.is_optimal() ? "g_opt" : "g_swap");
        out << fmt::format("{}={:.3f}, V={:.3f} ({:.2f} dB), entangled={}\n", gain_label, report.g_swap_used,
                           report.v_plus, report.v_plus_db, verdict_word(report.entangled));
        out << fmt::format("  feedforward      : {}\n",
                           params.channel_blocked ? "blocked"
                                                  : (params.gain.is_optimal() ? "optimal gain" : "fixed gain"));
        out << fmt::format("  g_swap           : {:.6f}\n", report.g_swap_used);
        if (electronic) out << fmt::format("  electronic gain g: {:.4f}\n", *electronic);
        out << fmt::format("  V+ (X_a + X_d')  : {:.6f} ({:+.3f} dB)\n", report.v_plus, report.v_plus_db);
        out << fmt::format("  V- (Y_a - Y_d')  : {:.6f} ({:+.3f} dB)\n", report.v_minus, report.v_minus_db);
        out << fmt::format("  margin to SNL    : {:.6f}\n", verdict.margin);
        if (with_enl_db) {
            out << fmt::format("  with ENL floor {:.1f} dB below SNL a detector reads {:+.3f} dB; ENL-corrected {:+.3f} dB\n",
                               *params.enl_db, *with_enl_db, *corrected_db);
        }
    }

    if (!g.out_path.empty()) {
        std::ofstream file = open_output(g.out_path);
        file << "g_swap,v_plus,v_minus,v_plus_db,v_minus_db,entangled\n";
        file << fmt::format("{:.9f},{:.9f},{:.9f},{:.6f},{:.6f},{}\n", report.g_swap_used, report.v_plus,
                            report.v_minus, report.v_plus_db, report.v_minus_db, report.entangled ? 1 : 0);
        finish_output(file, g.out_path);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// optimal-gain

int cmd_optimal_gain(const GlobalOptions& g, std::ostream& out) {
    const ExperimentParams params = load_params(g);
    const double g_opt = analytics::optimal_gain(params);
    const double v = analytics::variance_formula(params, g_opt);
    std::optional<double> electronic;
    if (params.mirror_R < 1.0 && params.eta > 0.0 && params.xi1 > 0.0) {
        electronic = analytics::gain_to_electronic(g_opt, params);
    }
    if (g.json) {
        json doc = {{"g_swap_opt", g_opt}, {"v_at_opt", v}, {"v_at_opt_db", analytics::db_from_linear(v)}};
        if (electronic) doc["electronic_gain"] = *electronic;
        out << doc.dump(2) << "\n";
    } else {
        out << fmt::format("g_swap_opt={:.6f}\n", g_opt);
        if (electronic) out << fmt::format("electronic gain g={:.6f}\n", *electronic);
        out << fmt::format("V at optimum={:.6f} ({:+.3f} dB)\n", v, analytics::db_from_linear(v));
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::string r1_range = "0:1.5";
    std::string r2_range = "0:1.5";
    int steps = 31;
};

int cmd_sweep(const GlobalOptions& g, const SweepOptions& s, std::ostream& out) {
    if (s.steps < 2) throw UsageError("--steps must be >= 2");
    const ExperimentParams params = load_params(g);
    const std::vector<double> r1_axis = build_axis(parse_range(s.r1_range), s.steps, params.r1);
    const std::vector<double> r2_axis = build_axis(parse_range(s.r2_range), s.steps, params.r2);
    const analytics::SweepGrid grid = analytics::sweep_surface(params, r1_axis, r2_axis);

    std::ostringstream csv;
    csv << "r1,r2,v_snl\n";
    for (std::size_t i = 0; i < grid.r1_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.r2_values.size(); ++j) {
            csv << fmt::format("{:.6f},{:.6f},{:.9f}\n", grid.r1_values[i], grid.r2_values[j], grid.at(i, j));
        }
    }

    if (g.out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file = open_output(g.out_path);
        file << csv.str();
        finish_output(file, g.out_path);
        const auto best = std::min_element(grid.values.begin(), grid.values.end());
        if (g.json) {
            out << json{{"rows", grid.values.size()}, {"min_v", *best}, {"out", g.out_path}}.dump(2) << "\n";
        } else {
            out << fmt::format("wrote {} rows to {} (min V = {:.6f})\n", grid.values.size(), g.out_path, *best);
        }
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
    std::size_t random = 0;
    double perturb = 0.0;  // negative-control hook: scales the closed form by (1 + perturb)
};

int cmd_verify(const GlobalOptions& g, const VerifyOptions& v, std::ostream& out) {
    std::vector<ExperimentParams> draws;
    if (!g.config_path.empty()) draws.push_back(load_params(g));
    if (v.random > 0) {
        auto random = swap::random_draws(v.random, g.seed);
        draws.insert(draws.end(), random.begin(), random.end());
    }
    if (draws.empty()) throw UsageError("verify needs --config PATH and/or --random N");

    swap::VarianceFn formula;
    if (v.perturb != 0.0) {
        formula = [eps = v.perturb](const ExperimentParams& p, double g_swap) {
            return analytics::variance_formula(p, g_swap) * (1.0 + eps);
        };
    }
    constexpr double kTolerance = 1e-9;
    const swap::VerifyOutcome outcome = swap::verify_oracle(draws, kTolerance, formula);

    if (g.json) {
        json doc = {{"checked", outcome.checked},
                    {"max_rel_deviation", outcome.max_rel_deviation},
                    {"tolerance", kTolerance},
                    {"passed", outcome.passed()},
                    {"failures", json::array()}};
        for (const auto& p : outcome.failures) doc["failures"].push_back(config::params_to_json(p));
        out << doc.dump(2) << "\n";
    } else {
        out << fmt::format("checked {} parameter set(s); max relative deviation {:.3e} (tolerance {:.0e}): {}\n",
                           outcome.checked, outcome.max_rel_deviation, kTolerance,
                           outcome.passed() ? "PASS" : "FAIL");
        constexpr std::size_t kShown = 10;
        for (std::size_t i = 0; i < std::min(kShown, outcome.failures.size()); ++i) {
            out << "  offending: " << config::params_to_json(outcome.failures[i]).dump() << "\n";
        }
        if (outcome.failures.size() > kShown) {
            out << fmt::format("  ... and {} more\n", outcome.failures.size() - kShown);
        }
    }
    return outcome.passed() ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// montecarlo

struct MonteCarloOptions {
    std::string kind = "correlated";
    std::size_t points = 200;
    std::size_t n_per_point = 0;  // 0 -> round(RBW/VBW)
};

int cmd_montecarlo(const GlobalOptions& g, const MonteCarloOptions& m, std::ostream& out) {
    montecarlo::TraceKind kind;
    try {
        kind = montecarlo::parse_trace_kind(m.kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (m.points < 1) throw UsageError("--points must be >= 1");
    const ExperimentParams params = load_params(g);
    const std::size_t npp = m.n_per_point == 0 ? montecarlo::default_n_per_point() : m.n_per_point;
    const montecarlo::TraceSeries trace = montecarlo::render_trace(params, kind, m.points, g.seed, npp);
    const json meta = montecarlo::trace_metadata(trace, params);

    if (g.out_path.empty()) {
        montecarlo::write_trace_csv(trace, out);
        return kOk;
    }
    {
        std::ofstream file = open_output(g.out_path);
        montecarlo::write_trace_csv(trace, file);
        finish_output(file, g.out_path);
    }
    const std::string meta_path = g.out_path + ".meta.json";
    {
        std::ofstream file = open_output(meta_path);
        file << meta.dump(2) << "\n";
        finish_output(file, meta_path);
    }
    if (g.json) {
        out << meta.dump(2) << "\n";
    } else {
        out << fmt::format("{} trace: {} points x {} samples, mean {:+.3f} dB (analytic {:+.3f} dB), seed {}\n",
                           montecarlo::trace_kind_name(kind), trace.db.size(), trace.n_per_point, trace.mean_db(),
                           analytics::db_from_linear(trace.analytic_linear), trace.seed);
        out << fmt::format("wrote {} and {}\n", g.out_path, meta_path);
    }
    return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Continuous-variable entanglement swapping: predictions, sweeps, oracle checks and Monte Carlo traces",
                 "cvswap"};
    app.footer(kConventions);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--config", global.config_path, "Experiment config (JSON)");
    app.add_option("--out", global.out_path, "Output CSV path");
    app.add_option("--seed", global.seed, "RNG seed")->capture_default_str();
    app.add_flag("--json", global.json, "Machine-readable report");

    auto* predict = app.add_subcommand("predict", "Verifier variances and entanglement verdict");
    auto* optimal = app.add_subcommand("optimal-gain", "Closed-form optimal normalized gain");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Variance at optimal gain over an r1 x r2 grid (CSV: r1,r2,v_snl)");
    sweep->add_option("--r1-range", sweep_opts.r1_range, "LO:HI")->capture_default_str();
    sweep->add_option("--r2-range", sweep_opts.r2_range, "LO:HI")->capture_default_str();
    sweep->add_option("--steps", sweep_opts.steps, "Grid points per axis (>= 2)")->capture_default_str();

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Network oracle vs closed-form variance (tolerance 1e-9 relative)");
    verify->add_option("--random", verify_opts.random, "Number of random parameter draws");
    verify->add_option("--perturb-formula", verify_opts.perturb, "Scale the closed form by (1+EPS); negative control")
        ->group("");

    MonteCarloOptions mc_opts;
    auto* mc = app.add_subcommand("montecarlo", "Sampled spectrum-analyzer trace (CSV: point_index,db_value)");
    mc->add_option("--kind", mc_opts.kind, "correlated | blocked | single_mode_a | single_mode_dprime | snl")
        ->capture_default_str();
    mc->add_option("--points", mc_opts.points, "Displayed points")->capture_default_str();
    mc->add_option("--n-per-point", mc_opts.n_per_point, "Samples averaged per point (default round(RBW/VBW))");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name

    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (predict->parsed()) return cmd_predict(global, out);
        if (optimal->parsed()) return cmd_optimal_gain(global, out);
        if (sweep->parsed()) return cmd_sweep(global, sweep_opts, out);
        if (verify->parsed()) return cmd_verify(global, verify_opts, out);
        if (mc->parsed()) return cmd_montecarlo(global, mc_opts, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const PhysicsError& e) {
        err << "rejected: " << e.what() << "\n";
        return kPhysicsError;
    } catch (const ModelError& e) {
        err << "rejected: " << e.what() << "\n";
        return kPhysicsError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace cvswap::cli
