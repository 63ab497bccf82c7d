#include "aggseek/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "aggseek/equilibrium.hpp"
#include "aggseek/errors.hpp"
#include "aggseek/flow.hpp"
#include "aggseek/kernels.hpp"
#include "aggseek/lyapunov.hpp"
#include "aggseek/report.hpp"
#include "aggseek/scenario.hpp"
#include "aggseek/svg.hpp"

namespace aggseek::cli {
namespace {

struct Loaded {
    Scenario scenario;
    std::uint64_t digest;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("scenario", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

Loaded load(const Options& opts, bool allow_k_list) {
    if (opts.scenario.empty()) throw ScenarioError("--scenario", "a scenario file is required");
    const std::string text = read_file(opts.scenario);
    Scenario sc = load_scenario(text);
    if (!allow_k_list && opts.k.size() > 1) throw ScenarioError("--k", "this command takes a single gain");
    if (!allow_k_list && opts.k.size() == 1) sc.game = sc.game.with_gain(opts.k.front());

    std::string overrides;
    for (double k : opts.k) overrides += "k=" + format_real(k) + ";";
    if (opts.h) overrides += "h=" + format_real(*opts.h) + ";";
    if (opts.T) overrides += "T=" + format_real(*opts.T) + ";";
    return Loaded{std::move(sc), fnv1a64(overrides, fnv1a64(text))};
}

SolverOptions solver_options(const Options& opts) {
    SolverOptions s;
    if (opts.lambda) s.lambda = *opts.lambda;
    if (opts.tol) s.tol = *opts.tol;
    return s;
}

IntegratorConfig integrator_config(const Options& opts) {
    IntegratorConfig cfg;
    cfg.h = opts.h.value_or(kDefaultStep);
    cfg.T = opts.T.value_or(kDefaultHorizon);
    cfg.record_every = opts.record_every;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("--h/--T", e.what());
    }
    return cfg;
}

std::string hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void add_scenario(Report& rep, const Options& opts, const Loaded& l, const GameSpec& game) {
    rep.add("scenario.path", opts.scenario.string(), true);
    rep.add("scenario.digest", hex(l.digest), true);
    rep.add("scenario.seed", std::to_string(game.seed()));
    rep.add("scenario.N", game.agent_count());
    rep.add("scenario.n", static_cast<std::size_t>(game.dim()));
    rep.add("scenario.k", game.gain());
    rep.add("scenario.ell_min", game.ell_min());
    rep.add("kernels.isa", std::string(kernels::to_string(kernels::active().isa)), true);
}

void add_certificate(Report& rep, const CertificateReport& c, const std::string& prefix = "certificate.") {
    rep.add(prefix + "cond5_holds", c.cond5_holds);
    rep.add(prefix + "cond5_margin", c.cond5_margin);
    rep.add(prefix + "gershgorin_rhs", c.gershgorin_rhs);
    rep.add(prefix + "prior_holds", c.prior_holds);
    rep.add(prefix + "prior_margin", c.prior_margin);
    rep.add(prefix + "strictly_monotone", c.strictly_monotone);
    rep.add(prefix + "monotone_margin", c.monotone_margin);
    rep.add(prefix + "lambda_min_paper", c.lambda_min_paper);
    rep.add(prefix + "lambda_min_symmetrized", c.lambda_min_symmetrized);
    rep.add(prefix + "certifies_decay", c.lambda_min_symmetrized > 0.0);
}

void add_equilibrium(Report& rep, const EquilibriumResult& eq) {
    rep.add("equilibrium.sigmabar", eq.sigmabar);
    rep.add("equilibrium.vi_gap", eq.vi_gap_value);
    rep.add("equilibrium.iterations", eq.iterations);
    rep.add("equilibrium.final_update_norm", eq.final_update_norm);
    for (std::size_t w = 0; w < eq.warnings.size(); ++w) {
        rep.add("equilibrium.warning." + std::to_string(w), eq.warnings[w], true);
    }
}

void add_decay(Report& rep, const std::string& prefix, const std::optional<DecayReport>& d) {
    rep.add(prefix + "available", d.has_value());
    if (!d) return;
    rep.add(prefix + "W0", d->W0);
    rep.add(prefix + "monotone", d->monotone);
    rep.add(prefix + "fitted_rate", d->fitted_rate);
    rep.add(prefix + "certificate_rate", d->certificate_rate);
    if (d->certified) rep.add(prefix + "certified", *d->certified);
    else rep.add(prefix + "certified", std::string("not_evaluated"), true);
    rep.add(prefix + "worst_bound_ratio", d->worst_bound_ratio);
}

void write_json_if_requested(const Options& opts, const Report& rep) {
    if (!opts.json) return;
    std::ofstream f(*opts.json);
    if (!f) throw ScenarioError("--json", "cannot write " + opts.json->string());
    f << rep.to_json() << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ScenarioError("--out", "cannot write " + path.string());
    f << content;
}

struct RunOutcome {
    double k = 0.0;
    Trajectory traj;
    std::optional<DecayReport> decay;
    CertificateReport cert;
    std::optional<double> ttt;
};

RunOutcome execute_run(const GameSpec& game, const SystemState& init, const IntegratorConfig& cfg,
                       const EquilibriumResult& eq, double threshold) {
    RunOutcome r;
    r.k = game.gain();
    r.cert = compare_conditions(game);
    r.traj = integrate(game, init, cfg, &eq);
    if (r.traj.size() >= 10) r.decay = decay_report(r.traj, eq, r.cert);
    r.ttt = time_to_threshold(r.traj.times, r.traj.dist_avg, threshold);
    return r;
}

void write_run_files(const std::string& prefix, const RunOutcome& r, Report& rep, const std::string& key) {
    std::ostringstream csv;
    write_trajectory_csv(csv, r.traj);
    write_text_file(prefix + ".csv", csv.str());

    LinePlot plot{"Distance to equilibrium, k = " + short_real(r.k), "t", "distance",
                  {{"|avg(x(t)) - sigmabar|", r.traj.times, r.traj.dist_avg},
                   {"|sigma(t) - sigmabar|", r.traj.times, r.traj.dist_sigma}}};
    std::ostringstream svg;
    write_svg(svg, plot);
    write_text_file(prefix + ".svg", svg.str());

    rep.add(key + "csv", prefix + ".csv", true);
    rep.add(key + "svg", prefix + ".svg", true);
}

void add_run_summary(Report& rep, const std::string& key, const RunOutcome& r, double threshold) {
    rep.add(key + "k", r.k);
    rep.add(key + "samples", r.traj.size());
    rep.add(key + "final_t", r.traj.times.back());
    rep.add(key + "final_dist_avg", r.traj.dist_avg.back());
    rep.add(key + "final_dist_sigma", r.traj.dist_sigma.back());
    rep.add(key + "final_residual", r.traj.residual.back());
    rep.add(key + "threshold", threshold);
    rep.add(key + "time_to_threshold", r.ttt);
}

}  // namespace

std::size_t thread_cap() {
    if (const char* env = std::getenv("AGGSEEK_THREADS"); env != nullptr) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_check(const Options& opts, std::ostream& out) {
    const Loaded l = load(opts, false);
    const GameSpec& game = l.scenario.game;
    const CertificateReport cert = compare_conditions(game);

    Report rep;
    add_scenario(rep, opts, l, game);
    add_certificate(rep, cert);
    // The dense route forms the full (nN + n)^2 matrix; skip it for very large games.
    constexpr Eigen::Index kDenseLimit = 4000;
    if (game.dim() * static_cast<Eigen::Index>(game.agent_count() + 1) <= kDenseLimit) {
        const MAssembly paper = assemble_M(game, MVariant::paper);
        const MAssembly sym = assemble_M(game, MVariant::symmetrized);
        rep.add("certificate.lambda_min_paper_dense", paper.lambda_min_dense);
        rep.add("certificate.lambda_min_symmetrized_dense", sym.lambda_min_dense);
    }
    if (cert.cond5_holds && !(cert.lambda_min_symmetrized > 0.0)) {
        rep.add("certificate.note",
                std::string("the gain condition holds but M is not positive definite; decay is not certified"), true);
    }
    rep.print(out);
    write_json_if_requested(opts, rep);
    return kOk;
}

int cmd_solve(const Options& opts, std::ostream& out) {
    const Loaded l = load(opts, false);
    const GameSpec& game = l.scenario.game;
    const EquilibriumResult eq = solve_equilibrium(game, solver_options(opts));
    const VerificationReport ver = verify_equilibrium(game, eq.xbar, 1e-6);

    Report rep;
    add_scenario(rep, opts, l, game);
    add_equilibrium(rep, eq);
    rep.add("equilibrium.verified", ver.is_equilibrium);
    rep.add("equilibrium.worst_agent", ver.worst_agent);
    if (opts.out) {
        std::ostringstream csv;
        const Eigen::Index n = game.dim();
        csv << "agent";
        for (Eigen::Index j = 0; j < n; ++j) csv << ",x" << j;
        csv << '\n';
        for (std::size_t i = 0; i < game.agent_count(); ++i) {
            csv << i;
            for (Eigen::Index j = 0; j < n; ++j) csv << ',' << format_real(eq.xbar[static_cast<Eigen::Index>(i) * n + j]);
            csv << '\n';
        }
        const std::string path = *opts.out + "_xbar.csv";
        write_text_file(path, csv.str());
        rep.add("output.xbar", path, true);
    }
    rep.print(out);
    write_json_if_requested(opts, rep);
    return kOk;
}

int cmd_run(const Options& opts, std::ostream& out) {
    const Loaded l = load(opts, false);
    const GameSpec& game = l.scenario.game;
    const IntegratorConfig cfg = integrator_config(opts);
    const EquilibriumResult eq = solve_equilibrium(game, solver_options(opts));
    const RunOutcome r = execute_run(game, l.scenario.initial, cfg, eq, opts.threshold);

    Report rep;
    add_scenario(rep, opts, l, game);
    rep.add("run.h", cfg.h);
    rep.add("run.T", cfg.T);
    add_equilibrium(rep, eq);
    add_certificate(rep, r.cert);
    add_decay(rep, "decay.", r.decay);
    add_run_summary(rep, "run.", r, opts.threshold);
    write_run_files(opts.out.value_or("aggseek"), r, rep, "output.");
    rep.print(out);
    write_json_if_requested(opts, rep);
    return kOk;
}

int cmd_sweep(const Options& opts, std::ostream& out) {
    const Loaded l = load(opts, true);
    const IntegratorConfig cfg = integrator_config(opts);
    std::vector<double> gains = opts.k;
    if (gains.empty()) gains.push_back(l.scenario.game.gain());
    for (double k : gains) {
        if (!(k > 0.0)) throw ScenarioError("--k", "gains must be positive");
    }

    // sigmabar does not depend on k, so every run shares one reference.
    const EquilibriumResult eq = solve_equilibrium(l.scenario.game, solver_options(opts));

    std::vector<RunOutcome> runs(gains.size());
    const std::size_t width = std::min(thread_cap(), gains.size());
    for (std::size_t start = 0; start < gains.size(); start += width) {
        std::vector<std::future<RunOutcome>> batch;
        for (std::size_t g = start; g < std::min(start + width, gains.size()); ++g) {
            batch.push_back(std::async(std::launch::async, [&, g] {
                return execute_run(l.scenario.game.with_gain(gains[g]), l.scenario.initial, cfg, eq, opts.threshold);
            }));
        }
        for (std::size_t b = 0; b < batch.size(); ++b) runs[start + b] = batch[b].get();
    }

    Report rep;
    add_scenario(rep, opts, l, l.scenario.game);
    rep.add("run.h", cfg.h);
    rep.add("run.T", cfg.T);
    add_equilibrium(rep, eq);
    const std::string prefix = opts.out.value_or("aggseek");
    LinePlot compare{"Distance of the average strategy from equilibrium", "t", "|avg(x(t)) - sigmabar|", {}};
    for (std::size_t g = 0; g < runs.size(); ++g) {
        const std::string key = "sweep." + std::to_string(g) + ".";
        add_run_summary(rep, key, runs[g], opts.threshold);
        add_certificate(rep, runs[g].cert, key + "certificate.");
        add_decay(rep, key + "decay.", runs[g].decay);
        write_run_files(prefix + "_k" + short_real(runs[g].k), runs[g], rep, key + "output.");
        compare.series.push_back({"k = " + short_real(runs[g].k), runs[g].traj.times, runs[g].traj.dist_avg});
    }

    // Ordering in k of the time to reach the threshold, over ascending gains.
    std::vector<std::size_t> order(runs.size());
    for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return runs[a].k < runs[b].k; });
    bool decreasing = true;
    for (std::size_t p = 1; p < order.size(); ++p) {
        const auto& prev = runs[order[p - 1]].ttt;
        const auto& cur = runs[order[p]].ttt;
        if (!prev || !cur || !(*cur < *prev)) decreasing = false;
    }
    rep.add("sweep.time_to_threshold_strictly_decreasing", decreasing);

    std::ostringstream svg;
    write_svg(svg, compare);
    write_text_file(prefix + "_compare.svg", svg.str());
    rep.add("output.compare_svg", prefix + "_compare.svg", true);

    rep.print(out);
    write_json_if_requested(opts, rep);
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibrium seeking for aggregative games via integral dynamics", "aggseek"};
    // -h would clash with the step-size option --h.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1, 1);
    Options opts;
    std::string k_list;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opts.scenario, "Scenario JSON file")->required();
        sub->add_option("--json", opts.json, "Also write the report as JSON");
    };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--lambda", opts.lambda, "Fixed-point relaxation in (0, 1]");
        sub->add_option("--tol", opts.tol, "Fixed-point tolerance");
    };
    auto add_integrator = [&](CLI::App* sub) {
        sub->add_option("--h", opts.h, "Euler step size");
        sub->add_option("--T", opts.T, "Horizon");
        sub->add_option("--out", opts.out, "Output prefix");
        sub->add_option("--every", opts.record_every, "Record every N steps")->check(CLI::PositiveNumber);
        sub->add_option("--threshold", opts.threshold, "Distance threshold for time-to-threshold");
    };

    CLI::App* check = app.add_subcommand("check", "Evaluate convergence conditions and M spectra");
    add_common(check);
    check->add_option("--k", k_list, "Gain override");

    CLI::App* solve = app.add_subcommand("solve", "Solve the equilibrium by fixed-point iteration");
    add_common(solve);
    add_solver(solve);
    solve->add_option("--k", k_list, "Gain override");
    solve->add_option("--out", opts.out, "Write <prefix>_xbar.csv");

    CLI::App* run_cmd = app.add_subcommand("run", "Integrate the dynamics and write CSV/SVG");
    add_common(run_cmd);
    add_solver(run_cmd);
    add_integrator(run_cmd);
    run_cmd->add_option("--k", k_list, "Gain override");

    CLI::App* sweep = app.add_subcommand("sweep", "Run the dynamics for several gains");
    add_common(sweep);
    add_solver(sweep);
    add_integrator(sweep);
    sweep->add_option("--k", k_list, "Comma-separated gains");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (!k_list.empty()) {
            std::stringstream ss(k_list);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(item, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != item.size()) throw ScenarioError("--k", "not a number: '" + item + "'");
                opts.k.push_back(v);
            }
        }
        if (check->parsed()) return cmd_check(opts, out);
        if (solve->parsed()) return cmd_solve(opts, out);
        if (run_cmd->parsed()) return cmd_run(opts, out);
        return cmd_sweep(opts, out);
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::runtime_error& e) {
        // Remaining runtime errors come from the environment, e.g. an unknown AGGSEEK_SIMD.
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace aggseek::cli
