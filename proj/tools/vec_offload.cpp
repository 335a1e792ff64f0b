// vec-offload: delay-bound analysis and traffic-split optimization for
// heterogeneous V2X task offloading.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vecoffload/harness.hpp"

using namespace vecoffload;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_run(const std::string& spec_path, const std::string& scenario,
            const std::vector<std::string>& solvers, const std::vector<std::string>& masks,
            int runs, std::uint64_t seed, const std::string& out, double oracle_step, int rounds,
            bool have_seed, bool have_runs, bool have_step, bool have_rounds) {
    ExperimentSpec spec;
    if (!spec_path.empty()) spec = parse_experiment(slurp(spec_path));
    // flags override file keys
    if (!scenario.empty()) spec.scenario = scenario;
    if (!solvers.empty()) spec.solvers = solvers;
    if (!masks.empty()) spec.masks = masks;
    if (have_runs) spec.n_runs = runs;
    if (have_seed) spec.base_seed = seed;
    if (!out.empty()) spec.output_path = out;
    if (have_step) spec.solver_options.oracle_step = oracle_step;
    if (have_rounds) spec.solver_options.hyper.n_rounds = rounds;
    if (spec.solvers.empty()) throw ConfigError("solvers", "no solvers selected");
    for (const std::string& name : spec.solvers)
        if (std::find(solver_names().begin(), solver_names().end(), name) == solver_names().end())
            throw ConfigError("solvers", "unknown solver: " + name);
    for (const std::string& name : spec.masks)
        if (name != "scenario" && !find_framework(name))
            throw ConfigError("masks", "unknown framework preset: " + name);

    const std::vector<ResultRow> rows = run_experiment(spec);
    if (spec.output_path.empty())
        std::cout << format_csv(rows);
    else
        emit_csv(rows, spec.output_path);

    for (const SolverSummary& s : summarize(rows))
        std::fprintf(stderr, "%-10s %-15s n=%-4zu median=%.6g q1=%.6g q3=%.6g\n",
                     s.solver_name.c_str(), s.mask_name.c_str(), s.n, s.median, s.q1, s.q3);
    for (const ResultRow& r : rows)
        if (!r.ok) {
            std::fprintf(stderr, "error row: %s/%s: %s\n", r.solver_name.c_str(),
                         r.mask_name.c_str(), r.status.c_str());
        }
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.ok; }) ? 1 : 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& scenario, const std::string& var,
              double from, double to, double step, double eps, const std::string& mask,
              const std::string& out) {
    SweepSpec sw;
    ScenarioConfig base;
    if (!spec_path.empty()) {
        const ExperimentSpec spec = parse_experiment(slurp(spec_path));
        if (!spec.sweep) throw ConfigError("sweep", "spec file has no [sweep] section");
        sw = *spec.sweep;
        base = resolve_scenario(scenario.empty() ? spec.scenario : scenario);
    } else {
        base = resolve_scenario(scenario.empty() ? "default" : scenario);
    }
    if (!var.empty()) sw.var = var;
    if (from >= 0) sw.from = from;
    if (to >= 0) sw.to = to;
    if (step > 0) sw.step = step;
    if (eps > 0) sw.eps = eps;
    if (sw.var != "lambda" && sw.var != "burstiness" && sw.var != "t_max")
        throw ConfigError("var", "sweep variable must be lambda, burstiness or t_max");
    if (!mask.empty() && mask != "scenario") {
        const auto preset = find_framework(mask);
        if (!preset) throw ConfigError("mask", "unknown framework preset: " + mask);
        base = apply_framework(base, *preset);
    }
    const std::vector<SweepPoint> points = run_sweep(base, sw);
    if (out.empty())
        std::cout << format_sweep_csv(points, sw, base);
    else
        emit_sweep_csv(points, sw, base, out);
    return 0;
}

int cmd_oracle(const std::string& scenario, const std::string& mask, double step,
               const std::string& objective) {
    ScenarioConfig s = resolve_scenario(scenario);
    if (!mask.empty() && mask != "scenario") {
        const auto preset = find_framework(mask);
        if (!preset) throw ConfigError("mask", "unknown framework preset: " + mask);
        s = apply_framework(s, *preset);
    }
    const OracleObjective obj = objective == "p3" ? OracleObjective::P3 : OracleObjective::P2;
    const SolveResult r = oracle_grid_search(s, step, obj);
    std::printf("mask=%s p2_total=%.12g comm=%.12g comp=%.12g fail_penalty=%.12g (%s)\n",
                mask.empty() ? "scenario" : mask.c_str(), r.best_cost.total, r.best_cost.comm,
                r.best_cost.comp, r.best_cost.fail_penalty, r.note.c_str());
    for (std::size_t i = 0; i < r.best_rho.num_tasks(); ++i) {
        std::printf("task %zu:", i);
        for (TechKind t : kAllTechs)
            std::printf(" %s=%.2f", tech_name(t), r.best_rho.at(i, t));
        std::printf("\n");
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    // load_scenario rejects invariant violations with the offending key
    const ScenarioConfig s = load_scenario_file(path);
    std::printf("ok: %zu tasks, %zu technologies\n", s.num_tasks(), s.tech_mask.count());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay bounds and traffic-split optimization for heterogeneous V2X offloading"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a solver/framework experiment grid");
    std::string spec_path, scenario, out;
    std::vector<std::string> solvers, masks;
    int runs = 1, rounds = 200;
    std::uint64_t seed = 0;
    double oracle_step = 0.05;
    run->add_option("--spec", spec_path, "experiment spec file");
    run->add_option("--scenario", scenario, "scenario preset or file (overrides spec)");
    run->add_option("--solvers", solvers, "solvers to run")->delimiter(',');
    run->add_option("--masks", masks, "framework presets")->delimiter(',');
    auto* optruns = run->add_option("--runs", runs, "runs per cell");
    auto* optseed = run->add_option("--seed", seed, "base seed");
    run->add_option("--out", out, "output CSV path (default: stdout)");
    auto* optstep = run->add_option("--step", oracle_step, "oracle grid step");
    auto* optrounds = run->add_option("--rounds", rounds, "learner training rounds");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "per-technology bound sweeps");
    std::string sw_spec, sw_scenario, sw_var, sw_mask, sw_out;
    double sw_from = -1, sw_to = -1, sw_step = -1, sw_eps = -1;
    sweep->add_option("--spec", sw_spec, "experiment spec file with a [sweep] section");
    sweep->add_option("--scenario", sw_scenario, "scenario preset or file");
    sweep->add_option("--var", sw_var, "lambda | burstiness | t_max");
    sweep->add_option("--from", sw_from, "sweep start");
    sweep->add_option("--to", sw_to, "sweep end");
    sweep->add_option("--step", sw_step, "sweep step");
    sweep->add_option("--eps", sw_eps, "failure probability for delay bounds");
    sweep->add_option("--mask", sw_mask, "framework preset");
    sweep->add_option("--out", sw_out, "output CSV path (default: stdout)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exhaustive grid optimum for one framework");
    std::string or_scenario = "default", or_mask, or_objective = "p2";
    double or_step = 0.05;
    oracle->add_option("--scenario", or_scenario, "scenario preset or file");
    oracle->add_option("--mask", or_mask, "framework preset");
    oracle->add_option("--step", or_step, "grid step (0.1, 0.05 or 0.01)");
    oracle->add_option("--objective", or_objective, "p2 | p3");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
    std::string val_path;
    validate_cmd->add_option("--scenario", val_path, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed())
            return cmd_run(spec_path, scenario, solvers, masks, runs, seed, out, oracle_step,
                           rounds, optseed->count() > 0, optruns->count() > 0,
                           optstep->count() > 0, optrounds->count() > 0);
        if (sweep->parsed())
            return cmd_sweep(sw_spec, sw_scenario, sw_var, sw_from, sw_to, sw_step, sw_eps, sw_mask,
                             sw_out);
        if (oracle->parsed()) return cmd_oracle(or_scenario, or_mask, or_step, or_objective);
        if (validate_cmd->parsed()) return cmd_validate(val_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const UnknownPresetError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
