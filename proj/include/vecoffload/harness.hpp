#ifndef VECOFFLOAD_HARNESS_HPP
#define VECOFFLOAD_HARNESS_HPP

// Experiment runner: solver x framework grids with deterministic seeding and
// ordering, bound sweeps, CSV emission, and summary statistics.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vecoffload/config_io.hpp"
#include "vecoffload/solvers.hpp"

namespace vecoffload {

// ---------------------------------------------------------------------------
// Experiment specification
// ---------------------------------------------------------------------------

struct SweepSpec {
    std::string var;  // "lambda" | "burstiness" | "t_max"
    double from = 0.0;
    double to = 0.0;
    double step = 1.0;
    double eps = 0.01;  // failure probability for the delay-bound sweeps
};

struct ExperimentSpec {
    std::string scenario = "default";       // preset name or file path
    std::vector<std::string> solvers;       // subset of solver_names()
    std::vector<std::string> masks;         // framework preset names; empty = scenario mask
    int n_runs = 1;
    std::uint64_t base_seed = 0;
    std::string output_path;
    SolverOptions solver_options;
    std::optional<SweepSpec> sweep;
};

inline ExperimentSpec parse_experiment(std::string_view text) {
    const ConfigDocument doc = parse_config(text);
    static const std::vector<std::string> keys = {"scenario", "solvers", "masks",      "n_runs",
                                                  "base_seed", "output",  "oracle_step"};
    detail::reject_unknown_keys(doc.root, keys, "experiment");
    ExperimentSpec spec;
    if (auto it = doc.root.find("scenario"); it != doc.root.end()) {
        if (it->second.kind != ConfigValue::Kind::String)
            throw ConfigError("scenario", "expected a string");
        spec.scenario = it->second.text;
    }
    auto read_list = [&](const char* key, std::vector<std::string>& out) {
        if (auto it = doc.root.find(key); it != doc.root.end()) {
            if (it->second.kind != ConfigValue::Kind::List)
                throw ConfigError(key, "expected a list");
            out = it->second.list;
        }
    };
    read_list("solvers", spec.solvers);
    read_list("masks", spec.masks);
    detail::take_int(doc.root, "n_runs", spec.n_runs);
    double seed = 0.0;
    if (detail::take_number(doc.root, "base_seed", seed))
        spec.base_seed = static_cast<std::uint64_t>(seed);
    if (auto it = doc.root.find("output"); it != doc.root.end()) {
        if (it->second.kind != ConfigValue::Kind::String)
            throw ConfigError("output", "expected a string");
        spec.output_path = it->second.text;
    }
    detail::take_number(doc.root, "oracle_step", spec.solver_options.oracle_step);

    if (auto it = doc.sections.find("hyperparams"); it != doc.sections.end()) {
        static const std::vector<std::string> hkeys = {"alpha", "gamma", "p_exploit", "n_rounds",
                                                       "standard_bootstrap"};
        detail::reject_unknown_keys(it->second, hkeys, "[hyperparams]");
        Hyperparams& h = spec.solver_options.hyper;
        detail::take_number(it->second, "alpha", h.alpha);
        detail::take_number(it->second, "gamma", h.gamma);
        detail::take_number(it->second, "p_exploit", h.p_exploit);
        detail::take_int(it->second, "n_rounds", h.n_rounds);
        detail::take_bool(it->second, "standard_bootstrap", h.standard_bootstrap);
    }
    if (auto it = doc.sections.find("sweep"); it != doc.sections.end()) {
        static const std::vector<std::string> skeys = {"var", "from", "to", "step", "eps"};
        detail::reject_unknown_keys(it->second, skeys, "[sweep]");
        SweepSpec sw;
        if (auto v = it->second.find("var"); v != it->second.end())
            sw.var = v->second.text;
        detail::take_number(it->second, "from", sw.from);
        detail::take_number(it->second, "to", sw.to);
        detail::take_number(it->second, "step", sw.step);
        detail::take_number(it->second, "eps", sw.eps);
        spec.sweep = sw;
    }
    for (const auto& [name, _] : doc.sections)
        if (name != "hyperparams" && name != "sweep")
            throw ConfigError(name, "unknown section in experiment");

    if (spec.n_runs < 1) throw ConfigError("n_runs", "must be >= 1");
    for (const std::string& name : spec.solvers)
        if (std::find(solver_names().begin(), solver_names().end(), name) == solver_names().end())
            throw ConfigError("solvers", "unknown solver: " + name);
    for (const std::string& name : spec.masks)
        if (name != "scenario" && !find_framework(name))
            throw ConfigError("masks", "unknown framework preset: " + name);
    if (spec.sweep && spec.sweep->var != "lambda" && spec.sweep->var != "burstiness" &&
        spec.sweep->var != "t_max")
        throw ConfigError("var", "sweep variable must be lambda, burstiness or t_max");
    return spec;
}

// ---------------------------------------------------------------------------
// Result rows
// ---------------------------------------------------------------------------

struct ResultRow {
    std::string solver_name;
    std::string mask_name;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string status = "ok";
    double p2_total = 0.0;
    double comm = 0.0;
    double comp = 0.0;
    double fail_penalty = 0.0;
    std::array<double, kNumTechs> ln_eps{};  // worst task per technology at its deadline
    double wall_time_s = 0.0;                // kept in memory; not part of the CSV
};

namespace detail {

inline std::uint64_t cell_seed(std::uint64_t base, const std::string& solver,
                               const std::string& mask, int run) {
    return mix_seed(mix_seed(mix_seed(base, hash_str(solver)), hash_str(mask)),
                    static_cast<std::uint64_t>(run));
}

inline std::size_t thread_budget() {
    if (const char* env = std::getenv("VEC_OFFLOAD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace detail

// Executes every (solver, mask, run) cell. Cells run independently (parallel
// up to VEC_OFFLOAD_THREADS) and rows come back in deterministic cell order;
// a solver failure becomes an error row and the run continues.
inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    const ScenarioConfig base = resolve_scenario(spec.scenario);
    struct Cell {
        std::string solver;
        std::string mask_name;
        ScenarioConfig scenario;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    const std::vector<std::string> masks =
        spec.masks.empty() ? std::vector<std::string>{"scenario"} : spec.masks;
    for (const std::string& solver : spec.solvers) {
        for (const std::string& mask_name : masks) {
            ScenarioConfig sc = base;
            if (mask_name != "scenario") sc = apply_framework(base, *find_framework(mask_name));
            for (int r = 0; r < spec.n_runs; ++r)
                cells.push_back(
                    {solver, mask_name, sc, detail::cell_seed(spec.base_seed, solver, mask_name, r)});
        }
    }

    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            ResultRow row;
            row.solver_name = cell.solver;
            row.mask_name = cell.mask_name;
            row.seed = cell.seed;
            try {
                const SolveResult r = run_solver(cell.solver, cell.scenario, spec.solver_options,
                                                 cell.seed);
                row.p2_total = r.best_cost.total;
                row.comm = r.best_cost.comm;
                row.comp = r.best_cost.comp;
                row.fail_penalty = r.best_cost.fail_penalty;
                row.wall_time_s = r.wall_time_s;
                for (TechKind t : kAllTechs) {
                    double worst = -std::numeric_limits<double>::infinity();
                    for (std::size_t task = 0; task < cell.scenario.num_tasks(); ++task)
                        worst = std::max(worst, failure_log_prob(t, task, r.best_rho, cell.scenario,
                                                                 cell.scenario.tasks[task].t_max));
                    row.ln_eps[tech_index(t)] = worst;
                }
            } catch (const std::exception& e) {
                row.ok = false;
                row.status = e.what();
                row.p2_total = row.comm = row.comp = row.fail_penalty =
                    std::numeric_limits<double>::quiet_NaN();
                row.ln_eps.fill(std::numeric_limits<double>::quiet_NaN());
            }
            rows[i] = std::move(row);
        }
    };
    const std::size_t n_threads = std::min(detail::thread_budget(), std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return rows;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepPoint {
    double value = 0.0;
    TechKind tech = TechKind::LOCAL;
    double metric = 0.0;  // delay bound (s) or ln eps, depending on the sweep
};

// Per-technology bound curves under the equal-shares allocation. Arrival-rate
// and burstiness sweeps fix the other envelope parameter (o=100, lambda=50)
// and emit the delay bound at the sweep's eps; t_max sweeps emit ln eps at the
// sweep value.
inline std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, const SweepSpec& sw) {
    std::vector<SweepPoint> out;
    const std::vector<TechKind> masked = base.tech_mask.techs();
    const Allocation rho = Allocation::uniform(base.num_tasks(), base.tech_mask);
    for (double v = sw.from; v <= sw.to + 1e-9; v += sw.step) {
        ScenarioConfig s = base;
        if (sw.var == "lambda") {
            for (TaskSpec& t : s.tasks) {
                t.arrival_rate = v;
                t.burstiness = 100.0;
            }
        } else if (sw.var == "burstiness") {
            for (TaskSpec& t : s.tasks) {
                t.arrival_rate = 50.0;
                t.burstiness = v;
            }
        }
        for (TechKind tech : masked) {
            SweepPoint p;
            p.value = v;
            p.tech = tech;
            p.metric = sw.var == "t_max" ? failure_log_prob(tech, 0, rho, s, v)
                                         : delay_bound(tech, 0, rho, s, sw.eps);
            out.push_back(p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos && s.find_first_of(" \t") != 0)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline const char* kResultCsvHeader =
    "solver,mask,seed,p2_total,comm,comp,fail_penalty,"
    "ln_eps_dsrc,ln_eps_cv2i,ln_eps_cv2v,ln_eps_cmmw,ln_eps_local,status";

inline std::string format_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kResultCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        out << detail::csv_quote(r.solver_name) << ',' << detail::csv_quote(r.mask_name) << ','
            << r.seed << ',' << detail::csv_number(r.p2_total) << ',' << detail::csv_number(r.comm)
            << ',' << detail::csv_number(r.comp) << ',' << detail::csv_number(r.fail_penalty);
        for (double v : r.ln_eps) out << ',' << detail::csv_number(v);
        out << ',' << detail::csv_quote(r.status) << "\n";
    }
    return out.str();
}

inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << format_csv(rows);
    if (!f) throw IoError("write failed: " + path);
}

inline std::string format_sweep_csv(const std::vector<SweepPoint>& points, const SweepSpec& sw,
                                    const ScenarioConfig& s) {
    std::ostringstream out;
    out << "# sweep var=" << sw.var << " allocation=equal-shares mask=";
    bool first = true;
    for (TechKind t : s.tech_mask.techs()) {
        out << (first ? "" : "+") << tech_name(t);
        first = false;
    }
    if (sw.var == "lambda") out << " fixed burstiness=100";
    if (sw.var == "burstiness") out << " fixed lambda=50";
    if (sw.var != "t_max") out << " eps=" << detail::csv_number(sw.eps);
    out << "\n";
    out << "value,tech," << (sw.var == "t_max" ? "ln_eps" : "delay_bound_s") << "\n";
    for (const SweepPoint& p : points)
        out << detail::csv_number(p.value) << ',' << tech_name(p.tech) << ','
            << detail::csv_number(p.metric) << "\n";
    return out.str();
}

inline void emit_sweep_csv(const std::vector<SweepPoint>& points, const SweepSpec& sw,
                           const ScenarioConfig& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << format_sweep_csv(points, sw, s);
    if (!f) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Summary statistics
// ---------------------------------------------------------------------------

struct SolverSummary {
    std::string solver_name;
    std::string mask_name;
    std::size_t n = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

// Linear-interpolation quantile on sorted data.
inline double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline std::vector<SolverSummary> summarize(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    std::vector<std::pair<std::string, std::string>> order;
    for (const ResultRow& r : rows) {
        if (!r.ok) continue;
        const auto key = std::make_pair(r.solver_name, r.mask_name);
        if (groups.find(key) == groups.end()) order.push_back(key);
        groups[key].push_back(r.p2_total);
    }
    std::vector<SolverSummary> out;
    for (const auto& key : order) {
        std::vector<double>& v = groups[key];
        std::sort(v.begin(), v.end());
        SolverSummary s;
        s.solver_name = key.first;
        s.mask_name = key.second;
        s.n = v.size();
        s.median = quantile(v, 0.5);
        s.q1 = quantile(v, 0.25);
        s.q3 = quantile(v, 0.75);
        out.push_back(s);
    }
    return out;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_HARNESS_HPP
