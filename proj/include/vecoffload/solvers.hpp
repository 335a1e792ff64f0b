#ifndef VECOFFLOAD_SOLVERS_HPP
#define VECOFFLOAD_SOLVERS_HPP

#include "vecoffload/greedy.hpp"
#include "vecoffload/oracle.hpp"
#include "vecoffload/qlearn.hpp"
#include "vecoffload/relaxation.hpp"

namespace vecoffload {

struct SolverOptions {
    Hyperparams hyper;
    int greedy_max_steps = 10000;
    double oracle_step = 0.05;
    OracleOptions oracle;
};

inline const std::vector<std::string>& solver_names() {
    static const std::vector<std::string> names = {"sync-fql", "async-fql", "ql",
                                                   "greedy",   "relax",     "oracle"};
    return names;
}

// Runs one solver by name; `seed` overrides the hyperparameter seed for the
// stochastic learners.
inline SolveResult run_solver(const std::string& name, const ScenarioConfig& s,
                              const SolverOptions& opt, std::uint64_t seed) {
    Hyperparams h = opt.hyper;
    h.seed = seed;
    if (name == "sync-fql") {
        h.aggregation = Aggregation::Sync;
        return run_fql(s, h);
    }
    if (name == "async-fql") {
        h.aggregation = Aggregation::Async;
        return run_fql(s, h);
    }
    if (name == "ql") return run_qlearning(s, h);
    if (name == "greedy") return run_greedy(s, opt.greedy_max_steps);
    if (name == "relax") return run_relaxation(s);
    if (name == "oracle") return oracle_grid_search(s, opt.oracle_step, OracleObjective::P2, opt.oracle);
    throw std::invalid_argument("unknown solver: " + name);
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_SOLVERS_HPP
