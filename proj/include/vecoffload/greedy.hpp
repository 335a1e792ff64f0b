#ifndef VECOFFLOAD_GREEDY_HPP
#define VECOFFLOAD_GREEDY_HPP

#include <chrono>

#include "vecoffload/mdp.hpp"
#include "vecoffload/solve_result.hpp"

namespace vecoffload {

// Steepest-ascent search on the reward: evaluates every feasible action, takes
// the best strictly improving one (ties break on enumeration order), stops at
// a local maximum or after max_steps.
inline SolveResult run_greedy(const ScenarioConfig& s, int max_steps = 10000) {
    const auto t0 = std::chrono::steady_clock::now();
    MdpState state = initial_state(s);
    CostBreakdown cur = objective_p2(state.rho, s);

    SolveResult res;
    for (int step = 0; step < max_steps; ++step) {
        const std::vector<MdpAction> actions = enumerate_actions(state, s);
        bool improved = false;
        MdpState best_next;
        CostBreakdown best_cost;
        for (const MdpAction& a : actions) {
            MdpState next = apply_action(state, a, s);
            const CostBreakdown c = objective_p2(next.rho, s);
            if (-c.total > -cur.total && (!improved || -c.total > -best_cost.total)) {
                improved = true;
                best_next = std::move(next);
                best_cost = c;
            }
        }
        if (!improved) break;
        state = std::move(best_next);
        cur = best_cost;
        res.trajectory.push_back(cur.total);
    }

    res.best_rho = state.rho;
    res.best_cost = cur;
    res.solver_name = "greedy";
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_GREEDY_HPP
