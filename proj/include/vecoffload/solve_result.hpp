#ifndef VECOFFLOAD_SOLVE_RESULT_HPP
#define VECOFFLOAD_SOLVE_RESULT_HPP

#include <optional>
#include <string>
#include <vector>

#include "vecoffload/cost.hpp"
#include "vecoffload/model.hpp"

namespace vecoffload {

struct SolveResult {
    Allocation best_rho;
    CostBreakdown best_cost;            // P2 breakdown at best_rho
    std::vector<double> trajectory;     // best-so-far P2 total per round
    double wall_time_s = 0.0;
    std::string solver_name;
    // The relaxation additionally reports its continuous optimum snapped to the
    // percent grid, and any polytope restriction it had to apply.
    std::optional<Allocation> snapped_rho;
    std::optional<CostBreakdown> snapped_cost;
    std::string note;
};

}  // namespace vecoffload

#endif  // VECOFFLOAD_SOLVE_RESULT_HPP
