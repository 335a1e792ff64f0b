#ifndef VECOFFLOAD_COST_HPP
#define VECOFFLOAD_COST_HPP

// Communication/computing cost model, the P2 and P3 objectives, bandwidth
// feasibility, and the learner reward.

#include <algorithm>
#include <cmath>
#include <limits>

#include "vecoffload/model.hpp"
#include "vecoffload/netcalc.hpp"

namespace vecoffload {

struct CostBreakdown {
    double comm = 0.0;          // licensed-band transmission cost
    double comp = 0.0;          // remote computing cost
    double fail_penalty = 0.0;  // sum_i delta_i * ln(eps_i) term, <= 0 when clamped
    double total = 0.0;
};

struct FeasibilityReport {
    bool c1_ok = true;      // rows on the simplex, mask respected
    bool c2_ok = true;      // licensed-band budget
    bool c3_ok = true;      // DSRC budget
    double c2_usage = 0.0;  // Mb
    double c2_limit = 0.0;  // Mb
    double c3_usage = 0.0;  // Mb
    double c3_limit = 0.0;  // Mb

    bool all_ok() const { return c1_ok && c2_ok && c3_ok; }
};

// Licensed-band transmission cost of task i over the accounting period.
inline double comm_cost(std::size_t i, const Allocation& rho, const ScenarioConfig& s) {
    const double licensed = rho.at(i, TechKind::CV2I) + rho.at(i, TechKind::CV2V);
    return s.tasks[i].fee_cv2x * licensed * s.traffic_volume(i);
}

// Remote computing cost of task i: VEC pool for CV2I, on-board processors for
// the V2V paths; local processing is free.
inline double comp_cost(std::size_t i, const Allocation& rho, const ScenarioConfig& s) {
    const TaskSpec& t = s.tasks[i];
    const double onboard =
        rho.at(i, TechKind::CV2V) + rho.at(i, TechKind::CMMW) + rho.at(i, TechKind::DSRC);
    return (t.fee_infra * rho.at(i, TechKind::CV2I) + t.fee_veh * onboard) * t.complexity *
           s.traffic_volume(i);
}

// P2 objective: resource cost plus, per task, the worst clamped ln(eps) at the
// deadline over the technologies actually carrying traffic.
inline CostBreakdown objective_p2(const Allocation& rho, const ScenarioConfig& s) {
    CostBreakdown c;
    for (std::size_t i = 0; i < s.num_tasks(); ++i) {
        c.comm += comm_cost(i, rho, s);
        c.comp += comp_cost(i, rho, s);
        double worst = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (TechKind h : kAllTechs) {
            if (!s.tech_mask.contains(h) || !(rho.at(i, h) > 0.0)) continue;
            worst = std::max(worst, failure_log_prob(h, i, rho, s, s.tasks[i].t_max));
            any = true;
        }
        if (any) c.fail_penalty += s.tasks[i].priority * worst;
    }
    c.total = c.comm + c.comp + c.fail_penalty;
    return c;
}

// P3 objective: the max over used technologies is relaxed to the sum of the
// unclamped affine exponents over all masked technologies, which is linear in
// rho.
inline double objective_p3(const Allocation& rho, const ScenarioConfig& s) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.num_tasks(); ++i) {
        total += comm_cost(i, rho, s) + comp_cost(i, rho, s);
        double sum = 0.0;
        for (TechKind h : kAllTechs)
            if (s.tech_mask.contains(h))
                sum += failure_log_prob_unclamped(h, i, rho, s, s.tasks[i].t_max);
        total += s.tasks[i].priority * sum;
    }
    return total;
}

// C1-C3 feasibility. Bandwidth budgets compare Mb against the horizon-scaled
// rate limits so usage and limit share units.
inline FeasibilityReport feasibility(const Allocation& rho, const ScenarioConfig& s) {
    FeasibilityReport r;
    r.c1_ok = allocation_violations(rho, s.tech_mask).empty();
    for (std::size_t i = 0; i < s.num_tasks(); ++i) {
        const double vol = s.traffic_volume(i);
        r.c2_usage += (rho.at(i, TechKind::CV2I) + rho.at(i, TechKind::CV2V)) * vol;
        r.c3_usage += rho.at(i, TechKind::DSRC) * vol;
    }
    r.c2_limit = s.r_cv2x * s.horizon;
    r.c3_limit = s.r_dsrc * s.horizon;
    r.c2_ok = r.c2_usage <= r.c2_limit + 1e-9;
    r.c3_ok = r.c3_usage <= r.c3_limit + 1e-9;
    return r;
}

// Learner reward: the negative P2 total.
inline double reward(const Allocation& rho, const ScenarioConfig& s) {
    return -objective_p2(rho, s).total;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_COST_HPP
