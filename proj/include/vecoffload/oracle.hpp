#ifndef VECOFFLOAD_ORACLE_HPP
#define VECOFFLOAD_ORACLE_HPP

// Exhaustive grid-search oracle. Small instances are solved by full product
// enumeration over the per-task simplex grids with C2/C3 pruning. Scenarios
// whose tasks are all identical additionally admit an exact reduction over
// column sums: the costs and the relaxed penalty depend on the allocation only
// through the per-technology column totals, and the P2 penalty is bracketed
// by a per-column lower bound that is tight at single-technology optima. The
// oracle never returns an uncertified value: if neither route proves the grid
// optimum within budget it throws BudgetExceeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "vecoffload/cost.hpp"
#include "vecoffload/solve_result.hpp"

namespace vecoffload {

enum class OracleObjective { P2, P3 };

struct OracleOptions {
    std::uint64_t product_budget = 40'000'000;  // full-enumeration leaf limit
    std::uint64_t column_budget = 30'000'000;   // column-sum scan limit
};

namespace oracle_detail {

inline std::vector<std::array<int, kNumTechs>> task_rows(int units,
                                                         const std::vector<TechKind>& masked) {
    std::vector<std::array<int, kNumTechs>> rows;
    std::array<int, kNumTechs> cur{};
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == masked.size()) {
            cur[tech_index(masked[pos])] = left;
            rows.push_back(cur);
            return;
        }
        for (int u = 0; u <= left; ++u) {
            cur[tech_index(masked[pos])] = u;
            self(self, pos + 1, left - u);
        }
    };
    if (masked.empty()) return rows;
    rec(rec, 0, units);
    return rows;
}

inline double evaluate(OracleObjective obj, const Allocation& rho, const ScenarioConfig& s) {
    return obj == OracleObjective::P2 ? objective_p2(rho, s).total : objective_p3(rho, s);
}

// ---- full product enumeration -------------------------------------------

struct ProductSearch {
    const ScenarioConfig& s;
    OracleObjective obj;
    const std::vector<std::array<int, kNumTechs>>& rows;
    double units;                      // grid pitch denominator per task
    std::vector<double> row_c2_share;  // licensed share per row
    std::vector<double> row_c3_share;  // dsrc share per row
    Allocation rho;
    double best = std::numeric_limits<double>::infinity();
    Allocation best_rho;
    std::uint64_t leaves = 0;

    ProductSearch(const ScenarioConfig& sc, OracleObjective o,
                  const std::vector<std::array<int, kNumTechs>>& r, int grid_units)
        : s(sc), obj(o), rows(r), units(grid_units), rho(sc.num_tasks()),
          best_rho(sc.num_tasks()) {
        row_c2_share.reserve(rows.size());
        row_c3_share.reserve(rows.size());
        for (const auto& row : rows) {
            row_c2_share.push_back(
                (row[tech_index(TechKind::CV2I)] + row[tech_index(TechKind::CV2V)]) / units);
            row_c3_share.push_back(row[tech_index(TechKind::DSRC)] / units);
        }
    }

    void run(std::size_t task, double c2, double c3) {
        const double c2_limit = s.r_cv2x * s.horizon + 1e-9;
        const double c3_limit = s.r_dsrc * s.horizon + 1e-9;
        const double vol = s.traffic_volume(task);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double nc2 = c2 + row_c2_share[r] * vol;
            const double nc3 = c3 + row_c3_share[r] * vol;
            if (nc2 > c2_limit || nc3 > c3_limit) continue;
            for (TechKind t : kAllTechs)
                rho.at(task, t) = rows[r][tech_index(t)] / units;
            if (task + 1 == s.num_tasks()) {
                ++leaves;
                const double v = evaluate(obj, rho, s);
                if (v < best) {
                    best = v;
                    best_rho = rho;
                }
            } else {
                run(task + 1, nc2, nc3);
            }
        }
    }
};

// ---- identical-task column reduction -------------------------------------

inline bool tasks_identical(const ScenarioConfig& s) {
    for (std::size_t i = 1; i < s.num_tasks(); ++i)
        if (!(s.tasks[i] == s.tasks[0])) return false;
    return s.num_tasks() >= 1;
}

// Lays out the column totals tech-by-tech in `order` and cuts the line into
// per-task chunks of one row each.
inline Allocation consecutive_layout(const std::vector<int>& columns,
                                     const std::vector<TechKind>& order, std::size_t num_tasks,
                                     int units) {
    Allocation rho(num_tasks);
    std::size_t task = 0;
    int room = units;
    for (std::size_t t = 0; t < order.size(); ++t) {
        int left = columns[t];
        while (left > 0) {
            const int take = std::min(left, room);
            rho.at(task, order[t]) += take / double(units);
            left -= take;
            room -= take;
            if (room == 0 && task + 1 < num_tasks) {
                ++task;
                room = units;
            }
        }
    }
    return rho;
}

// Per-column decomposition of the unclamped exponent for identical tasks:
// ln(eps)^h_i = intercept_h(columns) - slope_h * rho^h_i.
struct ColumnModel {
    const ScenarioConfig& s;
    int units;
    std::vector<TechKind> masked;
    std::vector<double> unit_cost;   // comm+comp of one full task on tech h
    std::vector<double> slope;       // theta * T * lambda, 0 for LOCAL
    double c2_unit = 0.0, c3_unit = 0.0, c2_limit = 0.0, c3_limit = 0.0;

    ColumnModel(const ScenarioConfig& sc, int grid_units)
        : s(sc), units(grid_units), masked(sc.tech_mask.techs()) {
        const TaskSpec& t = s.tasks[0];
        for (TechKind h : masked) {
            Allocation unit(s.num_tasks());
            unit.at(0, h) = 1.0;
            unit_cost.push_back(comm_cost(0, unit, s) + comp_cost(0, unit, s));
            slope.push_back(h == TechKind::LOCAL ? 0.0 : s.theta * t.t_max * t.arrival_rate);
        }
        c2_limit = s.r_cv2x * s.horizon;
        c3_limit = s.r_dsrc * s.horizon;
        c2_unit = s.traffic_volume(0) / double(units);
        c3_unit = c2_unit;
    }

    bool feasible(const std::vector<int>& cols) const {
        double c2 = 0.0, c3 = 0.0;
        for (std::size_t t = 0; t < masked.size(); ++t) {
            if (masked[t] == TechKind::CV2I || masked[t] == TechKind::CV2V)
                c2 += cols[t] * c2_unit;
            if (masked[t] == TechKind::DSRC) c3 += cols[t] * c3_unit;
        }
        return c2 <= c2_limit + 1e-9 && c3 <= c3_limit + 1e-9;
    }

    // Exponent intercepts G_h for the given columns, recovered from the affine
    // bound at a reference layout: G_h = lneps_unclamped + slope_h * own_share.
    std::vector<double> intercepts(const std::vector<int>& cols) const {
        const Allocation ref = consecutive_layout(cols, masked, s.num_tasks(), units);
        std::vector<double> g(masked.size());
        for (std::size_t t = 0; t < masked.size(); ++t) {
            const double own = ref.at(0, masked[t]);
            g[t] = failure_log_prob_unclamped(masked[t], 0, ref, s, s.tasks[0].t_max) +
                   slope[t] * own;
        }
        return g;
    }

    double linear_cost(const std::vector<int>& cols) const {
        double c = 0.0;
        for (std::size_t t = 0; t < masked.size(); ++t)
            c += unit_cost[t] * cols[t] / double(units);
        return c;
    }

    // Lower bound on the P2 total over every allocation with these columns.
    // Convexity gives sum_i pen_i >= sum_h (C_h/U) * min(0, G_h - slope_h);
    // counting rows gives >= K * min over populated techs. Both are tight when
    // each task runs on a single technology.
    double p2_lower_bound(const std::vector<int>& cols, const std::vector<double>& g) const {
        const double delta = s.tasks[0].priority;
        double b1 = 0.0;
        double worst_pop = 0.0;
        bool any = false;
        for (std::size_t t = 0; t < masked.size(); ++t) {
            if (cols[t] == 0) continue;
            const double w = std::min(0.0, g[t] - slope[t]);
            b1 += w * cols[t] / double(units);
            if (!any || w < worst_pop) worst_pop = w;
            any = true;
        }
        const double b2 = static_cast<double>(s.num_tasks()) * worst_pop;
        return linear_cost(cols) + delta * std::max(b1, b2);
    }

    // Exact P3 total for any allocation with these columns (the relaxed
    // penalty is linear, so only the columns matter).
    double p3_value(const std::vector<int>& cols, const std::vector<double>& g) const {
        const double delta = s.tasks[0].priority;
        const double k = static_cast<double>(s.num_tasks());
        double pen = 0.0;
        for (std::size_t t = 0; t < masked.size(); ++t)
            pen += k * g[t] - slope[t] * cols[t] / double(units);
        return linear_cost(cols) + delta * pen;
    }
};

template <typename Visit>
inline void for_each_column_vector(int total, std::size_t n, Visit&& visit) {
    std::vector<int> cols(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == n) {
            cols[pos] = left;
            visit(cols);
            return;
        }
        for (int u = 0; u <= left; ++u) {
            cols[pos] = u;
            self(self, pos + 1, left - u);
        }
    };
    rec(rec, 0, total);
}

inline std::uint64_t compositions(std::uint64_t total, std::uint64_t parts) {
    // C(total + parts - 1, parts - 1), saturating
    long double v = 1.0L;
    for (std::uint64_t i = 1; i < parts; ++i) v *= static_cast<long double>(total + i) / i;
    return v > 1e18L ? UINT64_MAX : static_cast<std::uint64_t>(v);
}

}  // namespace oracle_detail

// Exact optimum of the chosen objective over the masked allocation grid.
// step must be one of {0.1, 0.05, 0.01}. Throws BudgetExceeded (with the
// point count) when the instance is too large to certify.
inline SolveResult oracle_grid_search(const ScenarioConfig& s, double step,
                                      OracleObjective objective = OracleObjective::P2,
                                      const OracleOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    int units = 0;
    for (int u : {10, 20, 100})
        if (std::abs(step * u - 1.0) < 1e-12) units = u;
    if (units == 0) throw std::invalid_argument("oracle step must be 0.1, 0.05 or 0.01");

    const std::vector<TechKind> masked = s.tech_mask.techs();
    const std::size_t k = s.num_tasks();
    SolveResult res;
    res.solver_name = "oracle";

    const auto rows = oracle_detail::task_rows(units, masked);
    const std::uint64_t per_task = rows.size();
    long double est = 1.0L;
    for (std::size_t i = 0; i < k; ++i) est *= static_cast<long double>(per_task);

    if (est <= static_cast<long double>(opt.product_budget)) {
        oracle_detail::ProductSearch search(s, objective, rows, units);
        search.run(0, 0.0, 0.0);
        if (!std::isfinite(search.best))
            throw LpError("oracle: no feasible grid allocation");
        // rescale the row grid (multiples of `step`) onto the canonical rho
        res.best_rho = search.best_rho;
        res.best_cost = objective_p2(res.best_rho, s);
        res.note = "product-enumeration (" + std::to_string(search.leaves) + " points)";
        res.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    if (oracle_detail::tasks_identical(s)) {
        const int total = units * static_cast<int>(k);
        const std::uint64_t n_cols = oracle_detail::compositions(total, masked.size());
        if (n_cols > opt.column_budget)
            throw BudgetExceeded(n_cols, "oracle: column scan over budget");

        oracle_detail::ColumnModel model(s, units);
        const std::size_t keep = 16;
        // max-heap on the bound keeps the most promising column vectors
        using Entry = std::pair<double, std::vector<int>>;
        std::priority_queue<Entry> top;
        double lb_min = std::numeric_limits<double>::infinity();
        oracle_detail::for_each_column_vector(total, masked.size(), [&](const std::vector<int>& cols) {
            if (!model.feasible(cols)) return;
            const std::vector<double> g = model.intercepts(cols);
            const double v = objective == OracleObjective::P2 ? model.p2_lower_bound(cols, g)
                                                              : model.p3_value(cols, g);
            lb_min = std::min(lb_min, v);
            if (top.size() < keep) {
                top.push({v, cols});
            } else if (v < top.top().first) {
                top.pop();
                top.push({v, cols});
            }
        });
        if (!std::isfinite(lb_min)) throw LpError("oracle: no feasible column vector");

        // candidate allocations: layouts of the best columns plus the pure corners
        std::vector<Allocation> candidates;
        while (!top.empty()) {
            const std::vector<int> cols = top.top().second;
            top.pop();
            std::vector<std::vector<TechKind>> orders = {model.masked};
            const std::vector<double> g = model.intercepts(cols);
            std::vector<TechKind> by_w = model.masked;
            std::sort(by_w.begin(), by_w.end(), [&](TechKind a, TechKind b) {
                const auto ia = std::find(model.masked.begin(), model.masked.end(), a) -
                                model.masked.begin();
                const auto ib = std::find(model.masked.begin(), model.masked.end(), b) -
                                model.masked.begin();
                return g[ia] - model.slope[ia] < g[ib] - model.slope[ib];
            });
            orders.push_back(by_w);
            std::reverse(by_w.begin(), by_w.end());
            orders.push_back(by_w);
            for (const auto& order : orders) {
                std::vector<int> reordered(order.size());
                for (std::size_t t = 0; t < order.size(); ++t) {
                    const auto it = std::find(model.masked.begin(), model.masked.end(), order[t]);
                    reordered[t] = cols[static_cast<std::size_t>(it - model.masked.begin())];
                }
                candidates.push_back(
                    oracle_detail::consecutive_layout(reordered, order, k, units));
            }
        }
        for (TechKind t : masked) {
            std::vector<int> cols(masked.size(), 0);
            cols[static_cast<std::size_t>(std::find(masked.begin(), masked.end(), t) -
                                          masked.begin())] = total;
            if (model.feasible(cols))
                candidates.push_back(oracle_detail::consecutive_layout(cols, masked, k, units));
        }

        double best = std::numeric_limits<double>::infinity();
        Allocation best_rho(k);
        for (const Allocation& cand : candidates) {
            if (!feasibility(cand, s).all_ok()) continue;
            const double v = oracle_detail::evaluate(objective, cand, s);
            if (v < best) {
                best = v;
                best_rho = cand;
            }
        }
        const double tol = 1e-9 * std::max(1.0, std::abs(lb_min));
        if (best <= lb_min + tol) {
            res.best_rho = best_rho;
            res.best_cost = objective_p2(best_rho, s);
            res.note = "column-certificate (" + std::to_string(n_cols) + " columns)";
            res.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return res;
        }
        throw BudgetExceeded(
            static_cast<std::uint64_t>(est > 1e18L ? UINT64_MAX : est),
            "oracle: certificate gap " + std::to_string(best - lb_min) +
                "; exhaustive enumeration over budget");
    }

    throw BudgetExceeded(static_cast<std::uint64_t>(est > 1e18L ? UINT64_MAX : est),
                         "oracle: enumeration over budget");
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_ORACLE_HPP
