#ifndef VECOFFLOAD_QLEARN_HPP
#define VECOFFLOAD_QLEARN_HPP

// Tabular Q-learning over the offloading MDP, plus the federated variants with
// a consensus table.

#include <chrono>
#include <cstdint>
#include <vector>

#include "vecoffload/mdp.hpp"
#include "vecoffload/rng.hpp"
#include "vecoffload/solve_result.hpp"

namespace vecoffload {

inline constexpr std::size_t kRhoLevels = 101;  // percent grid 0..100

// Dense action-value tensor: (masked tech) x task x percent level. Entry
// [t, j, k] values carrying k percent of task j on technology t.
class QTable {
public:
    QTable() = default;
    QTable(std::size_t n_tech, std::size_t n_tasks)
        : n_tech_(n_tech), n_tasks_(n_tasks), v_(n_tech * n_tasks * kRhoLevels, 0.0) {}

    std::size_t n_tech() const { return n_tech_; }
    std::size_t n_tasks() const { return n_tasks_; }

    double& at(std::size_t tech_slot, std::size_t task, std::size_t pct) {
        return v_[(tech_slot * n_tasks_ + task) * kRhoLevels + pct];
    }
    double at(std::size_t tech_slot, std::size_t task, std::size_t pct) const {
        return v_[(tech_slot * n_tasks_ + task) * kRhoLevels + pct];
    }
    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t n_tech_ = 0;
    std::size_t n_tasks_ = 0;
    std::vector<double> v_;
};

enum class Aggregation { Sync, Async };

struct Hyperparams {
    double alpha = 0.1;      // learning rate in (0,1]
    double gamma = 0.9;      // discount in [0,1)
    double p_exploit = 0.9;  // probability of the greedy action
    int n_rounds = 200;      // N_s
    std::uint64_t seed = 0;
    Aggregation aggregation = Aggregation::Sync;
    // The update as printed bootstraps on the best action value of the
    // predecessor state; this switches to the conventional successor state.
    bool standard_bootstrap = false;
    // Common initial value of every Q cell. NaN selects the scenario-neutral
    // fixed point reward(start)/(1-gamma), which keeps untried actions
    // competitive with visited ones whatever the reward sign.
    double q_init = std::numeric_limits<double>::quiet_NaN();
    bool random_tie_break = true;  // greedy ties resolved via the learner RNG
    // Restrict each federated learner to its own technology's increments
    // (the alternative lets every learner range over all masked actions).
    bool own_tech_only = true;
};

namespace detail {

inline std::size_t tech_slot(const std::vector<TechKind>& masked, TechKind tech) {
    for (std::size_t i = 0; i < masked.size(); ++i)
        if (masked[i] == tech) return i;
    throw std::invalid_argument("technology outside the mask");
}

// Percent level (tech, task) reaches after the action. For non-LOCAL techs the
// shift lands exactly at old + delta; LOCAL additionally absorbs the rounding
// residual.
inline std::size_t target_pct(const MdpState& state, const MdpAction& a,
                              const std::vector<TechKind>& masked) {
    if (a.tech != TechKind::LOCAL)
        return static_cast<std::size_t>(state.units[a.task][tech_index(a.tech)] + a.delta_units);
    std::array<int, kNumTechs> row = state.units[a.task];
    shift_row(row, a.tech, a.delta_units, masked);
    return static_cast<std::size_t>(row[tech_index(TechKind::LOCAL)]);
}

inline double action_value(const QTable& q, const MdpState& state, const MdpAction& a,
                           const std::vector<TechKind>& masked) {
    return q.at(tech_slot(masked, a.tech), a.task, target_pct(state, a, masked));
}

}  // namespace detail

// Best attainable Q value among `actions` at `state`; 0 for an empty set.
inline double best_action_value(const QTable& q, const ScenarioConfig& s, const MdpState& state,
                                const std::vector<MdpAction>& actions) {
    const std::vector<TechKind> masked = s.tech_mask.techs();
    double best = 0.0;
    bool any = false;
    for (const MdpAction& a : actions) {
        const double v = detail::action_value(q, state, a, masked);
        if (!any || v > best) best = v;
        any = true;
    }
    return best;
}

// One learning step: writes the cell addressed by the taken action's resulting
// percent level and returns the new entry. `bootstrap_state`/`bootstrap_actions`
// are the state whose best action value feeds the update (the predecessor in
// the printed form, the successor under standard_bootstrap).
inline double q_update(QTable& q, TechKind tech, const MdpAction& action, double reward_val,
                       const MdpState& bootstrap_state,
                       const std::vector<MdpAction>& bootstrap_actions, const MdpState& state_new,
                       const ScenarioConfig& s, const Hyperparams& h) {
    const double boot = best_action_value(q, s, bootstrap_state, bootstrap_actions);
    const std::vector<TechKind> masked = s.tech_mask.techs();
    const std::size_t pct =
        static_cast<std::size_t>(state_new.units[action.task][tech_index(action.tech)]);
    double& cell = q.at(detail::tech_slot(masked, tech), action.task, pct);
    cell = h.alpha * (reward_val + h.gamma * boot) + (1.0 - h.alpha) * cell;
    return cell;
}

// Consensus table: CQ = [(n_update-1) * CQ_prev + mean(locals)] / n_update.
inline QTable aggregate_consensus(const QTable& cq_prev, const std::vector<QTable>& locals,
                                  std::size_t n_update) {
    if (locals.empty() || n_update < 1)
        throw std::invalid_argument("aggregate_consensus: need locals and n_update >= 1");
    for (const QTable& q : locals)
        if (q.n_tech() != cq_prev.n_tech() || q.n_tasks() != cq_prev.n_tasks())
            throw DimensionMismatch("aggregate_consensus: table dimensions differ");
    QTable cq(cq_prev.n_tech(), cq_prev.n_tasks());
    const double inv_nf = 1.0 / static_cast<double>(locals.size());
    const double n = static_cast<double>(n_update);
    for (std::size_t idx = 0; idx < cq.data().size(); ++idx) {
        double sum = 0.0;
        for (const QTable& q : locals) sum += q.data()[idx];
        cq.data()[idx] = ((n - 1.0) * cq_prev.data()[idx] + inv_nf * sum) / n;
    }
    return cq;
}

namespace detail {

struct BestTracker {
    Allocation rho;
    CostBreakdown cost;
    void consider(const Allocation& candidate, const CostBreakdown& c) {
        if (c.total < cost.total) {
            rho = candidate;
            cost = c;
        }
    }
};

// Greedy on the learner's table with probability p_exploit, uniform otherwise.
// Exact-value ties resolve through the learner RNG (or on enumeration order
// when random_tie_break is off).
inline MdpAction select_action(const QTable& q, const MdpState& state,
                               const std::vector<MdpAction>& actions,
                               const std::vector<TechKind>& masked, const Hyperparams& h,
                               Rng& rng) {
    if (rng.bernoulli(h.p_exploit)) {
        std::vector<std::size_t> best{0};
        double best_v = action_value(q, state, actions[0], masked);
        for (std::size_t i = 1; i < actions.size(); ++i) {
            const double v = action_value(q, state, actions[i], masked);
            if (v > best_v) {
                best.assign(1, i);
                best_v = v;
            } else if (v == best_v) {
                best.push_back(i);
            }
        }
        if (best.size() > 1 && h.random_tie_break)
            return actions[best[rng.uniform_index(best.size())]];
        return actions[best.front()];
    }
    return actions[rng.uniform_index(actions.size())];
}

// Resolved common initial cell value.
inline double initial_q_value(const ScenarioConfig& s, const Hyperparams& h) {
    if (!std::isnan(h.q_init)) return h.q_init;
    const double r0 = -objective_p2(initial_state(s).rho, s).total;
    return r0 / (1.0 - h.gamma);
}

// One learner turn on the shared state; `owned` filters the action set, empty
// optional means the learner owns every technology.
inline bool learner_step(QTable& q, std::optional<TechKind> owned, MdpState& state,
                         const ScenarioConfig& s, const std::vector<TechKind>& masked,
                         const Hyperparams& h, Rng& rng, BestTracker& best) {
    const std::vector<MdpAction> actions = enumerate_actions(state, s, owned);
    if (actions.empty()) return false;
    const MdpAction a = select_action(q, state, actions, masked, h, rng);
    const MdpState next = apply_action(state, a, s);
    const CostBreakdown bd = objective_p2(next.rho, s);
    const double r = -bd.total;
    if (h.standard_bootstrap) {
        const std::vector<MdpAction> next_actions = enumerate_actions(next, s, owned);
        q_update(q, a.tech, a, r, next, next_actions, next, s, h);
    } else {
        q_update(q, a.tech, a, r, state, actions, next, s, h);
    }
    best.consider(next.rho, bd);
    state = next;
    return true;
}

}  // namespace detail

// Federated Q-learning: one learner per masked technology acting in turn on a
// shared state each round. Sync mode aggregates once per round after every
// learner updated; async re-aggregates and re-broadcasts after each single
// update, so later learners in a round see consensus built on stale peers.
inline SolveResult run_fql(const ScenarioConfig& s, const Hyperparams& h) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<TechKind> techs = s.tech_mask.techs();
    const std::size_t m = techs.size();

    QTable blank(m, s.num_tasks());
    for (double& v : blank.data()) v = detail::initial_q_value(s, h);
    std::vector<QTable> locals(m, blank);
    QTable cq = blank;
    std::vector<Rng> rngs;
    rngs.reserve(m);
    for (TechKind t : techs) rngs.emplace_back(mix_seed(h.seed, tech_index(t) + 1));

    MdpState state = initial_state(s);
    detail::BestTracker best{state.rho, objective_p2(state.rho, s)};

    SolveResult res;
    res.trajectory.reserve(static_cast<std::size_t>(std::max(0, h.n_rounds)));
    for (int round = 0; round < h.n_rounds; ++round) {
        std::size_t updates = 0;
        for (std::size_t li = 0; li < m; ++li) {
            const std::optional<TechKind> owned =
                h.own_tech_only ? std::optional<TechKind>(techs[li]) : std::nullopt;
            if (!detail::learner_step(locals[li], owned, state, s, techs, h, rngs[li], best))
                continue;
            ++updates;
            if (h.aggregation == Aggregation::Async) {
                cq = aggregate_consensus(cq, locals, updates);
                for (QTable& q : locals) q = cq;
            }
        }
        if (h.aggregation == Aggregation::Sync) {
            cq = aggregate_consensus(cq, locals, m);
            for (QTable& q : locals) q = cq;
        }
        res.trajectory.push_back(best.cost.total);
    }

    res.best_rho = best.rho;
    res.best_cost = best.cost;
    res.solver_name = h.aggregation == Aggregation::Sync ? "sync-fql" : "async-fql";
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Plain Q-learning: a single learner owns every technology; no aggregation.
inline SolveResult run_qlearning(const ScenarioConfig& s, const Hyperparams& h) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<TechKind> techs = s.tech_mask.techs();
    QTable q(techs.size(), s.num_tasks());
    for (double& v : q.data()) v = detail::initial_q_value(s, h);
    Rng rng(mix_seed(h.seed, 0));

    MdpState state = initial_state(s);
    detail::BestTracker best{state.rho, objective_p2(state.rho, s)};

    SolveResult res;
    res.trajectory.reserve(static_cast<std::size_t>(std::max(0, h.n_rounds)));
    for (int round = 0; round < h.n_rounds; ++round) {
        detail::learner_step(q, std::nullopt, state, s, techs, h, rng, best);
        res.trajectory.push_back(best.cost.total);
    }

    res.best_rho = best.rho;
    res.best_cost = best.cost;
    res.solver_name = "ql";
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_QLEARN_HPP
