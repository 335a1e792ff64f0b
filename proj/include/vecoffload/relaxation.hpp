#ifndef VECOFFLOAD_RELAXATION_HPP
#define VECOFFLOAD_RELAXATION_HPP

// LP relaxation of the offloading problem: the P3 objective is affine in rho
// and C1-C3 are linear, so the relaxed optimum comes from a small simplex
// solve over the task rows.

#include <algorithm>
#include <chrono>
#include <sstream>

#include "vecoffload/cost.hpp"
#include "vecoffload/simplex.hpp"
#include "vecoffload/solve_result.hpp"

namespace vecoffload {

namespace detail {

// Affine extension of a scalar function of the allocation matrix, recovered
// from evaluations at the zero matrix and the unit matrices.
struct AffineOverRho {
    double c0 = 0.0;
    std::vector<double> coef;  // K x 5, row-major

    double coef_at(std::size_t task, TechKind t) const {
        return coef[task * kNumTechs + tech_index(t)];
    }
};

template <typename F>
AffineOverRho extract_affine(std::size_t num_tasks, F&& f) {
    AffineOverRho out;
    Allocation zero(num_tasks);
    out.c0 = f(zero);
    out.coef.resize(num_tasks * kNumTechs, 0.0);
    for (std::size_t i = 0; i < num_tasks; ++i) {
        for (TechKind t : kAllTechs) {
            Allocation unit(num_tasks);
            unit.at(i, t) = 1.0;
            out.coef[i * kNumTechs + tech_index(t)] = f(unit) - out.c0;
        }
    }
    return out;
}

struct RelaxationLp {
    std::vector<std::pair<std::size_t, TechKind>> vars;  // LP column -> (task, tech)
    LpProblem base;                                      // rows C1 + C2 + C3, slacks included
    std::size_t n_structural = 0;                        // columns before the slacks
};

inline RelaxationLp build_base_lp(const ScenarioConfig& s) {
    RelaxationLp lp;
    const std::vector<TechKind> masked = s.tech_mask.techs();
    const std::size_t k = s.num_tasks();
    for (std::size_t i = 0; i < k; ++i)
        for (TechKind t : masked) lp.vars.push_back({i, t});
    lp.n_structural = lp.vars.size();
    lp.base.n = lp.n_structural + 2;  // C2 and C3 slacks

    // C1: each task row sums to one
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> row(lp.base.n, 0.0);
        for (std::size_t v = 0; v < lp.vars.size(); ++v)
            if (lp.vars[v].first == i) row[v] = 1.0;
        lp.base.a.push_back(std::move(row));
        lp.base.b.push_back(1.0);
    }
    // C2: licensed-band volume budget
    {
        std::vector<double> row(lp.base.n, 0.0);
        for (std::size_t v = 0; v < lp.vars.size(); ++v)
            if (lp.vars[v].second == TechKind::CV2I || lp.vars[v].second == TechKind::CV2V)
                row[v] = s.traffic_volume(lp.vars[v].first);
        row[lp.n_structural] = 1.0;
        lp.base.a.push_back(std::move(row));
        lp.base.b.push_back(s.r_cv2x * s.horizon);
    }
    // C3: DSRC volume budget
    {
        std::vector<double> row(lp.base.n, 0.0);
        for (std::size_t v = 0; v < lp.vars.size(); ++v)
            if (lp.vars[v].second == TechKind::DSRC) row[v] = s.traffic_volume(lp.vars[v].first);
        row[lp.n_structural + 1] = 1.0;
        lp.base.a.push_back(std::move(row));
        lp.base.b.push_back(s.r_dsrc * s.horizon);
    }
    return lp;
}

inline std::vector<double> project_objective(const RelaxationLp& lp, const AffineOverRho& f,
                                             std::size_t n_cols) {
    std::vector<double> c(n_cols, 0.0);
    for (std::size_t v = 0; v < lp.vars.size(); ++v)
        c[v] = f.coef_at(lp.vars[v].first, lp.vars[v].second);
    return c;
}

inline double optimize_affine(const RelaxationLp& lp, const AffineOverRho& f, bool maximize) {
    LpProblem p = lp.base;
    p.c = project_objective(lp, f, p.n);
    if (maximize)
        for (double& x : p.c) x = -x;
    p.c0 = 0.0;
    const LpSolution sol = solve_lp(p);
    const double v = f.c0 + (maximize ? -sol.value : sol.value);
    return v;
}

inline Allocation to_allocation(const RelaxationLp& lp, const std::vector<double>& x,
                                std::size_t k) {
    Allocation rho(k);
    for (std::size_t v = 0; v < lp.vars.size(); ++v)
        rho.at(lp.vars[v].first, lp.vars[v].second) = std::max(0.0, x[v]);
    return rho;
}

}  // namespace detail

// Largest-remainder rounding of each row to the percent grid over the masked
// technologies, followed by shifting whole units onto LOCAL while a bandwidth
// budget is exceeded.
inline Allocation snap_to_grid(const Allocation& rho, const ScenarioConfig& s) {
    const std::vector<TechKind> masked = s.tech_mask.techs();
    Allocation out(rho.num_tasks());
    for (std::size_t i = 0; i < rho.num_tasks(); ++i) {
        int assigned = 0;
        std::vector<std::pair<double, TechKind>> remainders;
        std::array<int, kNumTechs> units{};
        for (TechKind t : masked) {
            const double scaled = std::clamp(rho.at(i, t), 0.0, 1.0) * kGridUnits;
            const int base = static_cast<int>(std::floor(scaled + 1e-12));
            units[tech_index(t)] = base;
            assigned += base;
            remainders.push_back({scaled - base, t});
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::size_t idx = 0;
        for (int left = kGridUnits - assigned; left > 0; --left, ++idx)
            ++units[tech_index(remainders[idx % remainders.size()].second)];
        for (TechKind t : masked) out.at(i, t) = units[tech_index(t)] / double(kGridUnits);
    }

    auto over_budget = [&](TechKind a, TechKind b, double limit) {
        double usage = 0.0;
        for (std::size_t i = 0; i < out.num_tasks(); ++i)
            usage += (out.at(i, a) + (b == a ? 0.0 : out.at(i, b))) * s.traffic_volume(i);
        return usage > limit + 1e-9;
    };
    const double unit = 1.0 / kGridUnits;
    while (over_budget(TechKind::DSRC, TechKind::DSRC, s.r_dsrc * s.horizon)) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < out.num_tasks(); ++i)
            if (out.at(i, TechKind::DSRC) > out.at(worst, TechKind::DSRC)) worst = i;
        out.at(worst, TechKind::DSRC) -= unit;
        out.at(worst, TechKind::LOCAL) += unit;
    }
    while (over_budget(TechKind::CV2I, TechKind::CV2V, s.r_cv2x * s.horizon)) {
        std::size_t worst = 0;
        TechKind which = TechKind::CV2I;
        double best = -1.0;
        for (std::size_t i = 0; i < out.num_tasks(); ++i)
            for (TechKind t : {TechKind::CV2I, TechKind::CV2V})
                if (out.at(i, t) > best) {
                    best = out.at(i, t);
                    worst = i;
                    which = t;
                }
        out.at(worst, which) -= unit;
        out.at(worst, TechKind::LOCAL) += unit;
    }
    return out;
}

// Solves the relaxed problem exactly. When some technology's residual rate B
// changes sign over the polytope, the feasible set is restricted to keep that
// B positive and the restriction is reported in SolveResult::note.
inline SolveResult run_relaxation(const ScenarioConfig& s) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t k = s.num_tasks();
    detail::RelaxationLp lp = detail::build_base_lp(s);

    const detail::AffineOverRho p3 =
        detail::extract_affine(k, [&](const Allocation& rho) { return objective_p3(rho, s); });

    // sign-stability audit of every masked B over the polytope
    struct Restriction {
        TechKind tech;
        std::size_t task;
        detail::AffineOverRho form;
    };
    std::vector<Restriction> restrictions;
    double min_max_b = std::numeric_limits<double>::infinity();
    for (TechKind t : s.tech_mask.techs()) {
        for (std::size_t i = 0; i < k; ++i) {
            auto form = detail::extract_affine(k, [&](const Allocation& rho) {
                return bound_coefficients(t, i, rho, s).den_b;
            });
            const double lo = detail::optimize_affine(lp, form, /*maximize=*/false);
            if (lo > 0.0) continue;
            const double hi = detail::optimize_affine(lp, form, /*maximize=*/true);
            if (hi <= 0.0) continue;  // overloaded everywhere; the affine form stands as written
            restrictions.push_back({t, i, std::move(form)});
            min_max_b = std::min(min_max_b, hi);
        }
    }

    LpProblem p = lp.base;
    std::ostringstream note;
    if (!restrictions.empty()) {
        const double scale = std::max(s.theta_veh, s.theta_epc);
        const double b_min = std::min(1e-6 * scale, 0.5 * min_max_b);
        note << "restricted to B >= " << b_min << " for";
        const std::size_t n_old = p.n;
        p.n += restrictions.size();
        for (auto& row : p.a) row.resize(p.n, 0.0);
        for (std::size_t r = 0; r < restrictions.size(); ++r) {
            std::vector<double> row(p.n, 0.0);
            for (std::size_t v = 0; v < lp.vars.size(); ++v)
                row[v] = restrictions[r].form.coef_at(lp.vars[v].first, lp.vars[v].second);
            row[n_old + r] = -1.0;  // surplus
            p.a.push_back(std::move(row));
            p.b.push_back(b_min - restrictions[r].form.c0);
            note << " " << tech_name(restrictions[r].tech) << "[" << restrictions[r].task << "]";
        }
    }

    p.c = detail::project_objective(lp, p3, p.n);
    p.c0 = p3.c0;
    const LpSolution sol = solve_lp(p);

    SolveResult res;
    res.best_rho = detail::to_allocation(lp, sol.x, k);
    res.best_cost = objective_p2(res.best_rho, s);
    res.snapped_rho = snap_to_grid(res.best_rho, s);
    res.snapped_cost = objective_p2(*res.snapped_rho, s);
    res.solver_name = "relax";
    res.note = note.str();
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// The relaxed objective value at the LP optimum (for audits).
inline double relaxation_objective(const SolveResult& r, const ScenarioConfig& s) {
    return objective_p3(r.best_rho, s);
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_RELAXATION_HPP
