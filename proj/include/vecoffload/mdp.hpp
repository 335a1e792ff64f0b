#ifndef VECOFFLOAD_MDP_HPP
#define VECOFFLOAD_MDP_HPP

// The offloading-selection MDP: grid-quantized allocation states, traffic
// shift actions, and their redistribution rule.

#include <array>
#include <cstdint>
#include <vector>

#include "vecoffload/cost.hpp"
#include "vecoffload/model.hpp"

namespace vecoffload {

// Allocation on the percent grid plus the licensed/DSRC bandwidth left over.
struct MdpState {
    std::vector<std::array<int, kNumTechs>> units;  // percent of task i on tech h
    Allocation rho;
    double reserved_cv2x = 0.0;  // Mb
    double reserved_dsrc = 0.0;  // Mb

    friend bool operator==(const MdpState&, const MdpState&) = default;
};

// Shift `delta` of one task's traffic onto one technology; the change is
// balanced across the other masked technologies.
struct MdpAction {
    TechKind tech = TechKind::LOCAL;
    std::size_t task = 0;
    int delta_units = 0;  // one of {+10, +1, -10, -1}

    friend bool operator==(const MdpAction&, const MdpAction&) = default;
};

inline constexpr std::array<int, 4> kActionDeltas = {+10, +1, -10, -1};

inline MdpState make_state(std::vector<std::array<int, kNumTechs>> units,
                           const ScenarioConfig& s) {
    MdpState st;
    st.units = std::move(units);
    st.rho = Allocation(st.units.size());
    for (std::size_t i = 0; i < st.units.size(); ++i)
        for (TechKind t : kAllTechs)
            st.rho.at(i, t) = st.units[i][tech_index(t)] / static_cast<double>(kGridUnits);
    const FeasibilityReport f = feasibility(st.rho, s);
    st.reserved_cv2x = f.c2_limit - f.c2_usage;
    st.reserved_dsrc = f.c3_limit - f.c3_usage;
    return st;
}

// Start of every search: all traffic processed locally (always feasible).
inline MdpState initial_state(const ScenarioConfig& s) {
    std::vector<std::array<int, kNumTechs>> units(s.num_tasks());
    for (auto& row : units) {
        row.fill(0);
        row[tech_index(TechKind::LOCAL)] = kGridUnits;
    }
    return make_state(std::move(units), s);
}

namespace detail {

// floor(n / d) for d > 0 and any n.
inline int floor_div(long long n, long long d) {
    long long q = n / d;
    if (n % d != 0 && n < 0) --q;
    return static_cast<int>(q);
}

// Applies the redistribution rule in integer percent units. Returns false when
// the resulting row leaves the grid. The chosen tech moves by delta; each other
// masked tech moves by -delta/(m-1), clamped to the grid and rounded down; the
// rounding residual lands on LOCAL so the row keeps summing to 100.
inline bool shift_row(std::array<int, kNumTechs>& row, TechKind tech, int delta,
                      const std::vector<TechKind>& masked) {
    const int m = static_cast<int>(masked.size());
    if (m < 2) return false;
    const int chosen = row[tech_index(tech)] + delta;
    if (chosen < 0 || chosen > kGridUnits) return false;

    std::array<int, kNumTechs> next{};
    next[tech_index(tech)] = chosen;
    int sum = chosen;
    for (TechKind h : masked) {
        if (h == tech) continue;
        const long long numer =
            static_cast<long long>(row[tech_index(h)]) * (m - 1) - delta;
        int v;
        if (numer <= 0)
            v = 0;
        else if (numer >= static_cast<long long>(kGridUnits) * (m - 1))
            v = kGridUnits;
        else
            v = floor_div(numer, m - 1);
        next[tech_index(h)] = v;
        sum += v;
    }
    const std::size_t local = tech_index(TechKind::LOCAL);
    next[local] += kGridUnits - sum;
    if (next[local] < 0 || next[local] > kGridUnits) return false;
    row = next;
    return true;
}

}  // namespace detail

// Applies a legal action. Throws std::invalid_argument on actions that leave
// the grid or break C2/C3; callers are expected to pre-filter via
// enumerate_actions.
inline MdpState apply_action(const MdpState& state, const MdpAction& a, const ScenarioConfig& s) {
    if (a.task >= state.units.size()) throw std::invalid_argument("apply_action: task out of range");
    if (!s.tech_mask.contains(a.tech))
        throw std::invalid_argument("apply_action: technology outside the mask");
    std::vector<std::array<int, kNumTechs>> units = state.units;
    if (!detail::shift_row(units[a.task], a.tech, a.delta_units, s.tech_mask.techs()))
        throw std::invalid_argument("apply_action: action leaves the allocation grid");
    MdpState next = make_state(std::move(units), s);
    if (next.reserved_cv2x < -1e-9 || next.reserved_dsrc < -1e-9)
        throw std::invalid_argument("apply_action: action exceeds a bandwidth budget");
    return next;
}

// All actions whose application yields an in-range, C1-C3-feasible state.
// `only_tech` restricts to one learner's technology. Deterministic order:
// tech, task, then {+10, +1, -10, -1}.
inline std::vector<MdpAction> enumerate_actions(const MdpState& state, const ScenarioConfig& s,
                                                std::optional<TechKind> only_tech = std::nullopt) {
    std::vector<MdpAction> out;
    const std::vector<TechKind> masked = s.tech_mask.techs();
    if (masked.size() < 2) return out;
    for (TechKind tech : masked) {
        if (only_tech && tech != *only_tech) continue;
        for (std::size_t task = 0; task < state.units.size(); ++task) {
            for (int delta : kActionDeltas) {
                std::array<int, kNumTechs> row = state.units[task];
                if (!detail::shift_row(row, tech, delta, masked)) continue;
                // budget check mirroring feasibility() term for term, so the
                // verdict agrees with apply_action's recomputation exactly
                double c2 = 0.0, c3 = 0.0;
                for (std::size_t j = 0; j < state.units.size(); ++j) {
                    const std::array<int, kNumTechs>& r = (j == task) ? row : state.units[j];
                    const double vol = s.traffic_volume(j);
                    c2 += (r[tech_index(TechKind::CV2I)] / static_cast<double>(kGridUnits) +
                           r[tech_index(TechKind::CV2V)] / static_cast<double>(kGridUnits)) *
                          vol;
                    c3 += r[tech_index(TechKind::DSRC)] / static_cast<double>(kGridUnits) * vol;
                }
                if (c2 > s.r_cv2x * s.horizon + 1e-9 || c3 > s.r_dsrc * s.horizon + 1e-9) continue;
                out.push_back({tech, task, delta});
            }
        }
    }
    return out;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_MDP_HPP
