#include <catch2/catch_amalgamated.hpp>

#include "vecoffload/mdp.hpp"

using namespace vecoffload;

namespace {

ScenarioConfig small_scenario(TechMask mask) {
    ScenarioConfig s = default_scenario("default");
    s.tech_mask = mask;
    return s;
}

MdpState uniform_state(const ScenarioConfig& s) {
    std::vector<std::array<int, kNumTechs>> units(s.num_tasks());
    const auto masked = s.tech_mask.techs();
    for (auto& row : units) {
        row.fill(0);
        int left = kGridUnits;
        for (std::size_t t = 0; t < masked.size(); ++t) {
            const int share = (t + 1 == masked.size()) ? left : kGridUnits / int(masked.size());
            row[tech_index(masked[t])] = share;
            left -= share;
        }
    }
    return make_state(std::move(units), s);
}

}  // namespace

TEST_CASE("initial state is all-local and feasible") {
    const ScenarioConfig s = default_scenario("default");
    const MdpState st = initial_state(s);
    for (std::size_t i = 0; i < s.num_tasks(); ++i) {
        REQUIRE(st.units[i][tech_index(TechKind::LOCAL)] == kGridUnits);
        REQUIRE(st.rho.at(i, TechKind::LOCAL) == 1.0);
    }
    REQUIRE(st.reserved_cv2x == s.r_cv2x * s.horizon);
    REQUIRE(st.reserved_dsrc == s.r_dsrc * s.horizon);
}

TEST_CASE("state reserves equal limit minus usage") {
    const ScenarioConfig s = default_scenario("default");
    const MdpState st = uniform_state(s);
    const FeasibilityReport f = feasibility(st.rho, s);
    REQUIRE_THAT(st.reserved_cv2x, Catch::Matchers::WithinAbs(f.c2_limit - f.c2_usage, 1e-9));
    REQUIRE_THAT(st.reserved_dsrc, Catch::Matchers::WithinAbs(f.c3_limit - f.c3_usage, 1e-9));
}

TEST_CASE("redistribution with floor snap and local residual") {
    const ScenarioConfig s = small_scenario(TechMask::all());
    const MdpState st = uniform_state(s);  // every entry at 20
    const MdpState next = apply_action(st, {TechKind::DSRC, 0, +10}, s);
    // others drop to floor(17.5) = 17, local picks up the two leftover units
    REQUIRE(next.units[0][tech_index(TechKind::DSRC)] == 30);
    REQUIRE(next.units[0][tech_index(TechKind::CV2I)] == 17);
    REQUIRE(next.units[0][tech_index(TechKind::CV2V)] == 17);
    REQUIRE(next.units[0][tech_index(TechKind::CMMW)] == 17);
    REQUIRE(next.units[0][tech_index(TechKind::LOCAL)] == 19);
    // untouched rows stay put
    for (std::size_t i = 1; i < s.num_tasks(); ++i) REQUIRE(next.units[i] == st.units[i]);
}

TEST_CASE("rows keep summing to exactly one hundred units") {
    const ScenarioConfig s = small_scenario(TechMask::all());
    MdpState st = uniform_state(s);
    // walk a few dozen arbitrary legal actions
    for (int step = 0; step < 40; ++step) {
        const auto actions = enumerate_actions(st, s);
        REQUIRE_FALSE(actions.empty());
        st = apply_action(st, actions[static_cast<std::size_t>(step * 7) % actions.size()], s);
        for (std::size_t i = 0; i < s.num_tasks(); ++i) {
            int sum = 0;
            for (TechKind t : kAllTechs) sum += st.units[i][tech_index(t)];
            REQUIRE(sum == kGridUnits);
            REQUIRE_THAT(st.rho.row_sum(i), Catch::Matchers::WithinAbs(1.0, 1e-9));
        }
    }
}

TEST_CASE("exact redistribution is an involution") {
    // 3 masked techs and delta 10: the redistribution lands on the grid with no
    // rounding, so applying the inverse action restores the state.
    const ScenarioConfig s = small_scenario(make_mask({TechKind::CV2V, TechKind::CMMW, TechKind::LOCAL}));
    std::vector<std::array<int, kNumTechs>> units(s.num_tasks());
    for (auto& row : units) {
        row.fill(0);
        row[tech_index(TechKind::CV2V)] = 40;
        row[tech_index(TechKind::CMMW)] = 30;
        row[tech_index(TechKind::LOCAL)] = 30;
    }
    const MdpState st = make_state(std::move(units), s);
    const MdpState up = apply_action(st, {TechKind::CV2V, 1, +10}, s);
    REQUIRE(up.units[1][tech_index(TechKind::CV2V)] == 50);
    REQUIRE(up.units[1][tech_index(TechKind::CMMW)] == 25);
    REQUIRE(up.units[1][tech_index(TechKind::LOCAL)] == 25);
    const MdpState back = apply_action(up, {TechKind::CV2V, 1, -10}, s);
    REQUIRE(back == st);
}

TEST_CASE("saturated shares exclude increase actions") {
    const ScenarioConfig s = small_scenario(TechMask::all());
    MdpState st = initial_state(s);  // local at 1.0 for every task
    for (const MdpAction& a : enumerate_actions(st, s)) {
        if (a.tech == TechKind::LOCAL) REQUIRE(a.delta_units < 0);
        if (a.tech != TechKind::LOCAL) REQUIRE(a.delta_units > 0);  // others sit at 0
    }
}

TEST_CASE("exhausted dsrc budget excludes dsrc increases") {
    ScenarioConfig s = small_scenario(TechMask::all());
    s.tasks.resize(1);
    s.r_dsrc = 30.0;  // volume is 80 Mb, so at most 37 percent fits
    std::vector<std::array<int, kNumTechs>> units(1);
    units[0].fill(0);
    units[0][tech_index(TechKind::DSRC)] = 37;
    units[0][tech_index(TechKind::LOCAL)] = 63;
    const MdpState st = make_state(std::move(units), s);
    REQUIRE(st.reserved_dsrc < 1.0);
    for (const MdpAction& a : enumerate_actions(st, s)) {
        if (a.tech == TechKind::DSRC) REQUIRE(a.delta_units < 0);
    }
    // and pre-filter violations throw
    REQUIRE_THROWS_AS(apply_action(st, {TechKind::DSRC, 0, +10}, s), std::invalid_argument);
}

TEST_CASE("free uniform state offers the full action grid") {
    const ScenarioConfig s = small_scenario(TechMask::all());
    const MdpState st = uniform_state(s);
    const auto actions = enumerate_actions(st, s);
    REQUIRE(actions.size() == 100);  // 5 techs x 5 tasks x 4 deltas, nothing filtered
    // restriction to one technology slices it
    const auto only = enumerate_actions(st, s, TechKind::CMMW);
    REQUIRE(only.size() == 20);
    for (const MdpAction& a : only) REQUIRE(a.tech == TechKind::CMMW);
}

TEST_CASE("boundary shares exclude out-of-range deltas") {
    const ScenarioConfig s = small_scenario(TechMask::all());
    std::vector<std::array<int, kNumTechs>> units(s.num_tasks());
    for (auto& row : units) {
        row.fill(0);
        row[tech_index(TechKind::CV2V)] = 95;
        row[tech_index(TechKind::LOCAL)] = 5;
    }
    const MdpState st = make_state(std::move(units), s);
    for (const MdpAction& a : enumerate_actions(st, s)) {
        if (a.tech == TechKind::CV2V && a.task == 0) REQUIRE(a.delta_units != +10);
    }
}

TEST_CASE("local-only mask is absorbing") {
    const ScenarioConfig s = small_scenario(TechMask::local_only());
    const MdpState st = initial_state(s);
    REQUIRE(enumerate_actions(st, s).empty());
}
