#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "vecoffload/config_io.hpp"
#include "vecoffload/model.hpp"

using namespace vecoffload;

TEST_CASE("tech kinds have the stable ordering") {
    REQUIRE(tech_index(TechKind::DSRC) == 0);
    REQUIRE(tech_index(TechKind::CV2I) == 1);
    REQUIRE(tech_index(TechKind::CV2V) == 2);
    REQUIRE(tech_index(TechKind::CMMW) == 3);
    REQUIRE(tech_index(TechKind::LOCAL) == 4);
    REQUIRE(kAllTechs.size() == 5);
    REQUIRE(parse_tech("cv2i") == TechKind::CV2I);
    REQUIRE(!parse_tech("wimax").has_value());
}

TEST_CASE("default preset carries the mixed-traffic parameters") {
    const ScenarioConfig s = default_scenario("default");
    REQUIRE(s.num_tasks() == 5);
    REQUIRE(s.n_vehicles == 5);
    REQUIRE(s.theta_veh == 1e3);
    REQUIRE(s.theta_epc == 1e4);
    REQUIRE(s.r_dsrc == 1e3);
    REQUIRE(s.r_cv2x == 1e4);
    const std::array<double, 5> lambda = {20, 70, 30, 80, 8};
    const std::array<double, 5> burst = {60, 400, 90, 380, 10};
    const std::array<double, 5> tmax = {2, 6, 2.5, 3, 1};
    for (std::size_t i = 0; i < 5; ++i) {
        REQUIRE(s.tasks[i].arrival_rate == lambda[i]);
        REQUIRE(s.tasks[i].burstiness == burst[i]);
        REQUIRE(s.tasks[i].t_max == tmax[i]);
        REQUIRE(s.tasks[i].priority == 1.0);
    }
    REQUIRE(s.tasks[4].arrival_rate == 8.0);
    REQUIRE(s.tasks[4].burstiness == 10.0);
    REQUIRE(s.tasks[4].t_max == 1.0);
}

TEST_CASE("light preset has five identical tasks") {
    const ScenarioConfig s = default_scenario("light");
    for (const TaskSpec& t : s.tasks) {
        REQUIRE(t.arrival_rate == 5.0);
        REQUIRE(t.burstiness == 2.0);
        REQUIRE(t.t_max == 1.0);
    }
    REQUIRE(default_scenario("heavy").tasks[2].arrival_rate == 100.0);
}

TEST_CASE("unknown preset is rejected") {
    REQUIRE_THROWS_AS(default_scenario("frobnicate"), UnknownPresetError);
}

TEST_CASE("presets validate cleanly") {
    for (const char* name : {"default", "light", "heavy"})
        REQUIRE(validate(default_scenario(name)).empty());
}

TEST_CASE("validate reports capacity ordering and emptiness") {
    ScenarioConfig s = default_scenario("default");
    s.theta_epc = 10;
    s.theta_veh = 100;
    auto v = validate(s);
    REQUIRE(std::find(v.begin(), v.end(), "theta_epc < theta_veh") != v.end());

    s = default_scenario("default");
    s.tasks.clear();
    v = validate(s);
    REQUIRE(std::find(v.begin(), v.end(), "tasks empty") != v.end());

    s = default_scenario("default");
    s.tech_mask = make_mask({TechKind::DSRC});
    v = validate(s);
    REQUIRE_FALSE(v.empty());
}

TEST_CASE("load_scenario passes fields through and fills defaults") {
    const ScenarioConfig s = load_scenario("n_vehicles = 1\n");
    REQUIRE(s.n_vehicles == 1);
    // untouched keys come from the default preset
    REQUIRE(s.theta_veh == 1e3);
    REQUIRE(s.mac.w0 == 16.0);
    REQUIRE(s.mac.backoff_threshold == 5);
    REQUIRE(s.num_tasks() == 5);
}

TEST_CASE("load_scenario rejects invariant violations with the offending key") {
    try {
        load_scenario("theta = -1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.key().find("theta") != std::string::npos);
    }
}

TEST_CASE("load_scenario rejects unknown keys and malformed lines") {
    REQUIRE_THROWS_AS(load_scenario("thetaa = 1\n"), ConfigError);
    REQUIRE_THROWS_AS(load_scenario("theta 1\n"), ConfigError);
    REQUIRE_THROWS_AS(load_scenario("theta = x\n"), ConfigError);
    REQUIRE_THROWS_AS(load_scenario("[[mac]]\nw0 = 8\n"), ConfigError);
}

TEST_CASE("scenario documents parse tasks, mask and mac sections") {
    const char* doc = R"(
# two-task scenario
n_vehicles = 3
theta = 0.5
tech_mask = ["CV2I", "CV2V", "LOCAL"]
rmmw_control = true

[mac]
w0 = 32
backoff_threshold = 4
retry_limit = 6
collision_prob = 0.25

[[task]]
lambda = 10
burstiness = 4
t_max = 0.5

[[task]]
lambda = 20
t_max = 1.5
fee_cv2x = 2.5
)";
    const ScenarioConfig s = load_scenario(doc);
    REQUIRE(s.num_tasks() == 2);
    REQUIRE(s.n_vehicles == 3);
    REQUIRE(s.theta == 0.5);
    REQUIRE(s.tech_mask == make_mask({TechKind::CV2I, TechKind::CV2V, TechKind::LOCAL}));
    REQUIRE(s.rmmw_control);
    REQUIRE(s.mac.w0 == 32.0);
    REQUIRE(s.mac.retry_limit == 6);
    REQUIRE(s.tasks[0].burstiness == 4.0);
    REQUIRE(s.tasks[1].burstiness == 0.0);   // optional, defaulted
    REQUIRE(s.tasks[1].fee_cv2x == 2.5);
    REQUIRE(s.tasks[1].priority == 1.0);
}

TEST_CASE("serialize round-trips scenarios exactly") {
    ScenarioConfig s = default_scenario("default");
    s.theta = 0.12345678901234567;
    s.rmmw_control = true;
    s.dsrc_access_overhead_mb = 3.5;
    s.tasks[2].fee_veh = 1.0 / 3.0;
    const ScenarioConfig back = load_scenario(serialize(s));
    REQUIRE(back == s);

    const ScenarioConfig light = default_scenario("light");
    REQUIRE(load_scenario(serialize(light)) == light);
}

TEST_CASE("allocation helpers and violations") {
    Allocation a = Allocation::all_local(3);
    REQUIRE(a.row_sum(0) == 1.0);
    REQUIRE(allocation_violations(a, TechMask::all()).empty());
    REQUIRE(allocation_violations(a, TechMask::local_only()).empty());

    Allocation u = Allocation::uniform(2, make_mask({TechKind::CV2V, TechKind::LOCAL}));
    REQUIRE(u.at(0, TechKind::CV2V) == 0.5);
    REQUIRE(allocation_violations(u, make_mask({TechKind::CV2V, TechKind::LOCAL})).empty());
    // CV2V traffic is outside a LOCAL-only mask
    REQUIRE_FALSE(allocation_violations(u, TechMask::local_only()).empty());

    Allocation bad(1);
    bad.at(0, TechKind::LOCAL) = 0.7;
    REQUIRE_FALSE(allocation_violations(bad, TechMask::all()).empty());
}

TEST_CASE("framework presets") {
    REQUIRE(framework_presets().size() == 4);
    auto rmmw = find_framework("CV2X-RMMW");
    REQUIRE(rmmw.has_value());
    REQUIRE(rmmw->rmmw_control);
    REQUIRE(rmmw->mask == make_mask({TechKind::CV2I, TechKind::CV2V, TechKind::LOCAL}));
    auto full = find_framework("CV2X-DSRC-CMMW");
    REQUIRE(full->mask == TechMask::all());
    REQUIRE(!find_framework("CV2X-LTE").has_value());

    const ScenarioConfig s = apply_framework(default_scenario("light"), *rmmw);
    REQUIRE(s.tech_mask == rmmw->mask);
    REQUIRE(s.rmmw_control);
}
