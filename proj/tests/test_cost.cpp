#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "vecoffload/cost.hpp"

using namespace vecoffload;

namespace {

ScenarioConfig one_task(double lambda = 50.0, double o = 10.0) {
    ScenarioConfig s;
    s.tasks.resize(1);
    s.tasks[0].arrival_rate = lambda;
    s.tasks[0].burstiness = o;
    s.tasks[0].t_max = 1.0;
    s.n_vehicles = 1;
    s.theta_veh = 100.0;
    s.theta_epc = 1000.0;
    s.theta = 1.0;
    return s;
}

Allocation mix(const ScenarioConfig& s, std::initializer_list<std::pair<TechKind, double>> shares) {
    Allocation a(s.num_tasks());
    for (std::size_t i = 0; i < s.num_tasks(); ++i) {
        double rest = 1.0;
        for (auto [t, v] : shares) {
            a.at(i, t) = v;
            rest -= v;
        }
        a.at(i, TechKind::LOCAL) += rest;
    }
    return a;
}

Allocation random_allocation(std::size_t k, std::mt19937_64& rng) {
    Allocation a(k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
        double total = 0.0;
        std::array<double, kNumTechs> w{};
        for (auto& x : w) {
            x = -std::log(u(rng));
            total += x;
        }
        for (std::size_t t = 0; t < kNumTechs; ++t) a.at(i, kAllTechs[t]) = w[t] / total;
    }
    return a;
}

}  // namespace

TEST_CASE("communication cost covers only the licensed band") {
    const ScenarioConfig s = one_task();
    REQUIRE(comm_cost(0, mix(s, {{TechKind::CV2I, 0.5}, {TechKind::CV2V, 0.2}}), s) == 42.0);
    REQUIRE(comm_cost(0, mix(s, {{TechKind::DSRC, 0.6}}), s) == 0.0);
    ScenarioConfig free = s;
    free.tasks[0].fee_cv2x = 0.0;
    REQUIRE(comm_cost(0, mix(free, {{TechKind::CV2I, 0.9}}), free) == 0.0);
}

TEST_CASE("computing cost splits infrastructure and on-board tariffs") {
    ScenarioConfig s = one_task();
    s.tasks[0].fee_infra = 2.0;
    const Allocation rho = mix(
        s, {{TechKind::CV2I, 0.5}, {TechKind::CV2V, 0.1}, {TechKind::CMMW, 0.1}, {TechKind::DSRC, 0.1}});
    REQUIRE_THAT(comp_cost(0, rho, s), Catch::Matchers::WithinRel(78.0, 1e-12));
    REQUIRE(comp_cost(0, mix(s, {{TechKind::LOCAL, 1.0}}), s) == 0.0);
    s.tasks[0].complexity = 0.0;
    REQUIRE(comp_cost(0, rho, s) == 0.0);
}

TEST_CASE("p2 objective") {
    SECTION("overloaded all-local world costs nothing and always fails") {
        ScenarioConfig s = one_task(100.0);  // arrival rate equals on-board capacity
        const Allocation rho = mix(s, {{TechKind::LOCAL, 1.0}});
        const CostBreakdown c = objective_p2(rho, s);
        REQUIRE(c.fail_penalty == 0.0);
        REQUIRE(c.total == 0.0);
    }
    SECTION("tight deadline on the local bound") {
        ScenarioConfig s = one_task();
        s.tasks[0].t_max = 0.22;
        const CostBreakdown c = objective_p2(mix(s, {{TechKind::LOCAL, 1.0}}), s);
        REQUIRE_THAT(c.fail_penalty, Catch::Matchers::WithinAbs(-1.0, 1e-12));
        REQUIRE_THAT(c.total, Catch::Matchers::WithinAbs(-1.0, 1e-12));
        REQUIRE(c.comm == 0.0);
        REQUIRE(c.comp == 0.0);
    }
    SECTION("zero priorities remove the penalty") {
        ScenarioConfig s = default_scenario("default");
        for (TaskSpec& t : s.tasks) t.priority = 0.0;
        std::mt19937_64 rng(3);
        const Allocation rho = random_allocation(s.num_tasks(), rng);
        const CostBreakdown c = objective_p2(rho, s);
        REQUIRE(c.fail_penalty == 0.0);
        REQUIRE(c.total == c.comm + c.comp);
    }
    SECTION("only technologies carrying traffic enter the max") {
        ScenarioConfig s = one_task();
        s.theta_veh = 60.0;  // any on-board path is overloaded once local runs alone
        s.tasks[0].t_max = 10.0;
        // pure CV2I: the overloaded on-board techs carry nothing and are ignored
        Allocation rho = mix(s, {{TechKind::CV2I, 1.0}});
        rho.at(0, TechKind::LOCAL) = 0.0;
        const CostBreakdown c = objective_p2(rho, s);
        REQUIRE(c.fail_penalty < 0.0);
    }
}

TEST_CASE("p3 relaxes the max to a sum of unclamped exponents") {
    ScenarioConfig s = one_task();
    s.tasks[0].fee_cv2x = 0.0;
    s.tasks[0].fee_infra = 0.0;
    s.tasks[0].fee_veh = 0.0;
    s.tasks[0].t_max = 0.22;
    s.tech_mask = make_mask({TechKind::CV2V, TechKind::LOCAL});

    const Allocation rho = mix(s, {{TechKind::CV2V, 0.5}});
    // local: theta*(10 - 0.22*50) = -1; cv2v: theta*(10 - 0.22*75) = -6.5
    const CostBreakdown p2 = objective_p2(rho, s);
    REQUIRE_THAT(p2.fail_penalty, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    REQUIRE_THAT(objective_p3(rho, s), Catch::Matchers::WithinAbs(-7.5, 1e-12));

    SECTION("singleton mask coincides with the unclamped p2") {
        ScenarioConfig local_only = s;
        local_only.tech_mask = TechMask::local_only();
        const Allocation all_local = mix(local_only, {{TechKind::LOCAL, 1.0}});
        REQUIRE_THAT(objective_p3(all_local, local_only),
                     Catch::Matchers::WithinAbs(objective_p2(all_local, local_only).total, 1e-12));
    }
    SECTION("zero priorities make p2 and p3 coincide") {
        ScenarioConfig flat = s;
        flat.tasks[0].priority = 0.0;
        REQUIRE(objective_p3(rho, flat) == objective_p2(rho, flat).total);
    }
}

TEST_CASE("feasibility budgets") {
    ScenarioConfig s = default_scenario("default");
    SECTION("all-local uses no bandwidth") {
        const FeasibilityReport r = feasibility(Allocation::all_local(5), s);
        REQUIRE(r.c1_ok);
        REQUIRE(r.c2_ok);
        REQUIRE(r.c3_ok);
        REQUIRE(r.c2_usage == 0.0);
        REQUIRE(r.c3_usage == 0.0);
        REQUIRE(r.c2_limit == 1e4);
        REQUIRE(r.c3_limit == 1e3);
    }
    SECTION("full dsrc overflows the free band") {
        Allocation rho(5);
        for (std::size_t i = 0; i < 5; ++i) rho.at(i, TechKind::DSRC) = 1.0;
        const FeasibilityReport r = feasibility(rho, s);
        REQUIRE_THAT(r.c3_usage, Catch::Matchers::WithinRel(1148.0, 1e-12));
        REQUIRE_FALSE(r.c3_ok);
        REQUIRE(r.c2_ok);
    }
    SECTION("rows off the simplex fail c1") {
        Allocation rho = Allocation::all_local(5);
        rho.at(0, TechKind::LOCAL) = 0.5;
        REQUIRE_FALSE(feasibility(rho, s).c1_ok);
    }
}

TEST_CASE("reward is the negated p2 total") {
    ScenarioConfig s = one_task();
    s.tasks[0].t_max = 0.22;
    const Allocation rho = mix(s, {{TechKind::LOCAL, 1.0}});
    REQUIRE_THAT(reward(rho, s), Catch::Matchers::WithinAbs(1.0, 1e-12));

    std::mt19937_64 rng(5);
    ScenarioConfig d = default_scenario("default");
    for (int rep = 0; rep < 20; ++rep) {
        const Allocation r = random_allocation(d.num_tasks(), rng);
        REQUIRE(reward(r, d) + objective_p2(r, d).total == 0.0);
    }

    SECTION("cost-free world") {
        ScenarioConfig free = one_task();
        free.tasks[0].priority = 0.0;
        for (TaskSpec& t : free.tasks) t.fee_cv2x = t.fee_infra = t.fee_veh = 0.0;
        const Allocation r = mix(free, {{TechKind::CV2I, 0.3}, {TechKind::CV2V, 0.3}});
        REQUIRE(reward(r, free) == 0.0);
    }
    SECTION("raising a fee lowers the reward under licensed traffic") {
        ScenarioConfig pricier = s;
        pricier.tasks[0].fee_cv2x = 2.0;
        const Allocation r = mix(s, {{TechKind::CV2I, 0.5}});
        REQUIRE(reward(r, pricier) < reward(r, s));
    }
}

TEST_CASE("costs and the p3 objective are linear in rho") {
    ScenarioConfig s = default_scenario("default");
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const Allocation a = random_allocation(s.num_tasks(), rng);
        const Allocation b = random_allocation(s.num_tasks(), rng);
        const double alpha = 0.37;
        Allocation c(s.num_tasks());
        for (std::size_t i = 0; i < s.num_tasks(); ++i)
            for (TechKind t : kAllTechs)
                c.at(i, t) = alpha * a.at(i, t) + (1.0 - alpha) * b.at(i, t);
        for (std::size_t i = 0; i < s.num_tasks(); ++i) {
            REQUIRE_THAT(comm_cost(i, c, s),
                         Catch::Matchers::WithinAbs(
                             alpha * comm_cost(i, a, s) + (1 - alpha) * comm_cost(i, b, s), 1e-9));
            REQUIRE_THAT(comp_cost(i, c, s),
                         Catch::Matchers::WithinAbs(
                             alpha * comp_cost(i, a, s) + (1 - alpha) * comp_cost(i, b, s), 1e-9));
        }
        REQUIRE_THAT(objective_p3(c, s),
                     Catch::Matchers::WithinAbs(
                         alpha * objective_p3(a, s) + (1 - alpha) * objective_p3(b, s), 1e-9));
    }
}
