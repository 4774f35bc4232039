#include "support.hpp"

#include <continuum/routing.hpp>
#include <continuum/simulation.hpp>
#include <continuum/topology.hpp>
#include <continuum/workload.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace continuum;
using testing_support::make_task;

namespace {

/// One node behind one base station; the link rate is in Mbit/s.
Scenario single_node(ResourceVector capacity, double link_mbps = 1000.0, std::int64_t link_latency = 0)
{
    Scenario s;
    s.cloud_enabled = false;
    s.nodes = {{"N", Tier::edge, capacity, 100.0, 200.0}};
    s.elements = {{"BS1", ElementKind::base_station}};
    s.links = {{"BS1", "N", link_mbps, link_latency, unconstrained_delay_ms}};
    s.users = {{"u", "BS1"}};
    s.horizon = 100;
    return s;
}

Scenario random_paper_run(std::mt19937_64& rng, bool cloud)
{
    Scenario s = builtin_paper_topology(cloud);
    WorkloadSpec spec = std::uniform_int_distribution<int>(0, 1)(rng) ? WorkloadSpec::low() : WorkloadSpec::high();
    spec.tasks_per_user = std::uniform_int_distribution<int>(1, 4)(rng);
    spec.arrival_window = std::uniform_int_distribution<int>(0, 300)(rng);
    s.tasks = generate_workload(spec, s.users, rng());
    return s;
}

} // namespace

TEST(Simulate, ToyTetrisHasNoDrops)
{
    const RunReport r = simulate(builtin_toy_scenario(), "tetris", 0);
    EXPECT_EQ(r.drop_sla_violations, 0);
    EXPECT_EQ(r.ledger[0].node, "S2");
    EXPECT_EQ(r.ledger[1].node, "S2");
    EXPECT_EQ(r.ledger[2].node, "S1");
}

TEST(Simulate, ToyProximityDropsTheThirdApplication)
{
    const RunReport r = simulate(builtin_toy_scenario(), "proximity", 0);
    EXPECT_EQ(r.drop_sla_violations, 1);
    EXPECT_FALSE(r.ledger[0].timing.dropped);
    EXPECT_FALSE(r.ledger[1].timing.dropped);
    EXPECT_TRUE(r.ledger[2].timing.dropped);
    EXPECT_EQ(r.ledger[2].task.id, "APP3");
}

TEST(Simulate, HugeDeadlinesMeanNoLatencyViolations)
{
    Scenario toy = builtin_toy_scenario();
    for (auto& t : toy.tasks)
        t.deadline = 1000000;
    for (const char* strategy : {"tetris", "proximity", "optimal"})
        EXPECT_EQ(simulate(toy, strategy, 0).latency_sla_violations, 0) << strategy;
}

TEST(Simulate, RejectsUnknownStrategyAndInvalidScenario)
{
    EXPECT_THROW(simulate(builtin_toy_scenario(), "random", 0), UnknownStrategy);
    Scenario bad = builtin_toy_scenario();
    bad.tasks[0].user = "ghost";
    EXPECT_THROW(simulate(bad, "tetris", 0), ValidationError);
}

TEST(Simulate, TransferDelayIsRoundedUpIntoTheFinishTime)
{
    Scenario s = single_node({4, 4, 4}, 3000.0); // 3 megabits per ms
    s.tasks = {make_task("t", "u", {1, 1, 1}, 10, 7.0, 4, 100)};
    const RunReport r = simulate(s, "tetris", 0);
    const auto& timing = r.ledger[0].timing;
    EXPECT_EQ(timing.start, 4);
    EXPECT_EQ(timing.comm_delay, 3);
    EXPECT_EQ(timing.finish, 17);
    EXPECT_DOUBLE_EQ(r.average_latency, 13.0);
}

TEST(Simulate, PropagationOptionAddsRouteLatency)
{
    Scenario s = single_node({4, 4, 4}, 3000.0, 5);
    s.tasks = {make_task("t", "u", {1, 1, 1}, 10, 7.0, 0, 100)};
    EXPECT_EQ(simulate(s, Strategy::tetris, 0).ledger[0].timing.finish, 13);
    EXPECT_EQ(simulate(s, Strategy::tetris, 0, {.propagation_delay = true}).ledger[0].timing.finish, 18);
}

TEST(Simulate, BlockedTaskWaitsForRelease)
{
    Scenario s = single_node({4, 4, 4});
    s.tasks = {make_task("a", "u", {3, 1, 1}, 10, 0, 0, 50), make_task("b", "u", {3, 1, 1}, 10, 0, 0, 15)};
    for (const char* strategy : {"tetris", "proximity"}) {
        const RunReport r = simulate(s, strategy, 0);
        EXPECT_EQ(r.drop_sla_violations, 0);
        // Tetris serves the tighter deadline first; proximity serves by id.
        const bool tetris = std::string(strategy) == "tetris";
        const auto& first = r.ledger[tetris ? 1 : 0].timing;
        const auto& second = r.ledger[tetris ? 0 : 1].timing;
        EXPECT_EQ(first.start, 0) << strategy;
        EXPECT_EQ(second.start, 10) << strategy;
        EXPECT_EQ(second.finish, 20) << strategy;
        EXPECT_EQ(r.latency_sla_violations, tetris ? 0 : 1) << strategy;
    }
}

TEST(Simulate, UnfinishedAtHorizonIsADrop)
{
    Scenario s = single_node({4, 4, 4});
    s.horizon = 20;
    s.tasks = {make_task("late", "u", {1, 1, 1}, 30, 0, 0, 100), make_task("fits", "u", {1, 1, 1}, 20, 0, 0, 100)};
    const RunReport r = simulate(s, "tetris", 0);
    EXPECT_TRUE(r.ledger[0].timing.dropped);
    EXPECT_EQ(r.ledger[0].node, "N"); // started, never delivered
    EXPECT_FALSE(r.ledger[1].timing.dropped);
    EXPECT_EQ(r.ledger[1].timing.finish, 20);
    EXPECT_EQ(r.drop_sla_violations, 1);
    EXPECT_EQ(r.delivered(), 1);
}

TEST(Simulate, ArrivalAfterTheHorizonIsADrop)
{
    Scenario s = single_node({4, 4, 4});
    s.tasks = {make_task("never", "u", {1, 1, 1}, 1, 0, 500, 100)};
    const RunReport r = simulate(s, "proximity", 0);
    EXPECT_EQ(r.drop_sla_violations, 1);
    EXPECT_FALSE(r.ledger[0].node.has_value());
    EXPECT_EQ(r.average_latency, 0.0);
}

TEST(Simulate, EnergyAndPowerAccounting)
{
    Scenario s = single_node({4, 4, 4});
    s.horizon = 20;
    s.tasks = {make_task("t", "u", {2, 1, 1}, 10, 0, 0, 100)};
    const RunReport r = simulate(s, "tetris", 0);
    // 10 ms at 150 W, 10 ms at 100 W.
    EXPECT_NEAR(r.energy, 2.5, 1e-12);
    EXPECT_NEAR(r.power_consumption, 125.0, 1e-9);
    // Half the CPU for 10 ms of the 100 W dynamic range.
    EXPECT_NEAR(r.ledger[0].timing.energy, 0.5, 1e-12);
    EXPECT_NEAR(r.objective, 10.0 + 0.001 * 0.5, 1e-12);
}

TEST(Simulate, LinkBudgetDelaysAdmission)
{
    Scenario s = single_node({8, 8, 8}, 1000.0); // 1 megabit per ms
    s.links[0].max_delay = 10.0;
    s.tasks = {make_task("a", "u", {1, 1, 1}, 5, 8.0, 0, 100), make_task("b", "u", {1, 1, 1}, 5, 8.0, 0, 100)};
    const RunReport r = simulate(s, "tetris", 0);
    EXPECT_EQ(r.ledger[0].timing.start, 0);
    EXPECT_EQ(r.ledger[1].timing.start, r.ledger[0].timing.finish);
}

TEST(Invariants, LedgerIsComplete)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const Scenario s = random_paper_run(rng, trial % 2 == 0);
        for (Strategy strategy : {Strategy::tetris, Strategy::proximity}) {
            const RunReport r = simulate(s, strategy, 0);
            ASSERT_EQ(r.ledger.size(), s.tasks.size());
            std::int64_t drops = 0, late = 0;
            double latency = 0.0;
            for (std::size_t i = 0; i < r.ledger.size(); ++i) {
                const auto& e = r.ledger[i];
                EXPECT_EQ(e.task, s.tasks[i]);
                if (e.timing.dropped) {
                    ++drops;
                    continue;
                }
                ASSERT_TRUE(e.node.has_value());
                EXPECT_LE(e.timing.finish, s.horizon);
                EXPECT_GE(e.timing.start, e.task.arrival);
                EXPECT_EQ(e.timing.finish, e.timing.start + e.task.processing_time + e.timing.comm_delay);
                EXPECT_EQ(e.timing.violation, deadline_violation(e.timing.finish, e.task));
                late += e.timing.violation > 0;
                latency += static_cast<double>(e.timing.finish - e.task.arrival);
            }
            EXPECT_EQ(r.drop_sla_violations, drops);
            EXPECT_EQ(r.latency_sla_violations, late);
            EXPECT_EQ(r.delivered() + r.drop_sla_violations, static_cast<std::int64_t>(s.tasks.size()));
            if (r.delivered() > 0) {
                EXPECT_NEAR(r.average_latency, latency / static_cast<double>(r.delivered()), 1e-9);
            }
        }
    }
}

TEST(Invariants, LongerHorizonNeverAddsDrops)
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        Scenario s = random_paper_run(rng, trial % 2 == 1);
        for (Strategy strategy : {Strategy::tetris, Strategy::proximity}) {
            std::int64_t previous = std::numeric_limits<std::int64_t>::max();
            for (std::int64_t h : {50, 150, 400, 1000, 2500}) {
                s.horizon = h;
                const auto drops = simulate(s, strategy, 0).drop_sla_violations;
                EXPECT_LE(drops, previous) << "horizon " << h;
                previous = drops;
            }
        }
    }
}

TEST(Invariants, AveragePowerWithinIdleAndMax)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Scenario s = random_paper_run(rng, trial % 2 == 0);
        double idle = 0.0, max = 0.0;
        for (const auto* n : s.active_nodes()) {
            idle += n->power_idle;
            max += n->power_max;
        }
        for (Strategy strategy : {Strategy::tetris, Strategy::proximity}) {
            const RunReport r = simulate(s, strategy, 0);
            EXPECT_GE(r.power_consumption, idle - 1e-9);
            EXPECT_LE(r.power_consumption, max + 1e-9);
        }
    }
}

TEST(Invariants, LedgerReplaysWithinCapacityAndLinkBudgets)
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        Scenario s = random_paper_run(rng, trial % 2 == 0);
        for (auto& l : s.links)
            l.max_delay = 120.0; // make the link budgets bind
        const RouteTable routes = build_routes(s);
        auto route_of = [&](const Task& t, const std::string& node) { return routes.find(t.user, node)->links; };
        for (Strategy strategy : {Strategy::tetris, Strategy::proximity}) {
            const RunReport r = simulate(s, strategy, 0);
            std::set<std::int64_t> instants;
            for (const auto& e : r.ledger)
                if (e.node)
                    instants.insert(e.timing.start);
            for (std::int64_t now : instants) {
                NodeAssignments resident;
                for (const auto& e : r.ledger)
                    if (e.node && e.timing.start <= now && now < e.timing.finish)
                        resident[*e.node].push_back(e.task);
                EXPECT_TRUE(check_capacity(resident, s).empty()) << "t=" << now;
                EXPECT_TRUE(check_network(resident, route_of, s).empty()) << "t=" << now;
            }
        }
    }
}

TEST(Invariants, RunsAreByteIdentical)
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const Scenario s = random_paper_run(rng, true);
        for (Strategy strategy : {Strategy::tetris, Strategy::proximity}) {
            const std::string a = to_json(simulate(s, strategy, 9)).dump();
            const std::string b = to_json(simulate(s, strategy, 9)).dump();
            EXPECT_EQ(a, b);
            EXPECT_EQ(ledger_csv(simulate(s, strategy, 9)), ledger_csv(simulate(s, strategy, 9)));
        }
    }
}

TEST(Serialization, CsvRowColumns)
{
    const RunReport r = simulate(builtin_toy_scenario(), "proximity", 5);
    EXPECT_EQ(run_csv_header(),
              "scenario,strategy,workload,cloud,seed,latency_violations,drop_violations,avg_latency_ms,power_w,energy_j,objective");
    const std::string row = run_csv_row({"toy", "custom", false}, r);
    EXPECT_EQ(row.rfind("toy,proximity,custom,off,5,", 0), 0u) << row;
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
    const std::string ledger = ledger_csv(r);
    EXPECT_EQ(std::count(ledger.begin(), ledger.end(), '\n'), 4);
}

TEST(Serialization, JsonReport)
{
    const Json j = to_json(simulate(builtin_toy_scenario(), "tetris", 3));
    EXPECT_EQ(j["strategy"], "tetris");
    EXPECT_EQ(j["seed"], 3);
    EXPECT_EQ(j["drop_sla_violations"], 0);
    ASSERT_EQ(j["ledger"].size(), 3u);
    EXPECT_EQ(j["ledger"][1]["task"], "APP2");
    EXPECT_EQ(j["ledger"][1]["node"], "S2");
}
