#ifndef CONTINUUM_TESTS_SUPPORT_HPP
#define CONTINUUM_TESTS_SUPPORT_HPP

#include <continuum/metrics.hpp>
#include <continuum/placement.hpp>
#include <continuum/scenario.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing_support {

using namespace continuum;

inline Task make_task(std::string id, std::string user, ResourceVector demand, std::int64_t processing_time = 0,
                      double data_size = 0.0, std::int64_t arrival = 0, std::int64_t deadline = 10)
{
    Task t;
    t.id = std::move(id);
    t.user = std::move(user);
    t.demand = demand;
    t.processing_time = processing_time;
    t.data_size = data_size;
    t.arrival = arrival;
    t.deadline = deadline;
    return t;
}

inline ComputeNode make_node(std::string id, ResourceVector capacity, Tier tier = Tier::edge)
{
    return {std::move(id), tier, capacity, 100.0, 200.0};
}

/// Placement instance with explicit per-(user, node) bandwidth and latency.
/// Pairs missing from the tables are unreachable.
struct Instance
{
    std::vector<ComputeNode> nodes;
    std::vector<ResourceVector> free; // initial residuals, defaults to capacity
    std::vector<Task> tasks;
    std::map<std::pair<std::string, std::string>, double> bandwidth;        // megabits/ms
    std::map<std::pair<std::string, std::string>, std::int64_t> latency; // ms
    ModelWeights weights;

    void connect(const std::string& user, const std::string& node, double bw, std::int64_t lat)
    {
        bandwidth[{user, node}] = bw;
        latency[{user, node}] = lat;
    }

    void connect_all(const std::vector<std::string>& users, double bw = 1.0, std::int64_t lat = 1)
    {
        for (const auto& u : users)
            for (const auto& n : nodes)
                connect(u, n.id, bw, lat);
    }

    ResourceVector initial_free(std::size_t i) const { return free.empty() ? nodes[i].capacity : free[i]; }

    PlacementRequest request() const
    {
        PlacementRequest r;
        r.pending = tasks;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            r.node_states.push_back({&nodes[i], initial_free(i)});
        r.bandwidth_of = [this](const std::string& u, const std::string& n) -> std::optional<double> {
            auto it = bandwidth.find({u, n});
            return it == bandwidth.end() ? std::nullopt : std::optional<double>(it->second);
        };
        r.path_latency_of = [this](const std::string& u, const std::string& n) -> std::optional<std::int64_t> {
            auto it = latency.find({u, n});
            return it == latency.end() ? std::nullopt : std::optional<std::int64_t>(it->second);
        };
        r.weights = weights;
        return r;
    }
};

/// Random instance: up to `max_tasks` tasks over `users` users and up to
/// `max_nodes` nodes; roughly one pair in ten is unreachable.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_tasks, std::size_t max_nodes)
{
    auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    Instance inst;
    const auto n_nodes = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(max_nodes)));
    const auto n_tasks = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(max_tasks)));
    const auto n_users = static_cast<std::size_t>(uniform(1, 6));
    for (std::size_t i = 0; i < n_nodes; ++i)
        inst.nodes.push_back(make_node("n" + std::to_string(i), {uniform(1, 16), uniform(1, 16), uniform(1, 16)}));
    for (std::size_t u = 0; u < n_users; ++u) {
        for (const auto& n : inst.nodes) {
            if (uniform(0, 9) == 0)
                continue;
            inst.connect("u" + std::to_string(u), n.id, static_cast<double>(uniform(1, 20)) / 4.0, uniform(0, 20));
        }
    }
    for (std::size_t t = 0; t < n_tasks; ++t) {
        ResourceVector demand{uniform(0, 8), uniform(0, 8), uniform(0, 8)};
        if (demand.is_zero())
            demand.cpu = 1;
        inst.tasks.push_back(make_task("t" + std::to_string(t), "u" + std::to_string(uniform(0, n_users - 1)), demand,
                                       uniform(0, 50), static_cast<double>(uniform(0, 10)), uniform(0, 5),
                                       uniform(1, 100)));
    }
    return inst;
}

/// Replays a plan against the initial residuals. Returns an empty string when
/// the plan is a feasible partition of the pending tasks, otherwise a reason.
inline std::string replay_problem(const Instance& inst, const PlacementPlan& plan)
{
    std::map<std::string, ResourceVector> free;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i)
        free[inst.nodes[i].id] = inst.initial_free(i);
    std::map<std::string, const Task*> tasks;
    for (const auto& t : inst.tasks)
        tasks[t.id] = &t;

    std::map<std::string, int> seen;
    for (const auto& a : plan.assignments) {
        ++seen[a.task];
        auto task = tasks.find(a.task);
        if (task == tasks.end())
            return "unknown task " + a.task;
        auto node = free.find(a.node);
        if (node == free.end())
            return "unknown node " + a.node;
        if (!inst.bandwidth.count({task->second->user, a.node}))
            return a.task + " placed on unreachable " + a.node;
        node->second -= task->second->demand;
        if (!node->second.non_negative())
            return a.task + " overcommits " + a.node;
    }
    for (const auto& id : plan.unplaced)
        ++seen[id];
    for (const auto& t : inst.tasks)
        if (seen[t.id] != 1)
            return t.id + " appears " + std::to_string(seen[t.id]) + " times";
    if (seen.size() != inst.tasks.size())
        return "plan mentions tasks that were not pending";
    return {};
}

} // namespace testing_support

#endif // CONTINUUM_TESTS_SUPPORT_HPP
