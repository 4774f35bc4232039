#ifndef CONTINUUM_SCENARIO_HPP
#define CONTINUUM_SCENARIO_HPP

#include <continuum/resources.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace continuum {

enum class Tier
{
    edge,
    cloud
};

enum class ElementKind
{
    network_switch,
    base_station
};

/// Effectively unconstrained per-link delay budget (ms).
inline constexpr double unconstrained_delay_ms = 1e12;

struct ComputeNode
{
    std::string id;
    Tier tier = Tier::edge;
    ResourceVector capacity;
    double power_idle = 0.0; // W
    double power_max = 0.0;  // W

    friend bool operator==(const ComputeNode&, const ComputeNode&) = default;
};

struct NetworkElement
{
    std::string id;
    ElementKind kind = ElementKind::network_switch;

    friend bool operator==(const NetworkElement&, const NetworkElement&) = default;
};

struct Link
{
    std::string endpoint_a;
    std::string endpoint_b;
    double bandwidth = 0.0;     // Mbit/s
    std::int64_t latency = 0;   // ms
    double max_delay = unconstrained_delay_ms; // ms, aggregated transfer delay budget

    friend bool operator==(const Link&, const Link&) = default;
};

struct User
{
    std::string id;
    std::string base_station;

    friend bool operator==(const User&, const User&) = default;
};

struct Task
{
    std::string id;
    std::string user;
    ResourceVector demand;
    std::int64_t processing_time = 0; // ms
    double data_size = 0.0;           // megabits
    std::int64_t arrival = 0;         // ms
    std::int64_t deadline = 1;        // ms, relative to arrival
    double penalty = 1.0;             // per ms of deadline violation

    friend bool operator==(const Task&, const Task&) = default;
};

/// Coefficients of the urgency score and of the cost objective.
struct ModelWeights
{
    double alpha = 1.0;   // deadline term of phi
    double beta = 1.0;    // processing-time term of phi
    double gamma_w = 1.0; // communication term of phi
    double omega = 1.0;   // per ms of latency
    double rho = 100.0;   // per drop
    double eta = 0.001;   // per joule

    friend bool operator==(const ModelWeights&, const ModelWeights&) = default;
};

struct Scenario
{
    std::vector<ComputeNode> nodes;
    std::vector<NetworkElement> elements;
    std::vector<Link> links;
    std::vector<User> users;
    std::vector<Task> tasks;
    ModelWeights weights;
    std::int64_t horizon = 1000; // ms
    bool cloud_enabled = true;

    friend bool operator==(const Scenario&, const Scenario&) = default;

    /// Nodes that take part in a run: cloud-tier nodes only when the cloud is enabled.
    std::vector<const ComputeNode*> active_nodes() const
    {
        std::vector<const ComputeNode*> out;
        for (const auto& n : nodes)
            if (cloud_enabled || n.tier != Tier::cloud)
                out.push_back(&n);
        return out;
    }

    const ComputeNode* find_node(const std::string& id) const
    {
        auto it = std::find_if(nodes.begin(), nodes.end(), [&](const ComputeNode& n) { return n.id == id; });
        return it == nodes.end() ? nullptr : &*it;
    }

    const User* find_user(const std::string& id) const
    {
        auto it = std::find_if(users.begin(), users.end(), [&](const User& u) { return u.id == id; });
        return it == users.end() ? nullptr : &*it;
    }
};

/// One broken invariant: which entity, which rule.
struct Violation
{
    std::string entity;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;

    std::string to_string() const { return entity + ": " + rule; }
};

namespace detail {

inline bool connected(const std::set<std::string>& vertices,
                      const std::multimap<std::string, std::string>& adjacency,
                      const std::string& from,
                      std::set<std::string>& seen)
{
    std::deque<std::string> queue{from};
    seen.insert(from);
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        auto [lo, hi] = adjacency.equal_range(v);
        for (auto it = lo; it != hi; ++it) {
            if (vertices.count(it->second) && seen.insert(it->second).second)
                queue.push_back(it->second);
        }
    }
    return seen.size() == vertices.size();
}

} // namespace detail

/// Checks every structural invariant of a scenario. Violations are reported
/// in a fixed order (nodes, elements, links, users, tasks, weights, topology)
/// so the result is a pure function of the input.
inline std::vector<Violation> validate(const Scenario& s)
{
    std::vector<Violation> out;
    auto add = [&](std::string entity, std::string rule) { out.push_back({std::move(entity), std::move(rule)}); };

    std::unordered_map<std::string, ElementKind> element_kind;
    std::set<std::string> ids;
    for (const auto& n : s.nodes) {
        const std::string who = "node " + n.id;
        if (!ids.insert(n.id).second)
            add(who, "duplicate id");
        if (!n.capacity.all_positive())
            add(who, "capacity must be positive in every dimension");
        if (n.power_idle < 0.0)
            add(who, "power_idle must be non-negative");
        if (n.power_idle > n.power_max)
            add(who, "power_idle exceeds power_max");
    }
    for (const auto& e : s.elements) {
        if (!ids.insert(e.id).second)
            add("element " + e.id, "duplicate id");
        element_kind.emplace(e.id, e.kind);
    }

    for (std::size_t i = 0; i < s.links.size(); ++i) {
        const auto& l = s.links[i];
        const std::string who = "link " + std::to_string(i) + " (" + l.endpoint_a + "-" + l.endpoint_b + ")";
        if (!(l.bandwidth > 0.0))
            add(who, "bandwidth must be positive");
        if (l.latency < 0)
            add(who, "latency must be non-negative");
        if (!(l.max_delay > 0.0))
            add(who, "max_delay must be positive");
        if (!ids.count(l.endpoint_a))
            add(who, "unknown endpoint " + l.endpoint_a);
        if (!ids.count(l.endpoint_b))
            add(who, "unknown endpoint " + l.endpoint_b);
    }

    std::set<std::string> user_ids;
    for (const auto& u : s.users) {
        const std::string who = "user " + u.id;
        if (!user_ids.insert(u.id).second)
            add(who, "duplicate id");
        auto it = element_kind.find(u.base_station);
        if (it == element_kind.end())
            add(who, "unknown base station " + u.base_station);
        else if (it->second != ElementKind::base_station)
            add(who, u.base_station + " is not a base station");
    }

    std::set<std::string> task_ids;
    for (const auto& t : s.tasks) {
        const std::string who = "task " + t.id;
        if (!task_ids.insert(t.id).second)
            add(who, "duplicate id");
        if (!user_ids.count(t.user))
            add(who, "unknown user " + t.user);
        if (!t.demand.non_negative())
            add(who, "demand must be non-negative");
        else if (t.demand.is_zero())
            add(who, "demand must not be all zero");
        if (t.processing_time < 0)
            add(who, "processing_time must be non-negative");
        if (t.data_size < 0.0)
            add(who, "data_size must be non-negative");
        if (t.arrival < 0)
            add(who, "arrival must be non-negative");
        if (t.deadline <= 0)
            add(who, "deadline must be positive");
        if (t.penalty < 0.0)
            add(who, "penalty must be non-negative");
    }

    const auto& w = s.weights;
    if (w.alpha < 0 || w.beta < 0 || w.gamma_w < 0 || w.omega < 0 || w.rho < 0 || w.eta < 0)
        add("weights", "all weights must be non-negative");
    if (!(w.alpha + w.beta + w.gamma_w > 0.0))
        add("weights", "alpha + beta + gamma_w must be positive");
    if (s.horizon <= 0)
        add("scenario", "horizon_ms must be positive");

    // Topology over the active compute nodes and all network elements.
    std::set<std::string> vertices;
    std::set<std::string> compute;
    for (const auto* n : s.active_nodes()) {
        vertices.insert(n->id);
        compute.insert(n->id);
    }
    for (const auto& e : s.elements)
        vertices.insert(e.id);
    std::multimap<std::string, std::string> adjacency;
    for (const auto& l : s.links) {
        if (vertices.count(l.endpoint_a) && vertices.count(l.endpoint_b)) {
            adjacency.emplace(l.endpoint_a, l.endpoint_b);
            adjacency.emplace(l.endpoint_b, l.endpoint_a);
        }
    }
    if (!vertices.empty()) {
        std::set<std::string> seen;
        if (!detail::connected(vertices, adjacency, *vertices.begin(), seen))
            add("topology", s.cloud_enabled ? "graph is not connected" : "graph is not connected without cloud nodes");
    }
    for (const auto& u : s.users) {
        if (!vertices.count(u.base_station))
            continue;
        std::set<std::string> seen;
        detail::connected(vertices, adjacency, u.base_station, seen);
        bool reaches = std::any_of(compute.begin(), compute.end(), [&](const std::string& id) { return seen.count(id) > 0; });
        if (!reaches)
            add("user " + u.id, "no compute node reachable");
    }
    return out;
}

} // namespace continuum

#endif // CONTINUUM_SCENARIO_HPP
