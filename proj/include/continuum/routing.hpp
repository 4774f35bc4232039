#ifndef CONTINUUM_ROUTING_HPP
#define CONTINUUM_ROUTING_HPP

#include <continuum/metrics.hpp>
#include <continuum/scenario.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace continuum {

/// Path from a user's base station to a compute node.
struct Route
{
    std::vector<std::size_t> links; // indices into Scenario::links, in travel order
    std::vector<std::string> hops;  // vertex ids from base station to node
    std::int64_t latency = 0;       // ms, sum of link latencies
    double bandwidth = 0.0;         // Mbit/s, bottleneck along the path

    /// Effective bandwidth in megabits per ms.
    double effective_bandwidth() const noexcept { return per_ms(bandwidth); }
};

/// Shortest-latency routes for every reachable (user, active node) pair.
/// Pairs missing from the table are unreachable.
class RouteTable
{
public:
    const Route* find(const std::string& user, const std::string& node) const
    {
        auto it = routes_.find({user, node});
        return it == routes_.end() ? nullptr : &it->second;
    }

    bool reachable(const std::string& user, const std::string& node) const { return find(user, node) != nullptr; }

    /// Node with the smallest path latency from the user, ties by node id.
    std::optional<std::string> nearest_node(const std::string& user) const
    {
        std::optional<std::string> best;
        std::int64_t best_latency = 0;
        for (const auto& [key, route] : routes_) {
            if (key.first != user)
                continue;
            if (!best || route.latency < best_latency || (route.latency == best_latency && key.second < *best)) {
                best = key.second;
                best_latency = route.latency;
            }
        }
        return best;
    }

    void insert(std::string user, std::string node, Route route)
    {
        routes_.insert_or_assign({std::move(user), std::move(node)}, std::move(route));
    }

    std::size_t size() const noexcept { return routes_.size(); }

    const std::map<std::pair<std::string, std::string>, Route>& entries() const noexcept { return routes_; }

private:
    std::map<std::pair<std::string, std::string>, Route> routes_;
};

/// Dijkstra over the active topology from every user's base station.
/// Routes minimise total latency; equal-latency candidates are ordered by
/// their vertex-id sequence. Compute nodes terminate paths and never relay.
inline RouteTable build_routes(const Scenario& scenario)
{
    std::vector<std::string> vertex_ids;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<bool> is_compute;
    for (const auto* n : scenario.active_nodes()) {
        index.emplace(n->id, vertex_ids.size());
        vertex_ids.push_back(n->id);
        is_compute.push_back(true);
    }
    for (const auto& e : scenario.elements) {
        if (index.emplace(e.id, vertex_ids.size()).second) {
            vertex_ids.push_back(e.id);
            is_compute.push_back(false);
        }
    }

    struct Edge
    {
        std::size_t to;
        std::size_t link;
    };
    std::vector<std::vector<Edge>> adjacency(vertex_ids.size());
    for (std::size_t i = 0; i < scenario.links.size(); ++i) {
        const auto& l = scenario.links[i];
        auto a = index.find(l.endpoint_a);
        auto b = index.find(l.endpoint_b);
        if (a == index.end() || b == index.end())
            continue;
        adjacency[a->second].push_back({b->second, i});
        adjacency[b->second].push_back({a->second, i});
    }

    struct Label
    {
        bool set = false;
        std::int64_t latency = 0;
        std::vector<std::string> sequence;
        std::vector<std::size_t> links;
        double bandwidth = std::numeric_limits<double>::infinity();
    };
    auto better = [](const Label& a, const Label& b) {
        if (!b.set)
            return true;
        if (a.latency != b.latency)
            return a.latency < b.latency;
        return a.sequence < b.sequence;
    };

    RouteTable table;
    for (const auto& user : scenario.users) {
        auto src = index.find(user.base_station);
        if (src == index.end())
            continue;
        std::vector<Label> label(vertex_ids.size());
        std::vector<bool> done(vertex_ids.size(), false);
        label[src->second].set = true;
        label[src->second].sequence = {user.base_station};

        for (;;) {
            std::size_t current = vertex_ids.size();
            for (std::size_t v = 0; v < vertex_ids.size(); ++v) {
                if (done[v] || !label[v].set)
                    continue;
                if (current == vertex_ids.size() || better(label[v], label[current]))
                    current = v;
            }
            if (current == vertex_ids.size())
                break;
            done[current] = true;
            if (is_compute[current])
                continue;
            for (const auto& edge : adjacency[current]) {
                if (done[edge.to])
                    continue;
                const auto& link = scenario.links[edge.link];
                Label candidate;
                candidate.set = true;
                candidate.latency = label[current].latency + link.latency;
                candidate.sequence = label[current].sequence;
                candidate.sequence.push_back(vertex_ids[edge.to]);
                candidate.links = label[current].links;
                candidate.links.push_back(edge.link);
                candidate.bandwidth = std::min(label[current].bandwidth, link.bandwidth);
                if (better(candidate, label[edge.to]))
                    label[edge.to] = std::move(candidate);
            }
        }

        for (std::size_t v = 0; v < vertex_ids.size(); ++v) {
            if (!is_compute[v] || !label[v].set || label[v].links.empty())
                continue;
            Route r;
            r.links = std::move(label[v].links);
            r.hops = std::move(label[v].sequence);
            r.latency = label[v].latency;
            r.bandwidth = label[v].bandwidth;
            table.insert(user.id, vertex_ids[v], std::move(r));
        }
    }
    return table;
}

} // namespace continuum

#endif // CONTINUUM_ROUTING_HPP
