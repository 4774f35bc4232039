#ifndef CONTINUUM_PLACEMENT_HPP
#define CONTINUUM_PLACEMENT_HPP

#include <continuum/errors.hpp>
#include <continuum/metrics.hpp>
#include <continuum/routing.hpp>
#include <continuum/scenario.hpp>

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace continuum {

/// Per-link transfer-delay budget seen by a strategy. Links are indices into
/// the scenario's link list.
struct NetworkView
{
    std::function<const std::vector<std::size_t>*(const std::string& user, const std::string& node)> route_links;
    std::vector<double> headroom;       // ms of delay budget left per link
    std::vector<double> link_bandwidth; // megabits per ms
};

struct PlacementRequest
{
    std::vector<Task> pending;
    std::vector<NodeState> node_states;
    /// Effective bandwidth (megabits/ms) between a user and a node; empty if unreachable.
    std::function<std::optional<double>(const std::string& user, const std::string& node)> bandwidth_of;
    /// Path latency (ms) between a user and a node; empty if unreachable.
    std::function<std::optional<std::int64_t>(const std::string& user, const std::string& node)> path_latency_of;
    ModelWeights weights;
    std::int64_t now = 0;
    std::optional<NetworkView> network;
};

struct Assignment
{
    std::string task;
    std::string node;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct PlacementPlan
{
    std::vector<Assignment> assignments; // in the order they were decided
    std::vector<std::string> unplaced;
    std::vector<std::string> visit_order; // task ids in the order the strategy considered them

    friend bool operator==(const PlacementPlan&, const PlacementPlan&) = default;
};

enum class Strategy
{
    tetris,
    proximity,
    optimal
};

inline std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::tetris:
        return "tetris";
    case Strategy::proximity:
        return "proximity";
    case Strategy::optimal:
        return "optimal";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view name)
{
    if (name == "tetris")
        return Strategy::tetris;
    if (name == "proximity")
        return Strategy::proximity;
    if (name == "optimal")
        return Strategy::optimal;
    throw UnknownStrategy(std::string(name));
}

/// Builds a request whose bandwidth and latency lookups come from a route table.
inline PlacementRequest make_request(std::vector<Task> pending,
                                     std::vector<NodeState> states,
                                     const RouteTable& routes,
                                     const ModelWeights& weights,
                                     std::int64_t now)
{
    PlacementRequest r;
    r.pending = std::move(pending);
    r.node_states = std::move(states);
    r.weights = weights;
    r.now = now;
    r.bandwidth_of = [&routes](const std::string& user, const std::string& node) -> std::optional<double> {
        if (const Route* route = routes.find(user, node))
            return route->effective_bandwidth();
        return std::nullopt;
    };
    r.path_latency_of = [&routes](const std::string& user, const std::string& node) -> std::optional<std::int64_t> {
        if (const Route* route = routes.find(user, node))
            return route->latency;
        return std::nullopt;
    };
    return r;
}

namespace detail {

class NetworkBudget
{
public:
    explicit NetworkBudget(const PlacementRequest& request)
        : view_(request.network ? &*request.network : nullptr)
    {
        if (view_)
            headroom_ = view_->headroom;
    }

    bool admits(const Task& task, const std::string& node) const
    {
        if (!view_)
            return true;
        const auto* links = view_->route_links(task.user, node);
        if (links == nullptr)
            return false;
        return std::all_of(links->begin(), links->end(), [&](std::size_t l) {
            return task.data_size / view_->link_bandwidth[l] <= headroom_[l];
        });
    }

    void reserve(const Task& task, const std::string& node)
    {
        if (!view_)
            return;
        for (std::size_t l : *view_->route_links(task.user, node))
            headroom_[l] -= task.data_size / view_->link_bandwidth[l];
    }

    void release(const Task& task, const std::string& node)
    {
        if (!view_)
            return;
        for (std::size_t l : *view_->route_links(task.user, node))
            headroom_[l] += task.data_size / view_->link_bandwidth[l];
    }

private:
    const NetworkView* view_;
    std::vector<double> headroom_;
};

inline bool reachable(const PlacementRequest& r, const Task& t, const NodeState& s)
{
    return r.path_latency_of(t.user, s.node->id).has_value() && r.bandwidth_of(t.user, s.node->id).has_value();
}

inline void check_distinct(const std::vector<Task>& pending)
{
#ifndef NDEBUG
    std::set<std::string> ids;
    for (const auto& t : pending)
        assert(ids.insert(t.id).second && "task offered twice in one request");
#else
    (void)pending;
#endif
}

} // namespace detail

/// Urgency score of a pending task, using the bandwidth towards its nearest
/// reachable node. Unreachable tasks score +inf.
inline double tetris_priority(const PlacementRequest& request, const Task& task)
{
    std::optional<std::int64_t> best_latency;
    const NodeState* nearest = nullptr;
    for (const auto& s : request.node_states) {
        if (!detail::reachable(request, task, s))
            continue;
        auto latency = *request.path_latency_of(task.user, s.node->id);
        if (!best_latency || latency < *best_latency || (latency == *best_latency && s.node->id < nearest->node->id)) {
            best_latency = latency;
            nearest = &s;
        }
    }
    if (nearest == nullptr)
        return std::numeric_limits<double>::infinity();
    return phi(task, *request.bandwidth_of(task.user, nearest->node->id), request.weights);
}

/// SLA-aware placement: tasks in ascending urgency, each onto the fitting
/// node with the smallest residual geometric-mean capacity. Node scores are
/// recomputed after every provisioning.
inline PlacementPlan tetris_place(const PlacementRequest& request)
{
    detail::check_distinct(request.pending);

    std::vector<std::pair<double, const Task*>> queue;
    queue.reserve(request.pending.size());
    for (const auto& t : request.pending)
        queue.emplace_back(tetris_priority(request, t), &t);
    std::sort(queue.begin(), queue.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return a.second->id < b.second->id;
    });

    std::vector<NodeState> states = request.node_states;
    detail::NetworkBudget budget(request);
    std::set<std::string> provisioned;
    PlacementPlan plan;
    for (const auto& [score, task] : queue) {
        plan.visit_order.push_back(task->id);

        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
            ranked.emplace_back(gamma_capacity(states[i]), i);
        std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first)
                return a.first < b.first;
            return states[a.second].node->id < states[b.second].node->id;
        });

        bool placed = false;
        for (const auto& [g, i] : ranked) {
            auto& s = states[i];
            if (!fits(task->demand, s.free) || !detail::reachable(request, *task, s) || !budget.admits(*task, s.node->id))
                continue;
            if (provisioned.insert(task->id).second) {
                s.free -= task->demand;
                budget.reserve(*task, s.node->id);
                plan.assignments.push_back({task->id, s.node->id});
            }
            placed = true;
            break;
        }
        if (!placed)
            plan.unplaced.push_back(task->id);
    }
    return plan;
}

/// Proximity-first baseline: tasks in arrival order, each onto the feasible
/// node with the shortest path latency from its user.
inline PlacementPlan proximity_place(const PlacementRequest& request)
{
    detail::check_distinct(request.pending);

    std::vector<const Task*> queue;
    for (const auto& t : request.pending)
        queue.push_back(&t);
    std::sort(queue.begin(), queue.end(), [](const Task* a, const Task* b) {
        if (a->arrival != b->arrival)
            return a->arrival < b->arrival;
        return a->id < b->id;
    });

    std::vector<NodeState> states = request.node_states;
    detail::NetworkBudget budget(request);
    PlacementPlan plan;
    for (const Task* task : queue) {
        plan.visit_order.push_back(task->id);
        std::optional<std::size_t> best;
        std::int64_t best_latency = 0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& s = states[i];
            auto latency = request.path_latency_of(task->user, s.node->id);
            if (!latency || !request.bandwidth_of(task->user, s.node->id))
                continue;
            if (!fits(task->demand, s.free) || !budget.admits(*task, s.node->id))
                continue;
            if (!best || *latency < best_latency || (*latency == best_latency && s.node->id < states[*best].node->id)) {
                best = i;
                best_latency = *latency;
            }
        }
        if (!best) {
            plan.unplaced.push_back(task->id);
            continue;
        }
        states[*best].free -= task->demand;
        budget.reserve(*task, states[*best].node->id);
        plan.assignments.push_back({task->id, states[*best].node->id});
    }
    return plan;
}

inline constexpr std::size_t optimal_max_tasks = 8;
inline constexpr std::size_t optimal_max_nodes = 4;

namespace detail {

struct OptimalSearch
{
    const PlacementRequest& request;
    std::vector<const Task*> tasks;      // by id
    std::vector<std::size_t> node_order; // state indices by node id
    std::vector<NodeState> states;
    NetworkBudget budget;

    std::vector<std::size_t> choice; // node_order position, or node_order.size() for drop
    std::vector<std::size_t> best_choice;
    std::size_t best_drops = std::numeric_limits<std::size_t>::max();
    double best_cost = std::numeric_limits<double>::infinity();

    double placed_cost(const Task& t, const NodeState& s) const
    {
        const double bw = *request.bandwidth_of(t.user, s.node->id);
        TaskTiming timing;
        timing.start = request.now;
        timing.finish = finish_time(request.now, t, bw);
        timing.violation = deadline_violation(timing.finish, t);
        const double dynamic = s.node->power_max - s.node->power_idle;
        timing.energy = static_cast<double>(t.demand.cpu) / static_cast<double>(s.node->capacity.cpu) * dynamic
                      * static_cast<double>(timing.finish - timing.start) / 1000.0;
        return objective_term(t, timing, request.weights);
    }

    void search(std::size_t depth, std::size_t drops, double cost)
    {
        if (drops > best_drops)
            return;
        if (depth == tasks.size()) {
            if (drops < best_drops || (drops == best_drops && cost < best_cost)) {
                best_drops = drops;
                best_cost = cost;
                best_choice = choice;
            }
            return;
        }
        const Task& t = *tasks[depth];
        for (std::size_t k = 0; k < node_order.size(); ++k) {
            auto& s = states[node_order[k]];
            if (!fits(t.demand, s.free) || !reachable(request, t, s) || !budget.admits(t, s.node->id))
                continue;
            s.free -= t.demand;
            budget.reserve(t, s.node->id);
            choice[depth] = k;
            search(depth + 1, drops, cost + placed_cost(t, s));
            budget.release(t, s.node->id);
            s.free += t.demand;
        }
        choice[depth] = node_order.size();
        TaskTiming dropped;
        dropped.dropped = true;
        search(depth + 1, drops + 1, cost + objective_term(t, dropped, request.weights));
    }
};

} // namespace detail

/// Exhaustive oracle for tiny instances: minimises drop count, then the cost
/// objective with finish times from the scheduling equation. Ties go to the
/// lexicographically first assignment (tasks by id, nodes by id, drop last).
inline PlacementPlan optimal_place(const PlacementRequest& request)
{
    if (request.pending.size() > optimal_max_tasks || request.node_states.size() > optimal_max_nodes)
        throw InstanceTooLarge("optimal_place: at most " + std::to_string(optimal_max_tasks) + " tasks and "
                               + std::to_string(optimal_max_nodes) + " nodes");
    detail::check_distinct(request.pending);

    detail::OptimalSearch search{request, {}, {}, request.node_states, detail::NetworkBudget(request), {}, {}};
    for (const auto& t : request.pending)
        search.tasks.push_back(&t);
    std::sort(search.tasks.begin(), search.tasks.end(), [](const Task* a, const Task* b) { return a->id < b->id; });
    search.node_order.resize(request.node_states.size());
    std::iota(search.node_order.begin(), search.node_order.end(), std::size_t{0});
    std::sort(search.node_order.begin(), search.node_order.end(), [&](std::size_t a, std::size_t b) {
        return request.node_states[a].node->id < request.node_states[b].node->id;
    });
    search.choice.assign(search.tasks.size(), 0);
    search.search(0, 0, 0.0);

    PlacementPlan plan;
    for (std::size_t i = 0; i < search.tasks.size(); ++i) {
        const Task& t = *search.tasks[i];
        plan.visit_order.push_back(t.id);
        if (search.best_choice[i] == search.node_order.size())
            plan.unplaced.push_back(t.id);
        else
            plan.assignments.push_back({t.id, request.node_states[search.node_order[search.best_choice[i]]].node->id});
    }
    return plan;
}

inline PlacementPlan place(Strategy strategy, const PlacementRequest& request)
{
    switch (strategy) {
    case Strategy::tetris:
        return tetris_place(request);
    case Strategy::proximity:
        return proximity_place(request);
    case Strategy::optimal:
        return optimal_place(request);
    }
    throw UnknownStrategy("?");
}

} // namespace continuum

#endif // CONTINUUM_PLACEMENT_HPP
