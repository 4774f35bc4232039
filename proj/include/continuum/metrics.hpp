#ifndef CONTINUUM_METRICS_HPP
#define CONTINUUM_METRICS_HPP

#include <continuum/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace continuum {

/// A compute node together with its residual (unallocated) capacity.
struct NodeState
{
    const ComputeNode* node = nullptr;
    ResourceVector free;
};

/// Timing and cost bookkeeping of one task once it is delivered or dropped.
struct TaskTiming
{
    std::int64_t start = 0;
    std::int64_t finish = 0;
    std::int64_t comm_delay = 0;
    std::int64_t violation = 0;
    bool dropped = false;
    double energy = 0.0; // J

    friend bool operator==(const TaskTiming&, const TaskTiming&) = default;
};

struct LedgerEntry
{
    Task task;
    std::optional<std::string> node;
    TaskTiming timing;

    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Megabits per millisecond from a link rate in Mbit/s.
constexpr double per_ms(double mbit_per_s) noexcept { return mbit_per_s / 1000.0; }

/// Urgency score: weighted deadline, processing time and transfer delay.
/// Lower is more urgent. `bandwidth` is in megabits per ms.
inline double phi(const Task& task, double bandwidth, const ModelWeights& w)
{
    if (!(bandwidth > 0.0))
        throw std::domain_error("phi: effective bandwidth must be positive");
    return w.alpha * static_cast<double>(task.deadline) + w.beta * static_cast<double>(task.processing_time)
         + w.gamma_w * (task.data_size / bandwidth);
}

/// Geometric mean of the residual CPU, RAM and storage.
inline double gamma_capacity(const ResourceVector& free)
{
    if (free.cpu <= 0 || free.ram <= 0 || free.storage <= 0)
        return 0.0;
    // Per-component cube roots keep cloud-sized products away from rounding trouble.
    return std::cbrt(static_cast<double>(free.cpu)) * std::cbrt(static_cast<double>(free.ram))
         * std::cbrt(static_cast<double>(free.storage));
}

inline double gamma_capacity(const NodeState& state) { return gamma_capacity(state.free); }

/// Transfer delay in whole ms, rounded up. Quotients within 1e-9 (relative)
/// of an integer are snapped to it so that 1 / 0.1 stays 10.
inline std::int64_t communication_delay(double data_size, double bandwidth)
{
    if (!(bandwidth > 0.0))
        throw std::domain_error("communication_delay: effective bandwidth must be positive");
    if (data_size <= 0.0)
        return 0;
    const double q = data_size / bandwidth;
    const double nearest = std::round(q);
    if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, nearest))
        return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(q));
}

inline std::int64_t finish_time(std::int64_t start, const Task& task, double bandwidth)
{
    return start + task.processing_time + communication_delay(task.data_size, bandwidth);
}

inline std::int64_t deadline_violation(std::int64_t finish, const Task& task)
{
    return std::max<std::int64_t>(0, finish - (task.arrival + task.deadline));
}

/// Contribution of one task to the cost objective. Dropped tasks only carry
/// the drop and energy terms.
inline double objective_term(const Task& task, const TaskTiming& t, const ModelWeights& w)
{
    if (t.dropped)
        return w.rho + w.eta * t.energy;
    return task.penalty * static_cast<double>(t.violation) + w.omega * static_cast<double>(t.finish - task.arrival)
         + w.eta * t.energy;
}

inline double objective(std::span<const LedgerEntry> ledger, const ModelWeights& w)
{
    double total = 0.0;
    for (const auto& e : ledger)
        total += objective_term(e.task, e.timing, w);
    return total;
}

/// A resource dimension of a node whose summed demand exceeds capacity.
struct CapacityViolation
{
    std::string node;
    std::string resource;
    std::int64_t demand = 0;
    std::int64_t capacity = 0;

    friend bool operator==(const CapacityViolation&, const CapacityViolation&) = default;
};

using NodeAssignments = std::map<std::string, std::vector<Task>>;

inline std::vector<CapacityViolation> check_capacity(const NodeAssignments& assignments, const Scenario& scenario)
{
    std::vector<CapacityViolation> out;
    for (const auto& [node_id, tasks] : assignments) {
        const ComputeNode* node = scenario.find_node(node_id);
        if (node == nullptr)
            throw std::invalid_argument("check_capacity: unknown node " + node_id);
        ResourceVector sum;
        for (const auto& t : tasks)
            sum += t.demand;
        if (sum.cpu > node->capacity.cpu)
            out.push_back({node_id, "cpu", sum.cpu, node->capacity.cpu});
        if (sum.ram > node->capacity.ram)
            out.push_back({node_id, "ram", sum.ram, node->capacity.ram});
        if (sum.storage > node->capacity.storage)
            out.push_back({node_id, "storage", sum.storage, node->capacity.storage});
    }
    return out;
}

/// Transfer delay (ms) a task's data adds on one link.
inline double link_transfer_delay(double data_size, const Link& link) { return data_size / per_ms(link.bandwidth); }

struct NetworkViolation
{
    std::size_t link = 0;
    double delay = 0.0;
    double max_delay = 0.0;

    friend bool operator==(const NetworkViolation&, const NetworkViolation&) = default;
};

/// Aggregated transfer delay per link against its budget. `route_of(task,
/// node)` yields the indices (into scenario.links) of the links the task's
/// data traverses when hosted on `node`.
template <typename RouteOf>
std::vector<NetworkViolation> check_network(const NodeAssignments& assignments, RouteOf&& route_of, const Scenario& scenario)
{
    std::vector<double> load(scenario.links.size(), 0.0);
    for (const auto& [node_id, tasks] : assignments) {
        for (const auto& t : tasks) {
            for (std::size_t link : route_of(t, node_id))
                load.at(link) += link_transfer_delay(t.data_size, scenario.links[link]);
        }
    }
    std::vector<NetworkViolation> out;
    for (std::size_t i = 0; i < load.size(); ++i) {
        if (load[i] > scenario.links[i].max_delay)
            out.push_back({i, load[i], scenario.links[i].max_delay});
    }
    return out;
}

} // namespace continuum

#endif // CONTINUUM_METRICS_HPP
