#ifndef CONTINUUM_SIMULATION_HPP
#define CONTINUUM_SIMULATION_HPP

#include <continuum/errors.hpp>
#include <continuum/metrics.hpp>
#include <continuum/placement.hpp>
#include <continuum/routing.hpp>
#include <continuum/scenario.hpp>
#include <continuum/scenario_io.hpp>

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace continuum {

/// Linear utilisation power model (W).
inline double power_draw(const ComputeNode& node, double cpu_in_use)
{
    if (cpu_in_use < 0.0 || cpu_in_use > static_cast<double>(node.capacity.cpu))
        throw std::domain_error("power_draw: cpu in use outside [0, capacity] on " + node.id);
    return node.power_idle
         + (node.power_max - node.power_idle) * (cpu_in_use / static_cast<double>(node.capacity.cpu));
}

struct SimulationOptions
{
    /// Add the route's propagation latency to a task's transfer delay. Off by
    /// default: the delay is the rounded-up transfer time alone.
    bool propagation_delay = false;
};

struct RunReport
{
    std::string strategy;
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::int64_t latency_sla_violations = 0;
    std::int64_t drop_sla_violations = 0;
    double average_latency = 0.0;   // ms, delivered tasks only
    double power_consumption = 0.0; // W, time-average over the horizon
    double energy = 0.0;            // J
    double objective = 0.0;
    std::vector<LedgerEntry> ledger; // scenario task order

    std::int64_t delivered() const noexcept
    {
        return static_cast<std::int64_t>(ledger.size()) - drop_sla_violations;
    }
};

namespace detail {

struct Resident
{
    std::size_t task;
    std::size_t node;
    std::int64_t finish;
};

} // namespace detail

/// Runs one deterministic simulation in 1 ms steps over [0, horizon).
///
/// Each step releases finished tasks, admits arrivals, offers every pending
/// task to the strategy, and starts the assigned ones immediately. A task
/// holds its demand until its finish time; tasks still pending or running at
/// the horizon are drops. The seed is only echoed in the report.
inline RunReport simulate(const Scenario& scenario, Strategy strategy, std::uint64_t seed, const SimulationOptions& options = {})
{
    ensure_valid(scenario);

    const RouteTable routes = build_routes(scenario);
    const std::vector<const ComputeNode*> nodes = scenario.active_nodes();
    const std::size_t n_tasks = scenario.tasks.size();

    std::unordered_map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        node_index.emplace(nodes[i]->id, i);
    std::unordered_map<std::string, std::size_t> task_index;
    for (std::size_t i = 0; i < n_tasks; ++i)
        task_index.emplace(scenario.tasks[i].id, i);

    std::vector<std::size_t> arrival_order(n_tasks);
    for (std::size_t i = 0; i < n_tasks; ++i)
        arrival_order[i] = i;
    std::sort(arrival_order.begin(), arrival_order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ta = scenario.tasks[a];
        const auto& tb = scenario.tasks[b];
        return ta.arrival != tb.arrival ? ta.arrival < tb.arrival : ta.id < tb.id;
    });

    std::vector<ResourceVector> free;
    for (const auto* n : nodes)
        free.push_back(n->capacity);

    std::vector<double> headroom;
    std::vector<double> link_bandwidth;
    for (const auto& l : scenario.links) {
        headroom.push_back(l.max_delay);
        link_bandwidth.push_back(per_ms(l.bandwidth));
    }
    auto route_links = [&routes](const std::string& user, const std::string& node) -> const std::vector<std::size_t>* {
        const Route* r = routes.find(user, node);
        return r ? &r->links : nullptr;
    };

    RunReport report;
    report.strategy = std::string(to_string(strategy));
    report.seed = seed;
    report.horizon = scenario.horizon;
    report.ledger.resize(n_tasks);
    std::vector<std::optional<std::size_t>> host(n_tasks);
    for (std::size_t i = 0; i < n_tasks; ++i)
        report.ledger[i].task = scenario.tasks[i];

    std::vector<std::size_t> pending;
    std::vector<detail::Resident> residents;
    std::size_t next_arrival = 0;
    bool dirty = true;

    auto release_links = [&](std::size_t t, std::size_t n) {
        const auto& task = scenario.tasks[t];
        for (std::size_t l : routes.find(task.user, nodes[n]->id)->links)
            headroom[l] += task.data_size / link_bandwidth[l];
    };

    for (std::int64_t now = 0; now < scenario.horizon; ++now) {
        // (1) releases
        for (auto it = residents.begin(); it != residents.end();) {
            if (it->finish <= now) {
                free[it->node] += scenario.tasks[it->task].demand;
                release_links(it->task, it->node);
                it = residents.erase(it);
                dirty = true;
            } else {
                ++it;
            }
        }
        // (2) arrivals
        while (next_arrival < n_tasks && scenario.tasks[arrival_order[next_arrival]].arrival == now) {
            pending.push_back(arrival_order[next_arrival++]);
            dirty = true;
        }
        // (3) placement; an unchanged world yields the same (empty) plan, so skip it
        if (!pending.empty() && dirty) {
            std::vector<Task> offered;
            for (std::size_t t : pending)
                offered.push_back(scenario.tasks[t]);
            std::vector<NodeState> states;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                states.push_back({nodes[i], free[i]});
            PlacementRequest request = make_request(std::move(offered), std::move(states), routes, scenario.weights, now);
            request.network = NetworkView{route_links, headroom, link_bandwidth};

            const PlacementPlan plan = place(strategy, request);
            assert(plan.assignments.size() + plan.unplaced.size() == pending.size());

            for (const auto& a : plan.assignments) {
                const std::size_t t = task_index.at(a.task);
                const std::size_t n = node_index.at(a.node);
                const Task& task = scenario.tasks[t];
                const Route* route = routes.find(task.user, a.node);
                if (route == nullptr || !fits(task.demand, free[n]))
                    throw std::logic_error("strategy produced an infeasible assignment for " + a.task);

                auto& timing = report.ledger[t].timing;
                timing.start = now;
                timing.comm_delay = communication_delay(task.data_size, route->effective_bandwidth())
                                  + (options.propagation_delay ? route->latency : 0);
                timing.finish = now + task.processing_time + timing.comm_delay;
                timing.violation = deadline_violation(timing.finish, task);
                host[t] = n;
                report.ledger[t].node = a.node;

                if (timing.finish > now) {
                    free[n] -= task.demand;
                    for (std::size_t l : route->links)
                        headroom[l] -= task.data_size / link_bandwidth[l];
                    residents.push_back({t, n, timing.finish});
                }
                pending.erase(std::find(pending.begin(), pending.end(), t));
            }
            dirty = false;
        }
#ifndef NDEBUG
        for (std::size_t i = 0; i < nodes.size(); ++i)
            assert(free[i].non_negative() && fits(free[i], nodes[i]->capacity));
#endif
        // (5) power and energy for [now, now + 1)
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto* node = nodes[i];
            report.energy += power_draw(*node, static_cast<double>(node->capacity.cpu - free[i].cpu)) / 1000.0;
        }
        for (const auto& r : residents) {
            const auto* node = nodes[r.node];
            report.ledger[r.task].timing.energy += static_cast<double>(scenario.tasks[r.task].demand.cpu)
                                                 / static_cast<double>(node->capacity.cpu)
                                                 * (node->power_max - node->power_idle) / 1000.0;
        }
    }

    double latency_sum = 0.0;
    for (std::size_t t = 0; t < n_tasks; ++t) {
        auto& entry = report.ledger[t];
        const bool delivered = host[t].has_value() && entry.timing.finish <= scenario.horizon;
        if (!delivered) {
            entry.timing.dropped = true;
            ++report.drop_sla_violations;
            continue;
        }
        latency_sum += static_cast<double>(entry.timing.finish - entry.task.arrival);
        if (entry.timing.violation > 0)
            ++report.latency_sla_violations;
    }
    const auto delivered = report.delivered();
    report.average_latency = delivered > 0 ? latency_sum / static_cast<double>(delivered) : 0.0;
    report.power_consumption = report.energy / (static_cast<double>(scenario.horizon) / 1000.0);
    report.objective = objective(report.ledger, scenario.weights);
    return report;
}

inline RunReport simulate(const Scenario& scenario, std::string_view strategy, std::uint64_t seed, const SimulationOptions& options = {})
{
    return simulate(scenario, parse_strategy(strategy), seed, options);
}

inline Json to_json(const TaskTiming& t)
{
    Json j;
    j["start"] = t.start;
    j["finish"] = t.finish;
    j["comm_delay"] = t.comm_delay;
    j["violation"] = t.violation;
    j["dropped"] = t.dropped;
    j["energy"] = t.energy;
    return j;
}

inline Json to_json(const RunReport& r)
{
    Json j;
    j["strategy"] = r.strategy;
    j["seed"] = r.seed;
    j["horizon_ms"] = r.horizon;
    j["latency_sla_violations"] = r.latency_sla_violations;
    j["drop_sla_violations"] = r.drop_sla_violations;
    j["average_latency_ms"] = r.average_latency;
    j["power_consumption_w"] = r.power_consumption;
    j["energy_j"] = r.energy;
    j["objective"] = r.objective;
    j["ledger"] = Json::array();
    for (const auto& e : r.ledger) {
        Json row;
        row["task"] = e.task.id;
        row["user"] = e.task.user;
        row["node"] = e.node ? Json(*e.node) : Json(nullptr);
        row["arrival"] = e.task.arrival;
        row["deadline"] = e.task.deadline;
        row["timing"] = to_json(e.timing);
        j["ledger"].push_back(std::move(row));
    }
    return j;
}

/// Identifies a run in CSV output.
struct RunLabel
{
    std::string scenario;
    std::string workload = "custom";
    bool cloud = true;
};

inline std::string format_fixed(double v, int decimals = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string run_csv_header()
{
    return "scenario,strategy,workload,cloud,seed,latency_violations,drop_violations,avg_latency_ms,power_w,energy_j,objective";
}

inline std::string run_csv_row(const RunLabel& label, const RunReport& r)
{
    std::string row;
    row += label.scenario + ',' + r.strategy + ',' + label.workload + ',' + (label.cloud ? "on" : "off") + ',';
    row += std::to_string(r.seed) + ',' + std::to_string(r.latency_sla_violations) + ','
         + std::to_string(r.drop_sla_violations) + ',';
    row += format_fixed(r.average_latency) + ',' + format_fixed(r.power_consumption) + ',' + format_fixed(r.energy) + ','
         + format_fixed(r.objective);
    return row;
}

inline std::string ledger_csv(const RunReport& r)
{
    std::string out = "task,user,node,arrival,deadline,start,finish,comm_delay_ms,violation_ms,dropped,energy_j\n";
    for (const auto& e : r.ledger) {
        out += e.task.id + ',' + e.task.user + ',' + e.node.value_or("") + ',' + std::to_string(e.task.arrival) + ','
             + std::to_string(e.task.deadline) + ',';
        if (e.node) {
            out += std::to_string(e.timing.start) + ',' + std::to_string(e.timing.finish) + ','
                 + std::to_string(e.timing.comm_delay) + ',' + std::to_string(e.timing.violation) + ',';
        } else {
            out += ",,,,";
        }
        out += std::string(e.timing.dropped ? "1" : "0") + ',' + format_fixed(e.timing.energy) + '\n';
    }
    return out;
}

} // namespace continuum

#endif // CONTINUUM_SIMULATION_HPP
