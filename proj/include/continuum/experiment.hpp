#ifndef CONTINUUM_EXPERIMENT_HPP
#define CONTINUUM_EXPERIMENT_HPP

#include <continuum/factorial.hpp>
#include <continuum/placement.hpp>
#include <continuum/scenario_io.hpp>
#include <continuum/simulation.hpp>
#include <continuum/topology.hpp>
#include <continuum/workload.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace continuum {

enum class WorkloadLevel
{
    low,
    high
};

/// One cell of the three-factor, two-level design.
struct FactorConfig
{
    Strategy algorithm = Strategy::tetris;
    WorkloadLevel workload = WorkloadLevel::low;
    bool cloud = true;

    friend bool operator==(const FactorConfig&, const FactorConfig&) = default;

    /// Coded levels (algorithm, workload, cloud): tetris, low and cloud-on are -1.
    std::array<int, 3> coded() const
    {
        return {algorithm == Strategy::tetris ? -1 : 1, workload == WorkloadLevel::low ? -1 : 1, cloud ? -1 : 1};
    }
};

inline std::string_view to_string(WorkloadLevel w) { return w == WorkloadLevel::low ? "low" : "high"; }

/// The eight combinations, numbered as experiments 1..8: algorithm slowest,
/// then workload, then cloud (on before off).
inline std::array<FactorConfig, 8> all_configs()
{
    std::array<FactorConfig, 8> out;
    std::size_t i = 0;
    for (Strategy a : {Strategy::tetris, Strategy::proximity})
        for (WorkloadLevel w : {WorkloadLevel::low, WorkloadLevel::high})
            for (bool cloud : {true, false})
                out[i++] = {a, w, cloud};
    return out;
}

inline std::size_t experiment_index(const FactorConfig& c)
{
    const auto configs = all_configs();
    return static_cast<std::size_t>(std::find(configs.begin(), configs.end(), c) - configs.begin());
}

/// Everything that defines a factorial run besides seeds.
struct ExperimentSetup
{
    TopologyDefaults topology;
    WorkloadSpec low = WorkloadSpec::low();
    WorkloadSpec high = WorkloadSpec::high();
    std::vector<std::string> scenario_overrides; // dotted key=value applied to each generated scenario
    SimulationOptions simulation;
    unsigned jobs = 1;
};

/// Applies `workload.low.*`, `workload.high.*`, `topology.*` and
/// `simulation.propagation_delay` overrides to the setup; any other key is
/// kept as a scenario override.
inline void apply_setup_override(ExperimentSetup& setup, const std::string& assignment)
{
    auto starts_with = [&](std::string_view prefix) { return assignment.rfind(prefix, 0) == 0; };
    if (starts_with("workload.low.") || starts_with("workload.high.")) {
        const bool low = starts_with("workload.low.");
        Json doc = to_json(low ? setup.low : setup.high);
        apply_override(doc, assignment.substr(low ? 13 : 14));
        (low ? setup.low : setup.high) = workload_from_json(doc, low ? "workload.low" : "workload.high");
    } else if (starts_with("topology.")) {
        auto& t = setup.topology;
        Json doc{{"edge_bandwidth", t.edge_bandwidth},   {"edge_latency", t.edge_latency},
                 {"cloud_bandwidth", t.cloud_bandwidth}, {"cloud_latency", t.cloud_latency},
                 {"edge_power_idle", t.edge_power_idle}, {"edge_power_max", t.edge_power_max},
                 {"cloud_power_idle", t.cloud_power_idle}, {"cloud_power_max", t.cloud_power_max},
                 {"horizon", t.horizon}};
        apply_override(doc, assignment.substr(9));
        detail::require_keys(doc, "topology",
                             {"edge_bandwidth", "edge_latency", "cloud_bandwidth", "cloud_latency", "edge_power_idle",
                              "edge_power_max", "cloud_power_idle", "cloud_power_max", "horizon"});
        t.edge_bandwidth = detail::get_number(doc, "topology", "edge_bandwidth");
        t.edge_latency = detail::get_int(doc, "topology", "edge_latency");
        t.cloud_bandwidth = detail::get_number(doc, "topology", "cloud_bandwidth");
        t.cloud_latency = detail::get_int(doc, "topology", "cloud_latency");
        t.edge_power_idle = detail::get_number(doc, "topology", "edge_power_idle");
        t.edge_power_max = detail::get_number(doc, "topology", "edge_power_max");
        t.cloud_power_idle = detail::get_number(doc, "topology", "cloud_power_idle");
        t.cloud_power_max = detail::get_number(doc, "topology", "cloud_power_max");
        t.horizon = detail::get_int(doc, "topology", "horizon");
    } else if (starts_with("simulation.")) {
        Json doc{{"propagation_delay", setup.simulation.propagation_delay}};
        apply_override(doc, assignment.substr(11));
        detail::require_keys(doc, "simulation", {"propagation_delay"});
        if (!doc["propagation_delay"].is_boolean())
            throw ParseError("simulation.propagation_delay: expected true or false");
        setup.simulation.propagation_delay = doc["propagation_delay"].get<bool>();
    } else {
        setup.scenario_overrides.push_back(assignment);
    }
}

/// Scenario of one design cell for one replication seed.
inline Scenario make_cell_scenario(const ExperimentSetup& setup, const FactorConfig& config, std::uint64_t seed)
{
    Scenario s = builtin_paper_topology(config.cloud, setup.topology);
    s.tasks = generate_workload(config.workload == WorkloadLevel::low ? setup.low : setup.high, s.users, seed);
    if (!setup.scenario_overrides.empty()) {
        Json doc = to_json(s);
        for (const auto& o : setup.scenario_overrides)
            apply_override(doc, o);
        s = scenario_from_json(doc);
    }
    return s;
}

/// The four response variables plus bookkeeping of one run.
struct RunRow
{
    FactorConfig config;
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    RunReport report; // ledger omitted

    std::array<double, 4> responses() const
    {
        return {static_cast<double>(report.latency_sla_violations), static_cast<double>(report.drop_sla_violations),
                report.average_latency, report.power_consumption};
    }
};

inline constexpr std::array<const char*, 4> response_names{"latency_violations", "drop_violations", "avg_latency_ms",
                                                           "power_w"};

inline constexpr std::array<std::size_t, 7> effect_order{1, 2, 4, 3, 5, 6, 7};

inline std::string effect_name(std::size_t mask)
{
    static const std::array<const char*, 3> factor{"algorithm", "workload", "cloud"};
    std::string out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (mask & (std::size_t{1} << i)) {
            if (!out.empty())
                out += " x ";
            out += factor[i];
        }
    }
    return out;
}

struct CellSummary
{
    FactorConfig config;
    std::array<SampleStats, 4> stats;
};

struct ExperimentReport
{
    std::vector<RunRow> rows; // sorted by (experiment, replication)
    std::vector<std::string> failures;
    std::array<CellSummary, 8> cells{};
    std::array<VariationReport<3>, 4> influence{};
    bool influence_available = false;
};

/// Per-cell statistics and allocation of variation from raw rows. A pure
/// function of the row multiset.
inline void aggregate(ExperimentReport& report)
{
    std::sort(report.rows.begin(), report.rows.end(), [](const RunRow& a, const RunRow& b) {
        auto ia = experiment_index(a.config), ib = experiment_index(b.config);
        return ia != ib ? ia < ib : a.replication < b.replication;
    });
    const auto configs = all_configs();
    for (std::size_t c = 0; c < configs.size(); ++c) {
        report.cells[c].config = configs[c];
        for (std::size_t v = 0; v < 4; ++v) {
            std::vector<double> values;
            for (const auto& row : report.rows)
                if (row.config == configs[c])
                    values.push_back(row.responses()[v]);
            report.cells[c].stats[v] = sample_stats(values);
        }
    }
    report.influence_available = false;
    try {
        for (std::size_t v = 0; v < 4; ++v) {
            std::vector<Observation<3>> obs;
            for (const auto& row : report.rows)
                obs.push_back({row.config.coded(), row.responses()[v]});
            report.influence[v] = allocate_variation<3>(obs);
        }
        report.influence_available = true;
    } catch (const std::invalid_argument&) {
        // unbalanced after failures: no influence table
    }
}

/// Runs all eight combinations for every seed. Replication i uses seeds[i]
/// for every combination. Failed runs are recorded and the rest completes.
inline ExperimentReport run_factorial(std::size_t replications, const std::vector<std::uint64_t>& seeds,
                                      const ExperimentSetup& setup = {})
{
    if (replications < 2)
        throw std::invalid_argument("run_factorial: at least 2 replications required");
    if (seeds.size() != replications)
        throw std::invalid_argument("run_factorial: need exactly one seed per replication");

    struct Job
    {
        FactorConfig config;
        std::size_t replication;
    };
    std::vector<Job> jobs;
    for (const auto& config : all_configs())
        for (std::size_t r = 0; r < replications; ++r)
            jobs.push_back({config, r});

    std::vector<std::optional<RunRow>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const auto& job = jobs[i];
            const auto seed = seeds[job.replication];
            try {
                Scenario s = make_cell_scenario(setup, job.config, seed);
                RunRow row{job.config, job.replication, seed, simulate(s, job.config.algorithm, seed, setup.simulation)};
                row.report.ledger.clear();
                results[i] = std::move(row);
            } catch (const std::exception& e) {
                errors[i] = "experiment " + std::to_string(experiment_index(job.config) + 1) + " ("
                          + std::string(to_string(job.config.algorithm)) + ", " + std::string(to_string(job.config.workload))
                          + " workload, cloud " + (job.config.cloud ? "on" : "off") + ", seed " + std::to_string(seed)
                          + "): " + e.what();
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(setup.jobs, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    ExperimentReport report;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (results[i])
            report.rows.push_back(std::move(*results[i]));
        else
            report.failures.push_back(errors[i]);
    }
    aggregate(report);
    return report;
}

/// Grouped summaries of a completed factorial.
struct GroupSummary
{
    std::string group;
    std::array<SampleStats, 4> stats;
};

struct Summaries
{
    std::vector<GroupSummary> by_algorithm;    // tetris, proximity
    std::vector<GroupSummary> by_architecture; // cloud on, cloud off
    std::vector<CellSummary> by_experiment;    // experiments 1..8
};

inline Summaries summarize(const std::vector<RunRow>& rows)
{
    auto group = [&](const std::string& name, auto&& predicate) {
        GroupSummary g{name, {}};
        for (std::size_t v = 0; v < 4; ++v) {
            std::vector<double> values;
            for (const auto& row : rows)
                if (predicate(row))
                    values.push_back(row.responses()[v]);
            g.stats[v] = sample_stats(values);
        }
        return g;
    };
    Summaries out;
    for (Strategy a : {Strategy::tetris, Strategy::proximity})
        out.by_algorithm.push_back(group(std::string(to_string(a)), [a](const RunRow& r) { return r.config.algorithm == a; }));
    for (bool cloud : {true, false})
        out.by_architecture.push_back(group(cloud ? "edge-cloud" : "edge-only", [cloud](const RunRow& r) { return r.config.cloud == cloud; }));
    for (const auto& config : all_configs()) {
        auto g = group("", [&config](const RunRow& r) { return r.config == config; });
        out.by_experiment.push_back({config, g.stats});
    }
    return out;
}

inline std::string raw_csv(const std::vector<RunRow>& rows)
{
    std::string out = run_csv_header() + "\n";
    for (const auto& row : rows) {
        RunLabel label{"paper_topology", std::string(to_string(row.config.workload)), row.config.cloud};
        out += run_csv_row(label, row.report) + "\n";
    }
    return out;
}

inline std::string summary_csv(const Summaries& s)
{
    std::string out = "grouping,group,algorithm,workload,cloud,response,n,mean,std,ci95_half\n";
    auto emit = [&](const std::string& grouping, const std::string& group, const std::string& algo,
                    const std::string& load, const std::string& cloud, const std::array<SampleStats, 4>& stats) {
        for (std::size_t v = 0; v < 4; ++v) {
            out += grouping + ',' + group + ',' + algo + ',' + load + ',' + cloud + ',' + response_names[v] + ','
                 + std::to_string(stats[v].n) + ',' + format_fixed(stats[v].mean) + ',' + format_fixed(stats[v].std)
                 + ',' + format_fixed(stats[v].ci_half) + '\n';
        }
    };
    for (const auto& g : s.by_algorithm)
        emit("algorithm", g.group, g.group, "*", "*", g.stats);
    for (const auto& g : s.by_architecture)
        emit("architecture", g.group, "*", "*", g.group == "edge-cloud" ? "on" : "off", g.stats);
    for (std::size_t i = 0; i < s.by_experiment.size(); ++i) {
        const auto& c = s.by_experiment[i];
        emit("experiment", std::to_string(i + 1), std::string(to_string(c.config.algorithm)),
             std::string(to_string(c.config.workload)), c.config.cloud ? "on" : "off", c.stats);
    }
    return out;
}

inline std::string influence_csv(const ExperimentReport& report)
{
    std::string out = "response,effect,percent\n";
    if (!report.influence_available)
        return out;
    for (std::size_t v = 0; v < 4; ++v) {
        const auto& inf = report.influence[v];
        if (inf.no_variation) {
            out += std::string(response_names[v]) + ",no_variation,0.000000\n";
            continue;
        }
        for (std::size_t m : effect_order)
            out += std::string(response_names[v]) + ',' + effect_name(m) + ',' + format_fixed(inf.percent[m]) + '\n';
        out += std::string(response_names[v]) + ",error," + format_fixed(inf.error_percent) + '\n';
    }
    return out;
}

inline std::string text_report(const ExperimentReport& report, const Summaries& s)
{
    std::ostringstream os;
    auto stats_line = [&](const std::array<SampleStats, 4>& st) {
        for (std::size_t v = 0; v < 4; ++v)
            os << "  " << format_fixed(st[v].mean, 2) << " +/- " << format_fixed(st[v].std, 2);
        os << '\n';
    };
    os << "Responses (mean +/- std): latency violations, drops, average latency (ms), power (W)\n\n";
    os << "By algorithm\n";
    for (const auto& g : s.by_algorithm) {
        os << "  " << g.group << ':';
        stats_line(g.stats);
    }
    os << "\nBy architecture\n";
    for (const auto& g : s.by_architecture) {
        os << "  " << g.group << ':';
        stats_line(g.stats);
    }
    os << "\nBy experiment\n";
    for (std::size_t i = 0; i < s.by_experiment.size(); ++i) {
        const auto& c = s.by_experiment[i].config;
        os << "  " << (i + 1) << ' ' << to_string(c.algorithm) << ' ' << to_string(c.workload) << " cloud-"
           << (c.cloud ? "on" : "off") << ':';
        stats_line(s.by_experiment[i].stats);
    }
    os << "\nInfluence (% of total variation)\n";
    if (!report.influence_available) {
        os << "  unavailable (unbalanced design)\n";
    } else {
        for (std::size_t v = 0; v < 4; ++v) {
            os << "  " << response_names[v] << ':';
            if (report.influence[v].no_variation) {
                os << " no variation\n";
                continue;
            }
            for (std::size_t m : effect_order)
                os << ' ' << effect_name(m) << '=' << format_fixed(report.influence[v].percent[m], 2);
            os << " error=" << format_fixed(report.influence[v].error_percent, 2) << '\n';
        }
    }
    if (!report.failures.empty()) {
        os << "\nFailed runs\n";
        for (const auto& f : report.failures)
            os << "  " << f << '\n';
    }
    return os.str();
}

} // namespace continuum

#endif // CONTINUUM_EXPERIMENT_HPP
