#ifndef CONTINUUM_CLI_HPP
#define CONTINUUM_CLI_HPP

#include <continuum/errors.hpp>
#include <continuum/experiment.hpp>
#include <continuum/placement.hpp>
#include <continuum/routing.hpp>
#include <continuum/scenario_io.hpp>
#include <continuum/simulation.hpp>
#include <continuum/topology.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace continuum::cli {

enum ExitCode : int
{
    ok = 0,
    check_failed = 1,
    usage_error = 2,
};

inline constexpr const char* seed_env = "CONTINUUM_SIM_SEED";

struct CliConfig
{
    std::string subcommand;
    std::optional<std::filesystem::path> scenario_path;
    std::string strategy = "tetris";
    std::optional<std::uint64_t> seed;
    std::size_t replications = 10;
    std::optional<std::filesystem::path> output_dir;
    unsigned jobs = 0; // 0: one per hardware thread
    std::vector<std::string> overrides;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv(seed_env); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const auto value = std::stoull(env, &used);
            if (used == std::string_view(env).size())
                return value;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string(seed_env) + " is not an unsigned integer: " + env);
    }
    return fallback;
}

} // namespace detail

inline int cmd_validate(const std::filesystem::path& path, const std::vector<std::string>& overrides, std::ostream& out,
                        std::ostream& err)
{
    Scenario s;
    try {
        s = read_scenario(path, overrides);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    const auto violations = validate(s);
    for (const auto& v : violations)
        out << "violation: " << v.to_string() << '\n';
    if (!violations.empty()) {
        out << violations.size() << " violation(s)\n";
        return check_failed;
    }
    out << "ok: " << s.nodes.size() << " nodes, " << s.elements.size() << " network elements, " << s.links.size()
        << " links, " << s.users.size() << " users, " << s.tasks.size() << " tasks\n";
    return ok;
}

inline int cmd_run(const std::filesystem::path& path, std::string_view strategy_name, std::uint64_t seed,
                   const std::optional<std::filesystem::path>& output_dir, const std::vector<std::string>& overrides,
                   std::ostream& out, std::ostream& err)
{
    Strategy strategy;
    Scenario s;
    try {
        strategy = parse_strategy(strategy_name);
        s = read_scenario(path, overrides);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    RunReport report;
    try {
        report = simulate(s, strategy, seed);
    } catch (const std::exception& e) {
        err << "simulation failed: " << e.what() << '\n';
        return check_failed;
    }
    out << "latency violations: " << report.latency_sla_violations << '\n';
    out << "drops: " << report.drop_sla_violations << '\n';
    out << "average latency (ms): " << format_fixed(report.average_latency, 3) << '\n';
    out << "power (W): " << format_fixed(report.power_consumption, 3) << '\n';

    if (output_dir) {
        std::filesystem::create_directories(*output_dir);
        RunLabel label{path.stem().string(), "custom", s.cloud_enabled};
        detail::write_file(*output_dir / "run.csv", run_csv_header() + "\n" + run_csv_row(label, report) + "\n");
        detail::write_file(*output_dir / "ledger.csv", ledger_csv(report));
        detail::write_file(*output_dir / "report.json", to_json(report).dump(2) + "\n");
    }
    return ok;
}

inline int cmd_experiment(std::size_t replications, std::uint64_t seed_base, const std::filesystem::path& output_dir,
                          const std::vector<std::string>& overrides, unsigned jobs, std::ostream& out, std::ostream& err)
{
    if (replications < 2) {
        err << "error: --replications must be at least 2\n";
        return usage_error;
    }
    ExperimentSetup setup;
    try {
        for (const auto& o : overrides)
            apply_setup_override(setup, o);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    setup.jobs = jobs != 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());

    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < replications; ++i)
        seeds.push_back(seed_base + i);
    const ExperimentReport report = run_factorial(replications, seeds, setup);
    const Summaries summaries = summarize(report.rows);

    std::filesystem::create_directories(output_dir);
    detail::write_file(output_dir / "raw.csv", raw_csv(report.rows));
    detail::write_file(output_dir / "summary.csv", summary_csv(summaries));
    detail::write_file(output_dir / "influence.csv", influence_csv(report));
    const std::string text = text_report(report, summaries);
    detail::write_file(output_dir / "report.txt", text);
    out << text;

    for (const auto& f : report.failures)
        err << "run failed: " << f << '\n';
    return report.failures.empty() ? ok : check_failed;
}

/// Outcome of both strategies on the bundled toy scenario at t = 0.
struct ToyOutcome
{
    PlacementPlan tetris;
    PlacementPlan proximity;
    RunReport tetris_run;
    RunReport proximity_run;

    bool golden() const
    {
        const bool placement = tetris.unplaced.empty() && proximity.unplaced == std::vector<std::string>{"APP3"};
        return placement && tetris_run.drop_sla_violations == 0 && proximity_run.drop_sla_violations == 1
            && proximity_run.ledger[2].task.id == "APP3" && proximity_run.ledger[2].timing.dropped;
    }
};

inline ToyOutcome run_toy()
{
    const Scenario s = builtin_toy_scenario();
    const RouteTable routes = build_routes(s);
    std::vector<NodeState> states;
    for (const auto* n : s.active_nodes())
        states.push_back({n, n->capacity});
    const PlacementRequest request = make_request(s.tasks, states, routes, s.weights, 0);
    return {tetris_place(request), proximity_place(request), simulate(s, Strategy::tetris, 0),
            simulate(s, Strategy::proximity, 0)};
}

inline int cmd_toy(std::ostream& out, std::ostream& err)
{
    const ToyOutcome toy = run_toy();
    auto node_of = [](const PlacementPlan& plan, const std::string& task) -> std::string {
        for (const auto& a : plan.assignments)
            if (a.task == task)
                return a.node;
        return "-";
    };
    out << "task   tetris   proximity\n";
    for (const char* task : {"APP1", "APP2", "APP3"})
        out << task << "   " << node_of(toy.tetris, task) << "       " << node_of(toy.proximity, task) << '\n';
    out << "drops  " << toy.tetris_run.drop_sla_violations << "        " << toy.proximity_run.drop_sla_violations << '\n';

    if (toy.golden()) {
        out << "golden outcome reproduced\n";
        return ok;
    }
    auto list = [](const std::vector<std::string>& v) {
        std::string s = "{";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ", " : "") + v[i];
        return s + "}";
    };
    err << "golden outcome not reproduced\n"
        << "  expected tetris unplaced {}, got " << list(toy.tetris.unplaced) << '\n'
        << "  expected proximity unplaced {APP3}, got " << list(toy.proximity.unplaced) << '\n'
        << "  expected drops 0 / 1, got " << toy.tetris_run.drop_sla_violations << " / "
        << toy.proximity_run.drop_sla_violations << '\n';
    return check_failed;
}

/// Parses the command line and dispatches. Never throws; returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Placement simulator for the edge-cloud continuum"};
    app.require_subcommand(1);
    CliConfig cfg;
    std::optional<std::uint64_t> seed_base;

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file against every model invariant");
    validate_cmd->add_option("--scenario", cfg.scenario_path, "Scenario JSON file")->required();
    validate_cmd->add_option("--set", cfg.overrides, "Dotted key=value override (repeatable)");

    auto* run_cmd = app.add_subcommand("run", "Simulate one scenario with one strategy");
    run_cmd->add_option("--scenario", cfg.scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--strategy", cfg.strategy, "tetris, proximity or optimal")->capture_default_str();
    run_cmd->add_option("--seed", cfg.seed, "Seed echoed in the report (default $CONTINUUM_SIM_SEED or 0)");
    run_cmd->add_option("--output", cfg.output_dir, "Directory for run.csv, ledger.csv and report.json");
    run_cmd->add_option("--set", cfg.overrides, "Dotted key=value override (repeatable)");

    auto* exp_cmd = app.add_subcommand("experiment", "Run the full factorial design on the bundled topology");
    exp_cmd->add_option("--replications", cfg.replications, "Replications per combination")->capture_default_str();
    exp_cmd->add_option("--seed-base", seed_base, "Replication i uses seed base + i (default $CONTINUUM_SIM_SEED or 1)");
    exp_cmd->add_option("--output", cfg.output_dir, "Directory for raw, summary and influence CSVs")->required();
    exp_cmd->add_option("--jobs", cfg.jobs, "Worker threads (0: all cores)")->capture_default_str();
    exp_cmd->add_option("--set", cfg.overrides,
                        "Override: workload.low.*, workload.high.*, topology.* or a scenario path (repeatable)");

    app.add_subcommand("toy", "Golden check of both strategies on the three-application example");

    std::vector<const char*> argv{"continuum_sim"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return usage_error;
    }

    try {
        if (validate_cmd->parsed())
            return cmd_validate(*cfg.scenario_path, cfg.overrides, out, err);
        if (run_cmd->parsed())
            return cmd_run(*cfg.scenario_path, cfg.strategy, detail::resolve_seed(cfg.seed, 0), cfg.output_dir,
                           cfg.overrides, out, err);
        if (exp_cmd->parsed())
            return cmd_experiment(cfg.replications, detail::resolve_seed(seed_base, 1), *cfg.output_dir, cfg.overrides,
                                  cfg.jobs, out, err);
        return cmd_toy(out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return check_failed;
    }
}

} // namespace continuum::cli

#endif // CONTINUUM_CLI_HPP
