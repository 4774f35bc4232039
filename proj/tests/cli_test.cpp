#include <continuum/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace continuum;

namespace {

const std::filesystem::path data_dir{CONTINUUM_DATA_DIR};

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("continuum_cli_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST(Toy, GoldenOutcome)
{
    const Result r = run_cli({"toy"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("golden outcome reproduced"), std::string::npos);
    EXPECT_NE(r.out.find("APP3   S1       -"), std::string::npos) << r.out;
}

TEST(Run, ToyTetris)
{
    const Result r = run_cli({"run", "--scenario", (data_dir / "toy.json").string(), "--strategy", "tetris"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("drops: 0\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("latency violations: "), std::string::npos);
    EXPECT_NE(r.out.find("average latency (ms): "), std::string::npos);
    EXPECT_NE(r.out.find("power (W): "), std::string::npos);
}

TEST(Run, ToyProximity)
{
    const Result r = run_cli({"run", "--scenario", (data_dir / "toy.json").string(), "--strategy", "proximity"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("drops: 1\n"), std::string::npos) << r.out;
}

TEST(Run, UnknownStrategyIsAUsageError)
{
    const Result r = run_cli({"run", "--scenario", (data_dir / "toy.json").string(), "--strategy", "thea"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("unknown strategy"), std::string::npos) << r.err;
}

TEST(Run, WritesReportsIntoTheOutputDirectory)
{
    const auto dir = scratch("run");
    const std::vector<std::string> args{"run",    "--scenario", (data_dir / "paper_topology.json").string(),
                                        "--seed", "12",         "--output",
                                        dir.string()};
    ASSERT_EQ(run_cli(args).code, 0);
    const std::string row = slurp(dir / "run.csv");
    EXPECT_EQ(row.rfind(run_csv_header() + "\npaper_topology,tetris,custom,on,12,", 0), 0u) << row;
    EXPECT_EQ(std::count(row.begin(), row.end(), '\n'), 2);
    EXPECT_TRUE(std::filesystem::exists(dir / "ledger.csv"));
    const Json report = parse_json_document(slurp(dir / "report.json"));
    EXPECT_EQ(report["ledger"].size(), 6u);

    const std::string ledger = slurp(dir / "ledger.csv");
    ASSERT_EQ(run_cli(args).code, 0);
    EXPECT_EQ(slurp(dir / "ledger.csv"), ledger);
    EXPECT_EQ(slurp(dir / "run.csv"), row);
}

TEST(Run, SeedFallsBackToTheEnvironment)
{
    const auto dir = scratch("env_seed");
    ::setenv(cli::seed_env, "4242", 1);
    const Result r = run_cli({"run", "--scenario", (data_dir / "toy.json").string(), "--output", dir.string()});
    ::unsetenv(cli::seed_env);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(slurp(dir / "run.csv").find(",4242,"), std::string::npos);

    ::setenv(cli::seed_env, "not-a-number", 1);
    const Result bad = run_cli({"run", "--scenario", (data_dir / "toy.json").string()});
    ::unsetenv(cli::seed_env);
    EXPECT_EQ(bad.code, 2);
}

TEST(Run, OverridesApplyAfterLoading)
{
    const Result r = run_cli({"run", "--scenario", (data_dir / "toy.json").string(), "--strategy", "proximity", "--set",
                              "horizon_ms=100"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("drops: 0\n"), std::string::npos) << r.out;
}

TEST(Validate, BundledFilesAreValid)
{
    for (const char* file : {"paper_topology.json", "toy.json"}) {
        const Result r = run_cli({"validate", "--scenario", (data_dir / file).string()});
        EXPECT_EQ(r.code, 0) << file << ": " << r.out << r.err;
        EXPECT_EQ(r.out.rfind("ok:", 0), 0u);
    }
}

TEST(Validate, CorruptedFileIsAParseError)
{
    const auto dir = scratch("corrupt");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "broken.json") << slurp(data_dir / "toy.json").substr(0, 120);
    const Result r = run_cli({"validate", "--scenario", (dir / "broken.json").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("malformed"), std::string::npos) << r.err;
}

TEST(Validate, SeededCapacityViolationIsListed)
{
    const Result r = run_cli(
        {"validate", "--scenario", (data_dir / "paper_topology.json").string(), "--set", "nodes.2.capacity.cpu=0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("violation: node ES2: capacity must be positive"), std::string::npos) << r.out;
}

TEST(Experiment, RowCountAndByteIdenticalReruns)
{
    const auto a = scratch("exp_a"), b = scratch("exp_b");
    const Result first = run_cli({"experiment", "--replications", "2", "--seed-base", "77", "--output", a.string()});
    ASSERT_EQ(first.code, 0) << first.err;
    ASSERT_EQ(run_cli({"experiment", "--replications", "2", "--seed-base", "77", "--output", b.string(), "--jobs", "1"}).code, 0);
    const std::string raw = slurp(a / "raw.csv");
    EXPECT_EQ(std::count(raw.begin(), raw.end(), '\n'), 17);
    EXPECT_EQ(raw, slurp(b / "raw.csv"));
    EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
    EXPECT_EQ(slurp(a / "influence.csv"), slurp(b / "influence.csv"));
    EXPECT_EQ(slurp(a / "report.txt"), first.out);
    EXPECT_NE(first.out.find("By architecture"), std::string::npos);
}

TEST(Experiment, SeedBaseChangesTheWorkload)
{
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    ASSERT_EQ(run_cli({"experiment", "--replications", "2", "--seed-base", "1", "--output", a.string()}).code, 0);
    ASSERT_EQ(run_cli({"experiment", "--replications", "2", "--seed-base", "2", "--output", b.string()}).code, 0);
    EXPECT_NE(slurp(a / "raw.csv"), slurp(b / "raw.csv"));
}

TEST(Experiment, UsageErrors)
{
    const auto dir = scratch("usage");
    EXPECT_EQ(run_cli({"experiment", "--replications", "1", "--output", dir.string()}).code, 2);
    EXPECT_EQ(run_cli({"experiment", "--replications", "2"}).code, 2);
    EXPECT_EQ(run_cli({"experiment", "--replications", "2", "--output", dir.string(), "--set", "topology.nope=1"}).code, 2);
    EXPECT_FALSE(std::filesystem::exists(dir));
}

TEST(Experiment, FailedRunsExitNonZeroAfterWritingResults)
{
    const auto dir = scratch("failing");
    const Result r = run_cli({"experiment", "--replications", "2", "--output", dir.string(), "--set", "links.34.latency=2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("run failed"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "raw.csv"));
}

TEST(Usage, BadCommandLines)
{
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"fly"}).code, 2);
    EXPECT_EQ(run_cli({"run"}).code, 2);
    EXPECT_EQ(run_cli({"run", "--scenario", (data_dir / "toy.json").string(), "--seed", "x"}).code, 2);
    EXPECT_EQ(run_cli({"run", "--scenario", (data_dir / "missing.json").string()}).code, 2);
    const Result help = run_cli({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("experiment"), std::string::npos);
}
