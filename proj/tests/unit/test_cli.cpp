#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "boa/plan_io.hpp"
#include "boa/width_calculator.hpp"
#include "boa/workload_io.hpp"
#include "commands.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace boa;

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "boa");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

WorkloadSpec cli_workload() {
    using boa::testing::epoch;
    using boa::testing::job_class;
    return WorkloadSpec({job_class("a", 0.01, {epoch(100.0, boa::testing::profile_a())}),
                         job_class("b", 0.005, {epoch(300.0, boa::testing::profile_b()), epoch(200.0, boa::testing::profile_a())},
                                   20.0)});
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("boa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream(spec()) << [&] {
            std::ostringstream s;
            write_workload(s, workload);
            return s.str();
        }();
        ASSERT_EQ(invoke({"gen-trace", spec(), "--model", "bursty", "--c2", "2.65", "--n", "300", "--seed", "3",
                          "--out", trace()})
                      .code,
                  0);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string spec() const { return (dir / "spec.json").string(); }
    std::string trace() const { return (dir / "trace.jsonl").string(); }

    fs::path dir;
    WorkloadSpec workload = cli_workload();
};

TEST_F(Cli, GenTraceDeterministic) {
    const auto again = (dir / "again.jsonl").string();
    ASSERT_EQ(invoke({"gen-trace", spec(), "--model", "bursty", "--c2", "2.65", "--n", "300", "--seed", "3", "--out",
                      again})
                  .code,
              0);
    std::ifstream a(trace()), b(again);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(read_trace(fs::path(trace())).events.size(), 300u);
}

TEST_F(Cli, WidthsMatchesLibrary) {
    const auto r = invoke({"widths", spec(), "--budget", "4", "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    EXPECT_EQ(read_plan(in, workload), boa_width_calculator(workload, 4.0, 9).plan);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(invoke({"widths", spec(), "--budget", "1.0"}).code, cli::exit_infeasible);
    EXPECT_EQ(invoke({"solve", spec(), "--budget", "1.0"}).code, cli::exit_infeasible);
    EXPECT_EQ(invoke({"widths", (dir / "missing.json").string(), "--budget", "4"}).code, cli::exit_usage);
    EXPECT_EQ(invoke({"simulate", spec(), trace(), "--policy", "nope"}).code, cli::exit_usage);
    EXPECT_EQ(invoke({"simulate", spec(), trace(), "--policy", "boa"}).code, cli::exit_usage);
    EXPECT_EQ(invoke({"compare", spec(), trace(), "--boa-budgets", "4"}).code, cli::exit_usage);
    EXPECT_EQ(invoke({"bogus"}).code, cli::exit_usage);

    std::ofstream(dir / "bad.json") << "{\"classes\": [";
    EXPECT_EQ(invoke({"widths", (dir / "bad.json").string(), "--budget", "4"}).code, cli::exit_usage);
}

TEST_F(Cli, SimulateWritesArtifacts) {
    const auto prefix = (dir / "run").string();
    const auto r = invoke({"simulate", spec(), trace(), "--policy", "efficiency", "--target-c", "0.6", "--out", prefix});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_NEAR(summary.at("delta").get<double>(), 0.3 * 0.4, 1e-12);
    EXPECT_EQ(summary.at("completed").get<std::size_t>(), 300u);
    EXPECT_TRUE(fs::exists(prefix + ".summary.json"));
    EXPECT_TRUE(fs::exists(prefix + ".jobs.csv"));
    std::ifstream events(prefix + ".events.jsonl");
    const auto log = read_event_log(events);
    EXPECT_FALSE(log.empty());

    const auto boa = invoke({"simulate", spec(), trace(), "--policy", "boa", "--budget", "4"});
    ASSERT_EQ(boa.code, 0) << boa.err;
    const auto bs = nlohmann::json::parse(boa.out);
    EXPECT_EQ(bs.at("queue_events").get<int>(), 0);
    EXPECT_EQ(bs.at("width_deviations").get<int>(), 0);
    EXPECT_TRUE(bs.contains("analytic"));
}

TEST_F(Cli, FrontierIsMonotone) {
    const auto r = invoke({"frontier", spec(), trace(), "--budgets", "8", "1", "4", "5", "6", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "budget,status,plan_budget,analytic_mean_jct,analytic_budget,sim_mean_jct,sim_p95_jct,sim_usage");
    std::vector<double> budgets, jct;
    std::vector<std::string> status;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        ASSERT_GE(cells.size(), 4u);
        budgets.push_back(std::stod(cells[0]));
        status.push_back(cells[1]);
        if (cells[1] == "ok") jct.push_back(std::stod(cells[3]));
    }
    EXPECT_TRUE(std::is_sorted(budgets.begin(), budgets.end()));
    EXPECT_EQ(status.front(), "infeasible");
    ASSERT_GE(jct.size(), 4u);
    for (std::size_t n = 1; n < jct.size(); ++n) EXPECT_LE(jct[n], jct[n - 1]);
}

TEST_F(Cli, CompareCsv) {
    const auto r = invoke({"compare", spec(), trace(), "--boa-budgets", "4", "--efficiency-targets", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "policy,parameter,mean_jct,p95_jct,time_avg_usage");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 2);
}

}  // namespace
