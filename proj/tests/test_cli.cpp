#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <json.hpp>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(FAIRQA_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(FAIRQA_DATA_DIR) + "/" + name; }

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / ("fairqa_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, HelpIsSuccess) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, UnknownOptionIsUsageError) {
    EXPECT_EQ(run("analyze --bogus " + data("chain4.json")).code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, AnalyzeChain) {
    const auto r = run("analyze " + data("chain4.json"));
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("order"), "first");
    EXPECT_EQ(j.at("states").size(), 5u);
    EXPECT_NEAR(j.at("tv_uniform").get<double>(), 7.0 / 30.0, 1e-12);
}

TEST(Cli, AnalyzeWithBindingAndOracle) {
    const auto r = run("analyze " + data("triangle.json") + " --set b=0.5 --oracle quasistatic");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("order"), "second");
    EXPECT_TRUE(j.contains("oracle"));
}

TEST(Cli, MissingFileIsConfigError) { EXPECT_EQ(run("analyze /nonexistent/model.json").code, 2); }

TEST(Cli, MalformedModelIsConfigError) {
    const auto dir = scratch_dir();
    std::ofstream(dir / "bad.json") << "{\"num_spins\": 3, \"terms\": [{\"spins\": [0, 9], \"coeff\": 1}]}";
    EXPECT_EQ(run("analyze " + (dir / "bad.json").string()).code, 2);
    std::ofstream(dir / "broken.json") << "{ not json";
    EXPECT_EQ(run("analyze " + (dir / "broken.json").string()).code, 2);
}

TEST(Cli, OrderConflictIsConfigError) {
    EXPECT_EQ(run("analyze " + data("chain4.json") + " --order second").code, 2);
}

TEST(Cli, StepSizeIsNumericalError) {
    EXPECT_EQ(run("analyze " + data("chain4.json") + " --oracle schrodinger --tau 20 --dt 0.5").code, 3);
}

TEST(Cli, OracleCapacityError) {
    const auto dir = scratch_dir();
    ASSERT_EQ(run("nqueens --n 5 --emit " + (dir / "q5.json").string()).code, 0);
    EXPECT_EQ(run("verify " + data("chain4.json") + " --lambda 0").code, 2);
    // 25 spins: the exact oracle refuses
    EXPECT_EQ(run("analyze " + (dir / "q5.json").string() + " --oracle quasistatic").code, 4);
}

TEST(Cli, Verify) {
    const auto r = run("verify " + data("matsuda.json") + " --driver tf+pairs --dt 2e-3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("agree"), std::string::npos);
}

TEST(Cli, SweepCsv) {
    const auto dir = scratch_dir();
    const auto csv = dir / "sweep.csv";
    ASSERT_EQ(run("sweep " + data("triangle.json") + " --sweep b=0.5:1.5:3 --csv " + csv.string()).code, 0);
    const auto text = slurp(csv);
    EXPECT_EQ(text.substr(0, 8), "b,state,");
}

TEST(Cli, ExportDot) {
    const auto r = run("export-dot " + data("toy.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("graph solution_graph"), std::string::npos);
}

TEST(Cli, EmbedAndAnalyze) {
    const auto dir = scratch_dir();
    const auto phys = dir / "phys.json";
    ASSERT_EQ(run("embed " + data("matsuda.json") + " " + data("matsuda_embedding.json") +
                  " --chain-strength 1.5 --out " + phys.string())
                  .code,
              0);
    const auto r = run("analyze " + phys.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out).at("states").size(), 6u);
    EXPECT_EQ(run("embed " + data("matsuda.json") + " " + data("matsuda_embedding.json") + " --chain-strength -1").code,
              2);
}

TEST(Cli, Eltip) {
    const auto r = run("eltip " + data("matsuda.json") + " --spin 0");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out).at("num_spins"), 5);
    EXPECT_EQ(run("eltip " + data("toy.json") + " --spin 0").code, 2);
}

TEST(Cli, NQueens) {
    const auto r = run("nqueens --n 5 --triples");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("solutions"), 10);
    EXPECT_EQ(j.at("families"), 2);
    EXPECT_EQ(run("nqueens --n 3").code, 0); // counting works below 4; no model emitted
    EXPECT_EQ(run("nqueens --n 3 --emit /dev/null").code, 2);
}

TEST(Cli, SqaSmall) {
    const auto r = run("sqa " + data("matsuda.json") + " --targets " + data("matsuda_targets.json") +
                       " --sweeps 20 --samples 5 --runs 2 --threads 1");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("samples"), 5);
    EXPECT_EQ(j.at("runs"), 2);
    EXPECT_EQ(run("sqa " + data("matsuda.json") + " --targets " + data("matsuda_targets.json") + " --slices 1").code, 2);
}
