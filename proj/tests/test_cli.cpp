#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(ATR_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string cfg(const std::string& name) { return std::string(ATR_CONFIG_DIR) + "/" + name; }

std::filesystem::path scratch() {
    auto d = std::filesystem::temp_directory_path() / "atr_cli_test";
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST(Cli, MissingConfigIsAConfigError) { EXPECT_EQ(run("atr --config /nonexistent.cfg").code, 2); }

TEST(Cli, PrecisionBelowToleranceIsRefused) {
    EXPECT_EQ(run("atr --dry-run --config " + cfg("e29.cfg") + " --precision-digits 10").code, 4);
}

TEST(Cli, DryRunReportsThePlan) {
    auto r = run("atr --dry-run --config " + cfg("e29.cfg") + " --norm-bound 500");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema_version"], 1);
    const auto& e = j["result"]["embeddings"][0];
    EXPECT_EQ(e["plan"]["chain_rule"], "pinned");
    EXPECT_EQ(e["plan"]["expansion"].size(), 5u);
    EXPECT_GT(e["plan"]["regions"].get<int>(), 10);
    EXPECT_FALSE(j["result"].contains("J"));
}

TEST(Cli, DryRunOfTheTwoEmbeddingCurve) {
    auto r = run("atr --dry-run --config " + cfg("e509.cfg"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["result"]["embeddings"].size(), 2u);
}

TEST(Cli, CoeffsWritesAndReusesTheCache) {
    auto path = (scratch() / "e29.coef").string();
    std::filesystem::remove(path);
    auto a = run("coeffs --config " + cfg("e29.cfg") + " --norm-bound 400 --cache " + path);
    ASSERT_EQ(a.code, 0);
    EXPECT_TRUE(std::filesystem::exists(path));
    auto b = run("coeffs --config " + cfg("e29.cfg") + " --norm-bound 300 --cache " + path);
    ASSERT_EQ(b.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(b.out)["from_cache"].get<bool>());
    // a damaged cache is rebuilt rather than trusted
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "garbage";
    }
    auto c = run("coeffs --config " + cfg("e29.cfg") + " --norm-bound 300 --cache " + path);
    ASSERT_EQ(c.code, 0);
    EXPECT_FALSE(nlohmann::json::parse(c.out)["from_cache"].get<bool>());
}

TEST(Cli, FullRunOnASmallTableRecognisesThePoint) {
    auto path = (scratch() / "e29_small.coef").string();
    auto r = run("atr --config " + cfg("e29.cfg") + " --norm-bound 40000 --threads 4 --cache " + path);
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["result"]["relation"]["found"].get<bool>());
    EXPECT_EQ(j["result"]["relation"]["m"], 3);
}

TEST(Cli, VerifySingleCriterion) {
    auto r = run("verify --only 5 --cache-dir " + (scratch() / "cache").string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("PASS  5."), std::string::npos);
}
