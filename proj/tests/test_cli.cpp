#include <sys/wait.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <json.hpp>

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(THULLEN_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    const int status = pclose(f);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    ADD_FAILURE() << "missing column " << name;
    return 0;
}

} // namespace

TEST(Cli, InvalidInputExitsWithTwo) {
    EXPECT_EQ(run("kernel --alpha 0").code, 2);
    EXPECT_EQ(run("kernel --alpha x").code, 2);
    EXPECT_EQ(run("profile").code, 2);
    EXPECT_EQ(run("profile --symbol nosuchsymbol").code, 2);
    EXPECT_EQ(run("bounds --pexp 4 --points 1").code, 2);
    EXPECT_EQ(run("cover --radius 1.5").code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
}

TEST(Cli, KernelAgreesWithSeriesAndBall) {
    const CliRun r = run("kernel --alpha 1 --points 20");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 22u);
    const auto& h = rows.front();
    const std::size_t rel = column(h, "rel_err"), ball = column(h, "ball_rel_err");
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        EXPECT_LT(std::stod(rows[i][rel]), 1e-12);
        EXPECT_LT(std::stod(rows[i][ball]), 1e-12);
    }
    EXPECT_EQ(rows.back().front(), "max");
}

TEST(Cli, OutputIsDeterministic) {
    const CliRun a = run("kernel --alpha 2.5 --points 10 --seed 7");
    const CliRun b = run("kernel --alpha 2.5 --points 10 --seed 7");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const CliRun c = run("kernel --alpha 2.5 --points 10 --seed 8");
    EXPECT_NE(a.out, c.out);

    const CliRun d = run("cover --density 300");
    const CliRun e = run("cover --density 300");
    ASSERT_EQ(d.code, 0);
    EXPECT_EQ(d.out, e.out);
}

TEST(Cli, IdentityProfileHasUnitNorms) {
    const CliRun r = run("profile --symbol one --trunc 8 --grid 4");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_GE(rows.size(), 5u);
    const std::size_t norm = column(rows.front(), "norm");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][norm]), 1.0, 1e-8);
}

TEST(Cli, CoverReportsSubunitDiameters) {
    const CliRun r = run("cover --density 300 --radius 0.9");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_FALSE(j.at("runs").empty());
    for (const auto& entry : j.at("runs")) {
        EXPECT_TRUE(entry.at("valid").get<bool>());
        EXPECT_LT(entry.at("stats").at("diam_obs").get<double>(), 1.0);
        EXPECT_GE(entry.at("stats").at("n_cells").get<int>(), 1);
    }
}

TEST(Cli, IntegralsReportTheThreeRegimes) {
    const CliRun r = run("integrals --alpha 1");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& regimes = j.at("disc_integrals");
    ASSERT_EQ(regimes.size(), 3u);
    EXPECT_EQ(regimes[0].at("regime"), "bounded");
    EXPECT_EQ(regimes[1].at("regime"), "logarithmic");
    const double slope = regimes[1].at("slope").get<double>();
    EXPECT_GT(slope, 0.8);
    EXPECT_LT(slope, 1.2);
    EXPECT_EQ(regimes[2].at("regime"), "power");
    EXPECT_NEAR(regimes[2].at("exponent").get<double>(), -0.5, 0.1);
    EXPECT_LT(j.at("forelli_rudin").at("bounded").at("spread").get<double>(), 2.0);
}

TEST(Cli, StrictModeSignalsBreaches) {
    EXPECT_EQ(run("integrals --alpha 1 --strict").code, 0);
    // at alpha = 2 the bounded Forelli-Rudin family still grows by more than a factor 2 over t = .9 .. .999
    EXPECT_EQ(run("integrals --alpha 2 --strict").code, 1);
}

TEST(Cli, BoundsSweepHasTrustedIdentityRows) {
    const CliRun r = run("bounds --symbol one --points 4 --trunc 6");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 5u);
    const auto& h = rows.front();
    const std::size_t exact = column(h, "identity_exact");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = std::stod(rows[i][exact]);
        EXPECT_GT(v, 0.5);
        EXPECT_LT(v, 2.0);
    }
}

TEST(Cli, WritesToOutputFile) {
    const std::string path = ::testing::TempDir() + "thullen_cli_out.csv";
    std::remove(path.c_str());
    ASSERT_EQ(run("kernel --points 2 --out " + path).code, 0);
    FILE* f = std::fopen(path.c_str(), "r");
    ASSERT_NE(f, nullptr);
    char head[8] = {};
    EXPECT_EQ(std::fread(head, 1, 5, f), 5u);
    std::fclose(f);
    EXPECT_EQ(std::string(head), "z1_re");
    std::remove(path.c_str());
}
