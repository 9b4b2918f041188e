#include "oedg/cli_io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oedg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("oedg_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json metadata(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "metadata.json")); }

}  // namespace

TEST(Config, KeyValuesAndComments) {
    std::istringstream in("# header\nproblem = euler_vacuum  # trailing\n\nk=2\ntimes = 0, 0.05,0.1\ngen = 20,2\n");
    const auto kv = parse_key_values(in);
    EXPECT_EQ(kv.size(), 4u);
    RunConfig cfg;
    apply_key_values(cfg, kv);
    EXPECT_EQ(cfg.problem, "euler_vacuum");
    EXPECT_EQ(cfg.k, 2);
    EXPECT_EQ(cfg.times, (std::vector<double>{0, 0.05, 0.1}));
    ASSERT_TRUE(cfg.gen);
    EXPECT_EQ(*cfg.gen, std::make_pair(20, 2));

    std::istringstream bad("k 2\n");
    EXPECT_THROW(parse_key_values(bad), ConfigError);
    EXPECT_THROW(apply_key_values(cfg, {{"colour", "red"}}), ConfigError);
    EXPECT_THROW(apply_key_values(cfg, {{"k", "two"}}), ConfigError);
}

TEST(Config, ValidationRejectsInconsistentRuns) {
    const auto invalid = [](auto edit) {
        RunConfig c;
        edit(c);
        EXPECT_THROW(validate(c), ConfigError);
    };
    invalid([](RunConfig& c) { c.k = 5; });
    invalid([](RunConfig& c) { c.k = 3, c.bp = "dcw", c.problem = "euler_vacuum"; });
    invalid([](RunConfig& c) { c.oe = "ri"; });
    invalid([](RunConfig& c) { c.bp = "dcw"; });  // smooth advection declares no bounds
    invalid([](RunConfig& c) { c.times = {2.0}, c.t_end = 1.0; });
    invalid([](RunConfig& c) { c.rk = "rk7"; });
    invalid([](RunConfig& c) { c.problem = "nope"; });
    RunConfig ok;
    ok.problem = "euler_vacuum";
    ok.oe = "ri";
    ok.bp = "zxs";
    ok.k = 2;
    EXPECT_NO_THROW(validate(ok));
}

TEST(Cli, DecompositionOfEquilateralTriangle) {
    std::ostringstream out, err;
    const double h = std::sqrt(3.0) / 2;
    ASSERT_EQ(cmd_decomp({Point{0, 0}, Point{1, 0}, Point{0.5, h}}, 1, "all", out, err), 0) << err.str();
    std::istringstream lines(out.str());
    std::string header, dcw, zxs, cs;
    std::getline(lines, header);
    std::getline(lines, dcw);
    std::getline(lines, zxs);
    std::getline(lines, cs);
    EXPECT_EQ(header, "scheme,k,C_BP,w1,w2,w3,internal_mass,nodes");
    EXPECT_EQ(dcw.substr(0, 6), "dcw,1,");
    EXPECT_NEAR(std::stod(dcw.substr(6)), 1.0 / 3, 1e-12);
    EXPECT_EQ(cs.substr(0, 3), "cs,");
    EXPECT_EQ(cmd_decomp({Point{0, 0}, Point{0.5, h}, Point{1, 0}}, 1, "all", out, err), kExitConfig);
    EXPECT_EQ(cmd_decomp({Point{0, 0}, Point{1, 0}, Point{0.5, h}}, 3, "all", out, err), kExitConfig);
}

TEST(Cli, ZeroOutputTimesWritesMetadataOnly) {
    const fs::path dir = scratch("meta_only");
    RunConfig cfg;
    cfg.gen = std::make_pair(4, 4);
    cfg.t_end = 0.01;
    cfg.out = dir.string();
    std::ostringstream log, err;
    ASSERT_EQ(cmd_run(cfg, log, err), 0) << err.str();
    EXPECT_FALSE(fs::exists(dir / "snapshot_0.csv"));
    const auto meta = metadata(dir);
    EXPECT_EQ(meta["status"], "ok");
    EXPECT_EQ(meta["final_time"], 0.01);
    EXPECT_EQ(meta["cells"], 32);
    fs::remove_all(dir);
}

TEST(Cli, RerunsAreByteIdentical) {
    std::string first;
    for (int pass = 0; pass < 2; ++pass) {
        const fs::path dir = scratch("rerun" + std::to_string(pass));
        RunConfig cfg;
        cfg.problem = "euler_vacuum";
        cfg.k = 2;
        cfg.oe = "ri";
        cfg.bp = "dcw";
        cfg.gen = std::make_pair(20, 2);
        cfg.t_end = 0.02;
        cfg.times = {0, 0.02};
        cfg.sample = std::make_pair(10, 2);
        cfg.out = dir.string();
        std::ostringstream log, err;
        ASSERT_EQ(cmd_run(cfg, log, err), 0) << err.str();
        const std::string now = slurp(dir / "snapshot_1.csv") + slurp(dir / "sample_1.csv");
        EXPECT_GT(now.size(), 1000u);
        if (pass == 0) first = now;
        else EXPECT_EQ(now, first);
        fs::remove_all(dir);
    }
}

TEST(Cli, ExitCodesAndLastGoodSnapshot) {
    std::ostringstream log, err;
    RunConfig bad;
    bad.k = 9;
    EXPECT_EQ(cmd_run(bad, log, err), kExitConfig);
    EXPECT_NE(err.str().find("configuration error"), std::string::npos);

    const fs::path dir = scratch("abort");
    RunConfig cfg;
    cfg.problem = "euler_vacuum";
    cfg.gen = std::make_pair(40, 2);
    cfg.out = dir.string();
    EXPECT_EQ(cmd_run(cfg, log, err), kExitAdmissibility);
    const auto meta = metadata(dir);
    EXPECT_EQ(meta["status"], "aborted");
    EXPECT_TRUE(meta.contains("error"));
    EXPECT_LT(meta["final_time"].get<double>(), 0.15);
    EXPECT_TRUE(fs::exists(dir / "snapshot_last_good.csv"));
    fs::remove_all(dir);

    std::ostringstream out;
    EXPECT_EQ(cmd_cflscan(50, "no/such/mesh.txt", 1, 1, out, err), kExitConfig);
}

TEST(Cli, ConvergenceAndScanTables) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_convergence("burgers_smooth", 1, 2, "cw", out, err), 0) << err.str();
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "N,L1,order1,L2,order2,Linf,orderinf");
    std::getline(lines, line);
    EXPECT_NE(line.find(",-,"), std::string::npos);
    std::getline(lines, line);
    EXPECT_EQ(line.find(",-,"), std::string::npos);

    std::ostringstream scan;
    ASSERT_EQ(cmd_cflscan(200, "", 2, 3, scan, err), 0) << err.str();
    EXPECT_EQ(scan.str().substr(0, scan.str().find('\n')),
              "k,cells,dcw_over_zxs_min,dcw_over_zxs_max,dcw_over_cs_min,dcw_over_cs_max");
}
