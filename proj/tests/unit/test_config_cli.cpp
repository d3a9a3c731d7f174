#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "stablelab/config.hpp"
#include "stablelab/experiments.hpp"
#include "stablelab/report.hpp"

using namespace stablelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome cli(const std::string& args) {
    const std::string cmd = std::string(STABLELAB_CLI) + " " + args + " 2>&1";
    Outcome o;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return o;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
    const int status = pclose(p);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("stablelab_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const EstimateReport& row(const RunRecord& r, const std::string& name) {
    for (const auto& e : r.reports)
        if (e.name == name) return e;
    throw std::runtime_error("missing row " + name);
}

}  // namespace

TEST(Config, ParsesKeys) {
    const auto c = parse_config(
        "# comment\nexperiment = krylov_battery\nalpha=1.7\nmu=0.8\nnu=1.2\ncoefficient_preset=step_b\n"
        "n_list=2,8\nm_cal=inf\n");
    EXPECT_EQ(c.experiment, Experiment::krylov_battery);
    EXPECT_EQ(c.alpha, 1.7);
    EXPECT_EQ(c.coefficient_preset, Preset::step_b);
    EXPECT_EQ(c.n_list, (std::vector<int>{2, 8}));
    EXPECT_TRUE(std::isinf(c.m_cal));
    EXPECT_TRUE(validate(c).empty());
}

TEST(Config, ReportsEveryProblem) {
    try {
        parse_config("alpha=abc\nbogus=1\nmu=1\nmu=2\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.diagnostics.size(), 3u);
    }
}

TEST(Config, FieldDiagnostics) {
    ExperimentConfig c;
    c.mu = 2.0;
    c.nu = 1.0;
    c.alpha = 2.5;
    c.n_x = 100;
    const auto d = validate(c);
    ASSERT_EQ(d.size(), 3u);
    bool both = false;
    for (const auto& s : d) both |= s.find("mu") != std::string::npos && s.find("nu") != std::string::npos;
    EXPECT_TRUE(both);
    EXPECT_THROW(require_valid(c), ValidationError);
}

TEST(Config, EchoRoundTrip) {
    ExperimentConfig c;
    c.experiment = Experiment::feynman_kac;
    c.alpha = 1.3;
    c.x0 = -0.25;
    c.n_list = {3, 9};
    EXPECT_EQ(echo_config(parse_config(echo_config(c))), echo_config(c));
}

TEST(Report, PassImpliesRegime) {
    EstimateReport r;
    r.name = "x";
    r.regime_ok = false;
    r.decide(true);
    EXPECT_FALSE(r.pass);
    EXPECT_NO_THROW(csv_row(r));
    r.pass = true;
    EXPECT_THROW(csv_row(r), InvariantError);
}

TEST(Report, Formatting) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EstimateReport r;
    r.name = "y";
    r.lhs = 1.0;
    r.rhs = 2.0;
    r.decide(true);
    EXPECT_EQ(csv_row(r), "y,1,,2,0,true,true");
    r.se = 0.5;
    EXPECT_EQ(csv_row(r), "y,1,0.5,2,0,true,true");
}

TEST(Experiments, ConstantsMatchOracles) {
    ExperimentConfig c;
    c.experiment = Experiment::constants;
    c.mu = 1.0;
    c.nu = 1.0;
    c.K = 1.0;
    c.alpha = 1.5;
    c.lam = 1.0;
    const auto r = run(c);
    EXPECT_NEAR(row(r, "delta").lhs / oracle::brute_force_delta(1.0, 1.0, 1.5), 1.0, 1e-6);
    EXPECT_NEAR(row(r, "lambda0").lhs / oracle::brute_force_lambda0(1.0, 1.5), 1.0, 1e-6);
    EXPECT_NEAR(row(r, "m1").lhs / oracle::m1_beta(1.0, 1.5), 1.0, 1e-8);
    for (const auto& e : r.reports) EXPECT_TRUE(e.pass) << e.name;
}

TEST(Experiments, BrownianFeynmanKacRow) {
    ExperimentConfig c;
    c.experiment = Experiment::feynman_kac;
    c.alpha = 2.0;
    c.K = 0.0;
    c.n_t = 128;
    c.n_x = 512;
    c.len_t = 16;
    c.len_x = 64;
    c.n_paths = 20000;
    c.dt = 0.05;
    const auto r = run(c);
    ASSERT_FALSE(r.regime_error.has_value());
    const auto& fine = row(r, "feynman_kac_dt_half");
    EXPECT_TRUE(fine.pass);
    EXPECT_LT(std::abs(fine.lhs - fine.rhs), 3.0 * *fine.se + std::stod(*fine.find("allowance")));
}

TEST(Experiments, RegimeErrorBecomesRow) {
    ExperimentConfig c;
    c.experiment = Experiment::feynman_kac;
    c.len_x = 4.0;
    c.n_x = 64;
    c.n_paths = 2000;
    c.dt = 0.1;
    const auto r = run(c);
    ASSERT_TRUE(r.regime_error.has_value());
    ASSERT_EQ(r.reports.size(), 1u);
    EXPECT_FALSE(r.reports[0].regime_ok);
    EXPECT_FALSE(r.reports[0].pass);
}

TEST(Cli, ListAndValidate) {
    const auto l = cli("list-experiments");
    EXPECT_EQ(l.code, 0);
    EXPECT_NE(l.out.find("convergence_study"), std::string::npos);
    const fs::path d = scratch("validate");
    EXPECT_EQ(cli("validate --config " + write_file(d / "ok.conf", "experiment=constants\n").string()).code, 0);
    const auto bad = cli("validate --config " + write_file(d / "bad.conf", "mu=2\nnu=1\n").string());
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.out.find("mu"), std::string::npos);
    EXPECT_NE(bad.out.find("nu"), std::string::npos);
    EXPECT_EQ(cli("run --config " + (d / "bad.conf").string()).code, 2);
    EXPECT_EQ(cli("run").code, 2);
}

TEST(Cli, SmallLambdaExitsWithValidationCode) {
    const fs::path d = scratch("lam");
    const auto conf = write_file(d / "c.conf",
                                 "experiment=solve_manufactured\ncoefficient_preset=smooth_sine\nmu=1\nnu=1\nK=1\n"
                                 "lam=0.5\nn_t=16\nn_x=32\n");
    const auto o = cli("run --config " + conf.string() + " --out " + (d / "out").string());
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.out.find("lam"), std::string::npos);
}

TEST(Cli, RegimeExitCode) {
    const fs::path d = scratch("regime");
    const auto conf = write_file(d / "c.conf", "experiment=feynman_kac\nlen_x=4\nn_x=64\nn_paths=2000\ndt=0.1\n");
    const auto o = cli("run --config " + conf.string() + " --out " + (d / "out").string());
    EXPECT_EQ(o.code, 3);
    const std::string csv = slurp(d / "out" / "reports.csv");
    EXPECT_NE(csv.find("feynman_kac,"), std::string::npos);
}

TEST(Cli, RerunIsBitIdentical) {
    const fs::path d = scratch("determinism");
    const auto conf = write_file(d / "c.conf",
                                 "experiment=local_krylov\ncoefficient_preset=step_b\nmu=0.8\nnu=1.2\nK=0.3\n"
                                 "n_t=128\nn_x=256\nlen_t=32\nlen_x=64\nn_paths=2000\ndt=0.05\nhorizon=10\nm=3\n");
    const auto a = cli("run --config " + conf.string() + " --out " + (d / "a").string());
    const auto b = cli("run --config " + conf.string() + " --out " + (d / "b").string());
    ASSERT_EQ(a.code, 0) << a.out;
    ASSERT_EQ(b.code, 0) << b.out;
    EXPECT_EQ(slurp(d / "a" / "reports.csv"), slurp(d / "b" / "reports.csv"));
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(fs::exists(d / "a" / "reports.csv.tmp"));
    EXPECT_TRUE(fs::exists(d / "a" / "record.txt"));
}
