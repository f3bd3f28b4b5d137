#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nhdmp/cli.hpp"

namespace fs = std::filesystem;
using namespace nhdmp;

namespace {

const std::string kCli = NHDMP_CLI_PATH;
const std::string kSamples = NHDMP_SAMPLES_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliBinary : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("nhdmp_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(const std::string& args, const std::string& env = "") {
        const auto out = dir_ / "stdout.txt";
        const auto err = dir_ / "stderr.txt";
        const std::string cmd = env + " " + kCli + " " + args + " >" + out.string() + " 2>" + err.string();
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    fs::path dir_;
};

} // namespace

TEST(CliParsing, Horizons) {
    EXPECT_EQ(cli::parse_horizons("1..4"), (std::vector<Time>{1, 2, 3, 4}));
    EXPECT_EQ(cli::parse_horizons("2,5,9"), (std::vector<Time>{2, 5, 9}));
    EXPECT_THROW(cli::parse_horizons("5..2"), cli::ConfigError);
    EXPECT_THROW(cli::parse_horizons("3,3"), cli::ConfigError);
    EXPECT_THROW(cli::parse_horizons("a..b"), cli::ConfigError);
    EXPECT_THROW(cli::parse_horizons("1,-2"), cli::ConfigError);
    EXPECT_EQ(cli::parse_reals("0.5,0.25"), (std::vector<double>{0.5, 0.25}));
    EXPECT_THROW(cli::parse_reals("0.5x"), cli::ConfigError);
}

TEST(CliParsing, ExitCodeMapping) {
    EXPECT_EQ(cli::exit_code_for(ErrorKind::unsupported), 2);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::non_stochastic), 3);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::asymmetric_tensor), 3);
    EXPECT_EQ(cli::exit_code_for(ErrorKind::numerical), 4);
}

TEST(CliInProcess, GapsTableAndDeterminism) {
    cli::RunConfig c;
    c.command = "gaps";
    c.builtin = "block";
    c.horizons = {1, 2, 3};
    std::ostringstream t1, t2, v, e;
    EXPECT_EQ(cli::run(c, t1, v, e), 0);
    EXPECT_EQ(cli::run(c, t2, v, e), 0);
    EXPECT_EQ(t1.str(), t2.str());
    EXPECT_EQ(t1.str().rfind("notion,k,n,gap\nl1_weak,0,1,", 0), 0u) << t1.str();
}

TEST(CliInProcess, ConfigErrorsAreUsage) {
    cli::RunConfig c;
    c.command = "gaps";
    c.horizons = {1};
    std::ostringstream t, v, e;
    EXPECT_EQ(cli::run(c, t, v, e), 2);  // no source
    c.builtin = "nope";
    EXPECT_EQ(cli::run(c, t, v, e), 2);
    c.builtin = "block";
    c.notion = "sideways";
    EXPECT_EQ(cli::run(c, t, v, e), 2);
    c.notion = "l1_weak";
    c.epsilon = 3.0;
    EXPECT_EQ(cli::run(c, t, v, e), 2);
}

TEST_F(CliBinary, GapsWritesFileAndSilentStdout) {
    const auto out = dir_ / "gaps.csv";
    const auto r = run("gaps --builtin block --p 0.7 --horizons 1..5 --output " + out.string());
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "");
    const auto table = slurp(out);
    EXPECT_NE(table.find("l1_weak,0,5,"), std::string::npos);
    const auto again = dir_ / "gaps2.csv";
    run("gaps --builtin block --p 0.7 --horizons 1..5 --output " + again.string());
    EXPECT_EQ(table, slurp(again));
}

TEST_F(CliBinary, GapsJsonFormat) {
    const auto out = dir_ / "gaps.json";
    const auto r = run("gaps --input " + kSamples +
                       "/block_example.json --notion l1_strong --target 0.5,0.5,0,0 --horizons 1,3 --format json "
                       "--output " + out.string());
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_EQ(j["notion"], "l1_strong");
    EXPECT_NEAR(j["gaps"][1].get<double>(), 0.064, 1e-12);
}

TEST_F(CliBinary, CertifyDriftChain) {
    const auto certs = dir_ / "certs.json";
    const auto bound = dir_ / "bound.csv";
    const auto r = run("certify --builtin drift_chain --n-states 64 --k 2 --k-max 40 --cert-output " + certs.string() +
                       " --bound-output " + bound.string());
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("CERTIFIED@K=", 0), 0u) << r.out;
    const auto bundle = nlohmann::json::parse(slurp(certs));
    ASSERT_EQ(bundle.size(), 39u);
    EXPECT_NO_THROW(certificate_from_json(bundle[0]));
    EXPECT_EQ(slurp(bound).rfind("k,n_k,mass,partial_sum,bound\n2,1,", 0), 0u);
}

TEST_F(CliBinary, CertifyIdentityInconclusive) {
    const auto r = run("certify --builtin identity --n-states 4 --k-max 30");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "INCONCLUSIVE\n");
}

TEST_F(CliBinary, ValidationErrorsExitThree) {
    auto r = run("gaps --input " + kSamples + "/bad_row_sum.json --horizons 1");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("step 0 row 1"), std::string::npos) << r.err;
    r = run("gaps --input " + kSamples + "/bad_measurability.json --horizons 1");
    EXPECT_EQ(r.code, 3);
    r = run("qsp --input " + kSamples + "/asymmetric_qsp.json --horizons 1..3");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("step 1 fiber (0,1)"), std::string::npos) << r.err;
    r = run("gaps --input " + (dir_ / "missing.json").string() + " --horizons 1");
    EXPECT_EQ(r.code, 3);
}

TEST_F(CliBinary, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("gaps --builtin block").code, 2);
    EXPECT_EQ(run("gaps --builtin block --horizons 3..1").code, 2);
    EXPECT_EQ(run("gaps --builtin block --horizons 1 --bogus").code, 2);
    EXPECT_EQ(run("gaps --builtin block --horizons 1", "NHDMP_TOLERANCE=abc").code, 2);
    const auto r = run("qsp --input " + kSamples + "/type_b_qsp.json --horizons 1..3");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("type B unsupported"), std::string::npos) << r.err;
    // horizons past the supplied steps
    EXPECT_EQ(run("gaps --input " + kSamples + "/explicit_chain.json --horizons 1..9").code, 2);
}

TEST_F(CliBinary, QspMixingAndConstant) {
    const auto out = dir_ / "qsp.csv";
    auto r = run("qsp --input " + kSamples + "/mixing_qsp.json --horizons 1..40 --set 0 --output " + out.string());
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "CERTIFIED@K=33\n");
    const auto table = slurp(out);
    EXPECT_EQ(table.rfind("n,qsp_gap,marginal_gap,bound\n1,", 0), 0u);
    r = run("qsp --builtin constant --horizons 1..3");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("1,0,0,"), std::string::npos) << r.out;
}

TEST_F(CliBinary, ToleranceOverride) {
    const auto r = run("gaps --builtin block --horizons 1", "NHDMP_TOLERANCE=1e-9");
    EXPECT_EQ(r.code, 0) << r.err;
}
