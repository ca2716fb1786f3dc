#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gaussalign/gaussian.hpp"
#include "gaussalign/io.hpp"

using namespace gaussalign;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliFixture {
  std::string cli;
  fs::path dir;
  bool available = false;

  CliFixture() {
    if (const char* env = std::getenv("GAUSSALIGN_CLI")) {
      cli = env;
      available = true;
      dir = fs::temp_directory_path() /
            ("gaussalign_cli_test_" + std::to_string(::getpid()));
      fs::create_directories(dir);
    }
  }
  ~CliFixture() {
    if (available) fs::remove_all(dir);
  }

  int run(const std::string& args, std::string* stdout_text = nullptr,
          const std::string& extra_env = "") const {
    const fs::path out = dir / "stdout.txt";
    const std::string cmd =
        extra_env + " " + cli + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (stdout_text) {
      std::ifstream in(out);
      std::ostringstream buf;
      buf << in.rdbuf();
      *stdout_text = buf.str();
    }
    return WEXITSTATUS(status);
  }

  std::string file(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli exit codes and report schema") {
  CliFixture cli;
  if (!cli.available) {
    MESSAGE("GAUSSALIGN_CLI not set; skipping CLI tests");
    return;
  }

  SUBCASE("unknown subcommand and bad flags exit 2") {
    CHECK(cli.run("frobnicate") == 2);
    CHECK(cli.run("igw --bogus x") == 2);
    CHECK(cli.run("") == 2);  // a subcommand is required
  }

  SUBCASE("missing and malformed input files exit 1") {
    CHECK(cli.run("w2 --a nope.json --b nope.json") == 1);
    const std::string bad = cli.file("bad.csv");
    {
      std::ofstream out(bad);
      out << "1,2\nx,4\n";
    }
    CHECK(cli.run("fit --input " + bad + " --out " + cli.file("g.json")) == 1);
  }

  SUBCASE("fit writes the artifact and reports on stdout") {
    const std::string cloud = cli.file("cloud.csv");
    {
      std::ofstream out(cloud);
      out << "0,0\n2,0\n0,2\n2,2\n";
    }
    std::string text;
    const std::string artifact = cli.file("fitted.json");
    REQUIRE(cli.run("fit --input " + cloud + " --ridge 0 --out " + artifact, &text) == 0);
    const json report = json::parse(text);
    CHECK(report["schema"] == "gaussalign/1");
    CHECK(report["command"] == "fit");
    CHECK(report["result"]["dim"] == 2);
    CHECK(report.contains("timings") == false);

    Gaussian g = read_gaussian_json(artifact);
    CHECK(g.mean(0) == 1.0);
    CHECK(g.cov(0, 0) == 1.0);
  }

  SUBCASE("mmot reports the barycenter of two univariate marginals") {
    write_gaussian_json(cli.file("v1.json"),
                        Gaussian{Eigen::VectorXd::Zero(1),
                                 Eigen::MatrixXd::Constant(1, 1, 1.0)});
    write_gaussian_json(cli.file("v9.json"),
                        Gaussian{Eigen::VectorXd::Zero(1),
                                 Eigen::MatrixXd::Constant(1, 1, 9.0)});
    std::string text;
    REQUIRE(cli.run("mmot --inputs " + cli.file("v1.json") + " " + cli.file("v9.json") +
                        " --weights 0.5 0.5",
                    &text) == 0);
    const json report = json::parse(text);
    const double var = report["result"]["barycenter"]["cov"][0][0].get<double>();
    CHECK(var == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(report["result"]["certificate"]["certified_global"].get<bool>());
  }

  SUBCASE("GAUSSALIGN_SEED is the fallback and the flag overrides it") {
    write_gaussian_json(cli.file("s1.json"),
                        Gaussian{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)});
    std::string with_env, with_flag, plain;
    REQUIRE(cli.run("igw --a " + cli.file("s1.json") + " --b " + cli.file("s1.json"),
                    &with_env, "GAUSSALIGN_SEED=77") == 0);
    CHECK(json::parse(with_env)["seed"] == 77);
    REQUIRE(cli.run("igw --a " + cli.file("s1.json") + " --b " + cli.file("s1.json") +
                        " --seed 5",
                    &with_flag, "GAUSSALIGN_SEED=77") == 0);
    CHECK(json::parse(with_flag)["seed"] == 5);
    REQUIRE(cli.run("igw --a " + cli.file("s1.json") + " --b " + cli.file("s1.json"),
                    &plain) == 0);
    CHECK(json::parse(plain)["seed"] == 0);
  }

  SUBCASE("timings appear only on request") {
    write_gaussian_json(cli.file("t.json"),
                        Gaussian{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)});
    std::string text;
    REQUIRE(cli.run("w2 --a " + cli.file("t.json") + " --b " + cli.file("t.json") +
                        " --timings",
                    &text) == 0);
    CHECK(json::parse(text).contains("timings"));
  }
}
