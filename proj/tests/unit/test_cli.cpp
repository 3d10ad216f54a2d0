#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "mixbound/cli.hpp"

using namespace mixbound::cli;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = MIXBOUND_FIXTURE_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mixbound_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("flag parsing") {
  const auto cfg = parse_args({"bounds", "fuzz", "--kernel", "laplace", "--trials", "200", "--seed", "7"});
  CHECK(cfg.command == Command::bounds_fuzz);
  CHECK(cfg.seed == 7);
  CHECK(cfg.parameters.at("kernel") == "laplace");
  CHECK(cfg.parameters.at("trials") == 200);
  CHECK(cfg.parameters.at("R") == 1.0);
  CHECK(cfg.parameters.at("lambda_min") == 0.5);
  CHECK(cfg.parameters.at("lambda_max") == 2.0);
  CHECK(cfg.parameters.at("dim") == 1);
  CHECK(cfg.parameters.at("a") == 1.0);

  const auto grid = parse_args({"posterior_run", "--kernel", "laplace", "--n-grid", "200,800", "--set", "thin=2"});
  CHECK(grid.command == Command::posterior_run);
  CHECK(grid.parameters.at("n_grid") == nlohmann::json::array({200, 800}));
  CHECK(grid.parameters.at("thin") == 2);
}

TEST_CASE("configuration files and precedence") {
  const std::string file = kFixtures + "/posterior_laplace.json";
  const auto base = parse_args({"posterior", "run", "--config", file});
  CHECK(base.seed == 11);
  CHECK(base.parameters.at("n_grid") == nlohmann::json::array({200, 800, 3200}));
  const auto over = parse_args({"posterior", "run", "--config", file, "--seed", "9", "--iters", "5000"});
  CHECK(over.seed == 9);
  CHECK(over.parameters.at("iters") == 5000);
  const auto implicit = parse_args({"--config", file});
  CHECK(implicit.command == Command::posterior_run);

  const fs::path flat = scratch("flat.json");
  std::ofstream(flat) << R"({"kernel": "gaussian-iso", "n_grid": [100, 400], "seed": 3})";
  const auto f = parse_args({"posterior", "run", "--config", flat.string()});
  CHECK(f.seed == 3);
  CHECK(f.parameters.at("kernel") == "gaussian-iso");
}

TEST_CASE("round trip") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bounds", "fuzz", "--kernel", "cauchy", "--seed", "5", "-o", "/tmp/x.csv"},
           {"posterior", "rates", "--kernel", "laplace", "--n-grid", "50,60,70"},
           {"w1", "a.json", "b.json", "--plan"},
           {"kernels", "probe", "--kernel", "gaussian", "--dim", "2"}}) {
    const auto cfg = parse_args(args);
    CHECK(parse_config(serialize(cfg)) == cfg);
  }
}

TEST_CASE("exit codes") {
  CHECK(invoke({"frobnicate"}).code == exit_code::unknown_command);
  CHECK(invoke({"bounds", "shake"}).code == exit_code::unknown_command);
  CHECK(invoke({"posterior", "run", "--config", kFixtures + "/posterior_missing_kernel.json"}).code ==
        exit_code::schema);
  CHECK(invoke({"bounds", "fuzz", "--kernel", "laplace", "--trials", "-3"}).code == exit_code::schema);
  CHECK(invoke({"bounds", "fuzz", "--kernel", "student"}).code == exit_code::schema);
  CHECK(invoke({"bounds", "fuzz", "--kernel", "laplace", "--no-such-flag", "1"}).code == exit_code::schema);
  CHECK(invoke({"kernels", "probe", "--kernel", "laplace", "--set", "colour=3"}).code == exit_code::schema);
  CHECK(invoke({"posterior", "run", "--config", "/nonexistent/config.json"}).code == exit_code::unreadable_file);
  CHECK(invoke({"w1", "/nonexistent/p.json", kFixtures + "/w1_q.json"}).code == exit_code::unreadable_file);
  const auto zero = invoke({"posterior", "run", "--kernel", "gaussian-iso", "--iters", "0", "--burn-in", "0"});
  CHECK(zero.code == exit_code::computation);
  CHECK(zero.err.find("precondition") != std::string::npos);
}

TEST_CASE("w1 on the bundled fixtures") {
  const auto r = invoke({"w1", kFixtures + "/w1_p.json", kFixtures + "/w1_q.json"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.5\n");
  const fs::path out = scratch("plan.csv");
  CHECK(invoke({"w1", kFixtures + "/w1_p.json", kFixtures + "/w1_q.json", "--plan", "-o", out.string()}).code == 0);
  CHECK(slurp(out) == "i,j,flow,cost_ij\n0,0,0.5,0.5\n1,0,0.5,0.5\n");
  const auto side = nlohmann::json::parse(slurp(out.string() + ".json"));
  CHECK(side.contains("config_echo"));
  CHECK(side.contains("versions"));
  CHECK(side.at("wall_time").is_number());
  CHECK(parse_config(side.at("config_echo")).parameters.at("plan") == true);
}

TEST_CASE("pde check default suite") {
  const fs::path out = scratch("pde.csv");
  for (const char* dim : {"1", "2"}) {
    REQUIRE(invoke({"pde", "check", "--dim", dim, "--seed", "4", "-o", out.string()}).code == 0);
    std::istringstream in(slurp(out));
    std::string line;
    std::getline(in, line);
    CHECK(line == "test_fn_id,residual,budget");
    int rows = 0;
    while (std::getline(in, line)) {
      const auto a = line.find(','), b = line.rfind(',');
      CHECK(std::abs(std::stod(line.substr(a + 1, b - a - 1))) <= 1e-3);
      ++rows;
    }
    CHECK(rows >= 5);
  }
}

TEST_CASE("identical configs give identical csv bytes") {
  const std::vector<std::vector<std::string>> runs{
      {"bounds", "fuzz", "--kernel", "gaussian-iso", "--trials", "10", "--seed", "3"},
      {"l1", kFixtures + "/mixture_a.json", kFixtures + "/mixture_b.json", "--kernel", "cauchy", "--budget", "5000"},
      {"bounds", "verify", kFixtures + "/mixture_a.json", kFixtures + "/mixture_b.json", "--kernel", "laplace"},
      {"dual-witness", "demo", "--points", "21", "--seed", "2"},
      {"posterior", "run", "--kernel", "laplace", "--n-grid", "50,80,120", "--replicates", "1", "--iters", "150",
       "--burn-in", "50", "--l1-budget", "1000"},
      {"kernels", "probe", "--kernel", "gaussian", "--dim", "2"}};
  int index = 0;
  for (auto args : runs) {
    const fs::path a = scratch("rep_a" + std::to_string(index) + ".csv");
    const fs::path b = scratch("rep_b" + std::to_string(index) + ".csv");
    ++index;
    auto with = [&](const fs::path& p) {
      auto v = args;
      v.push_back("-o");
      v.push_back(p.string());
      return v;
    };
    REQUIRE(invoke(with(a)).code == 0);
    REQUIRE(invoke(with(b)).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }
}

TEST_CASE("posterior rates from a saved table") {
  const fs::path table = scratch("table.csv");
  const fs::path rates = scratch("rates.csv");
  REQUIRE(invoke({"posterior", "run", "--kernel", "laplace", "--n-grid", "50,80,120", "--replicates", "2", "--iters",
                  "150", "--burn-in", "50", "--l1-budget", "1000", "-o", table.string()})
              .code == 0);
  REQUIRE(invoke({"posterior", "rates", "--kernel", "laplace", "--table", table.string(), "-o", rates.string()}).code ==
          0);
  std::istringstream in(slurp(rates));
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,mean_log_w1,mean_log_dsig,mean_log_l1,theory_w1,theory_dsig,theory_l1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  const auto side = nlohmann::json::parse(slurp(rates.string() + ".json"));
  CHECK(side.at("summary").contains("corrected_slope_w1"));
}

TEST_CASE("executable exit status") {
  const std::string exe = MIXBOUND_EXE;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status(exe + " w1 " + kFixtures + "/w1_p.json " + kFixtures + "/w1_q.json") == 0);
  CHECK(status(exe + " nonsense") == 2);
  CHECK(status(exe + " posterior run --config " + kFixtures + "/posterior_missing_kernel.json") == 3);
  CHECK(status(exe + " posterior run --config /nonexistent.json") == 4);
}
