#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"

using namespace netbreak::cli;

namespace {

const std::string kFixtures = NETBREAK_FIXTURE_DIR;

RunConfig config(const std::string& command, int n, int lambda, std::vector<double> eps) {
  RunConfig cfg;
  cfg.command = command;
  cfg.n = n;
  cfg.lambdas = {lambda};
  cfg.eps = std::move(eps);
  cfg.threads = 2;
  return cfg;
}

std::string run(int (*fn)(const RunConfig&, std::ostream&), const RunConfig& cfg, int expect_code = 0) {
  validate(cfg);
  std::ostringstream out;
  const int code = fn(cfg, out);
  CHECK(code == expect_code);
  return out.str();
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

struct Invocation {
  int code;
  std::string out;
};

// Runs the installed executable with a shell-quoted argument string.
Invocation invoke(const std::string& args) {
  const std::string cmd = std::string(NETBREAK_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("eps grid parsing") {
  CHECK(parse_eps_grid("0.1,0.5,1") == std::vector<double>{0.1, 0.5, 1.0});
  CHECK(parse_eps_grid("0.05:0.30:0.05") == std::vector<double>{0.05, 0.1, 0.15, 0.2, 0.25, 0.3});
  CHECK(parse_eps_grid("0.1:0.9:0.1").size() == 9);
  CHECK(parse_eps_grid("0.1:0.9:0.1")[2] == 0.3);
  CHECK(parse_eps_grid("0.5:0.5:0.1") == std::vector<double>{0.5});
  CHECK(parse_eps_grid("").empty());
  for (const char* bad : {"0.1,", "x", "1.5", "-0.1", "0:1", "0.5:0.1:0.1", "0:1:0", "0:1:-1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_eps_grid(bad), CliError);
  }
  CHECK(parse_int_list("3,4,5") == std::vector<int>{3, 4, 5});
  CHECK(parse_int_list("").empty());
  CHECK_THROWS_AS(parse_int_list("3,a"), CliError);
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_probability(1.0) == "1.0");
  CHECK(format_probability(0.0) == "0.0");
  CHECK(format_probability(0.25) == "0.25");
  for (const double v : {0.004428743571096165, 1.0 / 3.0, 5.309481768183911e-07, 1e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("validate rejects bad configs") {
  RunConfig cfg = config("bound", 5, 3, {0.1});
  CHECK_THROWS_AS(validate(cfg), CliError);  // odd lambda*n
  cfg = config("nope", 4, 2, {});
  CHECK_THROWS_AS(validate(cfg), CliError);
  cfg = config("simulate", 4, 2, {0.1});
  cfg.o_max = 0;
  CHECK_THROWS_AS(validate(cfg), CliError);
  cfg = config("bound", 4, 2, {0.1});
  cfg.lambdas = {2, 4};
  CHECK_THROWS_AS(validate(cfg), CliError);
  cfg.command = "sweep-lambda";
  CHECK_NOTHROW(validate(cfg));
  cfg = config("graph-check", 4, 2, {0.1});
  CHECK_THROWS_AS(validate(cfg), CliError);
}

TEST_CASE("run_bound endpoint rows") {
  RunConfig cfg = config("bound", 100, 5, {1.0});
  CHECK(data_rows(run(run_bound, cfg)) == std::vector<std::string>{"1.0,0"});
  cfg.variant = NB_VARIANT_ALL_BROKEN_IS_BREAKDOWN;
  CHECK(data_rows(run(run_bound, cfg)) == std::vector<std::string>{"1.0,1"});
  cfg.mode = NB_MODE_LOG;
  CHECK(data_rows(run(run_bound, cfg)) == std::vector<std::string>{"1.0,1"});
}

TEST_CASE("run_bound header and clamping") {
  RunConfig cfg = config("bound", 5, 2, {0.0});
  const std::string plain = run(run_bound, cfg);
  CHECK(plain.find("# n=5\n") != std::string::npos);
  CHECK(plain.find("# lambda=2\n") != std::string::npos);
  CHECK(plain.find("# mode=exact\n") != std::string::npos);
  CHECK(plain.find("# variant=null-connected\n") != std::string::npos);
  CHECK(plain.find("# clamp=false\n") != std::string::npos);
  CHECK(plain.find("# version=1.0.0\n") != std::string::npos);
  // Q^(U)_0 = 65/63 here, so the raw bound exceeds one.
  CHECK(data_rows(plain).front() == "0.0," + format_double(65.0 / 63.0));
  cfg.clamp = true;
  const std::string clamped = run(run_bound, cfg);
  CHECK(clamped.find("# clamp=true\n") != std::string::npos);
  CHECK(data_rows(clamped).front() == "0.0,1");
}

TEST_CASE("run_simulate is deterministic and thread independent") {
  RunConfig cfg = config("simulate", 30, 4, {0.1, 0.3, 1.0});
  cfg.o_max = 12;
  cfg.i_max = 300;
  cfg.seed = 77;
  cfg.threads = 1;
  const std::string a = run(run_simulate, cfg);
  cfg.threads = 3;
  const std::string b = run(run_simulate, cfg);
  CHECK(a == b);
  CHECK(a.find("# seed=77\n") != std::string::npos);
  const auto rows = data_rows(a);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2] == "1.0,0,0,0,3600,77");
}

TEST_CASE("run_compare flags and NA ratio") {
  RunConfig cfg = config("compare", 40, 4, {0.1, 0.2, 1.0});
  cfg.o_max = 20;
  cfg.i_max = 500;
  const auto rows = data_rows(run(run_compare, cfg));
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.substr(r.rfind(',') + 1) == "true");
  CHECK(rows[2] == "1.0,0,0,0,0,10000,NA,true");
}

TEST_CASE("run_sweep_lambda") {
  RunConfig sweep = config("sweep-lambda", 100, 5, {0.05, 0.1});
  const auto rows = data_rows(run(run_sweep_lambda, sweep));
  const auto single = data_rows(run(run_bound, config("bound", 100, 5, {0.05, 0.1})));
  REQUIRE(rows.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(rows[k] == "5," + single[k]);

  sweep.lambdas.clear();
  const std::string empty = run(run_sweep_lambda, sweep);
  CHECK(data_rows(empty).empty());
  CHECK(empty.find("lambda,epsilon,p_upper\n") != std::string::npos);
  CHECK(empty.find("# lambda=\n") != std::string::npos);
}

TEST_CASE("run_oracle_check") {
  const auto rows3 = data_rows(run(run_oracle_check, config("oracle-check", 3, 2, {})));
  CHECK(rows3 == std::vector<std::string>{"0,7/15,3/5,true,true", "1,1/3,1/3,true,true",
                                          "2,0,0,true,true", "3,0,0,true,true"});
  const auto rows4 = data_rows(run(run_oracle_check, config("oracle-check", 4, 2, {})));
  REQUIRE(rows4.size() == 5);
  CHECK(rows4[4] == "4,0,0,true,true");
  CHECK_THROWS_AS(run(run_oracle_check, config("oracle-check", 6, 2, {})), CliError);
}

TEST_CASE("run_identity_check") {
  RunConfig cfg = config("identity-check", 4, 2, {});
  cfg.a_max = 12;
  CHECK(data_rows(run(run_identity_check, cfg)) == std::vector<std::string>{"169,0"});
}

TEST_CASE("run_graph_check on fixtures") {
  RunConfig cfg = config("graph-check", 0, 2, {0.0, 0.5, 1.0});
  cfg.graph_path = kFixtures + "/cycle4.txt";
  cfg.i_max = 20000;
  const std::string out = run(run_graph_check, cfg);
  CHECK(out.find("# counts=0,0,2,0,0\n") != std::string::npos);
  const auto rows = data_rows(out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("0.0,0,0,0,0,20000,true", 0) == 0);
  CHECK(rows[1].rfind("0.5,0.125,", 0) == 0);

  cfg.graph_path = kFixtures + "/two_loops.txt";
  CHECK(run(run_graph_check, cfg).find("# counts=1,0,0\n") != std::string::npos);

  cfg.graph_path = kFixtures + "/truncated.txt";
  try {
    run(run_graph_check, cfg);
    FAIL("expected a format error");
  } catch (const CliError& e) {
    CHECK(e.code() == kExitIo);
  }
}

TEST_CASE("executable: exit codes and output files") {
  CHECK(invoke("--command bound --n 4 --lambda 2 --eps 1.0").code == 0);
  CHECK(invoke("--command bound --n 4 --lambda 2 --eps 1.0").out.find("1.0,0\n") != std::string::npos);
  CHECK(invoke("--command nope").code == kExitUsage);
  CHECK(invoke("--command bound --n 5 --lambda 3 --eps 0.1").code == kExitUsage);
  CHECK(invoke("--command bound --n 4 --lambda 2 --eps 0.1:").code == kExitUsage);
  CHECK(invoke("--command oracle-check --n 6 --lambda 2").code == kExitUsage);
  CHECK(invoke("--command bound --n 4 --lambda 2 --eps 0.1 --out /nonexistent/dir/x.csv").code == kExitIo);
  CHECK(invoke("--command graph-check --graph /nonexistent/g.txt --eps 0.1").code == kExitIo);
  CHECK(invoke("--command oracle-check --n 4 --lambda 2").code == 0);
  CHECK(invoke("--version").out.find("1.0.0") != std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "netbreak_cli_test.csv";
  const std::string args = "--command simulate --n 20 --lambda 3 --eps 0.1:0.3:0.1 --omax 5 --imax 100 --seed 9";
  REQUIRE(invoke(args + " --threads 1 --out " + path.string()).code == 0);
  std::ifstream in(path);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(file == invoke(args + " --threads 4").out);
  std::filesystem::remove(path);

  const auto graph = std::filesystem::temp_directory_path() / "netbreak_cli_graph.txt";
  REQUIRE(invoke("--command sample-graph --n 12 --lambda 3 --seed 4 --out " + graph.string()).code == 0);
  CHECK(invoke("--command graph-check --graph " + graph.string() + " --eps 0.2 --imax 20000").code == 0);
  std::filesystem::remove(graph);
}
