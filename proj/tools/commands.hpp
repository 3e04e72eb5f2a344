#pragma once

// Command implementations behind the netbreak executable. Everything here
// goes through the C interface in netbreak/netbreak.h.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "netbreak/netbreak.h"

namespace netbreak::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitRuntime = 4,
};

/// Carries the process exit code alongside the message.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct RunConfig {
  std::string command;
  int n = 100;
  std::vector<int> lambdas{5};
  std::vector<double> eps;
  std::uint64_t o_max = 100;
  std::uint64_t i_max = 10000;
  std::uint64_t seed = 1;
  nb_mode mode = NB_MODE_EXACT;
  nb_variant variant = NB_VARIANT_NULL_CONNECTED;
  bool clamp = false;
  std::string out_path;  // empty: stdout
  unsigned threads = 0;  // never echoed: output does not depend on it
  int a_max = 40;
  std::string graph_path;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bound",        "simulate",       "compare",
                                              "oracle-check", "identity-check", "sweep-lambda",
                                              "sample-graph", "graph-check"};
  return names;
}

/// "a,b,c" or "start:stop:step" (inclusive stop, values rounded to 1e-12).
/// Throws CliError(kExitUsage) on syntax errors or values outside [0, 1].
std::vector<double> parse_eps_grid(const std::string& spec);
/// "5" or "3,4,5"; empty string gives an empty list.
std::vector<int> parse_int_list(const std::string& spec);

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);
/// As format_double, but always shows a decimal point ("1.0", "0.5").
std::string format_probability(double v);

/// Rejects configs that cannot run before any compute starts.
void validate(const RunConfig& cfg);

int run_bound(const RunConfig& cfg, std::ostream& out);
int run_simulate(const RunConfig& cfg, std::ostream& out);
int run_compare(const RunConfig& cfg, std::ostream& out);
int run_oracle_check(const RunConfig& cfg, std::ostream& out);
int run_identity_check(const RunConfig& cfg, std::ostream& out);
int run_sweep_lambda(const RunConfig& cfg, std::ostream& out);
int run_sample_graph(const RunConfig& cfg, std::ostream& out);
int run_graph_check(const RunConfig& cfg, std::ostream& out);

/// Validates, dispatches, and writes the result to cfg.out_path (or stdout)
/// in one piece. Reports failures on err and returns the exit code.
int execute(const RunConfig& cfg, std::ostream& err);

}  // namespace netbreak::cli
