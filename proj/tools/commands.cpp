#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string_view>

namespace netbreak::cli {

namespace {

int exit_code_for(nb_status s) {
  switch (s) {
    case NB_ERR_IO:
    case NB_ERR_FORMAT:
      return kExitIo;
    case NB_ERR_INVALID_ARGUMENT:
    case NB_ERR_OUT_OF_RANGE:
    case NB_ERR_LIMIT:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void check(nb_status s) {
  if (s != NB_OK) throw CliError(exit_code_for(s), std::string(nb_status_name(s)) + ": " + nb_last_error());
}

[[noreturn]] void usage(const std::string& what) { throw CliError(kExitUsage, what); }

struct BoundDeleter {
  void operator()(nb_bound* p) const { nb_bound_destroy(p); }
};
struct GraphDeleter {
  void operator()(nb_graph* p) const { nb_graph_destroy(p); }
};
struct OracleDeleter {
  void operator()(nb_oracle* p) const { nb_oracle_destroy(p); }
};
using BoundHandle = std::unique_ptr<nb_bound, BoundDeleter>;
using GraphHandle = std::unique_ptr<nb_graph, GraphDeleter>;
using OracleHandle = std::unique_ptr<nb_oracle, OracleDeleter>;

BoundHandle make_bound(const RunConfig& cfg, int lambda, nb_mode mode) {
  nb_bound* raw = nullptr;
  check(nb_bound_create(cfg.n, lambda, mode, cfg.variant, cfg.threads, &raw));
  return BoundHandle(raw);
}

double bound_at(const nb_bound* b, double eps) {
  double v = 0.0;
  check(nb_bound_p(b, eps, &v));
  return v;
}

double displayed(const RunConfig& cfg, double bound) { return cfg.clamp ? std::min(1.0, bound) : bound; }

template <class Getter>
std::string fetch_string(Getter&& get) {
  size_t needed = 0;
  get(nullptr, 0, &needed);  // sizing call, expected to fail
  std::string s(needed, '\0');
  check(get(s.data(), s.size(), &needed));
  s.resize(needed - 1);
  return s;
}

const char* mode_name(nb_mode m) { return m == NB_MODE_EXACT ? "exact" : "log"; }
const char* variant_name(nb_variant v) {
  return v == NB_VARIANT_NULL_CONNECTED ? "null-connected" : "all-broken-is-breakdown";
}

template <class Int>
std::string join_ints(const std::vector<Int>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
  return out;
}

std::string join_probabilities(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + format_probability(v[k]);
  return out;
}

// Header comment lines; keys select which config fields are echoed.
void header(std::ostream& out, const RunConfig& cfg, std::initializer_list<std::string_view> keys) {
  out << "# tool=netbreak\n# version=" << nb_version() << "\n# command=" << cfg.command << '\n';
  for (const std::string_view key : keys) {
    out << "# " << key << '=';
    if (key == "n") out << cfg.n;
    else if (key == "lambda") out << join_ints(cfg.lambdas);
    else if (key == "eps") out << join_probabilities(cfg.eps);
    else if (key == "omax") out << cfg.o_max;
    else if (key == "imax") out << cfg.i_max;
    else if (key == "seed") out << cfg.seed;
    else if (key == "mode") out << mode_name(cfg.mode);
    else if (key == "variant") out << variant_name(cfg.variant);
    else if (key == "clamp") out << (cfg.clamp ? "true" : "false");
    else if (key == "amax") out << cfg.a_max;
    else if (key == "graph") out << cfg.graph_path;
    out << '\n';
  }
}

const char* flag(bool b) { return b ? "true" : "false"; }

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) usage("not a number: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

// ------------------------------------------------------------ parsing

std::vector<double> parse_eps_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.empty()) return out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) usage("range must be start:stop:step, got '" + spec + "'");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || stop < start) usage("range needs step > 0 and start <= stop: '" + spec + "'");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
  } else {
    for (const auto part : split(spec, ',')) out.push_back(parse_double(part));
  }
  for (const double e : out) {
    if (!(e >= 0.0 && e <= 1.0)) usage("epsilon " + format_double(e) + " outside [0, 1]");
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  if (spec.empty()) return out;
  for (const auto part : split(spec, ',')) {
    int v = 0;
    const char* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc{} || ptr != end || part.empty()) usage("not an integer: '" + std::string(part) + "'");
    out.push_back(v);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_probability(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void validate(const RunConfig& cfg) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end()) {
    usage("unknown command '" + cfg.command + "'");
  }
  if (cfg.command == "identity-check") {
    if (cfg.a_max < 0) usage("--amax must be non-negative");
    return;
  }
  if (cfg.command == "graph-check") {
    if (cfg.graph_path.empty()) usage("graph-check needs --graph");
    if (cfg.i_max == 0) usage("--imax must be positive");
    return;
  }
  if (cfg.n < 2) usage("--n must be at least 2");
  if (cfg.command != "sweep-lambda" && cfg.lambdas.size() != 1) {
    usage(cfg.command + " takes exactly one --lambda");
  }
  for (const int lambda : cfg.lambdas) {
    if (lambda < 2) usage("lambda must be at least 2");
    if ((static_cast<long long>(lambda) * cfg.n) % 2 != 0) {
      usage("lambda*n must be even (n=" + std::to_string(cfg.n) + ", lambda=" + std::to_string(lambda) + ")");
    }
  }
  if ((cfg.command == "simulate" || cfg.command == "compare") && (cfg.o_max == 0 || cfg.i_max == 0)) {
    usage("--omax and --imax must be positive");
  }
}

// ------------------------------------------------------------ commands

int run_bound(const RunConfig& cfg, std::ostream& out) {
  const BoundHandle b = make_bound(cfg, cfg.lambdas.front(), cfg.mode);
  header(out, cfg, {"n", "lambda", "eps", "mode", "variant", "clamp"});
  out << "epsilon,p_upper\n";
  for (const double eps : cfg.eps) {
    out << format_probability(eps) << ',' << format_double(displayed(cfg, bound_at(b.get(), eps))) << '\n';
  }
  return kExitOk;
}

namespace {

std::vector<nb_estimate> simulate(const RunConfig& cfg) {
  std::vector<nb_estimate> est(cfg.eps.size());
  check(nb_simulate(cfg.n, cfg.lambdas.front(), cfg.eps.data(), cfg.eps.size(), cfg.o_max, cfg.i_max,
                    cfg.seed, cfg.threads, est.data()));
  return est;
}

}  // namespace

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto est = simulate(cfg);
  header(out, cfg, {"n", "lambda", "eps", "omax", "imax", "seed"});
  out << "epsilon,mean,stderr,breakdowns,trials,seed\n";
  for (const nb_estimate& e : est) {
    out << format_probability(e.epsilon) << ',' << format_double(e.mean) << ','
        << format_double(e.std_error) << ',' << e.breakdowns << ',' << e.trials << ',' << e.seed << '\n';
  }
  return kExitOk;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
  const BoundHandle b = make_bound(cfg, cfg.lambdas.front(), cfg.mode);
  const auto est = simulate(cfg);
  header(out, cfg, {"n", "lambda", "eps", "omax", "imax", "seed", "mode", "variant", "clamp"});
  out << "epsilon,p_upper,mean,stderr,breakdowns,trials,ratio,within_3se\n";
  bool all_ok = true;
  for (const nb_estimate& e : est) {
    const double bound = bound_at(b.get(), e.epsilon);
    const bool ok = e.mean <= bound + 3.0 * e.std_error;
    all_ok = all_ok && ok;
    out << format_probability(e.epsilon) << ',' << format_double(displayed(cfg, bound)) << ','
        << format_double(e.mean) << ',' << format_double(e.std_error) << ',' << e.breakdowns << ','
        << e.trials << ',' << (e.mean > 0.0 ? format_double(bound / e.mean) : "NA") << ',' << flag(ok)
        << '\n';
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

int run_oracle_check(const RunConfig& cfg, std::ostream& out) {
  const int lambda = cfg.lambdas.front();
  nb_oracle* raw = nullptr;
  check(nb_oracle_create(cfg.n, lambda, cfg.threads, &raw));
  const OracleHandle oracle(raw);
  const BoundHandle b = make_bound(cfg, lambda, NB_MODE_EXACT);

  header(out, cfg, {"n", "lambda"});
  out << "j,exact_q,q_upper,dominated,collapse\n";
  bool all_ok = true;
  for (int j = 0; j <= cfg.n; ++j) {
    int dominated = 0;
    int collapse = 0;
    check(nb_oracle_dominated(oracle.get(), j, &dominated));
    check(nb_verify_collapse(cfg.n, lambda, j, &collapse));
    all_ok = all_ok && dominated && collapse;
    const std::string exact = fetch_string([&](char* buf, size_t cap, size_t* need) {
      return nb_oracle_q_string(oracle.get(), j, buf, cap, need);
    });
    const std::string upper = fetch_string([&](char* buf, size_t cap, size_t* need) {
      return nb_bound_q_string(b.get(), j, buf, cap, need);
    });
    out << j << ',' << exact << ',' << upper << ',' << flag(dominated) << ',' << flag(collapse) << '\n';
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

int run_identity_check(const RunConfig& cfg, std::ostream& out) {
  header(out, cfg, {"amax"});
  std::uint64_t pairs = 0;
  std::vector<std::pair<int, int>> failures;
  for (int a = 0; a <= cfg.a_max; ++a) {
    for (int b = 0; b <= cfg.a_max; ++b) {
      int holds = 0;
      check(nb_two_power_sum_check(a, b, &holds));
      ++pairs;
      if (!holds) failures.emplace_back(a, b);
    }
  }
  for (const auto& [a, b] : failures) out << "# failed a=" << a << " b=" << b << '\n';
  out << "pairs,failures\n" << pairs << ',' << failures.size() << '\n';
  return failures.empty() ? kExitOk : kExitCheckFailed;
}

int run_sweep_lambda(const RunConfig& cfg, std::ostream& out) {
  std::vector<BoundHandle> bounds;
  for (const int lambda : cfg.lambdas) bounds.push_back(make_bound(cfg, lambda, cfg.mode));
  header(out, cfg, {"n", "lambda", "eps", "mode", "variant", "clamp"});
  out << "lambda,epsilon,p_upper\n";
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    for (const double eps : cfg.eps) {
      out << cfg.lambdas[k] << ',' << format_probability(eps) << ','
          << format_double(displayed(cfg, bound_at(bounds[k].get(), eps))) << '\n';
    }
  }
  return kExitOk;
}

int run_sample_graph(const RunConfig& cfg, std::ostream& out) {
  nb_graph* raw = nullptr;
  check(nb_graph_sample(cfg.n, cfg.lambdas.front(), cfg.seed, 0, &raw));
  const GraphHandle g(raw);
  // Plain edge list, no header: the output is itself a graph fixture.
  out << fetch_string([&](char* buf, size_t cap, size_t* need) {
    return nb_graph_to_string(g.get(), buf, cap, need);
  });
  return kExitOk;
}

int run_graph_check(const RunConfig& cfg, std::ostream& out) {
  nb_graph* raw = nullptr;
  check(nb_graph_load(cfg.graph_path.c_str(), &raw));
  const GraphHandle g(raw);
  int n = 0;
  check(nb_graph_node_count(g.get(), &n));
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1);
  check(nb_graph_polynomial(g.get(), cfg.threads, counts.data(), counts.size()));

  header(out, cfg, {"graph", "eps", "imax", "seed"});
  out << "# counts=" << join_ints(counts) << '\n';
  out << "epsilon,exact,mean,stderr,breakdowns,trials,within_4se\n";
  bool all_ok = true;
  for (const double eps : cfg.eps) {
    double exact = 0.0;
    check(nb_polynomial_evaluate(counts.data(), n, eps, &exact));
    nb_estimate e{};
    check(nb_graph_simulate(g.get(), eps, cfg.i_max, cfg.seed, cfg.threads, &e));
    const bool ok = std::fabs(e.mean - exact) <= 4.0 * e.std_error + 1e-12;
    all_ok = all_ok && ok;
    out << format_probability(eps) << ',' << format_double(exact) << ',' << format_double(e.mean) << ','
        << format_double(e.std_error) << ',' << e.breakdowns << ',' << e.trials << ',' << flag(ok) << '\n';
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------ driver

int execute(const RunConfig& cfg, std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> table{
      {"bound", run_bound},
      {"simulate", run_simulate},
      {"compare", run_compare},
      {"oracle-check", run_oracle_check},
      {"identity-check", run_identity_check},
      {"sweep-lambda", run_sweep_lambda},
      {"sample-graph", run_sample_graph},
      {"graph-check", run_graph_check},
  };
  try {
    validate(cfg);
    std::ostringstream body;
    const int code = table.at(cfg.command)(cfg, body);
    if (cfg.out_path.empty()) {
      std::cout << body.str() << std::flush;
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file) throw CliError(kExitIo, "cannot open " + cfg.out_path + " for writing");
      file << body.str();
      if (!file.flush()) throw CliError(kExitIo, "write failed: " + cfg.out_path);
    }
    if (code == kExitCheckFailed) err << "netbreak: " << cfg.command << ": check failed\n";
    return code;
  } catch (const CliError& e) {
    err << "netbreak: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    err << "netbreak: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace netbreak::cli
