#include "netbreak/netbreak.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

#include "netbreak/bound.hpp"
#include "netbreak/ensemble.hpp"
#include "netbreak/errors.hpp"
#include "netbreak/faultsim.hpp"
#include "netbreak/oracle.hpp"

using namespace netbreak;

struct nb_bound {
  std::variant<QVector<ExactScalar>, QVector<LogScalar>> q;
};

struct nb_graph {
  MultiGraph g;
};

struct nb_oracle {
  EnsembleCensus census;
};

namespace {

thread_local std::string last_error;

nb_status fail(nb_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs body, translating exceptions into status codes. Order matters:
// LimitError and std::out_of_range are both std::logic_error.
template <class Body>
nb_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const LimitError& e) {
    return fail(NB_ERR_LIMIT, e.what());
  } catch (const FormatError& e) {
    return fail(NB_ERR_FORMAT, e.what());
  } catch (const IoError& e) {
    return fail(NB_ERR_IO, e.what());
  } catch (const std::out_of_range& e) {
    return fail(NB_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NB_ERR_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(NB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NB_ERR_INTERNAL, "unknown exception");
  }
}

nb_status require(bool ok, const char* what) {
  return ok ? NB_OK : fail(NB_ERR_INVALID_ARGUMENT, what);
}

nb_status copy_out(const std::string& s, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || capacity < s.size() + 1) return fail(NB_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return NB_OK;
}

Variant to_variant(nb_variant v) {
  switch (v) {
    case NB_VARIANT_NULL_CONNECTED:
      return Variant::null_connected;
    case NB_VARIANT_ALL_BROKEN_IS_BREAKDOWN:
      return Variant::all_broken_is_breakdown;
  }
  throw std::invalid_argument("unknown variant");
}

void fill_estimate(const MCEstimate& e, nb_estimate* out) {
  *out = {e.epsilon, e.mean(), e.std_error(), e.breakdowns, e.trials,
          e.graph_samples, e.trials_per_graph, e.seed};
}

std::string log_to_string(const LogScalar& v) {
  if (v.is_zero()) return "0";
  char buf[64];
  if (v.logmag < 700.0) {
    std::snprintf(buf, sizeof buf, "%.17g", v.value());
  } else {
    // Beyond double range: sign * exp(logmag).
    std::snprintf(buf, sizeof buf, "%sexp(%.17g)", v.sign < 0 ? "-" : "", v.logmag);
  }
  return buf;
}

int checked_index(int j, int n) {
  if (j < 0 || j > n) throw std::out_of_range("j outside [0, n]");
  return j;
}

}  // namespace

extern "C" {

const char* nb_version(void) { return NB_VERSION_STRING; }

const char* nb_last_error(void) { return last_error.c_str(); }

const char* nb_status_name(nb_status status) {
  switch (status) {
    case NB_OK: return "ok";
    case NB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NB_ERR_OUT_OF_RANGE: return "out of range";
    case NB_ERR_IO: return "i/o error";
    case NB_ERR_FORMAT: return "format error";
    case NB_ERR_LIMIT: return "limit exceeded";
    case NB_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case NB_ERR_NO_MEMORY: return "out of memory";
    case NB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ------------------------------------------------------------------ bound

nb_status nb_bound_create(int n, int lambda, nb_mode mode, nb_variant variant, unsigned threads,
                          nb_bound** out) {
  return guarded([&] {
    if (nb_status s = require(out != nullptr, "null output handle")) return s;
    const EnsembleParams params{n, lambda};
    auto handle = std::make_unique<nb_bound>();
    switch (mode) {
      case NB_MODE_EXACT:
        handle->q = q_vector<ExactScalar>(params, to_variant(variant), threads);
        break;
      case NB_MODE_LOG:
        handle->q = q_vector<LogScalar>(params, to_variant(variant), threads);
        break;
      default:
        return fail(NB_ERR_INVALID_ARGUMENT, "unknown mode");
    }
    *out = handle.release();
    return NB_OK;
  });
}

void nb_bound_destroy(nb_bound* bound) { delete bound; }

nb_status nb_bound_p(const nb_bound* bound, double epsilon, double* out) {
  return guarded([&] {
    if (nb_status s = require(bound && out, "null argument")) return s;
    *out = std::visit([&](const auto& q) { return p_upper(q, epsilon); }, bound->q);
    return NB_OK;
  });
}

nb_status nb_bound_q(const nb_bound* bound, int j, double* out) {
  return guarded([&] {
    if (nb_status s = require(bound && out, "null argument")) return s;
    *out = std::visit(
        [&](const auto& q) {
          const auto& v = q.entries[checked_index(j, q.params.n)];
          if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ExactScalar>) {
            return to_double(v);
          } else {
            return v.value();
          }
        },
        bound->q);
    return NB_OK;
  });
}

nb_status nb_bound_q_string(const nb_bound* bound, int j, char* buf, size_t capacity,
                            size_t* needed) {
  return guarded([&] {
    if (nb_status s = require(bound != nullptr, "null bound handle")) return s;
    const std::string text = std::visit(
        [&](const auto& q) {
          const auto& v = q.entries[checked_index(j, q.params.n)];
          if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ExactScalar>) {
            return to_string(v);
          } else {
            return log_to_string(v);
          }
        },
        bound->q);
    return copy_out(text, buf, capacity, needed);
  });
}

nb_status nb_verify_collapse(int n, int lambda, int j, int* holds) {
  return guarded([&] {
    if (nb_status s = require(holds != nullptr, "null output")) return s;
    *holds = verify_collapse(EnsembleParams{n, lambda}, j) ? 1 : 0;
    return NB_OK;
  });
}

nb_status nb_two_power_sum_check(int64_t a, int64_t b, int* holds) {
  return guarded([&] {
    if (nb_status s = require(holds != nullptr, "null output")) return s;
    if (a < 0 || b < 0) return fail(NB_ERR_OUT_OF_RANGE, "a and b must be non-negative");
    const ExactScalar expect =
        (a + b) % 2 == 0 ? gen_binomial<ExactScalar>(a + b, HalfInt::of(a)) : ExactScalar(0);
    *holds = two_power_sum<ExactScalar>(a, b) == expect ? 1 : 0;
    return NB_OK;
  });
}

// ------------------------------------------------------------- simulation

nb_status nb_simulate(int n, int lambda, const double* epsilons, size_t count, uint64_t o_max,
                      uint64_t i_max, uint64_t seed, unsigned threads, nb_estimate* out) {
  return guarded([&] {
    if (nb_status s = require(count == 0 || (epsilons && out), "null argument")) return s;
    const auto curve = mc_curve(EnsembleParams{n, lambda}, std::span<const double>(epsilons, count),
                                o_max, i_max, seed, threads);
    for (size_t k = 0; k < count; ++k) fill_estimate(curve[k], &out[k]);
    return NB_OK;
  });
}

// ----------------------------------------------------------------- graphs

nb_status nb_graph_sample(int n, int lambda, uint64_t seed, uint64_t graph_index, nb_graph** out) {
  return guarded([&] {
    if (nb_status s = require(out != nullptr, "null output handle")) return s;
    SplitMix64 rng(streams::graph(seed, graph_index));
    auto handle = std::make_unique<nb_graph>(nb_graph{sample_graph(EnsembleParams{n, lambda}, rng)});
    *out = handle.release();
    return NB_OK;
  });
}

nb_status nb_graph_load(const char* path, nb_graph** out) {
  return guarded([&] {
    if (nb_status s = require(path && out, "null argument")) return s;
    auto handle = std::make_unique<nb_graph>(nb_graph{load_edge_list(path)});
    *out = handle.release();
    return NB_OK;
  });
}

nb_status nb_graph_save(const nb_graph* graph, const char* path) {
  return guarded([&] {
    if (nb_status s = require(graph && path, "null argument")) return s;
    save_edge_list(path, graph->g);
    return NB_OK;
  });
}

void nb_graph_destroy(nb_graph* graph) { delete graph; }

nb_status nb_graph_to_string(const nb_graph* graph, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    if (nb_status s = require(graph != nullptr, "null graph handle")) return s;
    std::ostringstream text;
    write_edge_list(text, graph->g);
    return copy_out(text.str(), buf, capacity, needed);
  });
}

nb_status nb_graph_node_count(const nb_graph* graph, int* out) {
  return guarded([&] {
    if (nb_status s = require(graph && out, "null argument")) return s;
    *out = graph->g.n;
    return NB_OK;
  });
}

nb_status nb_graph_edge_count(const nb_graph* graph, size_t* out) {
  return guarded([&] {
    if (nb_status s = require(graph && out, "null argument")) return s;
    *out = graph->g.edges.size();
    return NB_OK;
  });
}

nb_status nb_graph_is_separated(const nb_graph* graph, const int* broken, size_t count,
                                int* separated) {
  return guarded([&] {
    if (nb_status s = require(graph && separated && (count == 0 || broken), "null argument")) return s;
    const FaultPattern z = FaultPattern::of(std::vector<int>(broken, broken + count), graph->g.n);
    *separated = is_separated(graph->g, z) ? 1 : 0;
    return NB_OK;
  });
}

nb_status nb_graph_polynomial(const nb_graph* graph, unsigned threads, uint64_t* counts,
                              size_t capacity) {
  return guarded([&] {
    if (nb_status s = require(graph && counts, "null argument")) return s;
    if (capacity < static_cast<size_t>(graph->g.n) + 1) {
      return fail(NB_ERR_BUFFER_TOO_SMALL, "counts needs n + 1 entries");
    }
    const BreakdownPolynomial poly = exact_graph_polynomial(graph->g, threads);
    std::copy(poly.counts.begin(), poly.counts.end(), counts);
    return NB_OK;
  });
}

nb_status nb_polynomial_evaluate(const uint64_t* counts, int n, double epsilon, double* out) {
  return guarded([&] {
    if (nb_status s = require(counts && out && n >= 0, "null argument or negative n")) return s;
    const BreakdownPolynomial poly{n, std::vector<std::uint64_t>(counts, counts + n + 1)};
    *out = poly.evaluate(epsilon);
    return NB_OK;
  });
}

nb_status nb_graph_simulate(const nb_graph* graph, double epsilon, uint64_t trials, uint64_t seed,
                            unsigned threads, nb_estimate* out) {
  return guarded([&] {
    if (nb_status s = require(graph && out, "null argument")) return s;
    fill_estimate(mc_fixed_graph(graph->g, epsilon, trials, seed, threads), out);
    return NB_OK;
  });
}

// ----------------------------------------------------------------- oracle

nb_status nb_oracle_create(int n, int lambda, unsigned threads, nb_oracle** out) {
  return guarded([&] {
    if (nb_status s = require(out != nullptr, "null output handle")) return s;
    auto handle = std::make_unique<nb_oracle>(nb_oracle{enumerate_ensemble({n, lambda}, {}, threads)});
    *out = handle.release();
    return NB_OK;
  });
}

void nb_oracle_destroy(nb_oracle* oracle) { delete oracle; }

nb_status nb_oracle_q(const nb_oracle* oracle, int j, double* out) {
  return guarded([&] {
    if (nb_status s = require(oracle && out, "null argument")) return s;
    *out = to_double(oracle->census.q(checked_index(j, oracle->census.params.n)));
    return NB_OK;
  });
}

nb_status nb_oracle_q_string(const nb_oracle* oracle, int j, char* buf, size_t capacity,
                             size_t* needed) {
  return guarded([&] {
    if (nb_status s = require(oracle != nullptr, "null oracle handle")) return s;
    const std::string text = to_string(oracle->census.q(checked_index(j, oracle->census.params.n)));
    return copy_out(text, buf, capacity, needed);
  });
}

nb_status nb_oracle_dominated(const nb_oracle* oracle, int j, int* dominated) {
  return guarded([&] {
    if (nb_status s = require(oracle && dominated, "null argument")) return s;
    const EnsembleCensus& c = oracle->census;
    checked_index(j, c.params.n);
    *dominated = c.q(j) <= q_upper<ExactScalar>(c.params, j) ? 1 : 0;
    return NB_OK;
  });
}

nb_status nb_oracle_curve(const nb_oracle* oracle, double epsilon, double* out) {
  return guarded([&] {
    if (nb_status s = require(oracle && out, "null argument")) return s;
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) return fail(NB_ERR_OUT_OF_RANGE, "epsilon must lie in [0, 1]");
    *out = to_double(exact_ensemble_value(oracle->census, ExactScalar(epsilon)));
    return NB_OK;
  });
}

}  // extern "C"
