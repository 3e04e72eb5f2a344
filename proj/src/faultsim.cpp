#include "netbreak/faultsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace netbreak {

namespace {

void check_probability(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::out_of_range("epsilon must lie in [0, 1], got " + std::to_string(eps));
  }
}

void check_counts(std::uint64_t o_max, std::uint64_t i_max) {
  if (o_max == 0) throw std::invalid_argument("o_max must be positive");
  if (i_max == 0) throw std::invalid_argument("i_max must be positive");
}

}  // namespace

FaultPattern FaultPattern::of(std::vector<int> nodes, int n) {
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] < 0 || nodes[k] >= n) {
      throw std::invalid_argument("broken node " + std::to_string(nodes[k]) + " out of range");
    }
    if (k > 0 && nodes[k] == nodes[k - 1]) {
      throw std::invalid_argument("broken node " + std::to_string(nodes[k]) + " listed twice");
    }
  }
  return FaultPattern{std::move(nodes)};
}

void sample_fault_mask(SplitMix64& rng, double epsilon, std::span<std::uint8_t> broken) {
  check_probability(epsilon);
  for (auto& b : broken) b = rng.uniform01() < epsilon ? 1 : 0;
}

FaultPattern sample_faults(SplitMix64& rng, int n, double epsilon) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n));
  sample_fault_mask(rng, epsilon, mask);
  FaultPattern z;
  for (int v = 0; v < n; ++v) {
    if (mask[v]) z.broken.push_back(v);
  }
  return z;
}

// ---------------------------------------------------- SurvivorConnectivity

SurvivorConnectivity::SurvivorConnectivity(const MultiGraph& g)
    : n_(g.n), offsets_(static_cast<std::size_t>(g.n) + 1, 0), visit_stamp_(g.n, 0) {
  std::vector<Edge> simple;
  simple.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.u != e.v) simple.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(simple.begin(), simple.end());
  simple.erase(std::unique(simple.begin(), simple.end()), simple.end());

  for (const Edge& e : simple) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (int v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  neighbors_.resize(static_cast<std::size_t>(offsets_[n_]));
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : simple) {
    neighbors_[fill[e.u]++] = e.v;
    neighbors_[fill[e.v]++] = e.u;
  }
  stack_.reserve(static_cast<std::size_t>(n_));
}

bool SurvivorConnectivity::separated(std::span<const std::uint8_t> broken) {
  if (static_cast<int>(broken.size()) != n_) {
    throw std::invalid_argument("fault mask length does not match node count");
  }
  int alive = 0;
  int root = -1;
  for (int v = 0; v < n_; ++v) {
    if (!broken[v]) {
      ++alive;
      if (root < 0) root = v;
    }
  }
  if (alive <= 1) return false;

  if (++epoch_ == 0) {
    std::fill(visit_stamp_.begin(), visit_stamp_.end(), 0u);
    epoch_ = 1;
  }
  int reached = 1;
  visit_stamp_[root] = epoch_;
  stack_.clear();
  stack_.push_back(root);
  while (!stack_.empty()) {
    const int v = stack_.back();
    stack_.pop_back();
    for (int k = offsets_[v]; k < offsets_[v + 1]; ++k) {
      const int w = neighbors_[k];
      if (broken[w] || visit_stamp_[w] == epoch_) continue;
      visit_stamp_[w] = epoch_;
      ++reached;
      stack_.push_back(w);
    }
  }
  return reached < alive;
}

bool is_separated(const MultiGraph& g, const FaultPattern& z) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.n), 0);
  for (const int v : z.broken) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("broken node out of range");
    mask[v] = 1;
  }
  SurvivorConnectivity conn(g);
  return conn.separated(mask);
}

// ------------------------------------------------------------ estimators

double MCEstimate::mean() const {
  return trials == 0 ? 0.0 : static_cast<double>(breakdowns) / static_cast<double>(trials);
}

double MCEstimate::std_error() const {
  if (trials == 0) return 0.0;
  const double m = mean();
  return std::sqrt(m * (1.0 - m) / static_cast<double>(trials));
}

std::vector<MCEstimate> mc_curve(const EnsembleParams& params, std::span<const double> epsilons,
                                 std::uint64_t o_max, std::uint64_t i_max, std::uint64_t seed,
                                 unsigned threads) {
  params.validate();
  check_counts(o_max, i_max);
  for (const double eps : epsilons) check_probability(eps);

  const std::size_t grid = epsilons.size();
  // Per-graph counts keep the reduction order fixed whatever the chunking.
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(o_max) * grid, 0);
  detail::parallel_for(static_cast<std::size_t>(o_max), threads, [&](std::size_t g) {
    SplitMix64 graph_rng(streams::graph(seed, g));
    SurvivorConnectivity conn(sample_graph(params, graph_rng));
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(params.n));
    for (std::size_t e = 0; e < grid; ++e) {
      std::uint64_t hits = 0;
      for (std::uint64_t t = 0; t < i_max; ++t) {
        SplitMix64 rng(streams::fault(seed, g, e, t));
        sample_fault_mask(rng, epsilons[e], mask);
        hits += conn.separated(mask) ? 1 : 0;
      }
      counts[g * grid + e] = hits;
    }
  });

  std::vector<MCEstimate> out;
  out.reserve(grid);
  for (std::size_t e = 0; e < grid; ++e) {
    MCEstimate est{epsilons[e], o_max * i_max, 0, o_max, i_max, seed};
    for (std::size_t g = 0; g < o_max; ++g) est.breakdowns += counts[g * grid + e];
    out.push_back(est);
  }
  return out;
}

MCEstimate mc_breakdown(const EnsembleParams& params, double epsilon, std::uint64_t o_max,
                        std::uint64_t i_max, std::uint64_t seed, unsigned threads) {
  const double grid[] = {epsilon};
  return mc_curve(params, grid, o_max, i_max, seed, threads).front();
}

MCEstimate mc_fixed_graph(const MultiGraph& g, double epsilon, std::uint64_t trials,
                          std::uint64_t seed, unsigned threads) {
  check_probability(epsilon);
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(detail::resolve_threads(threads), trials));
  std::vector<std::uint64_t> hits(workers, 0);
  detail::parallel_for(workers, workers, [&](std::size_t w) {
    SurvivorConnectivity conn(g);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.n));
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng(streams::fault(seed, 0, 0, t));
      sample_fault_mask(rng, epsilon, mask);
      hits[w] += conn.separated(mask) ? 1 : 0;
    }
  });
  MCEstimate est{epsilon, trials, 0, 1, trials, seed};
  for (const std::uint64_t h : hits) est.breakdowns += h;
  return est;
}

}  // namespace netbreak
