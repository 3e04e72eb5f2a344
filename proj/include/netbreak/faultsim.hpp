#pragma once

// Independent node faults, survivor-graph connectivity, and the two-level
// Monte Carlo estimate (graphs x fault trials) of the breakdown probability.

#include <cstdint>
#include <span>
#include <vector>

#include "netbreak/ensemble.hpp"
#include "netbreak/rng.hpp"

namespace netbreak {

/// Broken node indices, ascending, no duplicates.
struct FaultPattern {
  std::vector<int> broken;

  /// Sorts and validates; throws std::invalid_argument on out-of-range or
  /// duplicate indices.
  static FaultPattern of(std::vector<int> nodes, int n);
};

/// Node v is broken when rng.uniform01() < epsilon, drawn for v = 0..n-1 in
/// order. Throws std::out_of_range for epsilon outside [0, 1].
FaultPattern sample_faults(SplitMix64& rng, int n, double epsilon);

/// Same draws as sample_faults, written into a 0/1 mask of length n.
void sample_fault_mask(SplitMix64& rng, double epsilon, std::span<std::uint8_t> broken);

/// Adjacency of a multigraph with self-loops dropped and parallel edges
/// collapsed, plus DFS scratch space. One instance per thread.
class SurvivorConnectivity {
 public:
  explicit SurvivorConnectivity(const MultiGraph& g);

  int node_count() const { return n_; }

  /// True iff the alive nodes (broken[v] == 0) induce two or more connected
  /// components. At most one alive node counts as connected.
  bool separated(std::span<const std::uint8_t> broken);

 private:
  int n_ = 0;
  std::vector<int> offsets_;
  std::vector<int> neighbors_;
  std::vector<std::uint32_t> visit_stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<int> stack_;
};

bool is_separated(const MultiGraph& g, const FaultPattern& z);

struct MCEstimate {
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t breakdowns = 0;
  std::uint64_t graph_samples = 0;     // o_max
  std::uint64_t trials_per_graph = 0;  // i_max
  std::uint64_t seed = 0;

  double mean() const;
  /// Normal-approximation standard error sqrt(mean (1 - mean) / trials).
  double std_error() const;
};

/// Samples o_max graphs and runs i_max fault trials on each. Graph g comes
/// from streams::graph(seed, g); trial t at grid index e from
/// streams::fault(seed, g, e, t). Results do not depend on threads.
MCEstimate mc_breakdown(const EnsembleParams& params, double epsilon, std::uint64_t o_max,
                        std::uint64_t i_max, std::uint64_t seed, unsigned threads = 0);

/// One estimate per grid point, sharing the same o_max graphs.
std::vector<MCEstimate> mc_curve(const EnsembleParams& params, std::span<const double> epsilons,
                                 std::uint64_t o_max, std::uint64_t i_max, std::uint64_t seed,
                                 unsigned threads = 0);

/// Fault trials on one fixed graph (graph index 0, grid index 0 streams).
MCEstimate mc_fixed_graph(const MultiGraph& g, double epsilon, std::uint64_t trials,
                          std::uint64_t seed, unsigned threads = 0);

}  // namespace netbreak
