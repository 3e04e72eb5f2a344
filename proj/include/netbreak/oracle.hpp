#pragma once

// Brute-force ground truth for small instances: every socket permutation of
// the ensemble, and every fault subset of a fixed graph.

#include <cstdint>
#include <span>
#include <vector>

#include "netbreak/bound.hpp"
#include "netbreak/combinatorics.hpp"
#include "netbreak/ensemble.hpp"

namespace netbreak {

/// Largest lambda*n swept by enumerate_ensemble. 10! = 3.6M permutations
/// take a few seconds on one core.
inline constexpr int kMaxEnumerationSockets = 10;
/// Largest n swept by exact_graph_polynomial (2^22 subsets, well under a
/// second).
inline constexpr int kMaxSubsetNodes = 22;

/// Tallies over all (lambda n)! permutations. For each j, Z_j is the first j
/// entries of removal_order.
struct EnsembleCensus {
  EnsembleParams params;
  std::vector<int> removal_order;
  std::uint64_t permutations = 0;
  /// separated[j]: permutations whose survivor graph G \ Z_j is disconnected.
  std::vector<std::uint64_t> separated;
  /// configurations[j]: sum over permutations of 2^(k-1) - 1, k = number of
  /// survivor components (0 when nothing survives). This is half the number
  /// of bipartite configurations with V0 = Z_j.
  std::vector<std::uint64_t> configurations;

  /// Q_{j,lambda,n} = separated[j] / (lambda n)!.
  ExactScalar q(int j) const;
  /// configurations[j] / (lambda n)!.
  ExactScalar configuration_mean(int j) const;
};

/// Throws LimitError when lambda*n > kMaxEnumerationSockets. An empty
/// removal_order means 0, 1, ..., n-1.
EnsembleCensus enumerate_ensemble(const EnsembleParams& params,
                                  std::span<const int> removal_order = {}, unsigned threads = 0);

/// Q_{j,lambda,n} with Z = {0, ..., j-1}.
ExactScalar exact_q(int n, int lambda, int j);

struct BreakdownPolynomial {
  int n = 0;
  /// counts[j]: size-j broken sets whose survivor graph is separated.
  std::vector<std::uint64_t> counts;

  /// sum_j counts[j] eps^j (1 - eps)^(n - j)
  double evaluate(double epsilon) const;
  ExactScalar evaluate_exact(const ExactScalar& epsilon) const;
};

/// Throws LimitError when g.n > kMaxSubsetNodes.
BreakdownPolynomial exact_graph_polynomial(const MultiGraph& g, unsigned threads = 0);

struct ExactCurvePoint {
  double epsilon = 0.0;
  ExactScalar value;  // at the exact binary value of epsilon
};

/// sum_j C(n,j) Q_j eps^j (1 - eps)^(n - j) from a census.
ExactScalar exact_ensemble_value(const EnsembleCensus& census, const ExactScalar& epsilon);

std::vector<ExactCurvePoint> exact_ensemble_curve(int n, int lambda,
                                                  std::span<const double> epsilons);

}  // namespace netbreak
