#pragma once

// Closed-form upper bound on the ensemble-average breakdown probability of
// lambda-regular random networks under independent node faults, plus the
// configuration-count route (A, K(j)) it collapses from.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netbreak/combinatorics.hpp"

namespace netbreak {

/// n nodes of degree lambda. lambda*n must be even so that lambda*n/2 check
/// nodes exist.
struct EnsembleParams {
  int n = 0;
  int lambda = 0;

  /// Throws std::invalid_argument unless n >= 2, lambda >= 2 and lambda*n even.
  void validate() const;
  std::int64_t sockets() const { return std::int64_t{n} * lambda; }
  std::int64_t checks() const { return sockets() / 2; }

  friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;
};

/// How the all-nodes-broken outcome is scored.
enum class Variant {
  null_connected,           // the null graph is connected, Q_n = 0
  all_broken_is_breakdown,  // Q_n replaced by 1
};

/// Partition sizes of a bipartite configuration.
///
/// Variable nodes split into V0 (removed), V1, V2; check nodes into I1, I2
/// (one socket on V0 and the other on V1 resp. V2) and C0, C1, C2 (both
/// sockets inside V0, V1, V2 resp.).
struct ConfigurationShape {
  std::int64_t n0 = 0, n1 = 0, n2 = 0;
  std::int64_t c0 = 0, c1 = 0, c2 = 0;
  std::int64_t i1 = 0, i2 = 0;

  /// Completes (n0, n1, i1, i2) from the socket balance equations; nullopt if
  /// any derived size is negative or fractional.
  static std::optional<ConfigurationShape> from_free(const EnsembleParams& params, std::int64_t n0,
                                                     std::int64_t n1, std::int64_t i1,
                                                     std::int64_t i2);

  /// Size, socket-balance and check-count invariants.
  bool is_consistent(const EnsembleParams& params) const;
};

template <class Scalar>
struct QVector {
  EnsembleParams params;
  Variant variant = Variant::null_connected;
  std::vector<Scalar> entries;  // j = 0..n
};

struct BoundPoint {
  double epsilon = 0.0;
  double value = 0.0;
};

struct BoundCurve {
  EnsembleParams params;
  Variant variant = Variant::null_connected;
  std::vector<BoundPoint> points;
};

/// Q^(U)_{j,lambda,n}. The exact instantiation uses an integer recurrence
/// over i1; the log instantiation evaluates every coefficient directly.
/// Throws std::out_of_range unless 0 <= j <= n.
template <class Scalar>
Scalar q_upper(const EnsembleParams& params, int j);

/// Q^(U) evaluated term by term through gen_binomial/gen_multinomial.
template <class Scalar>
Scalar q_upper_termwise(const EnsembleParams& params, int j);

/// All Q^(U)_j for j = 0..n, with entry n set per variant. threads == 0
/// means hardware concurrency.
template <class Scalar>
QVector<Scalar> q_vector(const EnsembleParams& params, Variant variant, unsigned threads = 0);

/// sum_j C(n,j) Q_j eps^j (1-eps)^(n-j), unclamped. Throws std::out_of_range
/// for eps outside [0,1].
double p_upper(const QVector<ExactScalar>& q, double epsilon);
double p_upper(const QVector<LogScalar>& q, double epsilon);

/// The same polynomial in exact arithmetic; epsilon is taken as the exact
/// binary value of the double.
ExactScalar p_upper_exact(const QVector<ExactScalar>& q, const ExactScalar& epsilon);

template <class Scalar>
double p_upper(const EnsembleParams& params, double epsilon, Variant variant) {
  return p_upper(q_vector<Scalar>(params, variant), epsilon);
}

template <class Scalar>
BoundCurve curve_from(const QVector<Scalar>& q, std::span<const double> epsilons) {
  BoundCurve curve{q.params, q.variant, {}};
  curve.points.reserve(epsilons.size());
  for (const double eps : epsilons) curve.points.push_back({eps, p_upper(q, eps)});
  return curve;
}

/// One QVector evaluated over the whole grid.
template <class Scalar>
BoundCurve p_upper_curve(const EnsembleParams& params, std::span<const double> epsilons,
                         Variant variant, unsigned threads = 0);

/// A_{n0,n1,i1,i2}: number of bipartite configurations with these sizes.
/// Zero when the derived sizes are not non-negative integers.
ExactScalar config_count(const EnsembleParams& params, std::int64_t n0, std::int64_t n1,
                         std::int64_t i1, std::int64_t i2);
ExactScalar config_count(const EnsembleParams& params, const ConfigurationShape& shape);

/// K(j): configurations with a fixed V0 of size j.
ExactScalar k_of_j(const EnsembleParams& params, int j);

/// K(j) / (2 (lambda n)!) == Q^(U)_j, both sides computed exactly.
bool verify_collapse(const EnsembleParams& params, int j);

template <>
ExactScalar q_upper<ExactScalar>(const EnsembleParams& params, int j);
template <>
LogScalar q_upper<LogScalar>(const EnsembleParams& params, int j);
extern template ExactScalar q_upper_termwise<ExactScalar>(const EnsembleParams&, int);
extern template LogScalar q_upper_termwise<LogScalar>(const EnsembleParams&, int);
extern template QVector<ExactScalar> q_vector<ExactScalar>(const EnsembleParams&, Variant, unsigned);
extern template QVector<LogScalar> q_vector<LogScalar>(const EnsembleParams&, Variant, unsigned);
extern template BoundCurve p_upper_curve<ExactScalar>(const EnsembleParams&, std::span<const double>,
                                                      Variant, unsigned);
extern template BoundCurve p_upper_curve<LogScalar>(const EnsembleParams&, std::span<const double>,
                                                    Variant, unsigned);

}  // namespace netbreak
