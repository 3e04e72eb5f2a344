#include "netbreak/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "netbreak/errors.hpp"
#include "parallel.hpp"

namespace netbreak {

namespace {

// Union-find over at most kMaxEnumerationSockets nodes, reset per use.
struct SmallDsu {
  int parent[kMaxEnumerationSockets];

  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

struct CensusCounts {
  std::vector<std::uint64_t> separated;
  std::vector<std::uint64_t> configurations;
};

void check_probability(const ExactScalar& eps) {
  if (eps < 0 || eps > 1) throw std::out_of_range("epsilon must lie in [0, 1]");
}

}  // namespace

ExactScalar EnsembleCensus::q(int j) const {
  ExactScalar out(mpz_class(separated.at(j)), mpz_class(permutations));
  out.canonicalize();
  return out;
}

ExactScalar EnsembleCensus::configuration_mean(int j) const {
  ExactScalar out(mpz_class(configurations.at(j)), mpz_class(permutations));
  out.canonicalize();
  return out;
}

EnsembleCensus enumerate_ensemble(const EnsembleParams& params, std::span<const int> removal_order,
                                  unsigned threads) {
  params.validate();
  const int n = params.n;
  const int L = params.lambda;
  const int sockets = static_cast<int>(params.sockets());
  if (sockets > kMaxEnumerationSockets) {
    throw LimitError("enumeration limited to lambda*n <= " +
                     std::to_string(kMaxEnumerationSockets) + ", got " + std::to_string(sockets));
  }

  std::vector<int> order(removal_order.begin(), removal_order.end());
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
  }
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(static_cast<std::size_t>(n));
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw std::invalid_argument("removal order must be a permutation of the nodes");
  }

  // One chunk per leading value; the tail runs through its permutations in
  // lexicographic order.
  std::vector<CensusCounts> chunks(static_cast<std::size_t>(sockets));
  detail::parallel_for(chunks.size(), threads, [&](std::size_t lead) {
    CensusCounts& out = chunks[lead];
    out.separated.assign(static_cast<std::size_t>(n) + 1, 0);
    out.configurations.assign(static_cast<std::size_t>(n) + 1, 0);

    int pi[kMaxEnumerationSockets];
    pi[0] = static_cast<int>(lead);
    for (int i = 1, v = 0; i < sockets; ++v) {
      if (v != static_cast<int>(lead)) pi[i++] = v;
    }
    int end_a[kMaxEnumerationSockets / 2];
    int end_b[kMaxEnumerationSockets / 2];
    // Edges incident to each node, as the index of the other endpoint.
    int adj[kMaxEnumerationSockets][kMaxEnumerationSockets];
    int adj_len[kMaxEnumerationSockets];
    bool alive[kMaxEnumerationSockets];

    do {
      for (int c = 0; c < sockets / 2; ++c) end_a[c] = -1;
      for (int i = 0; i < sockets; ++i) {
        const int check = pi[i] / 2;
        const int var = i / L;
        if (end_a[check] < 0) {
          end_a[check] = var;
        } else {
          end_b[check] = var;
        }
      }
      std::fill(adj_len, adj_len + n, 0);
      for (int c = 0; c < sockets / 2; ++c) {
        if (end_a[c] == end_b[c]) continue;
        adj[end_a[c]][adj_len[end_a[c]]++] = end_b[c];
        adj[end_b[c]][adj_len[end_b[c]]++] = end_a[c];
      }

      // Re-insert nodes in reverse removal order: after inserting order[j],
      // the alive set is exactly the complement of Z_j.
      SmallDsu dsu;
      std::fill(alive, alive + n, false);
      int components = 0;
      for (int j = n; j >= 0; --j) {
        if (j < n) {
          const int v = order[j];
          alive[v] = true;
          dsu.parent[v] = v;
          ++components;
          for (int k = 0; k < adj_len[v]; ++k) {
            const int w = adj[v][k];
            if (alive[w] && dsu.unite(v, w)) --components;
          }
        }
        if (components >= 2) ++out.separated[j];
        if (components >= 1) out.configurations[j] += (std::uint64_t{1} << (components - 1)) - 1;
      }
    } while (std::next_permutation(pi + 1, pi + sockets));
  });

  EnsembleCensus census{params, order, 0, {}, {}};
  census.permutations = 1;
  for (int k = 2; k <= sockets; ++k) census.permutations *= static_cast<std::uint64_t>(k);
  census.separated.assign(static_cast<std::size_t>(n) + 1, 0);
  census.configurations.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const CensusCounts& c : chunks) {
    for (int j = 0; j <= n; ++j) {
      census.separated[j] += c.separated[j];
      census.configurations[j] += c.configurations[j];
    }
  }
  return census;
}

ExactScalar exact_q(int n, int lambda, int j) {
  const EnsembleParams params{n, lambda};
  params.validate();
  if (j < 0 || j > n) throw std::out_of_range("j outside [0, n]");
  return enumerate_ensemble(params).q(j);
}

// ------------------------------------------------------ fixed-graph sweep

double BreakdownPolynomial::evaluate(double epsilon) const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::out_of_range("epsilon must lie in [0, 1]");
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (counts[j] == 0) continue;
    sum += static_cast<double>(counts[j]) * std::pow(epsilon, j) * std::pow(1.0 - epsilon, n - j);
  }
  return sum;
}

ExactScalar BreakdownPolynomial::evaluate_exact(const ExactScalar& epsilon) const {
  check_probability(epsilon);
  ExactScalar sum = 0;
  ExactScalar eps_pow = 1;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) eps_pow *= epsilon;
    if (counts[j] == 0) continue;
    ExactScalar survive_pow = 1;
    for (int k = 0; k < n - j; ++k) survive_pow *= (1 - epsilon);
    sum += ExactScalar(mpz_class(counts[j])) * eps_pow * survive_pow;
  }
  return sum;
}

BreakdownPolynomial exact_graph_polynomial(const MultiGraph& g, unsigned threads) {
  const int n = g.n;
  if (n > kMaxSubsetNodes) {
    throw LimitError("subset sweep limited to n <= " + std::to_string(kMaxSubsetNodes) +
                     ", got " + std::to_string(n));
  }
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) continue;
    adj[e.u] |= std::uint32_t{1} << e.v;
    adj[e.v] |= std::uint32_t{1} << e.u;
  }
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  const std::uint64_t subsets = std::uint64_t{1} << n;

  constexpr std::size_t kChunks = 64;
  std::vector<std::vector<std::uint64_t>> partial(kChunks);
  detail::parallel_for(kChunks, threads, [&](std::size_t c) {
    auto& counts = partial[c];
    counts.assign(static_cast<std::size_t>(n) + 1, 0);
    const std::uint64_t begin = subsets * c / kChunks;
    const std::uint64_t end = subsets * (c + 1) / kChunks;
    for (std::uint64_t m = begin; m < end; ++m) {
      const auto broken = static_cast<std::uint32_t>(m);
      const std::uint32_t alive = full & ~broken;
      if (std::popcount(alive) <= 1) continue;
      std::uint32_t reached = alive & (~alive + 1);  // lowest alive node
      std::uint32_t frontier = reached;
      while (frontier) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
        next &= alive & ~reached;
        reached |= next;
        frontier = next;
      }
      if (reached != alive) ++counts[std::popcount(broken)];
    }
  });

  BreakdownPolynomial poly{n, std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0)};
  for (const auto& counts : partial) {
    for (int j = 0; j <= n; ++j) poly.counts[j] += counts[j];
  }
  return poly;
}

// ------------------------------------------------------ ensemble curve

ExactScalar exact_ensemble_value(const EnsembleCensus& census, const ExactScalar& epsilon) {
  check_probability(epsilon);
  const int n = census.params.n;
  ExactScalar sum = 0;
  for (int j = 0; j <= n; ++j) {
    if (census.separated[j] == 0) continue;
    ExactScalar term = census.q(j) * gen_binomial<ExactScalar>(n, HalfInt::of(j));
    for (int k = 0; k < j; ++k) term *= epsilon;
    for (int k = 0; k < n - j; ++k) term *= (1 - epsilon);
    sum += term;
  }
  return sum;
}

std::vector<ExactCurvePoint> exact_ensemble_curve(int n, int lambda,
                                                  std::span<const double> epsilons) {
  const EnsembleCensus census = enumerate_ensemble(EnsembleParams{n, lambda});
  std::vector<ExactCurvePoint> out;
  out.reserve(epsilons.size());
  for (const double eps : epsilons) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::out_of_range("epsilon must lie in [0, 1]");
    out.push_back({eps, exact_ensemble_value(census, ExactScalar(eps))});
  }
  return out;
}

}  // namespace netbreak
