#pragma once

// (lambda,2) Tanner graphs from socket permutations and their lambda-regular
// multigraph counterparts.
//
// Socket convention (0-based): variable node v owns sockets
// [lambda*v, lambda*v + lambda), check node c owns sockets [2c, 2c + 2).
// Variable socket i is wired to check socket pi(i).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "netbreak/bound.hpp"
#include "netbreak/rng.hpp"

namespace netbreak {

class Permutation {
 public:
  /// Throws std::invalid_argument unless mapping is a bijection on [0, size).
  explicit Permutation(std::vector<std::uint32_t> mapping);
  static Permutation identity(std::size_t size);

  std::size_t size() const { return mapping_.size(); }
  std::uint32_t operator[](std::size_t i) const { return mapping_[i]; }
  std::span<const std::uint32_t> mapping() const { return mapping_; }

 private:
  std::vector<std::uint32_t> mapping_;
};

struct TannerEdge {
  int variable = 0;
  int check = 0;
  friend bool operator==(const TannerEdge&, const TannerEdge&) = default;
};

/// One edge per variable-side socket, in socket order.
struct TannerGraph {
  EnsembleParams params;
  std::vector<TannerEdge> edges;
};

/// Undirected edge, stored with u <= v. u == v is a self-loop.
struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct MultiGraph {
  int n = 0;
  std::vector<Edge> edges;

  /// Incidences per node; a self-loop counts twice.
  std::vector<int> incidence() const;
  bool is_regular(int degree) const;
};

/// Fisher-Yates shuffle driven by rng. size >= 1.
Permutation sample_permutation(SplitMix64& rng, std::size_t size);

/// Throws std::invalid_argument if |pi| != lambda*n.
TannerGraph tanner_from_permutation(const Permutation& pi, const EnsembleParams& params);

/// Each check node becomes one edge between its two variable nodes, edges
/// ordered by check index. Throws std::invalid_argument if a check node does
/// not have exactly two incident edges.
MultiGraph counterpart(const TannerGraph& tg);

/// One draw from the ensemble: permutation, Tanner graph, counterpart.
MultiGraph sample_graph(const EnsembleParams& params, SplitMix64& rng);

/// Edge-list text format: "n m" on the first line, then m lines "u v"
/// (0-based; a self-loop is "v v").
void write_edge_list(std::ostream& out, const MultiGraph& g);
/// Throws FormatError on malformed input.
MultiGraph read_edge_list(std::istream& in);

/// File wrappers; throw IoError naming the path.
void save_edge_list(const std::filesystem::path& path, const MultiGraph& g);
MultiGraph load_edge_list(const std::filesystem::path& path);

}  // namespace netbreak
