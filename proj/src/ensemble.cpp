#include "netbreak/ensemble.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "netbreak/errors.hpp"

namespace netbreak {

Permutation::Permutation(std::vector<std::uint32_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (const std::uint32_t v : mapping_) {
    if (v >= mapping_.size() || seen[v]) {
      throw std::invalid_argument("permutation is not a bijection on [0, " +
                                  std::to_string(mapping_.size()) + ")");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t size) {
  std::vector<std::uint32_t> m(size);
  std::iota(m.begin(), m.end(), 0u);
  return Permutation(std::move(m));
}

std::vector<int> MultiGraph::incidence() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

bool MultiGraph::is_regular(int degree) const {
  for (const int d : incidence()) {
    if (d != degree) return false;
  }
  return true;
}

Permutation sample_permutation(SplitMix64& rng, std::size_t size) {
  if (size == 0) throw std::invalid_argument("permutation size must be positive");
  std::vector<std::uint32_t> m(size);
  std::iota(m.begin(), m.end(), 0u);
  for (std::size_t i = size - 1; i > 0; --i) {
    const std::size_t k = rng.below(i + 1);
    std::swap(m[i], m[k]);
  }
  return Permutation(std::move(m));
}

TannerGraph tanner_from_permutation(const Permutation& pi, const EnsembleParams& params) {
  params.validate();
  if (static_cast<std::int64_t>(pi.size()) != params.sockets()) {
    throw std::invalid_argument("permutation size " + std::to_string(pi.size()) +
                                " does not match lambda*n = " + std::to_string(params.sockets()));
  }
  TannerGraph tg{params, {}};
  tg.edges.reserve(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    tg.edges.push_back({static_cast<int>(i / params.lambda), static_cast<int>(pi[i] / 2)});
  }
  return tg;
}

MultiGraph counterpart(const TannerGraph& tg) {
  const auto checks = static_cast<std::size_t>(tg.params.checks());
  std::vector<int> first(checks, -1);
  std::vector<int> second(checks, -1);
  std::vector<int> count(checks, 0);
  for (const TannerEdge& e : tg.edges) {
    if (e.check < 0 || static_cast<std::size_t>(e.check) >= checks || e.variable < 0 ||
        e.variable >= tg.params.n) {
      throw std::invalid_argument("Tanner edge endpoint out of range");
    }
    const int seen = count[e.check]++;
    if (seen == 0) first[e.check] = e.variable;
    if (seen == 1) second[e.check] = e.variable;
  }
  MultiGraph g{tg.params.n, {}};
  g.edges.reserve(checks);
  for (std::size_t c = 0; c < checks; ++c) {
    if (count[c] != 2) {
      throw std::invalid_argument("check node " + std::to_string(c) + " has " +
                                  std::to_string(count[c]) + " incident edges, expected 2");
    }
    g.edges.push_back({std::min(first[c], second[c]), std::max(first[c], second[c])});
  }
  return g;
}

MultiGraph sample_graph(const EnsembleParams& params, SplitMix64& rng) {
  params.validate();
  const Permutation pi = sample_permutation(rng, static_cast<std::size_t>(params.sockets()));
  return counterpart(tanner_from_permutation(pi, params));
}

void write_edge_list(std::ostream& out, const MultiGraph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const Edge& e : g.edges) out << e.u << ' ' << e.v << '\n';
}

MultiGraph read_edge_list(std::istream& in) {
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw FormatError("edge list: bad \"n m\" header");
  MultiGraph g{static_cast<int>(n), {}};
  g.edges.reserve(static_cast<std::size_t>(std::min(m, 1LL << 20)));
  for (long long k = 0; k < m; ++k) {
    long long u = -1;
    long long v = -1;
    if (!(in >> u >> v)) {
      throw FormatError("edge list: expected " + std::to_string(m) + " edges, read " +
                        std::to_string(k));
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw FormatError("edge list: edge " + std::to_string(k) + " has endpoint out of range");
    }
    g.edges.push_back({static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))});
  }
  std::string trailing;
  if (in >> trailing) throw FormatError("edge list: trailing data after " + std::to_string(m) + " edges");
  return g;
}

void save_edge_list(const std::filesystem::path& path, const MultiGraph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_edge_list(out, g);
  if (!out) throw IoError("write failed: " + path.string());
}

MultiGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return read_edge_list(in);
}

}  // namespace netbreak
