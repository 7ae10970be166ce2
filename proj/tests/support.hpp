#pragma once

#include "graphfair/multigraph.hpp"
#include "graphfair/valuation.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace graphfair::testing {

// Path v1..vn.
inline Multigraph path_graph(std::size_t n) {
  Multigraph g;
  for (std::size_t i = 1; i <= n; ++i) g.add_vertex("v" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i) g.add_edge(static_cast<VertexId>(i - 1), static_cast<VertexId>(i));
  return g;
}

inline Multigraph cycle_graph(std::size_t n) {
  Multigraph g = path_graph(n);
  g.add_edge(static_cast<VertexId>(n - 1), 0);
  return g;
}

inline Multigraph star_graph(std::size_t leaves) {
  Multigraph g;
  g.add_vertex("o");
  for (std::size_t i = 1; i <= leaves; ++i) g.add_edge("o", "l" + std::to_string(i));
  return g;
}

// Lips-class graph with the given interior counts on the paths
// a-b (top), a-b (middle), b-c (middle), b-c (top), a-c (bottom).
inline Multigraph lips_graph(std::array<std::size_t, 5> interior) {
  static constexpr std::array<std::array<const char*, 3>, 5> paths{{
      {"a", "b", "tl"}, {"a", "b", "ml"}, {"b", "c", "mr"}, {"b", "c", "tr"}, {"a", "c", "bo"}}};
  Multigraph g;
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_vertex("c");
  for (std::size_t p = 0; p < paths.size(); ++p) {
    std::string prev = paths[p][0];
    for (std::size_t j = 1; j <= interior[p]; ++j) {
      const std::string name = std::string(paths[p][2]) + std::to_string(j);
      g.add_edge(prev, name);
      prev = name;
    }
    g.add_edge(prev, paths[p][1]);
  }
  return g;
}

inline AdditiveValuation random_additive(std::size_t universe, std::mt19937_64& rng, int lo = 0, int hi = 100) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<Rational> values(universe);
  for (auto& q : values) q = dist(rng);
  return AdditiveValuation(std::move(values));
}

inline ValuationProfile random_profile(std::size_t universe, std::size_t agents, std::mt19937_64& rng) {
  std::vector<Valuation> list;
  for (std::size_t i = 0; i < agents; ++i) list.emplace_back(random_additive(universe, rng));
  return ValuationProfile(std::move(list));
}

// Monotone but not additive: min(additive sum, cap) plus the largest single weight.
inline Valuation capped_oracle(std::size_t universe, std::mt19937_64& rng) {
  const AdditiveValuation base = random_additive(universe, rng, 0, 20);
  const Rational cap = base.total() / 2 + 1;
  return Valuation(ValuationOracle(universe, [base, cap](std::span<const VertexId> set) -> Rational {
    Rational sum = base.value(set);
    Rational top = 0;
    for (VertexId v : set) top = std::max(top, base[v]);
    return std::min(sum, cap) + top;
  }));
}

// Connected multigraph on n vertices: random spanning tree plus `extra` edges,
// loops and parallels allowed when `multi` is set.
inline Multigraph random_connected(std::size_t n, std::size_t extra, bool multi, std::mt19937_64& rng) {
  Multigraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex("x" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    g.add_edge(static_cast<VertexId>(parent(rng)), static_cast<VertexId>(i));
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t added = 0, tries = 0; added < extra && tries < 100 * (extra + 1); ++tries) {
    const auto u = static_cast<VertexId>(pick(rng)), v = static_cast<VertexId>(pick(rng));
    if (!multi && (u == v || g.adjacent(u, v))) continue;
    g.add_edge(u, v);
    ++added;
  }
  return g;
}

// A Hamiltonian path plus random chords; its block tree is always a path.
inline Multigraph random_block_path(std::size_t n, std::size_t chords, std::mt19937_64& rng) {
  Multigraph g = path_graph(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t added = 0, tries = 0; added < chords && tries < 200; ++tries) {
    const auto u = static_cast<VertexId>(pick(rng)), v = static_cast<VertexId>(pick(rng));
    if (u == v || g.adjacent(u, v)) continue;
    g.add_edge(u, v);
    ++added;
  }
  return g;
}

}  // namespace graphfair::testing
