#pragma once

#include "graphfair/multigraph.hpp"

#include <cstddef>
#include <vector>

namespace graphfair {

// A maximal path whose interior vertices all have degree 2.
struct Chain {
  VertexId from;
  VertexId to;
  std::vector<VertexId> interior;  // ordered from `from` to `to`
  std::vector<EdgeId> edges;
};

// Result of suppressing degree-2 vertices. Skeleton vertex i corresponds to
// original vertex `branch[i]` and skeleton edge i to `chains[i]`.
struct Skeleton {
  Multigraph graph;
  std::vector<VertexId> branch;
  std::vector<Chain> chains;
};

Skeleton skeletonize(const Multigraph& g);
Multigraph smooth(const Multigraph& g);

// Replaces edge `id` by a path through `count` new degree-2 vertices. New
// vertices receive the ids vertex_count()..vertex_count()+count-1 in path order
// from the edge's first endpoint.
Multigraph subdivide(const Multigraph& g, EdgeId id, std::size_t count);

// Limit for the brute-force isomorphism search.
inline constexpr std::size_t kIsomorphismVertexCap = 12;

// Every vertex bijection phi (a -> b) preserving edge multiplicities and loops,
// up to `limit` results.
std::vector<std::vector<VertexId>> isomorphisms(const Multigraph& a, const Multigraph& b,
                                                std::size_t limit = static_cast<std::size_t>(-1));
bool are_isomorphic(const Multigraph& a, const Multigraph& b);

// Whether H is isomorphic to some subdivision of G.
bool is_subdivision_of(const Multigraph& h, const Multigraph& g);

inline constexpr std::size_t kHamiltonianVertexCap = 20;

// Whether G has a Hamiltonian path.
bool is_hamiltonian(const Multigraph& g);

}  // namespace graphfair
