#pragma once

#include "graphfair/multigraph.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace graphfair {

struct Block {
  std::vector<VertexId> vertices;  // ascending
  std::vector<EdgeId> edges;       // ascending
};

// Bipartite block / separating-vertex tree of a connected multigraph.
struct BlockTree {
  std::vector<Block> blocks;
  std::vector<VertexId> separating_vertices;           // ascending
  std::vector<std::pair<std::size_t, std::size_t>> links;  // (block index, separating index)

  bool is_path() const;
  std::vector<std::size_t> blocks_of(VertexId v) const;
};

// Loops form blocks of their own; parallel edges share a block.
BlockTree block_tree(const Multigraph& g);
bool is_block_path(const Multigraph& g);

// Every vertex but the first has an earlier neighbour and every vertex but the
// last has a later neighbour, and the order covers V(G) exactly.
bool is_bipolar_numbering(const Multigraph& g, const Enumeration& order);
// The same property for the subgraph induced by the listed vertices.
bool is_bipolar_order(const Multigraph& g, const Enumeration& order);

// Present iff the loop-free block tree of G is a path.
std::optional<Enumeration> bipolar_numbering(const Multigraph& g);

enum class TridentKind { TypeI, TypeII };

struct Trident {
  TridentKind kind;
  std::vector<VertexId> center;
  std::array<std::vector<VertexId>, 3> arms;
  std::array<VertexId, 3> contacts;
};

bool is_valid_trident(const Multigraph& g, const Trident& t);
// Present iff the loop-free block tree of G is not a path.
std::optional<Trident> find_trident(const Multigraph& g);

}  // namespace graphfair
