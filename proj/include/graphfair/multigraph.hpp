#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace graphfair {

using VertexId = int;
using EdgeId = int;
using VertexSet = std::vector<VertexId>;

struct Edge {
  EdgeId id;
  VertexId u;
  VertexId v;

  bool is_loop() const noexcept { return u == v; }
  VertexId other(VertexId w) const noexcept { return w == u ? v : u; }
};

// Undirected multigraph with named vertices and stable edge ids.
//
// Vertices are dense indices 0..n-1, each carrying a unique text name used by
// the file formats. Loops and parallel edges are allowed. A loop adds 2 to the
// degree of its vertex.
class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  VertexId add_vertex(std::string name);
  // Returns the existing vertex when the name is already present.
  VertexId ensure_vertex(std::string_view name);
  EdgeId add_edge(VertexId u, VertexId v);
  EdgeId add_edge(std::string_view u, std::string_view v);
  // Inserts with an explicit id; throws InputError when the id is taken.
  EdgeId add_edge_with_id(EdgeId id, VertexId u, VertexId v) { return insert_edge(id, u, v); }

  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& vertex_name(VertexId v) const;
  std::optional<VertexId> find_vertex(std::string_view name) const;
  VertexId vertex(std::string_view name) const;  // throws InputError when unknown

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(EdgeId id) const { return edge_index_.contains(id); }
  const Edge& edge(EdgeId id) const;  // throws InputError when unknown
  EdgeId next_edge_id() const noexcept { return next_edge_id_; }

  // Positions into edges() of every edge touching v; a loop appears once.
  const std::vector<std::size_t>& incident(VertexId v) const;
  std::size_t degree(VertexId v) const;
  // Distinct neighbours other than v itself, ascending.
  std::vector<VertexId> neighbors(VertexId v) const;
  std::size_t multiplicity(VertexId u, VertexId v) const;
  bool adjacent(VertexId u, VertexId v) const { return u != v && multiplicity(u, v) > 0; }

  bool is_connected() const;
  // Whether the subgraph induced by `vertices` is connected; empty sets count as connected.
  bool induces_connected(std::span<const VertexId> vertices) const;
  bool is_simple() const;
  bool has_loops() const;

  // A vertex name not yet used, derived from `stem`.
  std::string fresh_name(std::string_view stem) const;

  // Copy with every loop removed; vertex ids and other edge ids are kept.
  Multigraph without_loops() const;
  // Copy with edge `id` removed.
  Multigraph without_edge(EdgeId id) const;

 private:
  EdgeId insert_edge(EdgeId id, VertexId u, VertexId v);

  std::string name_ = "G";
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> by_name_;
  std::vector<Edge> edges_;
  std::map<EdgeId, std::size_t> edge_index_;
  std::vector<std::vector<std::size_t>> incident_;
  EdgeId next_edge_id_ = 0;
};

// Line format: `graph <name>` header, then one `u v` per edge, `#` comments.
// A line holding a single token declares an isolated vertex.
Multigraph parse_graph(std::istream& in);
Multigraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Multigraph& g);

// Ordered list of distinct vertices. Positions in accessors are 1-based to
// match the moving-knife notation P(v_s, v_t).
class Enumeration {
 public:
  Enumeration() = default;
  explicit Enumeration(std::vector<VertexId> order);  // throws InputError on repeats

  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }
  VertexId at(std::size_t position) const;  // 1-based
  const std::vector<VertexId>& order() const noexcept { return order_; }

  // Vertices v_s..v_t; empty when s > t.
  VertexSet segment(std::size_t s, std::size_t t) const;
  VertexSet before(std::size_t r) const { return segment(1, r - 1); }
  VertexSet after(std::size_t r) const { return segment(r + 1, size()); }
  std::optional<std::size_t> position_of(VertexId v) const;

  Enumeration reversed() const;
  Enumeration concat(const Enumeration& tail) const;

  bool operator==(const Enumeration&) const = default;

 private:
  std::vector<VertexId> order_;
};

}  // namespace graphfair
