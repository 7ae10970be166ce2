#include "graphfair/multigraph.hpp"

#include "graphfair/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace graphfair {

VertexId Multigraph::add_vertex(std::string name) {
  if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
    throw InputError("invalid vertex name '" + name + "'");
  if (by_name_.contains(name)) throw InputError("duplicate vertex '" + name + "'");
  const auto id = static_cast<VertexId>(names_.size());
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  incident_.emplace_back();
  return id;
}

VertexId Multigraph::ensure_vertex(std::string_view name) {
  if (auto found = find_vertex(name)) return *found;
  return add_vertex(std::string(name));
}

EdgeId Multigraph::insert_edge(EdgeId id, VertexId u, VertexId v) {
  const auto n = static_cast<VertexId>(vertex_count());
  if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint is not a vertex");
  if (edge_index_.contains(id)) throw InputError("duplicate edge id " + std::to_string(id));
  edge_index_.emplace(id, edges_.size());
  incident_[u].push_back(edges_.size());
  if (u != v) incident_[v].push_back(edges_.size());
  edges_.push_back({id, u, v});
  next_edge_id_ = std::max(next_edge_id_, id + 1);
  return id;
}

EdgeId Multigraph::add_edge(VertexId u, VertexId v) { return insert_edge(next_edge_id_, u, v); }

EdgeId Multigraph::add_edge(std::string_view u, std::string_view v) {
  const VertexId a = ensure_vertex(u);
  const VertexId b = ensure_vertex(v);
  return add_edge(a, b);
}

const std::string& Multigraph::vertex_name(VertexId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= names_.size())
    throw InputError("unknown vertex index " + std::to_string(v));
  return names_[v];
}

std::optional<VertexId> Multigraph::find_vertex(std::string_view name) const {
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) return it->second;
  return std::nullopt;
}

VertexId Multigraph::vertex(std::string_view name) const {
  if (auto v = find_vertex(name)) return *v;
  throw InputError("unknown vertex '" + std::string(name) + "'");
}

const Edge& Multigraph::edge(EdgeId id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw InputError("unknown edge id " + std::to_string(id));
  return edges_[it->second];
}

const std::vector<std::size_t>& Multigraph::incident(VertexId v) const {
  vertex_name(v);
  return incident_[v];
}

std::size_t Multigraph::degree(VertexId v) const {
  std::size_t d = 0;
  for (auto pos : incident(v)) d += edges_[pos].is_loop() ? 2 : 1;
  return d;
}

std::vector<VertexId> Multigraph::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for (auto pos : incident(v))
    if (!edges_[pos].is_loop()) out.push_back(edges_[pos].other(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Multigraph::multiplicity(VertexId u, VertexId v) const {
  std::size_t m = 0;
  for (auto pos : incident(u)) {
    const Edge& e = edges_[pos];
    if (u == v ? e.is_loop() : (!e.is_loop() && e.other(u) == v)) ++m;
  }
  return m;
}

bool Multigraph::is_connected() const {
  if (vertex_count() == 0) return true;
  std::vector<VertexId> all(vertex_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<VertexId>(i);
  return induces_connected(all);
}

bool Multigraph::induces_connected(std::span<const VertexId> vertices) const {
  if (vertices.size() <= 1) return true;
  std::vector<char> inside(vertex_count(), 0), seen(vertex_count(), 0);
  for (VertexId v : vertices) inside.at(v) = 1;
  std::vector<VertexId> stack{vertices.front()};
  seen[vertices.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (auto pos : incident_[v]) {
      const VertexId w = edges_[pos].other(v);
      if (inside[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  std::size_t distinct = 0;
  for (char c : inside) distinct += c;
  return reached == distinct;
}

bool Multigraph::is_simple() const {
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge& e : edges_) {
    if (e.is_loop()) return false;
    if (!seen.insert(std::minmax(e.u, e.v)).second) return false;
  }
  return true;
}

bool Multigraph::has_loops() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_loop(); });
}

std::string Multigraph::fresh_name(std::string_view stem) const {
  std::string candidate(stem);
  for (int suffix = 1; by_name_.contains(candidate); ++suffix)
    candidate = std::string(stem) + "_" + std::to_string(suffix);
  return candidate;
}

Multigraph Multigraph::without_loops() const {
  Multigraph out(name_);
  for (const auto& n : names_) out.add_vertex(n);
  for (const Edge& e : edges_)
    if (!e.is_loop()) out.insert_edge(e.id, e.u, e.v);
  out.next_edge_id_ = next_edge_id_;
  return out;
}

Multigraph Multigraph::without_edge(EdgeId id) const {
  edge(id);
  Multigraph out(name_);
  for (const auto& n : names_) out.add_vertex(n);
  for (const Edge& e : edges_)
    if (e.id != id) out.insert_edge(e.id, e.u, e.v);
  out.next_edge_id_ = next_edge_id_;
  return out;
}

Multigraph parse_graph(std::istream& in) {
  Multigraph g;
  bool header = false;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;
    const auto where = " at line " + std::to_string(lineno);
    if (!header) {
      if (words[0] != "graph" || words.size() != 2)
        throw InputError("expected 'graph <name>' header" + where);
      g.set_name(words[1]);
      header = true;
      continue;
    }
    if (words.size() == 1) {
      g.ensure_vertex(words[0]);
    } else if (words.size() == 2) {
      g.add_edge(words[0], words[1]);
    } else {
      throw InputError("expected 'u v'" + where);
    }
  }
  if (!header) throw InputError("missing 'graph <name>' header");
  return g;
}

Multigraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

void write_graph(std::ostream& out, const Multigraph& g) {
  out << "graph " << g.name() << '\n';
  std::vector<char> touched(g.vertex_count(), 0);
  for (const Edge& e : g.edges()) touched[e.u] = touched[e.v] = 1;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!touched[v]) out << g.vertex_name(static_cast<VertexId>(v)) << '\n';
  for (const Edge& e : g.edges()) out << g.vertex_name(e.u) << ' ' << g.vertex_name(e.v) << '\n';
}

Enumeration::Enumeration(std::vector<VertexId> order) : order_(std::move(order)) {
  std::vector<VertexId> sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("enumeration repeats a vertex");
}

VertexId Enumeration::at(std::size_t position) const {
  if (position == 0 || position > order_.size())
    throw InputError("enumeration position " + std::to_string(position) + " out of range");
  return order_[position - 1];
}

VertexSet Enumeration::segment(std::size_t s, std::size_t t) const {
  if (s > t || s > order_.size()) return {};
  if (s == 0) s = 1;
  t = std::min(t, order_.size());
  return VertexSet(order_.begin() + static_cast<std::ptrdiff_t>(s - 1),
                   order_.begin() + static_cast<std::ptrdiff_t>(t));
}

std::optional<std::size_t> Enumeration::position_of(VertexId v) const {
  auto it = std::find(order_.begin(), order_.end(), v);
  if (it == order_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - order_.begin()) + 1;
}

Enumeration Enumeration::reversed() const {
  return Enumeration(std::vector<VertexId>(order_.rbegin(), order_.rend()));
}

Enumeration Enumeration::concat(const Enumeration& tail) const {
  std::vector<VertexId> joined = order_;
  joined.insert(joined.end(), tail.order_.begin(), tail.order_.end());
  return Enumeration(std::move(joined));
}

}  // namespace graphfair
