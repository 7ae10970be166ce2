#include "graphfair/structure.hpp"

#include "graphfair/error.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>

namespace graphfair {

namespace {

std::vector<int> component_labels(const Multigraph& g) {
  std::vector<int> label(g.vertex_count(), -1);
  int next = 0;
  for (std::size_t s = 0; s < g.vertex_count(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<VertexId> stack{static_cast<VertexId>(s)};
    label[s] = next;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (auto pos : g.incident(v)) {
        const VertexId w = g.edges()[pos].other(v);
        if (label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

using Matrix = std::vector<std::vector<std::size_t>>;

Matrix multiplicity_matrix(const Multigraph& g) {
  Matrix m(g.vertex_count(), std::vector<std::size_t>(g.vertex_count(), 0));
  for (const Edge& e : g.edges()) {
    ++m[e.u][e.v];
    if (!e.is_loop()) ++m[e.v][e.u];
  }
  return m;
}

std::vector<std::size_t> signature(const Matrix& m, std::size_t v) {
  std::vector<std::size_t> row;
  for (std::size_t w = 0; w < m.size(); ++w)
    if (w != v && m[v][w] > 0) row.push_back(m[v][w]);
  std::sort(row.begin(), row.end());
  row.insert(row.begin(), m[v][v]);
  return row;
}

}  // namespace

Skeleton skeletonize(const Multigraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<char> is_branch(n, 0);
  for (std::size_t v = 0; v < n; ++v) is_branch[v] = g.degree(static_cast<VertexId>(v)) != 2;

  // Components made only of degree-2 vertices are cycles; keep their smallest name.
  const auto label = component_labels(g);
  const int components = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<char> has_branch(components, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (is_branch[v]) has_branch[label[v]] = 1;
  for (int c = 0; c < components; ++c) {
    if (has_branch[c]) continue;
    std::optional<VertexId> keep;
    for (std::size_t v = 0; v < n; ++v)
      if (label[v] == c && (!keep || g.vertex_name(static_cast<VertexId>(v)) < g.vertex_name(*keep)))
        keep = static_cast<VertexId>(v);
    is_branch[*keep] = 1;
  }

  Skeleton sk;
  sk.graph.set_name(g.name());
  std::vector<VertexId> to_skeleton(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_branch[v]) continue;
    to_skeleton[v] = sk.graph.add_vertex(g.vertex_name(static_cast<VertexId>(v)));
    sk.branch.push_back(static_cast<VertexId>(v));
  }

  std::vector<char> used(g.edge_count(), 0);
  for (VertexId start : sk.branch) {
    for (auto first : g.incident(start)) {
      if (used[first]) continue;
      Chain chain{start, start, {}, {}};
      std::size_t pos = first;
      VertexId current = start;
      while (true) {
        used[pos] = 1;
        const Edge& e = g.edges()[pos];
        chain.edges.push_back(e.id);
        current = e.other(current);
        if (is_branch[current]) break;
        chain.interior.push_back(current);
        const auto& inc = g.incident(current);
        pos = inc[0] == pos ? inc[1] : inc[0];
      }
      chain.to = current;
      sk.graph.add_edge(to_skeleton[chain.from], to_skeleton[chain.to]);
      sk.chains.push_back(std::move(chain));
    }
  }
  return sk;
}

Multigraph smooth(const Multigraph& g) { return skeletonize(g).graph; }

Multigraph subdivide(const Multigraph& g, EdgeId id, std::size_t count) {
  const Edge target = g.edge(id);
  Multigraph out(g.name());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out.add_vertex(g.vertex_name(static_cast<VertexId>(v)));
  if (count == 0) {
    for (const Edge& e : g.edges()) out.add_edge_with_id(e.id, e.u, e.v);
    return out;
  }

  const std::string stem = g.vertex_name(target.u) + "-" + g.vertex_name(target.v) + ".";
  std::vector<VertexId> inner;
  for (std::size_t j = 1; j <= count; ++j) inner.push_back(out.add_vertex(out.fresh_name(stem + std::to_string(j))));

  EdgeId fresh = g.next_edge_id();
  for (const Edge& e : g.edges()) {
    if (e.id != id) {
      out.add_edge_with_id(e.id, e.u, e.v);
      continue;
    }
    VertexId prev = target.u;
    for (VertexId w : inner) {
      out.add_edge_with_id(fresh++, prev, w);
      prev = w;
    }
    out.add_edge_with_id(fresh++, prev, target.v);
  }
  return out;
}

std::vector<std::vector<VertexId>> isomorphisms(const Multigraph& a, const Multigraph& b, std::size_t limit) {
  std::vector<std::vector<VertexId>> found;
  const std::size_t n = a.vertex_count();
  if (n > kIsomorphismVertexCap) throw CapExceeded("isomorphism vertices", kIsomorphismVertexCap, n);
  if (b.vertex_count() > kIsomorphismVertexCap)
    throw CapExceeded("isomorphism vertices", kIsomorphismVertexCap, b.vertex_count());
  if (n != b.vertex_count() || a.edge_count() != b.edge_count() || limit == 0) return found;

  const Matrix ma = multiplicity_matrix(a), mb = multiplicity_matrix(b);
  std::vector<std::vector<std::size_t>> sa(n), sb(n);
  for (std::size_t v = 0; v < n; ++v) {
    sa[v] = signature(ma, v);
    sb[v] = signature(mb, v);
  }
  {
    auto x = sa, y = sb;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return found;
  }

  // Visit a's vertices so that each one after the first touches an earlier one when possible.
  std::vector<std::size_t> order;
  std::vector<char> placed(n, 0);
  while (order.size() < n) {
    std::size_t best = n;
    std::size_t best_links = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      std::size_t links = 0;
      for (auto u : order) links += ma[v][u] > 0;
      if (best == n || links > best_links) {
        best = v;
        best_links = links;
      }
    }
    placed[best] = 1;
    order.push_back(best);
  }

  std::vector<VertexId> phi(n, -1);
  std::vector<char> taken(n, 0);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == n) {
      found.push_back(phi);
      return found.size() < limit;
    }
    const std::size_t x = order[depth];
    for (std::size_t y = 0; y < n; ++y) {
      if (taken[y] || sb[y] != sa[x]) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const std::size_t u = order[d];
        ok = ma[x][u] == mb[y][static_cast<std::size_t>(phi[u])];
      }
      if (!ok) continue;
      phi[x] = static_cast<VertexId>(y);
      taken[y] = 1;
      const bool more = extend(depth + 1);
      taken[y] = 0;
      phi[x] = -1;
      if (!more) return false;
    }
    return true;
  };
  extend(0);
  return found;
}

bool are_isomorphic(const Multigraph& a, const Multigraph& b) { return !isomorphisms(a, b, 1).empty(); }

bool is_subdivision_of(const Multigraph& h, const Multigraph& g) {
  const Skeleton sh = skeletonize(h), sg = skeletonize(g);
  // Chain lengths grouped by unordered skeleton endpoint pair.
  const auto lengths = [](const Skeleton& s) {
    std::map<std::pair<VertexId, VertexId>, std::vector<std::size_t>> table;
    for (std::size_t i = 0; i < s.chains.size(); ++i) {
      const Edge& e = s.graph.edges()[i];
      table[std::minmax(e.u, e.v)].push_back(s.chains[i].interior.size());
    }
    for (auto& [key, list] : table) std::sort(list.rbegin(), list.rend());
    return table;
  };
  const auto lh = lengths(sh), lg = lengths(sg);

  bool dominated = false;
  for (const auto& phi : isomorphisms(sg.graph, sh.graph)) {
    dominated = std::all_of(lg.begin(), lg.end(), [&](const auto& entry) {
      const auto& [key, mine] = entry;
      const auto it = lh.find(std::minmax(phi[key.first], phi[key.second]));
      if (it == lh.end() || it->second.size() != mine.size()) return false;
      for (std::size_t i = 0; i < mine.size(); ++i)
        if (it->second[i] < mine[i]) return false;
      return true;
    });
    if (dominated) break;
  }
  return dominated;
}

bool is_hamiltonian(const Multigraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kHamiltonianVertexCap) throw CapExceeded("hamiltonian vertices", kHamiltonianVertexCap, n);
  if (n <= 1) return n == 1;
  std::vector<std::uint32_t> adj(n, 0);
  for (const Edge& e : g.edges())
    if (!e.is_loop()) {
      adj[e.u] |= 1u << e.v;
      adj[e.v] |= 1u << e.u;
    }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<std::uint32_t> ends(static_cast<std::size_t>(full) + 1, 0);
  for (std::size_t v = 0; v < n; ++v) ends[1u << v] = 1u << v;
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    std::uint32_t tips = ends[mask];
    while (tips) {
      const int v = __builtin_ctz(tips);
      tips &= tips - 1;
      std::uint32_t next = adj[v] & ~mask;
      while (next) {
        const int w = __builtin_ctz(next);
        next &= next - 1;
        ends[mask | (1u << w)] |= 1u << w;
      }
    }
    if (mask == full) break;
  }
  return ends[full] != 0;
}

}  // namespace graphfair
