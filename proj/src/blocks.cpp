#include "graphfair/blocks.hpp"

#include "graphfair/error.hpp"

#include <algorithm>
#include <functional>
#include <list>
#include <map>
#include <set>

namespace graphfair {

namespace {

std::vector<Block> compute_blocks(const Multigraph& g, bool include_loops) {
  const std::size_t n = g.vertex_count();
  std::vector<Block> blocks;
  if (n == 0) return blocks;
  if (!g.is_connected()) throw InputError("graph '" + g.name() + "' is not connected");

  const auto& edges = g.edges();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::size_t> edge_stack;
  int clock = 0;

  // Iterative DFS; frames hold (vertex, tree edge position, next incidence index).
  struct Frame {
    VertexId v;
    std::size_t via;
    std::size_t next;
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<Frame> stack{{0, kNone, 0}};
  disc[0] = low[0] = clock++;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& inc = g.incident(f.v);
    if (f.next < inc.size()) {
      const std::size_t pos = inc[f.next++];
      const Edge& e = edges[pos];
      if (e.is_loop() || pos == f.via) continue;
      const VertexId w = e.other(f.v);
      if (disc[w] < 0) {
        edge_stack.push_back(pos);
        disc[w] = low[w] = clock++;
        stack.push_back({w, pos, 0});
      } else if (disc[w] < disc[f.v]) {
        edge_stack.push_back(pos);
        low[f.v] = std::min(low[f.v], disc[w]);
      }
      continue;
    }
    const Frame done = f;
    stack.pop_back();
    if (stack.empty()) break;
    Frame& parent = stack.back();
    low[parent.v] = std::min(low[parent.v], low[done.v]);
    if (low[done.v] >= disc[parent.v]) {
      Block b;
      std::set<VertexId> verts;
      while (true) {
        const std::size_t pos = edge_stack.back();
        edge_stack.pop_back();
        b.edges.push_back(edges[pos].id);
        verts.insert(edges[pos].u);
        verts.insert(edges[pos].v);
        if (pos == done.via) break;
      }
      b.vertices.assign(verts.begin(), verts.end());
      std::sort(b.edges.begin(), b.edges.end());
      blocks.push_back(std::move(b));
    }
  }

  if (include_loops)
    for (const Edge& e : edges)
      if (e.is_loop()) blocks.push_back({{e.u}, {e.id}});
  if (blocks.empty()) blocks.push_back({{0}, {}});
  return blocks;
}

BlockTree assemble(std::vector<Block> blocks) {
  BlockTree t;
  t.blocks = std::move(blocks);
  std::map<VertexId, std::size_t> count;
  for (const Block& b : t.blocks)
    for (VertexId v : b.vertices) ++count[v];
  for (const auto& [v, c] : count)
    if (c >= 2) t.separating_vertices.push_back(v);
  for (std::size_t bi = 0; bi < t.blocks.size(); ++bi)
    for (std::size_t si = 0; si < t.separating_vertices.size(); ++si)
      if (std::binary_search(t.blocks[bi].vertices.begin(), t.blocks[bi].vertices.end(),
                             t.separating_vertices[si]))
        t.links.emplace_back(bi, si);
  return t;
}

BlockTree loopless_block_tree(const Multigraph& g) { return assemble(compute_blocks(g, false)); }

std::vector<int> components_without(const Multigraph& g, VertexId removed) {
  std::vector<int> label(g.vertex_count(), -1);
  int next = 0;
  for (std::size_t s = 0; s < g.vertex_count(); ++s) {
    if (label[s] >= 0 || static_cast<VertexId>(s) == removed) continue;
    label[s] = next;
    std::vector<VertexId> stack{static_cast<VertexId>(s)};
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (auto pos : g.incident(v)) {
        const VertexId w = g.edges()[pos].other(v);
        if (w != removed && label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

// st-numbering of a 2-connected vertex set (plus a virtual s-t edge).
std::vector<VertexId> st_number(const Multigraph& g, const Block& block, VertexId s, VertexId t) {
  if (block.vertices.size() == 1) return {s};
  if (block.vertices.size() == 2) return {s, t};

  std::map<VertexId, std::set<VertexId>> adj;
  for (EdgeId id : block.edges) {
    const Edge& e = g.edge(id);
    if (e.is_loop()) continue;
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  adj[s].insert(t);
  adj[t].insert(s);

  std::map<VertexId, int> pre, lowpre;
  std::map<VertexId, VertexId> parent;
  std::vector<VertexId> by_pre;
  std::function<void(VertexId)> dfs = [&](VertexId v) {
    pre[v] = lowpre[v] = static_cast<int>(by_pre.size());
    by_pre.push_back(v);
    std::vector<VertexId> order(adj[v].begin(), adj[v].end());
    if (v == s) std::stable_partition(order.begin(), order.end(), [&](VertexId w) { return w == t; });
    for (VertexId w : order) {
      if (!pre.contains(w)) {
        parent[w] = v;
        dfs(w);
        lowpre[v] = std::min(lowpre[v], lowpre[w]);
      } else if (!(parent.contains(v) && parent[v] == w)) {
        lowpre[v] = std::min(lowpre[v], pre[w]);
      }
    }
  };
  dfs(s);

  std::list<VertexId> order{s, t};
  std::map<VertexId, std::list<VertexId>::iterator> where;
  where[s] = order.begin();
  where[t] = std::next(order.begin());
  std::map<VertexId, bool> minus;
  minus[s] = true;
  for (VertexId v : by_pre) {
    if (v == s || v == t) continue;
    const VertexId p = parent[v];
    const VertexId lowv = by_pre[static_cast<std::size_t>(lowpre[v])];
    if (minus[lowv]) {
      where[v] = order.insert(where[p], v);
      minus[p] = false;
    } else {
      where[v] = order.insert(std::next(where[p]), v);
      minus[p] = true;
    }
  }
  return {order.begin(), order.end()};
}

}  // namespace

bool BlockTree::is_path() const {
  if (blocks.size() <= 1) return true;
  std::vector<std::size_t> block_degree(blocks.size(), 0), sep_degree(separating_vertices.size(), 0);
  for (const auto& [b, s] : links) {
    ++block_degree[b];
    ++sep_degree[s];
  }
  return std::all_of(block_degree.begin(), block_degree.end(), [](auto d) { return d <= 2; }) &&
         std::all_of(sep_degree.begin(), sep_degree.end(), [](auto d) { return d == 2; });
}

std::vector<std::size_t> BlockTree::blocks_of(VertexId v) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (std::binary_search(blocks[i].vertices.begin(), blocks[i].vertices.end(), v)) out.push_back(i);
  return out;
}

BlockTree block_tree(const Multigraph& g) { return assemble(compute_blocks(g, true)); }

bool is_block_path(const Multigraph& g) { return block_tree(g).is_path(); }

bool is_bipolar_numbering(const Multigraph& g, const Enumeration& order) {
  return order.size() == g.vertex_count() && is_bipolar_order(g, order);
}

bool is_bipolar_order(const Multigraph& g, const Enumeration& order) {
  const std::size_t m = order.size();
  std::vector<std::size_t> position(g.vertex_count(), 0);
  for (std::size_t i = 1; i <= m; ++i) position[order.at(i)] = i;
  for (std::size_t i = 1; i <= m; ++i) {
    const VertexId v = order.at(i);
    bool earlier = i == 1, later = i == m;
    for (VertexId w : g.neighbors(v)) {
      if (position[w] == 0) continue;
      earlier = earlier || position[w] < i;
      later = later || position[w] > i;
    }
    if (!earlier || !later) return false;
  }
  return true;
}

std::optional<Enumeration> bipolar_numbering(const Multigraph& g) {
  if (g.vertex_count() == 0) return Enumeration{};
  const BlockTree tree = loopless_block_tree(g);
  if (!tree.is_path()) return std::nullopt;

  const auto& seps = tree.separating_vertices;
  const auto is_sep = [&](VertexId v) { return std::binary_search(seps.begin(), seps.end(), v); };
  const auto first_plain = [&](const Block& b, std::optional<VertexId> avoid) {
    for (VertexId v : b.vertices)
      if (v != avoid) return v;
    return b.vertices.front();
  };

  // Walk the block path from the end block holding the smallest non-separating vertex.
  std::vector<std::size_t> path;
  if (tree.blocks.size() == 1) {
    path.push_back(0);
  } else {
    std::optional<std::size_t> start;
    VertexId best = 0;
    for (std::size_t i = 0; i < tree.blocks.size(); ++i) {
      const auto& vs = tree.blocks[i].vertices;
      if (std::count_if(vs.begin(), vs.end(), is_sep) != 1) continue;
      const VertexId cand = *std::find_if_not(vs.begin(), vs.end(), is_sep);
      if (!start || cand < best) {
        start = i;
        best = cand;
      }
    }
    std::vector<char> visited(tree.blocks.size(), 0);
    std::size_t current = *start;
    while (true) {
      path.push_back(current);
      visited[current] = 1;
      std::optional<std::size_t> next;
      for (const auto& [b, s] : tree.links) {
        if (b != current) continue;
        for (const auto& [b2, s2] : tree.links)
          if (s2 == s && !visited[b2]) next = b2;
      }
      if (!next) break;
      current = *next;
    }
  }

  std::vector<VertexId> order;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const Block& b = tree.blocks[path[k]];
    std::optional<VertexId> entry, exit;
    if (k > 0) {
      for (VertexId v : b.vertices)
        if (std::binary_search(tree.blocks[path[k - 1]].vertices.begin(),
                               tree.blocks[path[k - 1]].vertices.end(), v))
          entry = v;
    }
    if (k + 1 < path.size()) {
      for (VertexId v : b.vertices)
        if (std::binary_search(tree.blocks[path[k + 1]].vertices.begin(),
                               tree.blocks[path[k + 1]].vertices.end(), v))
          exit = v;
    }
    if (!entry) entry = first_plain(b, exit);
    if (!exit) exit = first_plain(b, entry);
    const auto part = st_number(g, b, *entry, *exit);
    order.insert(order.end(), part.begin() + (k > 0 ? 1 : 0), part.end());
  }

  Enumeration result(std::move(order));
  if (!is_bipolar_numbering(g, result))
    throw InvariantViolation("bipolar numbering construction failed on graph '" + g.name() + "'");
  return result;
}

bool is_valid_trident(const Multigraph& g, const Trident& t) {
  const auto sorted = [](std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto center = sorted(t.center);
  if (center.empty() || !g.induces_connected(center)) return false;
  if (t.kind == TridentKind::TypeI && center.size() != 1) return false;
  if (t.kind == TridentKind::TypeII &&
      (t.contacts[0] == t.contacts[1] || t.contacts[0] == t.contacts[2] || t.contacts[1] == t.contacts[2]))
    return false;

  std::array<std::vector<VertexId>, 3> arms;
  for (int i = 0; i < 3; ++i) {
    arms[i] = sorted(t.arms[i]);
    if (arms[i].size() < 2 || !g.induces_connected(arms[i])) return false;
    std::vector<VertexId> shared;
    std::set_intersection(arms[i].begin(), arms[i].end(), center.begin(), center.end(),
                          std::back_inserter(shared));
    if (shared != std::vector<VertexId>{t.contacts[i]}) return false;
  }

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (VertexId door : {t.contacts[i], t.contacts[j]}) {
        const auto label = components_without(g, door);
        std::set<int> seen_i;
        for (VertexId v : arms[i])
          if (v != door) seen_i.insert(label[v]);
        for (VertexId v : arms[j])
          if (v != door && seen_i.contains(label[v])) return false;
      }
    }
  return true;
}

std::optional<Trident> find_trident(const Multigraph& g) {
  const BlockTree tree = loopless_block_tree(g);
  if (tree.is_path()) return std::nullopt;

  const auto hanging = [&](VertexId s, const std::vector<VertexId>& avoid) {
    const auto label = components_without(g, s);
    std::set<int> banned;
    for (VertexId v : avoid)
      if (v != s) banned.insert(label[v]);
    std::vector<VertexId> arm{s};
    int chosen = -1;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const int l = label[v];
      if (l < 0 || banned.contains(l)) continue;
      if (chosen < 0) chosen = l;
      if (l == chosen) arm.push_back(static_cast<VertexId>(v));
    }
    std::sort(arm.begin(), arm.end());
    return arm;
  };

  std::optional<Trident> found;
  for (VertexId s : tree.separating_vertices) {
    if (tree.blocks_of(s).size() < 3) continue;
    Trident t{TridentKind::TypeI, {s}, {}, {s, s, s}};
    std::vector<VertexId> used;
    for (int i = 0; i < 3; ++i) {
      t.arms[i] = hanging(s, used);
      used.insert(used.end(), t.arms[i].begin(), t.arms[i].end());
    }
    found = t;
    break;
  }
  if (!found) {
    for (const Block& b : tree.blocks) {
      std::vector<VertexId> cuts;
      for (VertexId v : b.vertices)
        if (std::binary_search(tree.separating_vertices.begin(), tree.separating_vertices.end(), v))
          cuts.push_back(v);
      if (cuts.size() < 3) continue;
      Trident t{TridentKind::TypeII, b.vertices, {}, {cuts[0], cuts[1], cuts[2]}};
      for (int i = 0; i < 3; ++i) t.arms[i] = hanging(cuts[i], b.vertices);
      found = t;
      break;
    }
  }
  if (!found || !is_valid_trident(g, *found))
    throw InvariantViolation("trident construction failed on graph '" + g.name() + "'");
  return found;
}

}  // namespace graphfair
