#include "graphfair/tangle_analysis.hpp"

#include "graphfair/error.hpp"
#include "graphfair/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace graphfair {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

Multigraph from_edges(const std::string& name, std::initializer_list<std::pair<const char*, const char*>> edges) {
  Multigraph g(name);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

void require_connected(const Multigraph& g) {
  if (g.vertex_count() == 0) throw InputError("empty graph");
  if (!g.is_connected()) throw InputError("graph '" + g.name() + "' is not connected");
}

// Values per open skeleton edge for the gap >= 2 component construction.
std::map<EdgeId, Rational> component_edge_values(const CutsetWitness& w, std::size_t agents,
                                                 std::vector<Rational>* component_values) {
  const std::size_t t = w.cardinality();
  if (w.gap < 2) throw InputError("cutset has gap " + std::to_string(w.gap) + ", need at least 2");
  if (agents < t + 1) throw InputError("need at least t + 1 agents");
  const std::size_t k = static_cast<std::size_t>(w.gap);
  std::map<EdgeId, Rational> mu;
  for (std::size_t c = 0; c < w.components; ++c) {
    const bool last = c + 1 == w.components;
    Rational total = last ? Rational(static_cast<long>(agents - t)) : Rational(static_cast<long>(t + 1), static_cast<long>(t + k - 1));
    total.canonicalize();
    if (component_values) component_values->push_back(total);
    const auto& edges = w.component_edges[c];
    if (edges.empty()) throw InvariantViolation("component without edges cannot carry value");
    Rational share = total / static_cast<long>(edges.size());
    for (EdgeId e : edges) mu[e] = share;
  }
  return mu;
}

std::vector<std::string> part_names(const Multigraph& g, const CutsetWitness& w) {
  std::vector<std::string> out;
  for (const auto& part : w.parts) {
    std::string text = part.closed ? "[" : "";
    for (std::size_t i = 0; i < part.vertices.size(); ++i)
      text += (i ? "," : "") + g.vertex_name(part.vertices[i]);
    out.push_back(text + (part.closed ? "]" : ""));
  }
  return out;
}

}  // namespace

std::string DegreeSequence::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? "," : "") + std::to_string(counts[i]);
  return s + ">";
}

DegreeSequence degree_sequence(const Multigraph& skeleton) {
  DegreeSequence seq;
  seq.edges = skeleton.edge_count();
  const bool circle = skeleton.vertex_count() == 1 && skeleton.edge_count() == 1 && skeleton.has_loops();
  std::size_t total = 0;
  for (std::size_t v = 0; v < skeleton.vertex_count() && !circle; ++v) {
    const std::size_t d = skeleton.degree(static_cast<VertexId>(v));
    total += d;
    if (d == 0) continue;
    if (seq.counts.size() < d) seq.counts.resize(d, 0);
    ++seq.counts[d - 1];
    if (d >= 3) ++seq.sigma3;
  }
  seq.parity_blocked = total % 2 != 0;
  return seq;
}

std::string to_string(StringableKind kind) {
  switch (kind) {
    case StringableKind::Interval: return "interval";
    case StringableKind::Circle: return "circle";
    case StringableKind::Lollipop: return "lollipop";
    case StringableKind::Figure8: return "figure8";
    case StringableKind::Handcuffs: return "handcuffs";
    case StringableKind::Theta: return "theta";
  }
  return "?";
}

Classification classify_stringable(const Multigraph& g) {
  require_connected(g);
  const Multigraph sk = smooth(g);
  if (sk.edge_count() == 0) throw InputError("a single point is not a tangle");
  Classification c;
  c.sequence = degree_sequence(sk);
  c.excess = c.sequence.excess();
  const auto& d = c.sequence.counts;
  using V = std::vector<std::size_t>;
  std::optional<StringableKind> kind;
  if (d.empty()) kind = StringableKind::Circle;
  else if (d == V{2}) kind = StringableKind::Interval;
  else if (d == V{1, 0, 1}) kind = StringableKind::Lollipop;
  else if (d == V{0, 0, 0, 1}) kind = StringableKind::Figure8;
  else if (d == V{0, 0, 2}) kind = sk.multiplicity(0, 1) == 3 ? StringableKind::Theta : StringableKind::Handcuffs;
  c.stringable = kind.has_value();
  c.kind = kind;
  return c;
}

CutsetWitness gap(const Multigraph& g, std::vector<CutsetPart> parts) {
  const std::size_t n = g.vertex_count();
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto& vs = parts[i].vertices;
    std::sort(vs.begin(), vs.end());
    if (vs.empty()) throw InputError("empty cutset part");
    for (VertexId v : vs) {
      g.vertex_name(v);
      if (owner[static_cast<std::size_t>(v)] >= 0) throw InputError("cutset parts overlap");
      owner[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    if (vs.size() > 1 && !parts[i].closed) throw InputError("a part with several vertices must be closed");
  }

  const auto& edges = g.edges();
  // Nodes: vertices 0..n-1 then edge interiors n..n+|E|-1.
  DisjointSets ds(n + edges.size());
  std::vector<char> present(n + edges.size(), 0);
  for (std::size_t v = 0; v < n; ++v) present[v] = owner[v] < 0;
  for (std::size_t x = 0; x < edges.size(); ++x) {
    const Edge& e = edges[x];
    const int pu = owner[static_cast<std::size_t>(e.u)], pv = owner[static_cast<std::size_t>(e.v)];
    const bool swallowed = pu >= 0 && pu == pv && parts[static_cast<std::size_t>(pu)].closed;
    present[n + x] = !swallowed;
    if (swallowed) continue;
    if (pu < 0) ds.unite(n + x, static_cast<std::size_t>(e.u));
    if (pv < 0) ds.unite(n + x, static_cast<std::size_t>(e.v));
  }

  CutsetWitness w;
  w.parts = std::move(parts);
  std::map<std::size_t, std::size_t> index;
  for (std::size_t node = 0; node < present.size(); ++node) {
    if (!present[node]) continue;
    const std::size_t root = ds.find(node);
    auto [it, fresh] = index.emplace(root, index.size());
    if (fresh) {
      w.component_vertices.emplace_back();
      w.component_edges.emplace_back();
    }
    if (node < n) w.component_vertices[it->second].push_back(static_cast<VertexId>(node));
    else w.component_edges[it->second].push_back(edges[node - n].id);
  }
  w.components = index.size();
  w.gap = static_cast<long>(w.components) - static_cast<long>(w.parts.size());

  // contacts[part][component] = part vertices touched by that component's open edges.
  std::vector<std::vector<std::set<VertexId>>> contacts(w.parts.size(), std::vector<std::set<VertexId>>(w.components));
  for (std::size_t c = 0; c < w.components; ++c)
    for (EdgeId id : w.component_edges[c]) {
      const Edge& e = g.edge(id);
      for (VertexId end : {e.u, e.v})
        if (const int p = owner[static_cast<std::size_t>(end)]; p >= 0) contacts[static_cast<std::size_t>(p)][c].insert(end);
    }
  for (std::size_t p = 0; p < w.parts.size(); ++p) {
    if (!w.parts[p].closed) continue;
    std::set<VertexId> points;
    std::size_t touched = 0;
    for (std::size_t c = 0; c < w.components; ++c) {
      const auto& pts = contacts[p][c];
      if (pts.size() > 1) {
        w.contact_conditions = false;
        w.notes.push_back("part " + std::to_string(p + 1) + " meets component " + std::to_string(c + 1) +
                          " at " + std::to_string(pts.size()) + " points");
      }
      if (!pts.empty()) {
        ++touched;
        points.insert(pts.begin(), pts.end());
      }
    }
    if (touched != 3 || points.size() != 3) {
      w.contact_conditions = false;
      w.notes.push_back("part " + std::to_string(p + 1) + " touches " + std::to_string(touched) +
                        " components at " + std::to_string(points.size()) + " distinct points");
    }
  }
  return w;
}

CutsetWitness gap(const Multigraph& g, const std::vector<VertexId>& singletons) {
  std::vector<CutsetPart> parts;
  for (VertexId v : singletons) parts.push_back({{v}, false});
  return gap(g, std::move(parts));
}

std::string to_string(const Threshold& t) { return t.value ? std::to_string(*t.value) : "inf"; }

Threshold gap_threshold(const Multigraph& g, CutsetSearch mode) {
  require_connected(g);
  Multigraph work = smooth(g);
  std::vector<VertexId> candidates;
  if (mode == CutsetSearch::SubdividedExhaustive) {
    const auto ids = [&] {
      std::vector<EdgeId> v;
      for (const Edge& e : work.edges()) v.push_back(e.id);
      return v;
    }();
    for (EdgeId id : ids) work = subdivide(work, id, 1);
    if (work.vertex_count() > kExhaustiveCutsetVertexCap)
      throw CapExceeded("exhaustive cutset vertices", kExhaustiveCutsetVertexCap, work.vertex_count());
    for (std::size_t v = 0; v < work.vertex_count(); ++v) candidates.push_back(static_cast<VertexId>(v));
  } else {
    for (std::size_t v = 0; v < work.vertex_count(); ++v)
      if (work.degree(static_cast<VertexId>(v)) >= 3) candidates.push_back(static_cast<VertexId>(v));
  }

  std::vector<VertexId> pick;
  std::optional<CutsetWitness> hit;
  std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t size, std::size_t from) -> bool {
    if (pick.size() == size) {
      auto w = gap(work, pick);
      if (w.gap >= 2) hit = std::move(w);
      return hit.has_value();
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      pick.push_back(candidates[i]);
      if (choose(size, i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  for (std::size_t t = 1; t <= candidates.size(); ++t) {
    pick.clear();
    if (choose(t, 0)) return {t, hit, part_names(work, *hit)};
  }
  return {};
}

Threshold generalized_gap_threshold(const Multigraph& g, const GeneralizedOptions& options) {
  require_connected(g);
  const Multigraph sk = smooth(g);
  const std::size_t n = sk.vertex_count();
  if (n > options.max_skeleton_vertices)
    throw CapExceeded("generalized skeleton vertices", options.max_skeleton_vertices, n);
  const Threshold plain = gap_threshold(sk);

  struct Candidate {
    std::uint32_t mask;
    CutsetPart part;
  };
  std::vector<Candidate> candidates;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<VertexId> vs;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1u) vs.push_back(static_cast<VertexId>(v));
    if (vs.size() == 1) {
      if (sk.degree(vs[0]) >= 3) candidates.push_back({mask, {vs, false}});
      if (sk.multiplicity(vs[0], vs[0]) > 0) candidates.push_back({mask, {vs, true}});
      continue;
    }
    if (vs.size() > options.max_part_size) continue;
    if (!options.relax_connectivity && !sk.induces_connected(vs)) continue;
    candidates.push_back({mask, {vs, true}});
  }

  const std::size_t bound = plain.value ? *plain.value : n;
  std::vector<std::size_t> pick;
  std::optional<CutsetWitness> hit;
  std::function<bool(std::size_t, std::size_t, std::uint32_t)> choose = [&](std::size_t size, std::size_t from,
                                                                           std::uint32_t used) -> bool {
    if (pick.size() == size) {
      std::vector<CutsetPart> parts;
      for (auto i : pick) parts.push_back(candidates[i].part);
      auto w = gap(sk, std::move(parts));
      if (w.gap >= 2 && w.contact_conditions) hit = std::move(w);
      return hit.has_value();
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      if (candidates[i].mask & used) continue;
      pick.push_back(i);
      if (choose(size, i + 1, used | candidates[i].mask)) return true;
      pick.pop_back();
    }
    return false;
  };
  for (std::size_t t = 1; t <= bound; ++t) {
    if (plain.value && t == *plain.value) return plain;
    pick.clear();
    if (choose(t, 0, 0)) return {t, hit, part_names(sk, *hit)};
  }
  return plain;
}

GapValuation gap_valuation(const Multigraph& skeleton, const CutsetWitness& x, std::size_t agents,
                           std::size_t per_edge) {
  if (per_edge == 0) throw InputError("need at least one subdivision vertex per edge");
  const CutsetWitness w = gap(skeleton, x.parts);
  GapValuation out;
  const auto mu = component_edge_values(w, agents, &out.component_values);

  Multigraph h = skeleton;
  std::map<VertexId, Rational> values;
  for (const auto& [id, share] : mu) {
    const std::size_t before = h.vertex_count();
    h = subdivide(h, id, per_edge);
    for (std::size_t v = before; v < h.vertex_count(); ++v)
      values[static_cast<VertexId>(v)] = share / static_cast<long>(per_edge);
  }
  std::vector<Rational> table(h.vertex_count(), 0);
  for (const auto& [v, q] : values) table[static_cast<std::size_t>(v)] = q;
  out.graph = std::move(h);
  out.valuation = AdditiveValuation(std::move(table));
  return out;
}

std::string to_string(Verification v) {
  switch (v) {
    case Verification::Pending: return "pending";
    case Verification::CertifiedAbsent: return "certified_absent";
    case Verification::Refuted: return "refuted";
    case Verification::UnverifiedAtDeskScale: return "unverified at desk scale";
  }
  return "?";
}

NegativeInstance negative_instance(const Multigraph& skeleton, const CutsetWitness& x, std::size_t agents,
                                   std::size_t k) {
  if (k < 1) throw InputError("k must be at least 1");
  if (agents < 2) throw InputError("need at least two agents");
  NegativeInstance inst;
  inst.skeleton = skeleton;
  inst.cutset = gap(skeleton, x.parts);
  inst.agents = agents;
  inst.k = k;
  inst.envy_bound = Rational(1, static_cast<long>(agents - 1));
  const auto mu = component_edge_values(inst.cutset, agents, nullptr);

  Multigraph h = skeleton;
  std::map<VertexId, Rational> per_vertex;
  mpz_class denominator = 1;
  for (const auto& [id, share] : mu) {
    const Rational scaled = share * static_cast<long>(k) * static_cast<long>(agents - 1);
    const mpz_class floor_value = scaled.get_num() / scaled.get_den();
    const std::size_t j = std::max<std::size_t>(k + 1, floor_value.get_ui() + 1);
    inst.valued_edges.push_back(id);
    inst.edge_values.push_back(share);
    inst.subdivisions.push_back(j);
    const std::size_t before = h.vertex_count();
    h = subdivide(h, id, j);
    Rational each = share / static_cast<long>(j);
    each.canonicalize();
    mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), each.get_den_mpz_t());
    for (std::size_t v = before; v < h.vertex_count(); ++v) per_vertex[static_cast<VertexId>(v)] = each;
  }
  inst.scale = Rational(denominator);
  std::vector<Rational> table(h.vertex_count(), 0);
  for (const auto& [v, q] : per_vertex) table[static_cast<std::size_t>(v)] = q * inst.scale;
  h.set_name(skeleton.name() + "_n" + std::to_string(agents) + "_k" + std::to_string(k));
  inst.graph = std::move(h);
  inst.valuation = AdditiveValuation(std::move(table));
  return inst;
}

void certify(NegativeInstance& inst, EnumerationCaps caps) {
  if (inst.graph.vertex_count() > caps.max_vertices || inst.agents > caps.max_agents) {
    inst.status = Verification::UnverifiedAtDeskScale;
    return;
  }
  inst.certificate =
      exists_efk_outer(inst.graph, ValuationProfile::common(Valuation(inst.valuation), inst.agents), inst.k, caps);
  inst.status = inst.certificate->allocation ? Verification::Refuted : Verification::CertifiedAbsent;
}

bool bounds_hold(const NegativeInstance& inst) {
  const Rational per_vertex_cap = inst.envy_bound / static_cast<long>(inst.k);
  for (std::size_t i = 0; i < inst.valued_edges.size(); ++i) {
    if (inst.subdivisions[i] <= inst.k) return false;
    const Rational each = inst.edge_values[i] / static_cast<long>(inst.subdivisions[i]);
    if (!(each < per_vertex_cap)) return false;
  }
  Rational total = 0;
  for (const auto& q : inst.valuation.values()) {
    if (!(q / inst.scale < per_vertex_cap)) return false;
    total += q;
  }
  // Every valued edge totals its share, so the whole instance totals n + 1.
  return total / inst.scale == Rational(static_cast<long>(inst.agents + 1));
}

AdditiveValuation trident_valuation(const Multigraph& g, const Trident& t) {
  std::vector<Rational> values(g.vertex_count(), 0);
  for (std::size_t i = 0; i < 3; ++i) {
    const VertexId s = t.contacts[i];
    values[static_cast<std::size_t>(s)] = 1;
    const auto& arm = t.arms[i];
    for (VertexId u : g.neighbors(s))
      if (u != s && std::find(arm.begin(), arm.end(), u) != arm.end() &&
          std::find(t.center.begin(), t.center.end(), u) == t.center.end()) {
        values[static_cast<std::size_t>(u)] = 1;
        break;
      }
  }
  return AdditiveValuation(std::move(values));
}

namespace skeletons {
Multigraph interval() { return from_edges("interval", {{"u", "v"}}); }
Multigraph circle() { return from_edges("circle", {{"o", "o"}}); }
Multigraph lollipop() { return from_edges("lollipop", {{"u", "v"}, {"v", "v"}}); }
Multigraph figure8() { return from_edges("figure8", {{"v", "v"}, {"v", "v"}}); }
Multigraph handcuffs() { return from_edges("handcuffs", {{"x", "x"}, {"x", "y"}, {"y", "y"}}); }
Multigraph theta() { return from_edges("theta", {{"x", "y"}, {"x", "y"}, {"x", "y"}}); }
Multigraph y_star() { return from_edges("y_star", {{"o", "p"}, {"o", "q"}, {"o", "r"}}); }
Multigraph friendly_diamond() {
  return from_edges("friendly_diamond", {{"a", "d"}, {"a", "d"}, {"a", "x"}, {"d", "y"}});
}
Multigraph delta_diamond() {
  return from_edges("delta_diamond",
                    {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "x"}, {"b", "d"}, {"c", "d"}, {"d", "y"}});
}
Multigraph lips() { return from_edges("lips", {{"a", "b"}, {"a", "b"}, {"b", "c"}, {"b", "c"}, {"a", "c"}}); }
}  // namespace skeletons

}  // namespace graphfair
