#include "graphfair/fairness.hpp"

#include "graphfair/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace graphfair {

namespace {

using Mask = std::uint64_t;

inline Mask bit(int v) { return Mask{1} << v; }

struct MaskGraph {
  std::vector<Mask> adj;

  explicit MaskGraph(const Multigraph& g) : adj(g.vertex_count(), 0) {
    for (const Edge& e : g.edges())
      if (!e.is_loop()) {
        adj[e.u] |= bit(e.v);
        adj[e.v] |= bit(e.u);
      }
  }

  Mask flood(Mask within, int start) const {
    Mask comp = bit(start), frontier = comp;
    while (frontier) {
      const int v = __builtin_ctzll(frontier);
      frontier &= frontier - 1;
      const Mask fresh = adj[v] & within & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    return comp;
  }

  bool connected(Mask s) const { return s == 0 || flood(s, __builtin_ctzll(s)) == s; }

  int components(Mask s) const {
    int count = 0;
    while (s) {
      s &= ~flood(s, __builtin_ctzll(s));
      ++count;
    }
    return count;
  }
};

VertexSet members(Mask m) {
  VertexSet out;
  while (m) {
    out.push_back(__builtin_ctzll(m));
    m &= m - 1;
  }
  return out;
}

// Unordered partitions of V into at most `max_parts` connected nonempty parts.
// The next part always contains the smallest unplaced vertex, so each
// partition is produced exactly once.
class PartitionSearch {
 public:
  using Callback = std::function<bool(const std::vector<Mask>&)>;

  PartitionSearch(const MaskGraph& mg, std::size_t max_parts, Callback cb)
      : mg_(mg), max_parts_(max_parts), cb_(std::move(cb)) {}

  bool run(Mask all) { return place(all); }

 private:
  bool place(Mask remaining) {
    if (remaining == 0) return cb_(parts_);
    if (parts_.size() == max_parts_) return true;
    const int v = __builtin_ctzll(remaining);
    return grow(remaining, bit(v), mg_.adj[v] & remaining, ~remaining);
  }

  bool grow(Mask remaining, Mask set, Mask ext, Mask forbidden) {
    const Mask rest = remaining & ~set;
    const std::size_t slots = max_parts_ - parts_.size() - 1;
    if (static_cast<std::size_t>(mg_.components(rest)) <= slots) {
      parts_.push_back(set);
      const bool go_on = place(rest);
      parts_.pop_back();
      if (!go_on) return false;
    }
    while (ext) {
      const int u = __builtin_ctzll(ext);
      ext &= ext - 1;
      const Mask next_ext = (ext | mg_.adj[u]) & remaining & ~set & ~bit(u) & ~forbidden;
      if (!grow(remaining, set | bit(u), next_ext, forbidden)) return false;
      forbidden |= bit(u);
    }
    return true;
  }

  const MaskGraph& mg_;
  std::size_t max_parts_;
  Callback cb_;
  std::vector<Mask> parts_;
};

std::uint64_t falling_factorial(std::size_t n, std::size_t p) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < p; ++i) r *= n - i;
  return r;
}

void check_caps(const Multigraph& g, std::size_t agents, const EnumerationCaps& caps) {
  if (agents == 0) throw InputError("agent count must be positive");
  if (g.vertex_count() > caps.max_vertices) throw CapExceeded("max_vertices", caps.max_vertices, g.vertex_count());
  if (g.vertex_count() > 63) throw CapExceeded("max_vertices", 63, g.vertex_count());
  if (agents > caps.max_agents) throw CapExceeded("max_agents", caps.max_agents, agents);
}

// Remainders part \ S for every S with |S| <= k that keep the part contiguous.
std::vector<Mask> remainders(const MaskGraph& mg, Mask part, std::size_t k) {
  std::vector<Mask> out{part};
  const VertexSet verts = members(part);
  const std::size_t limit = std::min(k, verts.size());
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, Mask)> choose = [&](std::size_t from, Mask removed) {
    if (!pick.empty()) {
      const Mask rest = part & ~removed;
      if (mg.connected(rest)) out.push_back(rest);
    }
    if (pick.size() == limit) return;
    for (std::size_t i = from; i < verts.size(); ++i) {
      pick.push_back(i);
      choose(i + 1, removed | bit(verts[i]));
      pick.pop_back();
    }
  };
  choose(0, 0);
  return out;
}

template <class Num, class ValueFn>
OracleResult oracle_search(const Multigraph& g, std::size_t agents, std::size_t k, bool common,
                           ValueFn value) {
  const MaskGraph mg(g);
  OracleResult result;
  result.symmetry_reduced = common;
  const std::size_t scored = common ? 1 : agents;

  std::vector<std::vector<char>> accepts;
  std::vector<char> accepts_empty;
  std::vector<int> owner;
  std::vector<char> used;

  const auto on_partition = [&](const std::vector<Mask>& parts) {
    const std::size_t p = parts.size();
    ++result.partitions_checked;
    std::vector<std::vector<Num>> own(scored, std::vector<Num>(p)), low(scored, std::vector<Num>(p));
    for (std::size_t q = 0; q < p; ++q) {
      const auto rems = remainders(mg, parts[q], k);
      for (std::size_t i = 0; i < scored; ++i) {
        own[i][q] = value(i, parts[q]);
        Num best = own[i][q];
        for (Mask r : rems) {
          if (r == parts[q]) continue;
          Num val = value(i, r);
          if (val < best) best = val;
        }
        low[i][q] = best;
      }
    }
    accepts.assign(scored, std::vector<char>(p, 0));
    accepts_empty.assign(scored, 0);
    for (std::size_t i = 0; i < scored; ++i) {
      Num top = 0, second = 0;
      std::size_t top_at = p;
      for (std::size_t q = 0; q < p; ++q) {
        if (top_at == p || low[i][q] > top) {
          second = top_at == p ? Num(0) : top;
          top = low[i][q];
          top_at = q;
        } else if (low[i][q] > second) {
          second = low[i][q];
        }
      }
      accepts_empty[i] = !(top > 0);
      for (std::size_t q = 0; q < p; ++q) accepts[i][q] = own[i][q] >= (q == top_at ? second : top);
    }

    owner.assign(p, -1);
    used.assign(agents, 0);
    std::vector<int> assignment(agents, -1);
    std::function<bool(std::size_t, std::size_t)> match = [&](std::size_t agent, std::size_t empties) -> bool {
      if (agent == agents) return true;
      const std::size_t row = common ? 0 : agent;
      for (std::size_t q = 0; q < p; ++q) {
        if (owner[q] >= 0 || !accepts[row][q]) continue;
        owner[q] = static_cast<int>(agent);
        assignment[agent] = static_cast<int>(q);
        if (match(agent + 1, empties)) return true;
        owner[q] = -1;
      }
      if (empties > 0 && accepts_empty[row]) {
        assignment[agent] = -1;
        if (match(agent + 1, empties - 1)) return true;
      }
      return false;
    };
    if (match(0, agents - p)) {
      std::vector<VertexSet> bundles(agents);
      for (std::size_t i = 0; i < agents; ++i)
        if (assignment[i] >= 0) bundles[i] = members(parts[static_cast<std::size_t>(assignment[i])]);
      result.allocation = Allocation(std::move(bundles));
      result.allocations_checked += 1;
      return false;
    }
    result.allocations_checked += falling_factorial(agents, p);
    return true;
  };

  const Mask all = g.vertex_count() == 64 ? ~Mask{0} : bit(static_cast<int>(g.vertex_count())) - 1;
  if (all == 0) {
    on_partition({});
  } else {
    PartitionSearch(mg, agents, on_partition).run(all);
  }
  return result;
}

}  // namespace

Allocation::Allocation(std::vector<VertexSet> b) : bundles(std::move(b)) {
  for (auto& s : bundles) std::sort(s.begin(), s.end());
}

bool Allocation::has_empty_bundle() const {
  return std::any_of(bundles.begin(), bundles.end(), [](const VertexSet& s) { return s.empty(); });
}

void validate_partition(const Allocation& a, std::size_t universe) {
  std::vector<int> owner(universe, -1);
  for (std::size_t i = 0; i < a.bundles.size(); ++i)
    for (VertexId v : a.bundles[i]) {
      if (v < 0 || static_cast<std::size_t>(v) >= universe)
        throw InputError("allocation mentions vertex " + std::to_string(v) + " outside the universe");
      if (owner[static_cast<std::size_t>(v)] >= 0)
        throw InputError("vertex " + std::to_string(v) + " assigned twice");
      owner[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  for (std::size_t v = 0; v < universe; ++v)
    if (owner[v] < 0) throw InputError("vertex " + std::to_string(v) + " is unassigned");
}

bool is_contiguous(const Multigraph& g, std::span<const VertexId> set) { return g.induces_connected(set); }

bool is_contiguous(const Multigraph& g, const Allocation& a) {
  return std::all_of(a.bundles.begin(), a.bundles.end(), [&](const VertexSet& s) { return is_contiguous(g, s); });
}

bool is_ef(const Allocation& a, const ValuationProfile& p) { return is_ef_up_to_set(a, p, {}); }

bool is_ef_up_to_set(const Allocation& a, const ValuationProfile& p, std::span<const VertexId> hidden) {
  validate_partition(a, p.universe_size());
  if (a.agent_count() != p.agent_count()) throw InputError("allocation and profile disagree on agent count");
  for (std::size_t i = 0; i < a.agent_count(); ++i) {
    const Rational mine = p[i].value(a.bundles[i]);
    for (std::size_t j = 0; j < a.agent_count(); ++j) {
      if (i == j) continue;
      VertexSet visible;
      for (VertexId v : a.bundles[j])
        if (std::find(hidden.begin(), hidden.end(), v) == hidden.end()) visible.push_back(v);
      if (p[i].value(visible) > mine) return false;
    }
  }
  return true;
}

EnvyReport envy_report(const Multigraph& g, const Allocation& a, const ValuationProfile& p, std::size_t k) {
  validate_partition(a, g.vertex_count());
  if (p.universe_size() != g.vertex_count()) throw InputError("valuation universe differs from the graph");
  if (a.agent_count() != p.agent_count()) throw InputError("allocation and profile disagree on agent count");
  for (std::size_t i = 0; i < a.agent_count(); ++i)
    if (!is_contiguous(g, a.bundles[i]))
      throw InputError("bundle of agent " + std::to_string(i + 1) + " is not contiguous");

  EnvyReport report;
  report.k = k;
  report.has_empty_bundle = a.has_empty_bundle();
  for (std::size_t i = 0; i < a.agent_count(); ++i) report.own_values.push_back(p[i].value(a.bundles[i]));

  for (std::size_t i = 0; i < a.agent_count(); ++i)
    for (std::size_t j = 0; j < a.agent_count(); ++j) {
      if (i == j) continue;
      const VertexSet& other = a.bundles[j];
      PairEnvy pe{i, j, p[i].value(other) - report.own_values[i], std::nullopt};
      if (sgn(pe.envy) <= 0) {
        pe.witness = VertexSet{};
      } else {
        const std::size_t limit = std::min(k, other.size());
        std::vector<std::size_t> pick;
        std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t size, std::size_t from) -> bool {
          if (pick.size() == size) {
            VertexSet rest, removed;
            for (std::size_t x = 0, y = 0; x < other.size(); ++x) {
              if (y < pick.size() && pick[y] == x) {
                removed.push_back(other[x]);
                ++y;
              } else {
                rest.push_back(other[x]);
              }
            }
            if (!is_contiguous(g, rest) || p[i].value(rest) > report.own_values[i]) return false;
            pe.witness = removed;
            return true;
          }
          for (std::size_t x = from; x < other.size(); ++x) {
            pick.push_back(x);
            if (search(size, x + 1)) return true;
            pick.pop_back();
          }
          return false;
        };
        for (std::size_t size = 1; size <= limit && !pe.witness; ++size) {
          pick.clear();
          search(size, 0);
        }
      }
      if (!pe.witness) report.efk_outer = false;
      report.pairs.push_back(std::move(pe));
    }
  return report;
}

bool is_efk_outer(const Multigraph& g, const Allocation& a, const ValuationProfile& p, std::size_t k) {
  return envy_report(g, a, p, k).efk_outer;
}

std::uint64_t for_each_contiguous_allocation(const Multigraph& g, std::size_t agents,
                                             const std::function<bool(const Allocation&)>& visit,
                                             EnumerationCaps caps, EnumerationOptions options) {
  check_caps(g, agents, caps);
  const MaskGraph mg(g);
  std::uint64_t count = 0;

  const auto expand = [&](const std::vector<Mask>& parts) -> bool {
    const std::size_t p = parts.size();
    if (options.nonempty_only && p != agents) return true;
    std::vector<int> slot(p, -1);
    std::vector<char> taken(agents, 0);
    std::function<bool(std::size_t)> assign = [&](std::size_t q) -> bool {
      if (q == p) {
        std::vector<VertexSet> bundles(agents);
        for (std::size_t x = 0; x < p; ++x) bundles[static_cast<std::size_t>(slot[x])] = members(parts[x]);
        ++count;
        return visit(Allocation(std::move(bundles)));
      }
      for (std::size_t agent = 0; agent < agents; ++agent) {
        if (taken[agent]) continue;
        taken[agent] = 1;
        slot[q] = static_cast<int>(agent);
        const bool go_on = assign(q + 1);
        taken[agent] = 0;
        if (!go_on) return false;
      }
      return true;
    };
    return assign(0);
  };

  if (g.vertex_count() == 0) {
    if (!options.nonempty_only || agents == 0) {
      ++count;
      visit(Allocation(std::vector<VertexSet>(agents)));
    }
    return count;
  }
  PartitionSearch(mg, agents, expand).run(bit(static_cast<int>(g.vertex_count())) - 1);
  return count;
}

std::vector<Allocation> enumerate_contiguous_allocations(const Multigraph& g, std::size_t agents,
                                                         EnumerationCaps caps, EnumerationOptions options) {
  std::vector<Allocation> out;
  for_each_contiguous_allocation(
      g, agents,
      [&](const Allocation& a) {
        out.push_back(a);
        return true;
      },
      caps, options);
  return out;
}

OracleResult exists_efk_outer(const Multigraph& g, const ValuationProfile& p, std::size_t k, EnumerationCaps caps) {
  check_caps(g, p.agent_count(), caps);
  if (p.universe_size() != g.vertex_count()) throw InputError("valuation universe differs from the graph");
  const std::size_t agents = p.agent_count();
  const bool common = p.is_common();

  std::vector<std::vector<std::int64_t>> weights;
  for (std::size_t i = 0; i < agents; ++i) {
    const auto* add = p[i].additive();
    auto w = add ? add->integer_weights() : std::nullopt;
    if (!w) break;
    weights.push_back(std::move(*w));
  }
  if (weights.size() == agents) {
    return oracle_search<std::int64_t>(g, agents, k, common, [&](std::size_t i, Mask m) {
      std::int64_t s = 0;
      while (m) {
        s += weights[i][static_cast<std::size_t>(__builtin_ctzll(m))];
        m &= m - 1;
      }
      return s;
    });
  }
  return oracle_search<Rational>(g, agents, k, common,
                                 [&](std::size_t i, Mask m) { return p[i].value(members(m)); });
}

Allocation parse_allocation(std::istream& in, const Multigraph& g, std::size_t agents) {
  if (agents == 0) throw InputError("agent count must be positive");
  std::vector<VertexSet> bundles(agents);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;
    const auto where = " at line " + std::to_string(lineno);
    if (words.size() != 2) throw InputError("expected 'agent vertex'" + where);
    std::size_t agent = 0;
    try {
      agent = std::stoul(words[0]);
    } catch (const std::exception&) {
      throw InputError("bad agent index '" + words[0] + "'" + where);
    }
    if (agent < 1 || agent > agents) throw InputError("agent index out of range" + where);
    bundles[agent - 1].push_back(g.vertex(words[1]));
  }
  Allocation a(std::move(bundles));
  validate_partition(a, g.vertex_count());
  return a;
}

Allocation read_allocation_file(const std::string& path, const Multigraph& g, std::size_t agents) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open allocation file '" + path + "'");
  return parse_allocation(in, g, agents);
}

void write_allocation(std::ostream& out, const Multigraph& g, const Allocation& a) {
  for (std::size_t i = 0; i < a.agent_count(); ++i)
    for (VertexId v : a.bundles[i]) out << (i + 1) << ' ' << g.vertex_name(v) << '\n';
}

void write_envy_report(std::ostream& out, const Multigraph& g, const EnvyReport& r) {
  out << "# envy-report k=" << r.k << " efk_outer=" << (r.efk_outer ? "true" : "false")
      << " empty_bundle=" << (r.has_empty_bundle ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < r.own_values.size(); ++i)
    out << "# own agent=" << (i + 1) << " value=" << to_string(r.own_values[i]) << '\n';
  for (const auto& pe : r.pairs) {
    out << "# pair " << (pe.envier + 1) << "->" << (pe.envied + 1) << " envy=" << to_string(pe.envy) << " witness=";
    if (!pe.witness) {
      out << "none";
    } else {
      out << '{';
      for (std::size_t x = 0; x < pe.witness->size(); ++x)
        out << (x ? "," : "") << g.vertex_name((*pe.witness)[x]);
      out << '}';
    }
    out << '\n';
  }
}

}  // namespace graphfair
