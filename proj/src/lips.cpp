#include "graphfair/lips.hpp"

#include "graphfair/blocks.hpp"
#include "graphfair/error.hpp"
#include "graphfair/structure.hpp"

#include <algorithm>

namespace graphfair {

namespace {

std::vector<VertexId> oriented(const Chain& chain, VertexId start) {
  if (chain.from == start) return chain.interior;
  return {chain.interior.rbegin(), chain.interior.rend()};
}

// Splits two parallel chains into (top, middle) by the smallest interior name.
std::pair<std::vector<VertexId>, std::vector<VertexId>> split_pair(const Multigraph& g,
                                                                   const Chain& first, const Chain& second,
                                                                   VertexId start) {
  const auto smallest = [&](const Chain& c) -> std::optional<std::string> {
    if (c.interior.empty()) return std::nullopt;
    std::string best = g.vertex_name(c.interior.front());
    for (VertexId v : c.interior) best = std::min(best, g.vertex_name(v));
    return best;
  };
  const auto a = smallest(first), b = smallest(second);
  const bool first_on_top = a && (!b || *a < *b) ? true : (!a && !b);
  if (first_on_top) return {oriented(first, start), oriented(second, start)};
  return {oriented(second, start), oriented(first, start)};
}

std::vector<VertexId> reversed(const std::vector<VertexId>& v) { return {v.rbegin(), v.rend()}; }

void append(std::vector<VertexId>& out, const std::vector<VertexId>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

}  // namespace

std::optional<LipsLabeling> lips_labeling(const Multigraph& g) {
  if (g.vertex_count() == 0 || !g.is_connected()) return std::nullopt;
  const Skeleton sk = skeletonize(g);
  const Multigraph& s = sk.graph;
  if (s.vertex_count() != 3 || s.edge_count() != 5 || s.has_loops()) return std::nullopt;

  std::optional<VertexId> hub;
  std::vector<VertexId> sides;
  for (VertexId v = 0; v < 3; ++v) {
    if (s.degree(v) == 4 && !hub) hub = v;
    else if (s.degree(v) == 3) sides.push_back(v);
  }
  if (!hub || sides.size() != 2) return std::nullopt;
  if (s.vertex_name(sides[1]) < s.vertex_name(sides[0])) std::swap(sides[0], sides[1]);
  const VertexId sa = sides[0], sb = *hub, sc = sides[1];
  if (s.multiplicity(sa, sb) != 2 || s.multiplicity(sb, sc) != 2 || s.multiplicity(sa, sc) != 1)
    return std::nullopt;

  LipsLabeling lab;
  lab.a = sk.branch[sa];
  lab.b = sk.branch[sb];
  lab.c = sk.branch[sc];
  std::vector<const Chain*> ab, bc;
  for (std::size_t i = 0; i < sk.chains.size(); ++i) {
    const Edge& e = s.edges()[i];
    const auto ends = std::minmax(e.u, e.v);
    if (ends == std::minmax(sa, sb)) ab.push_back(&sk.chains[i]);
    else if (ends == std::minmax(sb, sc)) bc.push_back(&sk.chains[i]);
    else lab.bottom = oriented(sk.chains[i], lab.a);
  }
  std::tie(lab.top_left, lab.middle_left) = split_pair(g, *ab[0], *ab[1], lab.a);
  std::tie(lab.top_right, lab.middle_right) = split_pair(g, *bc[0], *bc[1], lab.b);

  lab.b1 = lab.top_left.empty() ? lab.a : lab.top_left.back();
  lab.a1 = lab.middle_left.empty() ? lab.b : lab.middle_left.front();
  lab.c1 = lab.middle_right.empty() ? lab.b : lab.middle_right.back();
  lab.b2 = lab.top_right.empty() ? lab.c : lab.top_right.front();
  return lab;
}

bool is_handle_decomposition(const Multigraph& g, const HandleDecomposition& h) {
  const auto& x = h.x.order();
  const auto& y = h.y.order();
  for (VertexId v : x)
    if (h.y.position_of(v)) return false;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!g.adjacent(x[i - 1], x[i])) return false;
  if (!x.empty() && !y.empty() && !g.adjacent(x.back(), y.front())) return false;
  return is_bipolar_order(g, h.y);
}

LipsStagePlan lips_stage_plan(const Multigraph& g, const LipsLabeling& lab) {
  std::vector<VertexId> x1 = reversed(lab.top_left);
  x1.push_back(lab.a);
  append(x1, lab.bottom);

  std::vector<VertexId> y1{lab.c};
  append(y1, reversed(lab.top_right));
  append(y1, reversed(lab.middle_right));
  y1.push_back(lab.b);
  append(y1, reversed(lab.middle_left));

  std::vector<VertexId> y2{lab.b};
  append(y2, lab.middle_right);
  append(y2, lab.top_right);
  y2.push_back(lab.c);

  std::vector<VertexId> x3{lab.c};
  append(x3, reversed(lab.top_right));
  x3.push_back(lab.b);
  append(x3, lab.middle_right);

  std::vector<VertexId> x3_alt{lab.b};
  append(x3_alt, lab.middle_right);
  x3_alt.push_back(lab.c);
  append(x3_alt, reversed(lab.top_right));

  LipsStagePlan plan{Enumeration(x1), Enumeration(y1), Enumeration(lab.middle_left),
                     Enumeration(y2), Enumeration(x3), Enumeration(x3_alt)};

  if (plan.x1.size() + plan.y1.size() != g.vertex_count() || !is_bipolar_numbering(g, plan.x1.concat(plan.y1)) ||
      !is_handle_decomposition(g, {plan.x1, plan.y1}) || !is_handle_decomposition(g, {plan.x2, plan.y2}) ||
      !is_handle_decomposition(g, {plan.x3, {}}) || !is_handle_decomposition(g, {plan.x3_alt, {}}))
    throw InputError("labeling does not describe a lips-class graph");
  return plan;
}

}  // namespace graphfair
