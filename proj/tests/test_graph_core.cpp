#include "graphfair/blocks.hpp"
#include "graphfair/error.hpp"
#include "graphfair/lips.hpp"
#include "graphfair/structure.hpp"
#include "graphfair/tangle_analysis.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace graphfair;
using namespace graphfair::testing;

namespace {

Multigraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

std::size_t count_multiplicity(const Multigraph& g, const char* u, const char* v) {
  return g.multiplicity(g.vertex(u), g.vertex(v));
}

}  // namespace

TEST_CASE("graph file parsing") {
  const Multigraph g = parse("# comment\ngraph demo\na b\nb b\nb c\nd\n");
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.degree(g.vertex("b")) == 4);
  CHECK(g.has_loops());
  CHECK_FALSE(g.is_connected());
  CHECK_THROWS_AS(parse("a b\n"), InputError);
  CHECK_THROWS_AS(parse("graph x\na b c\n"), InputError);

  std::ostringstream out;
  write_graph(out, g);
  const Multigraph back = parse(out.str());
  CHECK(back.vertex_count() == g.vertex_count());
  CHECK(back.edge_count() == g.edge_count());
}

TEST_CASE("enumeration segments are 1-based and inclusive") {
  const Enumeration p({4, 2, 7, 1});
  CHECK(p.at(1) == 4);
  CHECK(p.segment(2, 3) == VertexSet{2, 7});
  CHECK(p.segment(3, 2).empty());
  CHECK(p.before(1).empty());
  CHECK(p.after(4).empty());
  CHECK(p.position_of(7) == 3);
  CHECK_FALSE(p.position_of(9));
  CHECK(p.reversed().at(1) == 1);
  CHECK_THROWS_AS(Enumeration({1, 1}), InputError);
}

TEST_CASE("smoothing") {
  const Multigraph edge = smooth(path_graph(3));
  CHECK(edge.vertex_count() == 2);
  CHECK(edge.edge_count() == 1);

  const Multigraph loop = smooth(cycle_graph(4));
  CHECK(loop.vertex_count() == 1);
  CHECK(loop.edge_count() == 1);
  CHECK(loop.has_loops());

  const Multigraph lips = smooth(lips_graph({2, 1, 0, 3, 1}));
  CHECK(lips.vertex_count() == 3);
  CHECK(count_multiplicity(lips, "a", "b") == 2);
  CHECK(count_multiplicity(lips, "b", "c") == 2);
  CHECK(count_multiplicity(lips, "a", "c") == 1);
}

TEST_CASE("subdivision") {
  const Multigraph single = parse("graph e\nu v\n");
  const Multigraph p3 = subdivide(single, single.edges().front().id, 1);
  CHECK(p3.vertex_count() == 3);
  CHECK(are_isomorphic(p3, path_graph(3)));

  const Multigraph loop = parse("graph l\nv v\n");
  CHECK(are_isomorphic(subdivide(loop, loop.edges().front().id, 2), cycle_graph(3)));

  const Multigraph base = skeletons::lips();
  Multigraph h = base;
  for (const Edge& e : base.edges()) h = subdivide(h, e.id, 1);
  CHECK(h.vertex_count() == 8);
  CHECK(h.is_simple());
  CHECK(lips_labeling(h).has_value());
}

TEST_CASE("subdivision recognition") {
  CHECK(is_subdivision_of(path_graph(5), path_graph(2)));
  CHECK(is_subdivision_of(lips_graph({1, 2, 0, 1, 3}), skeletons::lips()));
  CHECK_FALSE(is_subdivision_of(star_graph(3), skeletons::lips()));
  CHECK_FALSE(is_subdivision_of(path_graph(2), path_graph(5)));
}

TEST_CASE("isomorphism respects multiplicities") {
  CHECK(are_isomorphic(skeletons::theta(), parse("graph t\nx y\ny x\nx y\n")));
  CHECK_FALSE(are_isomorphic(skeletons::theta(), skeletons::handcuffs()));
  CHECK(isomorphisms(cycle_graph(4), cycle_graph(4)).size() == 8);
}

TEST_CASE("block paths") {
  CHECK(is_block_path(path_graph(4)));
  CHECK(block_tree(path_graph(4)).blocks.size() == 3);
  CHECK_FALSE(is_block_path(star_graph(3)));
  const BlockTree lips = block_tree(lips_graph({1, 1, 1, 1, 1}));
  CHECK(lips.blocks.size() == 1);
  CHECK(lips.separating_vertices.empty());
}

TEST_CASE("bipolar numbering") {
  const Multigraph p5 = path_graph(5);
  CHECK(is_bipolar_numbering(p5, Enumeration({0, 1, 2, 3, 4})));
  CHECK_FALSE(is_bipolar_numbering(p5, Enumeration({0, 2, 1, 3, 4})));
  CHECK_FALSE(bipolar_numbering(star_graph(3)));

  for (const auto& shape : {std::array<std::size_t, 5>{1, 1, 1, 1, 1}, {0, 2, 3, 0, 1}, {3, 3, 2, 3, 2}}) {
    const Multigraph g = lips_graph(shape);
    const auto order = bipolar_numbering(g);
    REQUIRE(order);
    CHECK(is_bipolar_numbering(g, *order));
  }
  // Blocks joined at cut vertices, with a pendant loop.
  const Multigraph chain = parse("graph c\na b\nb c\nc a\nc d\nd e\ne f\nf d\nf f\n");
  const auto order = bipolar_numbering(chain);
  REQUIRE(order);
  CHECK(is_bipolar_numbering(chain, *order));
}

TEST_CASE("tridents") {
  CHECK_FALSE(find_trident(path_graph(6)));
  const auto star = find_trident(star_graph(3));
  REQUIRE(star);
  CHECK(star->kind == TridentKind::TypeI);
  CHECK(star->center == std::vector<VertexId>{0});
  CHECK(is_valid_trident(star_graph(3), *star));

  // The delta-diamond is a single block with two pendant edges.
  CHECK_FALSE(find_trident(skeletons::delta_diamond()));
  CHECK(bipolar_numbering(skeletons::delta_diamond()));

  // Triangle with a pendant path at each corner.
  const Multigraph net = parse("graph net\na b\nb c\nc a\na x\nb y\nc z\ny w\n");
  const auto t = find_trident(net);
  REQUIRE(t);
  CHECK(t->kind == TridentKind::TypeII);
  CHECK(t->center.size() == 3);
  CHECK(is_valid_trident(net, *t));
}

TEST_CASE("lips labeling and stage plan") {
  const Multigraph g = lips_graph({1, 1, 1, 1, 1});
  const auto lab = lips_labeling(g);
  REQUIRE(lab);
  CHECK(g.vertex_name(lab->a) == "a");
  CHECK(g.vertex_name(lab->b) == "b");
  CHECK(lab->top_left.size() == 1);
  CHECK(lab->bottom.size() == 1);
  CHECK_FALSE(lips_labeling(path_graph(5)));

  const LipsStagePlan plan = lips_stage_plan(g, *lab);
  CHECK(plan.x1.size() + plan.y1.size() == g.vertex_count());
  CHECK(is_bipolar_numbering(g, plan.x1.concat(plan.y1)));
  CHECK(is_handle_decomposition(g, {plan.x1, plan.y1}));
  CHECK(plan.x3.size() == plan.x3_alt.size());

  // Only the bottom path subdivided: the a-side markers fall back to b.
  const Multigraph bare = lips_graph({0, 0, 0, 0, 2});
  const auto degenerate = lips_labeling(bare);
  REQUIRE(degenerate);
  CHECK(degenerate->b1 == degenerate->a);
  CHECK_NOTHROW(lips_stage_plan(bare, *degenerate));
}

TEST_CASE("hamiltonian paths in lips graphs") {
  CHECK(is_hamiltonian(path_graph(6)));
  CHECK(is_hamiltonian(lips_graph({0, 1, 1, 0, 2})));
  CHECK_FALSE(is_hamiltonian(lips_graph({1, 1, 1, 1, 1})));
  CHECK_FALSE(is_hamiltonian(star_graph(3)));
}
