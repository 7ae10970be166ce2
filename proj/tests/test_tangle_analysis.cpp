#include "graphfair/blocks.hpp"
#include "graphfair/error.hpp"
#include "graphfair/fairness.hpp"
#include "graphfair/structure.hpp"
#include "graphfair/tangle_analysis.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace graphfair;
using namespace graphfair::testing;

namespace {

Multigraph parse(const std::string& text) {
  std::istringstream in("graph t\n" + text);
  return parse_graph(in);
}

VertexId id(const Multigraph& g, const char* name) { return g.vertex(name); }

}  // namespace

TEST_CASE("degree sequences") {
  CHECK(degree_sequence(skeletons::lips()).to_string() == "<0,0,2,1>");
  CHECK(degree_sequence(skeletons::lips()).edges == 5);
  CHECK(degree_sequence(skeletons::lips()).sigma3 == 3);
  CHECK(degree_sequence(skeletons::y_star()).to_string() == "<3,0,1>");
  CHECK(degree_sequence(skeletons::circle()).to_string() == "<>");
}

TEST_CASE("stringability") {
  CHECK(classify_stringable(path_graph(6)).kind == StringableKind::Interval);
  CHECK(classify_stringable(cycle_graph(5)).kind == StringableKind::Circle);
  CHECK(classify_stringable(parse("a b\nb c\nc d\nd b\n")).kind == StringableKind::Lollipop);
  CHECK(classify_stringable(parse("a a\na b\nb b\n")).kind == StringableKind::Handcuffs);
  CHECK(classify_stringable(parse("a b\na x\nx b\na y\ny b\n")).kind == StringableKind::Theta);
  CHECK(classify_stringable(parse("a a\na a\n")).kind == StringableKind::Figure8);

  const Classification lips = classify_stringable(lips_graph({1, 0, 2, 1, 1}));
  CHECK_FALSE(lips.stringable);
  CHECK(lips.excess == 2);
  CHECK(classify_stringable(star_graph(3)).excess == 2);
  CHECK(classify_stringable(star_graph(5)).excess == 4);

  CHECK_THROWS_AS(classify_stringable(parse("a b\nc d\n")), InputError);
}

TEST_CASE("gap of a cutset") {
  const Multigraph y = skeletons::y_star();
  CHECK(gap(y, std::vector<VertexId>{id(y, "o")}).gap == 2);

  const Multigraph lips = skeletons::lips();
  const CutsetWitness all = gap(lips, std::vector<VertexId>{id(lips, "a"), id(lips, "b"), id(lips, "c")});
  CHECK(all.components == 5);
  CHECK(all.gap == 2);

  const Multigraph d = skeletons::delta_diamond();
  const CutsetWitness tri = gap(d, {CutsetPart{{id(d, "a"), id(d, "b"), id(d, "c")}, true}, CutsetPart{{id(d, "d")}, false}});
  CHECK(tri.components == 4);
  CHECK(tri.gap == 2);
  CHECK(tri.contact_conditions);
}

TEST_CASE("gap thresholds") {
  CHECK(gap_threshold(skeletons::y_star()).value == 1u);
  CHECK(gap_threshold(skeletons::friendly_diamond()).value == 2u);
  CHECK(gap_threshold(skeletons::lips()).value == 3u);
  CHECK_FALSE(gap_threshold(skeletons::theta()).value);
  CHECK(to_string(gap_threshold(skeletons::theta())) == "inf");
  CHECK(gap_threshold(star_graph(3)).value == 1u);

  const Threshold g = generalized_gap_threshold(skeletons::delta_diamond());
  CHECK(g.value == 2u);
  REQUIRE(g.witness);
  CHECK(std::any_of(g.witness->parts.begin(), g.witness->parts.end(), [](const CutsetPart& p) { return p.closed; }));
  CHECK(generalized_gap_threshold(skeletons::friendly_diamond()).value == 2u);
  CHECK(generalized_gap_threshold(skeletons::y_star()).value == 1u);
  CHECK(generalized_gap_threshold(skeletons::delta_diamond(), {.relax_connectivity = true}).value <= 2u);
}

TEST_CASE("branch-vertex cutsets agree with exhaustive search") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Multigraph sk = smooth(random_connected(2 + trial % 5, 1 + trial % 4, true, rng));
    Multigraph once = sk;
    for (const Edge& e : sk.edges()) once = subdivide(once, e.id, 1);
    if (once.vertex_count() > kExhaustiveCutsetVertexCap) continue;
    CHECK(gap_threshold(sk).value == gap_threshold(sk, CutsetSearch::SubdividedExhaustive).value);
  }
}

TEST_CASE("gap valuations") {
  const Multigraph y = skeletons::y_star();
  const GapValuation gv = gap_valuation(y, *gap_threshold(y).witness, 2);
  CHECK(gv.component_values == std::vector<Rational>{1, 1, 1});
  CHECK(gv.valuation.total() == 3);
  CHECK(gv.valuation[id(gv.graph, "o")] == 0);

  const Multigraph lips = skeletons::lips();
  const GapValuation lv = gap_valuation(lips, *gap_threshold(lips).witness, 4);
  CHECK(lv.component_values == std::vector<Rational>(5, 1));
  for (const char* branch : {"a", "b", "c"}) CHECK(lv.valuation[id(lv.graph, branch)] == 0);
}

TEST_CASE("negative instances") {
  const Multigraph y = skeletons::y_star();
  NegativeInstance ys = negative_instance(y, *gap_threshold(y).witness, 2, 1);
  CHECK(ys.envy_bound == 1);
  CHECK(ys.subdivisions == std::vector<std::size_t>{2, 2, 2});
  CHECK(ys.graph.vertex_count() == 10);
  CHECK(bounds_hold(ys));
  certify(ys);
  CHECK(ys.status == Verification::CertifiedAbsent);

  const Multigraph lips = skeletons::lips();
  NegativeInstance li = negative_instance(lips, *gap_threshold(lips).witness, 4, 1);
  CHECK(li.envy_bound == Rational(1, 3));
  CHECK(li.subdivisions == std::vector<std::size_t>(5, 4));
  CHECK(li.graph.vertex_count() == 23);
  CHECK(bounds_hold(li));
  for (const Rational& value : li.valuation.values()) CHECK(value / li.scale < li.envy_bound);

  certify(li, {.max_vertices = 16, .max_agents = 6});
  CHECK(li.status == Verification::UnverifiedAtDeskScale);
  CHECK(to_string(li.status) == "unverified at desk scale");

  NegativeInstance two = negative_instance(lips, *gap_threshold(lips).witness, 4, 2);
  CHECK(two.subdivisions.front() > 2);
  CHECK(bounds_hold(two));
}

TEST_CASE("trident valuations block two-agent EF1_outer") {
  for (const Multigraph& g : {star_graph(3), parse("a b\nb c\nc a\na x\nb y\nc z\n"),
                              parse("o p\np q\no r\no s\ns t\n")}) {
    const auto t = find_trident(g);
    REQUIRE(t);
    const AdditiveValuation v = trident_valuation(g, *t);
    for (const Rational& x : v.values()) CHECK((x == 0 || x == 1));
    const OracleResult r = exists_efk_outer(g, ValuationProfile::common(Valuation(v), 2), 1);
    CHECK_FALSE(r.allocation);
  }
}
