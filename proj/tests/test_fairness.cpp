#include "graphfair/error.hpp"
#include "graphfair/fairness.hpp"
#include "graphfair/tangle_analysis.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace graphfair;
using namespace graphfair::testing;

namespace {

ValuationProfile uniform(std::size_t universe, std::size_t agents) {
  return ValuationProfile::common(Valuation(AdditiveValuation(std::vector<Rational>(universe, 1))), agents);
}

}  // namespace

TEST_CASE("contiguity") {
  const Multigraph p3 = path_graph(3);
  CHECK_FALSE(is_contiguous(p3, VertexSet{0, 2}));
  CHECK(is_contiguous(p3, VertexSet{}));
  CHECK(is_contiguous(p3, VertexSet{1, 2}));
  const Multigraph lips = lips_graph({2, 1, 1, 1, 1});
  const VertexSet top{lips.vertex("a"), lips.vertex("tl1"), lips.vertex("tl2"), lips.vertex("b")};
  CHECK(is_contiguous(lips, top));
}

TEST_CASE("envy-freeness and hiding sets") {
  const ValuationProfile same = uniform(4, 2);
  CHECK(is_ef(Allocation({{0, 1}, {2, 3}}), same));

  const ValuationProfile p = ValuationProfile::common(Valuation(AdditiveValuation({2, 1})), 2);
  const Allocation a({{0}, {1}});
  CHECK_FALSE(is_ef(a, p));
  CHECK(is_ef_up_to_set(a, p, VertexSet{0}));
}

TEST_CASE("EFk_outer") {
  const Multigraph p3 = path_graph(3);
  const ValuationProfile p = uniform(3, 2);
  CHECK(is_efk_outer(p3, Allocation({{0, 1}, {2}}), p, 1));
  CHECK(is_efk_outer(p3, Allocation({{0, 1, 2}, {}}), p, 3));
  CHECK_FALSE(is_efk_outer(p3, Allocation({{0, 1, 2}, {}}), p, 1));

  // Removing the middle vertex would clear the envy but splits the bundle.
  const Multigraph p5 = path_graph(5);
  const ValuationProfile lumpy = ValuationProfile::common(Valuation(AdditiveValuation({1, 1, 1, 5, 1})), 2);
  const Allocation split({{0, 1}, {2, 3, 4}});
  const EnvyReport r = envy_report(p5, split, lumpy, 1);
  CHECK_FALSE(r.efk_outer);
  CHECK(is_efk_outer(p5, Allocation({{0, 1, 2}, {3, 4}}), lumpy, 1));
  CHECK_THROWS_AS(envy_report(p5, Allocation({{0, 2}, {1, 3, 4}}), lumpy, 1), InputError);
}

TEST_CASE("envy reports name minimal witnesses") {
  const Multigraph p4 = path_graph(4);
  const ValuationProfile p = ValuationProfile::common(Valuation(AdditiveValuation({3, 1, 1, 1})), 2);
  const EnvyReport r = envy_report(p4, Allocation({{0}, {1, 2, 3}}), p, 2);
  CHECK(r.efk_outer);
  CHECK(r.own_values == std::vector<Rational>{3, 3});
  for (const PairEnvy& pe : r.pairs) CHECK(pe.envy <= 0);

  const EnvyReport worse = envy_report(p4, Allocation({{3}, {0, 1, 2}}), p, 2);
  REQUIRE(worse.pairs.size() == 2);
  const PairEnvy& first = worse.pairs.front();
  CHECK(first.envier == 0);
  CHECK(first.envy == 4);
  REQUIRE(first.witness);
  CHECK(first.witness->size() == 2);
  CHECK(std::find(first.witness->begin(), first.witness->end(), 0) != first.witness->end());
}

TEST_CASE("allocation enumeration") {
  CHECK(enumerate_contiguous_allocations(path_graph(2), 2).size() == 4);
  CHECK(enumerate_contiguous_allocations(path_graph(4), 1).size() == 1);
  CHECK(enumerate_contiguous_allocations(cycle_graph(3), 2, {}, {.nonempty_only = true}).size() == 6);

  // Ordered interval partitions of a path into 3 possibly empty parts.
  const auto all = enumerate_contiguous_allocations(path_graph(5), 3);
  std::set<std::vector<VertexSet>> distinct;
  for (const auto& a : all) {
    CHECK(is_contiguous(path_graph(5), a));
    distinct.insert(a.bundles);
  }
  CHECK(distinct.size() == all.size());

  CHECK_THROWS_AS(enumerate_contiguous_allocations(path_graph(30), 2), CapExceeded);
}

TEST_CASE("oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Multigraph g = path_graph(7);
    const ValuationProfile p = random_profile(7, 3, rng);
    const OracleResult r = exists_efk_outer(g, p, 1);
    REQUIRE(r.allocation);
    CHECK(is_efk_outer(g, *r.allocation, p, 1));
  }

  const OracleResult single = exists_efk_outer(path_graph(4), uniform(4, 1), 1);
  REQUIRE(single.allocation);
  CHECK(single.allocation->bundles.front() == VertexSet{0, 1, 2, 3});

  const Threshold t = gap_threshold(skeletons::y_star());
  REQUIRE(t.witness);
  const NegativeInstance inst = negative_instance(skeletons::y_star(), *t.witness, 2, 1);
  const ValuationProfile common = ValuationProfile::common(Valuation(inst.valuation), 2);
  const OracleResult absent = exists_efk_outer(inst.graph, common, 1);
  CHECK_FALSE(absent.allocation);
  CHECK(absent.allocations_checked == enumerate_contiguous_allocations(inst.graph, 2).size());
  for (const auto& a : enumerate_contiguous_allocations(inst.graph, 2)) CHECK_FALSE(is_efk_outer(inst.graph, a, common, 1));
}

TEST_CASE("oracle agrees with brute force on small graphs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Multigraph g = random_connected(6, trial % 3, false, rng);
    const std::size_t agents = 2 + trial % 2;
    const ValuationProfile p = trial % 4 == 0 ? ValuationProfile::common(Valuation(random_additive(6, rng, 0, 3)), agents)
                                               : random_profile(6, agents, rng);
    bool brute = false;
    for (const auto& a : enumerate_contiguous_allocations(g, agents)) brute = brute || is_efk_outer(g, a, p, 1);
    CHECK(exists_efk_outer(g, p, 1).allocation.has_value() == brute);
  }
}

TEST_CASE("allocation files round-trip") {
  const Multigraph g = path_graph(3);
  const Allocation a({{0, 1}, {2}});
  std::ostringstream out;
  write_allocation(out, g, a);
  write_envy_report(out, g, envy_report(g, a, uniform(3, 2), 1));
  std::istringstream in(out.str());
  CHECK(parse_allocation(in, g, 2) == a);

  std::istringstream missing("1 v1\n2 v2\n");
  CHECK_THROWS_AS(parse_allocation(missing, g, 2), InputError);
  std::istringstream twice("1 v1\n2 v1\n1 v2\n2 v3\n");
  CHECK_THROWS_AS(parse_allocation(twice, g, 2), InputError);
}
