#pragma once

#include "graphfair/multigraph.hpp"
#include "graphfair/rational.hpp"
#include "graphfair/valuation.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace graphfair {

// Bundle i belongs to agent i. Bundles are kept sorted.
struct Allocation {
  std::vector<VertexSet> bundles;

  Allocation() = default;
  explicit Allocation(std::vector<VertexSet> b);

  std::size_t agent_count() const noexcept { return bundles.size(); }
  bool has_empty_bundle() const;
  bool operator==(const Allocation&) const = default;
};

// Throws InputError unless the bundles partition 0..universe-1.
void validate_partition(const Allocation& a, std::size_t universe);

bool is_contiguous(const Multigraph& g, std::span<const VertexId> set);
bool is_contiguous(const Multigraph& g, const Allocation& a);

bool is_ef(const Allocation& a, const ValuationProfile& p);
bool is_ef_up_to_set(const Allocation& a, const ValuationProfile& p, std::span<const VertexId> hidden);

struct PairEnvy {
  std::size_t envier;
  std::size_t envied;
  Rational envy;                    // value of the other bundle minus own value
  std::optional<VertexSet> witness;  // smallest removal set that clears it
};

struct EnvyReport {
  std::size_t k = 0;
  bool efk_outer = true;
  bool has_empty_bundle = false;
  std::vector<Rational> own_values;
  std::vector<PairEnvy> pairs;  // ordered pairs with i != j
};

// Throws InputError when a bundle is not contiguous.
EnvyReport envy_report(const Multigraph& g, const Allocation& a, const ValuationProfile& p, std::size_t k);
bool is_efk_outer(const Multigraph& g, const Allocation& a, const ValuationProfile& p, std::size_t k);

struct EnumerationCaps {
  std::size_t max_vertices = 24;
  std::size_t max_agents = 6;
};

struct EnumerationOptions {
  bool nonempty_only = false;
};

// Calls `visit` once per ordered contiguous allocation; stops when it returns
// false. Returns the number of allocations visited.
std::uint64_t for_each_contiguous_allocation(const Multigraph& g, std::size_t agents,
                                             const std::function<bool(const Allocation&)>& visit,
                                             EnumerationCaps caps = {}, EnumerationOptions options = {});
std::vector<Allocation> enumerate_contiguous_allocations(const Multigraph& g, std::size_t agents,
                                                         EnumerationCaps caps = {},
                                                         EnumerationOptions options = {});

struct OracleResult {
  std::optional<Allocation> allocation;
  std::uint64_t allocations_checked = 0;  // ordered allocations covered
  std::uint64_t partitions_checked = 0;   // unordered partitions visited
  bool symmetry_reduced = false;
  bool exact = true;
};

// Searches every contiguous allocation; Absent carries the full count.
OracleResult exists_efk_outer(const Multigraph& g, const ValuationProfile& p, std::size_t k,
                              EnumerationCaps caps = {});

// Lines `agent vertex`, agents 1-based; `#` lines are ignored.
Allocation parse_allocation(std::istream& in, const Multigraph& g, std::size_t agents);
Allocation read_allocation_file(const std::string& path, const Multigraph& g, std::size_t agents);
void write_allocation(std::ostream& out, const Multigraph& g, const Allocation& a);
// Comment block readable back by parse_allocation.
void write_envy_report(std::ostream& out, const Multigraph& g, const EnvyReport& r);

}  // namespace graphfair
