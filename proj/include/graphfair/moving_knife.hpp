#pragma once

#include "graphfair/fairness.hpp"
#include "graphfair/lips.hpp"
#include "graphfair/multigraph.hpp"
#include "graphfair/valuation.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphfair {

// Positions below are 1-based indices into an Enumeration P = (v_1..v_m).

// Indices a in [first, last] with v(P(first..a)) >= v(P(a+1..last)) and
// v(P(a..last)) >= v(P(first..a-1)).
std::vector<std::size_t> lumpy_ties(const Valuation& v, const Enumeration& p, std::size_t first,
                                    std::size_t last);
std::vector<std::size_t> lumpy_ties(const Valuation& v, const Enumeration& p);

enum class AgentRole { Left, Middle, Right };

struct LumpyAnalysis {
  std::size_t first = 1, last = 0;
  std::vector<std::vector<std::size_t>> ties;
  std::vector<std::size_t> leftmost;
  std::size_t r = 0;
  std::vector<AgentRole> roles;
};

// r is the median of the agents' leftmost ties. Throws InvariantViolation when
// an agent has no tie or the role counts are impossible.
LumpyAnalysis median_lumpy_tie(const Enumeration& p, const ValuationProfile& three, std::size_t first,
                               std::size_t last);
LumpyAnalysis median_lumpy_tie(const Enumeration& p, const ValuationProfile& three);

// Some agent has r as a tie while, of the other two, one has a tie <= r and the other a tie >= r.
bool is_median_lumpy_tie(std::size_t r, const LumpyAnalysis& analysis);

struct PairSplit {
  std::array<std::size_t, 2> agents;
  std::array<VertexSet, 2> bundles;
};

// Splits P(first..last) at v_r between two agents of a three-agent profile.
PairSplit lumpy_allocation(std::array<std::size_t, 2> pair, std::size_t r, const Enumeration& p,
                           const ValuationProfile& three, std::size_t first, std::size_t last);

enum class KnifeStep { Step1, Step2a, Step2b, Step2c, Step3 };
enum class KnifeForm { I, II };

std::string to_string(KnifeStep step);

struct TraceEntry {
  std::size_t stage = 1;
  KnifeStep step;
  std::size_t l, r;
  std::vector<std::size_t> shouters;  // 0-based agents
};

struct KnifeState {
  VertexSet endowment;
  Enumeration order;
  std::size_t l = 0, r = 0;
  VertexSet left, middle, right;
  KnifeStep step = KnifeStep::Step1;
  bool terminated = false;
  bool suspended = false;
  std::optional<KnifeForm> form;
  std::array<VertexId, 2> hidden{-1, -1};
  std::vector<TraceEntry> trace;
  // Lemma inequalities that failed on a degenerate start (see a_discrete).
  std::vector<std::string> lemma_notes;

  std::string dump() const;
};

struct KnifeOptions {
  bool verify = true;
  // Stop once l reaches this value without termination.
  std::optional<std::size_t> suspend_at;
  bool reject_nonmonotone = true;
  std::size_t monotone_trials = 256;
  std::uint64_t monotone_seed = 0;
  std::size_t stage = 1;
};

struct KnifeRun {
  std::optional<Allocation> allocation;  // bundles over I and P, indexed by agent
  KnifeState state;
};

// Discrete moving-knife procedure for three agents with left endowment I.
// In verify mode the entry conditions are checked (InputError when they fail)
// and the shouter lemma inequalities are asserted. Those inequalities rely on
// no agent weakly preferring I to both sides initially; when only the strict
// form holds, failures are recorded in lemma_notes instead of thrown.
KnifeRun a_discrete(const VertexSet& endowment, const Enumeration& p, std::size_t r0,
                    const ValuationProfile& three, const KnifeOptions& options = {});

struct LipsRun {
  Allocation allocation;
  std::size_t stage = 1;
  KnifeState state;
  std::vector<TraceEntry> trace;
};

// Contiguous EF1_outer allocation for three agents on a lips-class graph,
// certified before return. Throws InputError when G is not lips-class.
LipsRun lips_ef1_three(const Multigraph& g, const ValuationProfile& three, const KnifeOptions& options = {});

// Cut-and-choose over a bipolar numbering; Absent iff none exists.
std::optional<Allocation> two_agent_ef1(const Multigraph& g, const ValuationProfile& two,
                                        const KnifeOptions& options = {});

}  // namespace graphfair
