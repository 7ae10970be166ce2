#pragma once

#include "graphfair/blocks.hpp"
#include "graphfair/fairness.hpp"
#include "graphfair/multigraph.hpp"
#include "graphfair/rational.hpp"
#include "graphfair/valuation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace graphfair {

struct DegreeSequence {
  std::vector<std::size_t> counts;  // counts[i-1] = number of vertices of degree i
  std::size_t edges = 0;
  std::size_t sigma3 = 0;  // vertices of degree >= 3
  bool parity_blocked = false;

  long excess() const { return static_cast<long>(edges) - static_cast<long>(sigma3); }
  std::string to_string() const;  // e.g. "<0,0,2>"
};

// A pure cycle (one vertex with one loop) has the empty sequence.
DegreeSequence degree_sequence(const Multigraph& skeleton);

enum class StringableKind { Interval, Circle, Lollipop, Figure8, Handcuffs, Theta };
std::string to_string(StringableKind kind);

struct Classification {
  bool stringable = false;
  std::optional<StringableKind> kind;
  long excess = 0;  // edges minus sigma3
  DegreeSequence sequence;
};

// Smooths first; throws InputError on disconnected or empty input.
Classification classify_stringable(const Multigraph& g);

// One element of a cutset: a single vertex, or a closed part (vertex set plus
// all edges among those vertices).
struct CutsetPart {
  std::vector<VertexId> vertices;
  bool closed = false;
};

struct CutsetWitness {
  std::vector<CutsetPart> parts;
  std::size_t components = 0;
  long gap = 0;
  // Components as their vertices and edges left after removing the parts.
  std::vector<std::vector<VertexId>> component_vertices;
  std::vector<std::vector<EdgeId>> component_edges;
  // Contact conditions for closed parts: each component touches a part at no
  // more than one point, and a closed part touches exactly three components at
  // three distinct points.
  bool contact_conditions = true;
  std::vector<std::string> notes;

  std::size_t cardinality() const { return parts.size(); }
};

// Counts components of G minus the parts (open edges count as points).
CutsetWitness gap(const Multigraph& g, std::vector<CutsetPart> parts);
CutsetWitness gap(const Multigraph& g, const std::vector<VertexId>& singletons);

struct Threshold {
  std::optional<std::size_t> value;  // nullopt means Infinite
  std::optional<CutsetWitness> witness;  // ids refer to the smoothed (or subdivided) search graph
  std::vector<std::string> part_names;  // closed parts in brackets
};

std::string to_string(const Threshold& t);

enum class CutsetSearch {
  BranchVertices,      // subsets of degree >= 3 skeleton vertices
  SubdividedExhaustive  // every vertex subset of the once-subdivided skeleton
};

inline constexpr std::size_t kExhaustiveCutsetVertexCap = 20;

Threshold gap_threshold(const Multigraph& g, CutsetSearch mode = CutsetSearch::BranchVertices);

struct GeneralizedOptions {
  bool relax_connectivity = false;
  std::size_t max_part_size = 8;
  std::size_t max_skeleton_vertices = 10;
};

Threshold generalized_gap_threshold(const Multigraph& g, const GeneralizedOptions& options = {});

struct GapValuation {
  Multigraph graph;
  AdditiveValuation valuation;
  std::vector<Rational> component_values;
};

// Discrete form of the component valuation for a gap >= 2 cutset of a
// skeleton: every open edge gets `per_edge` subdivision vertices, the last
// component totals n - t and the others (t+1)/(t+k-1).
GapValuation gap_valuation(const Multigraph& skeleton, const CutsetWitness& x, std::size_t agents,
                           std::size_t per_edge = 1);

enum class Verification { Pending, CertifiedAbsent, Refuted, UnverifiedAtDeskScale };
std::string to_string(Verification v);

struct NegativeInstance {
  Multigraph skeleton;
  CutsetWitness cutset;
  std::size_t agents = 0;
  std::size_t k = 0;
  Rational envy_bound;                  // b
  std::vector<EdgeId> valued_edges;     // skeleton edge ids carrying value
  std::vector<Rational> edge_values;    // mu per valued edge, unscaled
  std::vector<std::size_t> subdivisions;  // J per valued edge
  Multigraph graph;                     // H
  AdditiveValuation valuation;          // integer-scaled
  Rational scale;                       // integer value = scale * unscaled value
  Verification status = Verification::Pending;
  std::optional<OracleResult> certificate;
};

NegativeInstance negative_instance(const Multigraph& skeleton, const CutsetWitness& x, std::size_t agents,
                                   std::size_t k);
// Runs the oracle when within caps; otherwise marks the instance unverified.
void certify(NegativeInstance& instance, EnumerationCaps caps = {});
// Exact checks of the construction: J > k, per-vertex value < b/k, edge totals.
bool bounds_hold(const NegativeInstance& instance);

// Binary common valuation blocking two-agent EF1_outer: 1 on each trident
// contact and on one neighbour of it inside its arm.
AdditiveValuation trident_valuation(const Multigraph& g, const Trident& t);

namespace skeletons {
Multigraph interval();
Multigraph circle();
Multigraph lollipop();
Multigraph figure8();
Multigraph handcuffs();
Multigraph theta();
Multigraph y_star();
Multigraph friendly_diamond();
Multigraph delta_diamond();
Multigraph lips();
}  // namespace skeletons

}  // namespace graphfair
