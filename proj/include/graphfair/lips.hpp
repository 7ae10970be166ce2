#pragma once

#include "graphfair/multigraph.hpp"

#include <optional>
#include <vector>

namespace graphfair {

// Labels of a graph whose skeleton is the lips multigraph: a and c have degree
// 3, b has degree 4, a-b and b-c are doubled and a-c is single.
//
// Each path list holds interior vertices only, ordered from its first named
// endpoint. A marker whose path is empty falls back to the far branch vertex.
struct LipsLabeling {
  VertexId a = -1, b = -1, c = -1;
  VertexId a1 = -1, b1 = -1, b2 = -1, c1 = -1;
  std::vector<VertexId> top_left;      // a -> b
  std::vector<VertexId> middle_left;   // a -> b
  std::vector<VertexId> middle_right;  // b -> c
  std::vector<VertexId> top_right;     // b -> c
  std::vector<VertexId> bottom;        // a -> c
};

std::optional<LipsLabeling> lips_labeling(const Multigraph& g);

// A path X attached to a remainder graph whose bipolar numbering is Y.
struct HandleDecomposition {
  Enumeration x;
  Enumeration y;
};

bool is_handle_decomposition(const Multigraph& g, const HandleDecomposition& h);

// Vertex orders for the three stages of the lips driver.
struct LipsStagePlan {
  Enumeration x1, y1;
  Enumeration x2, y2;
  Enumeration x3, x3_alt;
};

LipsStagePlan lips_stage_plan(const Multigraph& g, const LipsLabeling& lab);

}  // namespace graphfair
