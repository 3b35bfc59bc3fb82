#pragma once

#include "tgk/temporal_graph.hpp"

namespace fixture {

inline constexpr tgk::VertexId a = 0, b = 1, c = 2;

/// Three vertices, edges {a,c}@2, {a,b}@3, {b,c}@7. Vertex b carries the
/// odd label out unless `red` names another vertex.
inline tgk::TemporalGraph triangle(tgk::VertexId red = b) {
  std::vector<tgk::LabelTimeline> labels(3, tgk::LabelTimeline("black"));
  labels[red] = tgk::LabelTimeline("red");
  return tgk::TemporalGraph(3, {{a, c, 2}, {a, b, 3}, {b, c, 7}}, labels);
}

}  // namespace fixture
