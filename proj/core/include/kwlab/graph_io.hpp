#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kwlab/surface_graph.hpp"

namespace kwlab {

// Graph JSON: surface, optional lattice, vertices {id,x,y}, edges {id,u,v,shift?}
// with exactly one of x / theta / J per edge (J needs a top-level beta), and an
// optional "dart_angles" object mapping dart ids (2k, 2k+1 for edge k) to radians.
EmbeddedGraph parse_graph_json(const std::string& text);
EmbeddedGraph read_graph_file(const std::string& path);

// The graph together with the Ising data it was built from, when given as J and beta.
struct GraphDocument {
  EmbeddedGraph graph;
  std::optional<std::vector<double>> couplings;
  std::optional<double> beta;
};
GraphDocument parse_graph_document(const std::string& text);
GraphDocument read_graph_document(const std::string& path);

// Writes the graph back with per-edge x (or J and beta when known); vertex ids are preserved.
std::string graph_to_json(const EmbeddedGraph& g, bool with_dart_angles = false);
std::string graph_to_json(const GraphDocument& d, bool with_dart_angles = false);

}  // namespace kwlab
