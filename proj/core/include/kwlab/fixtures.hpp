#pragma once

#include "kwlab/surface_graph.hpp"

namespace kwlab::fixtures {

// Critical weight of the isotropic square lattice, tan(pi/8).
inline const double kSquareCritical = std::numbers::sqrt2 - 1.0;

EmbeddedGraph single_edge(double x);
// (0,0), (1,0), (0,1).
EmbeddedGraph triangle(double x);
EmbeddedGraph triangle(std::span<const double> x);
// Unit square 4-cycle.
EmbeddedGraph four_cycle(double x);
// Straight path on n >= 2 vertices.
EmbeddedGraph path(int n, double x);
// Planar n x m grid with unit spacing.
EmbeddedGraph square_patch(int n, int m, double x);

// n x m square lattice on the torus R^2 / (nZ x mZ). Vertex (i, j) has index
// i + n j; for each vertex the horizontal edge comes before the vertical one.
// Horizontal edges carry weight xh, vertical ones xv.
EmbeddedGraph square_torus(int n, int m, double xh, double xv);
// 1x1 rectangular lattice: edge 0 horizontal (x), edge 1 vertical (y).
EmbeddedGraph rect_torus(double x, double y);
// Honeycomb fundamental domain: 2 vertices, 3 edges with weights x[0..2].
EmbeddedGraph honeycomb_torus(std::span<const double> x);

}  // namespace kwlab::fixtures
