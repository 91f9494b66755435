#pragma once

#include <vector>

#include "kwlab/derived_graphs.hpp"
#include "kwlab/linalg.hpp"

namespace kwlab {

// KW(e,e) = 1, KW(e,e') = -phi(e) x_e exp(i turning(e,e')/2) when e' leaves t(e) and e' != rev(e).
LabeledMatrix kac_ward(const EmbeddedGraph& g, const Cochain& phi);
// Same with every weight multiplied by `scale`.
LabeledMatrix kac_ward(const EmbeddedGraph& g, const Cochain& phi, double scale);

enum class Orientation { unitary, reduced };  // omega_tilde or the +-1 omega

// White x black matrix with entries phi_C * orientation * weight, summed over parallel C-edges.
LabeledMatrix kasteleyn(const CGraph& c, std::span<const cplx> phi_c, Orientation o);
LabeledMatrix kasteleyn(const CGraph& c, const Cochain& phi, Orientation o);

// (Lf)(v) = mu_v^{-1} sum tan(theta_e) (f(v) - phi(e) f(w)), mu_v = 1/2 sum sin(2 theta_e).
LabeledMatrix laplacian(const EmbeddedGraph& g, const Cochain& phi);

// Bipartite graph with rhombus geometry, as used by the Dirac operators.
struct RhombusEdge {
  int white = 0;
  int black = 0;
  double direction = 0.0;   // angle of the vector white -> black
  double half_angle = 0.0;  // rhombus half-angle; the weight is its sine
};

struct RhombicGraph {
  GroundSet white_set = GroundSet::white;
  GroundSet black_set = GroundSet::black;
  int num_white = 0;
  int num_black = 0;
  std::vector<RhombusEdge> edges;
  std::vector<double> mu_white;  // 1/2 sum sin(2 half_angle)
  std::vector<double> mu_black;
};

// White = W(e), black = B(e) indexed by dart; edge order matches CGraph::edges().
RhombicGraph rhombic_c(const CGraph& c);
// White = midpoints, black = Lambda; edge order matches DGraph::edges().
RhombicGraph rhombic_d(const DGraph& d);

struct DiracPair {
  LabeledMatrix dbar;  // white x black
  LabeledMatrix d;     // black x white
};

// phi is given per edge in the white -> black direction; x_white / x_black are
// reference field angles at each vertex (empty means zero).
DiracPair dirac(const RhombicGraph& r, std::span<const cplx> phi, std::span<const double> x_white = {},
                std::span<const double> x_black = {});
// [[0, -d], [dbar, 0]] on black (+) white.
CMatrix dirac_block(const DiracPair& p);

// Laplacian of the M graph with tan(half_angle) conductances and its mu.
LabeledMatrix m_laplacian(const MGraph& m, std::span<const cplx> phi = {});
// (Af)(v) = mu_v^{-1} sum eps(e) phi(e) f(v'); phi per M-edge in its +1 direction.
LabeledMatrix skew_adjacency(const MGraph& m, std::span<const cplx> phi = {});

struct TrackedRoot {
  double value = 0.0;
  int steps = 0;
};

// Branch of det KW^phi(t x)^{1/2} continued from 1 at t = 0 to t = 1; phi must be +-1 valued.
// When det KW vanishes near t = 1 the value is extrapolated from t < 1.
// Throws ValidationError when the branch stays ambiguous after 2^14 refinements.
TrackedRoot sqrt_det_tracked(const EmbeddedGraph& g, const Cochain& phi);

}  // namespace kwlab
