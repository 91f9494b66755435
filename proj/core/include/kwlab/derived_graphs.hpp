#pragma once

#include <vector>

#include "kwlab/surface_graph.hpp"

namespace kwlab {

// ------------------------------------------------------------------ C graph
//
// Every dart e of the base graph contributes a white corner W(e) and a black
// corner B(e) (both indexed by e) and three edges, stored at 3e + kind:
//   perpendicular(e): W(e) - B(e),        weight cos(theta_e)
//   parallel(e):      W(e) - B(rev e),    weight sin(theta_e)
//   corner(e):        W(e) - B(R(e)),     weight 1

enum class CEdgeKind { perpendicular = 0, parallel = 1, corner = 2 };

struct CEdge {
  CEdgeKind kind = CEdgeKind::perpendicular;
  int dart = 0;
  int white = 0;
  int black = 0;
  double weight = 0.0;
  cplx omega_tilde{1.0, 0.0};
  int omega = 1;
};

class CGraph {
 public:
  explicit CGraph(EmbeddedGraph base);

  const EmbeddedGraph& base() const { return base_; }
  int num_white() const { return base_.num_darts(); }
  int num_black() const { return base_.num_darts(); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<CEdge>& edges() const { return edges_; }
  const CEdge& edge(int dart, CEdgeKind kind) const { return edges_[3 * dart + static_cast<int>(kind)]; }

  // D_e^{1/2} = exp(i a_e / 2) with a_e in (-pi, pi].
  cplx half_direction(int dart) const { return base_.direction_sqrt(dart); }
  // q_e D_{R(e)}^{-1/2} D_e^{1/2}, always +-1.
  int epsilon(int dart) const { return epsilon_[dart]; }
  // Gauge factor d with d^2 = D^{-1}; the same at W(e) and B(e).
  cplx gauge(int dart) const { return std::conj(half_direction(dart)); }

  std::vector<int> omegas() const;

 private:
  EmbeddedGraph base_;
  std::vector<CEdge> edges_;
  std::vector<int> epsilon_;
};

// phi on the parallel edge left of e (i.e. parallel(e)), 1 on the others.
std::vector<cplx> lift_to_c(const CGraph& c, const Cochain& phi);

struct CFace {
  std::vector<int> edges;  // C-edge indices along the boundary
  int expected_sign = 1;   // (-1)^{|boundary|/2 + 1}
};

// Faces of C: one rectangle per base edge, one 2deg(v)-gon per base vertex,
// one 2k-gon per base face of length k.
std::vector<CFace> c_faces(const CGraph& c);

struct KasteleynReport {
  std::vector<int> face_product;
  std::vector<int> failing_faces;
  // omega_tilde around homology generators of a torus base; squares should be 1.
  std::vector<cplx> generator_products;
  bool ok = true;
};

KasteleynReport validate_kasteleyn(const CGraph& c);
KasteleynReport validate_kasteleyn(const CGraph& c, std::span<const int> omega);

// Map sending C built from the dual graph onto C built from g:
// W*(e) -> B(e) and B*(e) -> W(rev e); returns, for each C*-edge, the C-edge it lands on.
std::vector<int> dual_c_isomorphism(const CGraph& c, const CGraph& c_dual);

// ------------------------------------------------------------------ D graph
//
// Lambda = primal vertices followed by faces (dual vertices); diamond = edges.
// Edge k has four half-edges from its midpoint z_k, stored at 4k + j:
//   j = 0 -> t(e), j = 1 -> face(e), j = 2 -> o(e), j = 3 -> face(rev e)
// with e = 2k; primal half-edges have weight sin(theta), dual ones cos(theta).

struct DEdge {
  int midpoint = 0;
  int lambda = 0;
  bool primal = true;
  double direction = 0.0;   // angle of z -> lambda
  double half_angle = 0.0;  // theta or theta*
  double weight = 0.0;
};

class DGraph {
 public:
  explicit DGraph(EmbeddedGraph base);

  const EmbeddedGraph& base() const { return base_; }
  int num_lambda() const { return base_.num_vertices() + base_.num_faces(); }
  int num_midpoints() const { return base_.num_edges(); }
  int face_vertex(int f) const { return base_.num_vertices() + f; }
  const std::vector<DEdge>& edges() const { return edges_; }

 private:
  EmbeddedGraph base_;
  std::vector<DEdge> edges_;
};

struct SplitCochain {
  Cochain primal;
  Cochain dual;
};

// phi_D is given on the half-edges oriented from the midpoint; returns
// phi(e) = phi_D(z, t(e)) / phi_D(z, o(e)) and phi*(e*) = phi_D(z, face(e)) / phi_D(z, face(rev e)).
SplitCochain split_cochain(const DGraph& d, std::span<const cplx> phi_d);

// ------------------------------------------------------------------ M graph
//
// M is dual to D: vertex m_e is the corner of face(e) at o(e) between e and R(e),
// which contains W(e) and B(R(e)). Its edges correspond to the non-corner edges of C.

struct MEdge {
  CEdgeKind kind = CEdgeKind::perpendicular;
  int dart = 0;
  int from = 0;  // epsilon = +1 from `from` to `to`
  int to = 0;
  double half_angle = 0.0;
};

class MGraph {
 public:
  explicit MGraph(const CGraph& c);

  int num_vertices() const { return static_cast<int>(mu_.size()); }
  const std::vector<MEdge>& edges() const { return edges_; }
  // Mean of the measures of the two merged C-vertices.
  double mu(int v) const { return mu_[v]; }
  int vertex_of_white(int dart) const { return dart; }
  int vertex_of_black(int dart) const { return black_to_m_[dart]; }

 private:
  std::vector<MEdge> edges_;
  std::vector<double> mu_;
  std::vector<int> black_to_m_;
};

// True when beta_e = theta_e + theta_{R(e)} for every dart.
bool is_isoradial(const EmbeddedGraph& g, double tol = 1e-9);

}  // namespace kwlab
