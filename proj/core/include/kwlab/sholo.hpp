#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "kwlab/derived_graphs.hpp"
#include "kwlab/linalg.hpp"

namespace kwlab {

// Complex value per midpoint z_k, indexed by edge k.
struct MidpointFunction {
  std::vector<cplx> value;

  static MidpointFunction zero(const EmbeddedGraph& g);
  cplx operator()(int edge) const { return value[edge]; }
  double norm() const;  // Euclidean
  MidpointFunction operator*(cplx s) const;
};

// Multiplication by exp(i pi / 4).
MidpointFunction eighth_turn(const MidpointFunction& F);

// Orthogonal projection of z onto the real line u R.
cplx project(cplx z, cplx u);

enum class RootBranch { principal, opposite };

// Max over e leaving v of the mismatch between the projection of F(z_e) onto
// [i exp(i(a_e + theta_e))]^{-1/2} and that of F(z_{R e}) onto
// [i exp(i(a_{R e} - theta_{R e}))]^{-1/2}, rotated by exp(i(beta_e - theta_e - theta_{R e})/2).
double sholo_residual(const EmbeddedGraph& g, const MidpointFunction& F, int v,
                      RootBranch branch = RootBranch::principal);
std::vector<double> sholo_residuals(const EmbeddedGraph& g, const MidpointFunction& F);

// Dart function (SF)(e) = sin(theta_e/2) Pr(F(z_e); exp(-i a_e/2)).
std::vector<cplx> map_S(const EmbeddedGraph& g, const MidpointFunction& F);
// (f(e) + f(rev e)) / sin(theta_e/2); throws ValidationError when some theta_e = 0.
MidpointFunction S_inverse(const EmbeddedGraph& g, std::span<const cplx> f);
// Pointwise projection of a dart function onto the lines exp(-i a_e/2) R.
std::vector<cplx> project_to_lines(const EmbeddedGraph& g, std::span<const cplx> f);

struct SpinorImages {
  RVector T;                // sum over the star of o(e) with the epsilon signs
  CVector T_prime;          // exp(i theta_B / 2) T
  RVector T_tilde;          // Re(i D_e^{1/2} exp(-i theta_e/2) F(z_e))
  CVector T_tilde_prime;    // i D_e^{1/2} Pr(F(z_e); i exp(-i(a_e - theta_e)/2))
};

// All four maps, with black vertex B(e) indexed by dart e.
SpinorImages spinor_maps(const CGraph& c, const MidpointFunction& F);

// Norms whose vanishing characterises "exp(i pi/4) F is s-holomorphic".
struct KernelNorms {
  double sholo = 0.0;      // max vertex residual of exp(i pi/4) F
  double kac_ward = 0.0;   // |KW S F|
  double kasteleyn = 0.0;  // |K^omega T F|
  std::optional<double> dirac;  // |dbar T' F|, critical isoradial graphs only
};

KernelNorms kernel_norms(const CGraph& c, const MidpointFunction& F);

enum class ObservableBackend { inverse_column, combinatorial };

// exp(i pi/4) S^{-1} f with f(e) = D_{rev e0}^{-1/2} F(e, rev e0), F the normalised
// Kac-Ward inverse; the phase puts f in the line field.
// It is s-holomorphic around every vertex not adjacent to e0.
MidpointFunction observable(const EmbeddedGraph& g, int e0, ObservableBackend backend);

// exp(i pi/4) S^{-1} p for a real basis p of ker KW (trivial cochain) inside the
// line field; a kernel vector is kept when its projection stays in the kernel within tol.
std::vector<MidpointFunction> kernel_observables(const EmbeddedGraph& g, double tol = 1e-7);

// Discrete integral of G^2 on Lambda = vertices followed by faces.
struct HFunction {
  std::vector<double> value;  // NaN outside the domain
  std::vector<Shift> lift;    // lattice translate of the copy each value lives on
  int base_point = 0;
  double closure_residual = 0.0;      // worst non-homological loop mismatch
  std::array<int, 2> worst_loop{-1, -1};  // Lambda nodes of the worst closing relation
  std::array<double, 2> periods{0.0, 0.0};  // along the two lattice generators
  double max_sholo_residual = 0.0;    // of G at the primal vertices in the domain

  bool defined(int node) const;
  // H(b) - H(a) for the copy of b sitting at lift(a) + shift.
  double difference(int a, int b, const Shift& shift) const;
};

// Face with negative total turning (the unbounded one), or -1 on a torus.
int outer_face(const EmbeddedGraph& g);

// G must be s-holomorphic itself (no extra rotation). Nodes of Lambda listed in
// `excluded` are left out. Throws ValidationError on planar input whose loops fail
// to close within tol, relative to the largest increment.
HFunction integrate_square(const EmbeddedGraph& g, const MidpointFunction& G,
                           std::span<const int> excluded = {}, double tol = 1e-9);

// Worst mismatch of H(t e) - H(o e) against Im(2 cos(theta) D_e G^2) over primal
// edges, and of the dual analogue over dual edges, inside the domain.
struct IncrementCheck {
  double primal = 0.0;
  double dual = 0.0;
};
IncrementCheck check_increments(const EmbeddedGraph& g, const MidpointFunction& G, const HFunction& H);

// Paper sign convention: (Delta f)(v) = mu_v^{-1} sum tan(theta_e) (f(v) - f(w)).
// Entries are NaN unless the node, its neighbours and the vertices and faces around
// it all lie in the domain.
struct HLaplacian {
  std::vector<double> primal;  // per vertex
  std::vector<double> dual;    // per face
};
HLaplacian laplacian_of_H(const EmbeddedGraph& g, const HFunction& H);

}  // namespace kwlab
