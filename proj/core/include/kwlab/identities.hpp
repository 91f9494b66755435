#pragma once

#include "kwlab/operators.hpp"

namespace kwlab {

// Dart x dart factors: (qR)(e, R(e)) = q_e and (i phi x J)(e, rev e) = i phi(e) x_e.
CMatrix rotation_factor(const EmbeddedGraph& g);
CMatrix reversal_factor(const EmbeddedGraph& g, const Cochain& phi);

struct CorrReport {
  double residual = 0.0;         // KW (I - qR) vs (I - i phi x J) K~, K~ read as a dart matrix
  double residual_reduced = 0.0; // same with K~ = d K^omega d^{-1}
  cplx det_rotation;             // det(I - qR)
  double expected_rotation = 0.0;  // 2^|V|
  cplx det_reversal;             // det(I - i phi x J)
  double expected_reversal = 0.0;  // prod (1 + x^2)
};

CorrReport verify_corr(const EmbeddedGraph& g, const Cochain& phi);

// det KW^phi / (2^{-|V|} prod(1+x^2) det K), for the chosen orientation.
cplx det_ratio(const EmbeddedGraph& g, const Cochain& phi, Orientation o);

// Alternating product of phi_c around every face of C (1 for a cocycle).
std::vector<cplx> c_face_holonomy(const CGraph& c, std::span<const cplx> phi_c);

// Cochain on C-edges induced by the Kasteleyn orientation on isoradial data.
std::vector<cplx> spin_cochain(const CGraph& c);

struct DiracReport {
  double kasteleyn_dirac = 0.0;  // K^omega e^{-i theta_B/2} vs e^{-i theta_W/2} mu_W dbar_C
  double spin_cocycle = 0.0;     // max |holonomy - 1| of the spin cochain over C-faces
  double double_laplacian = 0.0; // -4 d_D dbar_D vs Laplacians of the graph and its dual
  double c_black = 0.0;          // -d_C dbar_C vs (L_M - i A)/2
  double c_white = 0.0;          // -dbar_C d_C vs (L_M + i A)/2
  double c_sum = 0.0;            // sum of both vs L_M
  double c_to_d = 0.0;           // h mu_C Dirac_C h vs mu_D Dirac_D
  double worst() const;
};

DiracReport verify_dirac_identities(const EmbeddedGraph& g);

}  // namespace kwlab
