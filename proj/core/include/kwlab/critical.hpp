#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kwlab/surface_graph.hpp"

namespace kwlab {

// Same graph with x_e = tanh(beta J_e).
EmbeddedGraph at_temperature(const EmbeddedGraph& g, std::span<const double> couplings, double beta);

// P(z, w) = det KW^phi with phi the character (z, w); g must be a torus graph.
cplx spectral_curve(const EmbeddedGraph& g, cplx z, cplx w);

struct SpectralSample {
  double phi1 = 0.0;
  double phi2 = 0.0;
  cplx value;
};
// P on the n x n grid (2 pi j/n, 2 pi k/n), row-major in j.
std::vector<SpectralSample> spectral_grid(const EmbeddedGraph& g, int n);

struct BetaSample {
  double beta = 0.0;
  double root = 0.0;  // tracked square root of P(1, 1)
};

struct CriticalBeta {
  double beta_c = 0.0;
  double p11 = 0.0;  // P(1, 1) at beta_c
  std::vector<BetaSample> trace;
};

// Bisection on the tracked square root of P(1, 1) in beta, bracket [1e-6, 50].
// Throws ValidationError when there is no sign change.
CriticalBeta critical_beta(const EmbeddedGraph& g, std::span<const double> couplings);

// Second derivatives of P in the real coordinates (z, w) at (1, 1).
struct Hessian {
  double a_z = 0.0;
  double a_w = 0.0;
  double b = 0.0;
};

struct ModularData {
  Hessian hessian;
  cplx tau;
};

// Cauchy integrals with 16 nodes on circles of radius 0.1. tau uses the Hessian
// signed so that a_w > 0, which puts it in the upper half plane.
// Throws ValidationError unless a_z a_w - b^2 > 0.
ModularData hessian_tau(const EmbeddedGraph& g);

struct FreeEnergy {
  int n = 0;
  double value = 0.0;      // n x n grid
  double value_fine = 0.0; // 2n x 2n grid
};

// |V| log 2 + sum log cosh(beta J) + (1/2) mean of log P over a half-cell offset grid.
FreeEnergy free_energy(const EmbeddedGraph& g, std::span<const double> couplings, double beta, int n);

struct CriticalityReport {
  CriticalBeta critical;
  ModularData modular;
  FreeEnergy free_energy;
};

CriticalityReport criticality_report(const EmbeddedGraph& g, std::span<const double> couplings, int n);

struct DualitySign {
  std::array<int, 2> character{1, 1};  // (z, w) in {+-1}^2
  double primal = 0.0;  // 2^{|V|/2} prod(1+x)^{-1/2} times the tracked root
  double dual = 0.0;    // same on the dual graph
  int sign = 0;         // primal / dual rounded; 0 when both vanish
};

struct DualityReport {
  double kw1_residual = 0.0;  // worst relative mismatch over the characters
  std::vector<std::array<double, 2>> character_angles;
  std::vector<DualitySign> kw2;  // the four +-1 characters, (1,1) first
};

// Compares the rescaled Kac-Ward determinants of a torus graph and its dual with dual weights.
DualityReport duality_check(const EmbeddedGraph& g, int draws, std::uint64_t seed);

}  // namespace kwlab
