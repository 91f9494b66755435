#include "kwlab/critical.hpp"

#include <cmath>
#include <random>

#include "kwlab/linalg.hpp"
#include "kwlab/operators.hpp"
#include "kwlab/parallel.hpp"

namespace kwlab {

namespace {

constexpr double kBetaLow = 1e-6;
constexpr double kBetaHigh = 50.0;
constexpr int kBisections = 200;
constexpr int kScan = 64;

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

double p11_root(const EmbeddedGraph& g, std::span<const double> couplings, double beta) {
  const EmbeddedGraph gb = at_temperature(g, couplings, beta);
  return sqrt_det_tracked(gb, Cochain::trivial(gb.num_darts())).value;
}

double log_weight_prefactor(const EmbeddedGraph& g, std::span<const double> couplings, double beta) {
  double s = g.num_vertices() * std::log(2.0);
  for (double j : couplings) s += std::log(std::cosh(beta * j));
  return s;
}

double mean_log_p(const EmbeddedGraph& g, int n) {
  const auto logs = parallel_map(static_cast<std::size_t>(n) * n, [&](std::size_t idx) {
    const double p1 = kTwoPi * (static_cast<double>(idx / n) + 0.5) / n;
    const double p2 = kTwoPi * (static_cast<double>(idx % n) + 0.5) / n;
    const cplx p = spectral_curve(g, std::polar(1.0, p1), std::polar(1.0, p2));
    return p.real() > 0.0 ? std::log(p.real()) : std::nan("");
  });
  for (double v : logs) require(std::isfinite(v), "spectral curve is not positive on the quadrature grid");
  return pairwise_sum(logs) / static_cast<double>(logs.size());
}

}  // namespace

EmbeddedGraph at_temperature(const EmbeddedGraph& g, std::span<const double> couplings, double beta) {
  require(static_cast<int>(couplings.size()) == g.num_edges(), "one coupling per edge is required");
  std::vector<double> x(couplings.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    require(couplings[k] >= 0.0, "couplings must be nonnegative");
    x[k] = std::tanh(beta * couplings[k]);
  }
  return g.with_weights(WeightSystem(std::move(x)));
}

cplx spectral_curve(const EmbeddedGraph& g, cplx z, cplx w) {
  return det(kac_ward(g, character_cochain(g, z, w)).m);
}

std::vector<SpectralSample> spectral_grid(const EmbeddedGraph& g, int n) {
  require(n > 0, "grid size must be positive");
  return parallel_map(static_cast<std::size_t>(n) * n, [&](std::size_t idx) {
    const double p1 = kTwoPi * static_cast<double>(idx / n) / n;
    const double p2 = kTwoPi * static_cast<double>(idx % n) / n;
    return SpectralSample{p1, p2, spectral_curve(g, std::polar(1.0, p1), std::polar(1.0, p2))};
  });
}

CriticalBeta critical_beta(const EmbeddedGraph& g, std::span<const double> couplings) {
  CriticalBeta out;
  // Geometric scan for the first sign change of the tracked root.
  double lo = kBetaLow;
  double r_lo = p11_root(g, couplings, lo);
  out.trace.push_back({lo, r_lo});
  double hi = -1.0;
  for (int k = 1; k <= kScan; ++k) {
    const double b = kBetaLow * std::pow(kBetaHigh / kBetaLow, static_cast<double>(k) / kScan);
    const double r = p11_root(g, couplings, b);
    out.trace.push_back({b, r});
    if ((r > 0.0) != (r_lo > 0.0) || r == 0.0) {
      hi = b;
      break;
    }
    lo = b;
    r_lo = r;
  }
  require(hi > 0.0, "tracked root of P(1,1) does not change sign in [1e-6, 50]");

  double r_hi = out.trace.back().root;
  for (int it = 0; it < kBisections && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    double r = 0.0;
    try {
      r = p11_root(g, couplings, mid);
    } catch (const ValidationError&) {
      // Too close to the zero for the homotopy; take the sign from the bracket secant.
      const double mag = std::sqrt(std::abs(spectral_curve(at_temperature(g, couplings, mid), 1.0, 1.0).real()));
      const double guess = r_lo + (r_hi - r_lo) * (mid - lo) / (hi - lo);
      r = guess >= 0.0 ? mag : -mag;
    }
    out.trace.push_back({mid, r});
    if (r == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((r > 0.0) == (r_lo > 0.0)) {
      lo = mid;
      r_lo = r;
    } else {
      hi = mid;
      r_hi = r;
    }
  }
  out.beta_c = 0.5 * (lo + hi);
  out.p11 = spectral_curve(at_temperature(g, couplings, out.beta_c), 1.0, 1.0).real();
  return out;
}

ModularData hessian_tau(const EmbeddedGraph& g) {
  // P is holomorphic in (z, w), so the real second derivatives at (1, 1) are Cauchy
  // integrals over small circles; this avoids the cancellation of finite differences.
  constexpr int nodes = 16;
  constexpr double r = 0.1;
  std::vector<cplx> ring(nodes);
  for (int k = 0; k < nodes; ++k) ring[k] = std::polar(1.0, kTwoPi * k / nodes);
  auto p = [&](cplx dz, cplx dw) { return spectral_curve(g, 1.0 + dz, 1.0 + dw); };

  const auto along = parallel_map(2 * nodes, [&](std::size_t idx) {
    const cplx d = r * ring[idx % nodes];
    return idx < nodes ? p(d, 0.0) : p(0.0, d);
  });
  const auto both = parallel_map(nodes * nodes, [&](std::size_t idx) {
    return p(r * ring[idx / nodes], r * ring[idx % nodes]);
  });
  cplx szz, sww, szw;
  for (int k = 0; k < nodes; ++k) {
    const cplx back = std::conj(ring[k] * ring[k]);
    szz += along[k] * back;
    sww += along[nodes + k] * back;
  }
  for (int j = 0; j < nodes; ++j) {
    for (int k = 0; k < nodes; ++k) szw += both[j * nodes + k] * std::conj(ring[j] * ring[k]);
  }

  ModularData out;
  out.hessian.a_z = (2.0 * szz / (nodes * r * r)).real();
  out.hessian.a_w = (2.0 * sww / (nodes * r * r)).real();
  out.hessian.b = (szw / (nodes * nodes * r * r)).real();

  const double sgn = out.hessian.a_w < 0.0 ? -1.0 : 1.0;
  const double az = sgn * out.hessian.a_z;
  const double aw = sgn * out.hessian.a_w;
  const double b = sgn * out.hessian.b;
  const double disc = az * aw - b * b;
  require(disc > 0.0, "Hessian of P at (1,1) is not definite; input is not critical");
  out.tau = cplx{-b, std::sqrt(disc)} / aw;
  return out;
}

FreeEnergy free_energy(const EmbeddedGraph& g, std::span<const double> couplings, double beta, int n) {
  require(beta > 0.0, "beta must be positive");
  require(n > 0, "grid size must be positive");
  const EmbeddedGraph gb = at_temperature(g, couplings, beta);
  const double base = log_weight_prefactor(g, couplings, beta);
  FreeEnergy out;
  out.n = n;
  out.value = base + 0.5 * mean_log_p(gb, n);
  out.value_fine = base + 0.5 * mean_log_p(gb, 2 * n);
  return out;
}

CriticalityReport criticality_report(const EmbeddedGraph& g, std::span<const double> couplings, int n) {
  CriticalityReport r;
  r.critical = critical_beta(g, couplings);
  r.modular = hessian_tau(at_temperature(g, couplings, r.critical.beta_c));
  r.free_energy = free_energy(g, couplings, r.critical.beta_c, n);
  return r;
}

DualityReport duality_check(const EmbeddedGraph& g, int draws, std::uint64_t seed) {
  // The planar dual puts the zero of the constant field on the outer-face vertex, where
  // the turning angles no longer describe a spin structure; only tori are compared.
  require(g.surface() == SurfaceKind::torus && g.genus() == 1, "duality check needs a genus one torus graph");
  const EmbeddedGraph gd = dual(g);
  double scale = g.num_vertices() * std::log(2.0);
  double scale_dual = gd.num_vertices() * std::log(2.0);
  for (int k = 0; k < g.num_edges(); ++k) {
    scale -= std::log1p(g.weights().x(k));
    scale_dual -= std::log1p(gd.weights().x(k));
  }

  DualityReport out;
  auto compare = [&](const Cochain& phi, const Cochain& phi_dual) {
    const cplx a = std::exp(scale) * det(kac_ward(g, phi).m);
    const cplx b = std::exp(scale_dual) * det(kac_ward(gd, phi_dual).m);
    const double denom = std::max({std::abs(a), std::abs(b), 1e-300});
    out.kw1_residual = std::max(out.kw1_residual, std::abs(a - b) / denom);
  };
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int d = 0; d < draws; ++d) {
      const double t1 = angle(rng);
      const double t2 = angle(rng);
      out.character_angles.push_back({t1, t2});
      const cplx z = std::polar(1.0, t1);
      const cplx w = std::polar(1.0, t2);
      compare(character_cochain(g, z, w), character_cochain(gd, z, w));
    }
  }

  for (const std::array<int, 2> c : {std::array{1, 1}, std::array{-1, 1}, std::array{1, -1}, std::array{-1, -1}}) {
    DualitySign s;
    s.character = c;
    s.primal = std::exp(scale / 2) * sqrt_det_tracked(g, character_cochain(g, c[0], c[1])).value;
    s.dual = std::exp(scale_dual / 2) * sqrt_det_tracked(gd, character_cochain(gd, c[0], c[1])).value;
    const double tiny = 1e-9 * std::max({1.0, std::abs(s.primal), std::abs(s.dual)});
    if (std::abs(s.primal) > tiny && std::abs(s.dual) > tiny) s.sign = s.primal * s.dual > 0.0 ? 1 : -1;
    out.kw2.push_back(s);
  }
  return out;
}

}  // namespace kwlab
