// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kwlab/critical.hpp"
#include "kwlab/fixtures.hpp"
#include "kwlab/identities.hpp"
#include "kwlab/oracle.hpp"
#include "kwlab/sholo.hpp"

using namespace kwlab;

namespace {

using Rng = std::mt19937_64;
const double kXc = fixtures::kSquareCritical;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects "name value (limit)" fragments and the overall verdict.
class Tally {
 public:
  void below(const std::string& what, double value, double limit) {
    ok_ = ok_ && value < limit;
    add(what, value, "<", limit);
  }
  void above(const std::string& what, double value, double limit) {
    ok_ = ok_ && value > limit;
    add(what, value, ">", limit);
  }
  void require(const std::string& what, bool cond) {
    ok_ = ok_ && cond;
    if (!cond) parts_.push_back(what + " FAILED");
  }
  void note(const std::string& s) { parts_.push_back(s); }
  Outcome done() const {
    std::string d;
    for (std::size_t i = 0; i < parts_.size(); ++i) d += (i ? "; " : "") + parts_[i];
    return {ok_, d};
  }

 private:
  void add(const std::string& what, double value, const char* op, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g %s %.0e", what.c_str(), value, op, limit);
    parts_.emplace_back(buf);
  }
  bool ok_ = true;
  std::vector<std::string> parts_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> uniform_draws(Rng& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = u(rng);
  return out;
}

EmbeddedGraph reweighted(const EmbeddedGraph& g, Rng& rng) {
  return g.with_weights(WeightSystem(uniform_draws(rng, g.num_edges(), 0.05, 0.95)));
}

Cochain random_unitary(const EmbeddedGraph& g, Rng& rng) {
  std::vector<cplx> fwd;
  for (double a : uniform_draws(rng, g.num_edges(), -kPi, kPi)) fwd.push_back(std::polar(1.0, a));
  return Cochain::from_edges(fwd);
}

cplx rect_curve(double x, double y, cplx z, cplx w) {
  return (1 + x * x) * (1 + y * y) - x * (1 - y * y) * (z + 1.0 / z) - y * (1 - x * x) * (w + 1.0 / w);
}

std::vector<double> ones(const EmbeddedGraph& g) { return std::vector<double>(g.num_edges(), 1.0); }

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// ------------------------------------------------------------------ criteria

Outcome spectral_curve_rectangular() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const auto xy = uniform_draws(rng, 2, 0.0, 1.0);
    const EmbeddedGraph g = fixtures::rect_torus(xy[0], xy[1]);
    for (double a : uniform_draws(rng, 25, -kPi, kPi)) {
      const cplx z = std::polar(1.0, a);
      const cplx w = std::polar(1.0, uniform_draws(rng, 1, -kPi, kPi)[0]);
      worst = std::max(worst, std::abs(spectral_curve(g, z, w) - rect_curve(xy[0], xy[1], z, w)));
    }
  }
  Tally t;
  t.below("max abs error", worst, 1e-12);
  t.below("runtime s", seconds_since(t0), 1.0);
  return t.done();
}

Outcome criticality() {
  Tally t;
  const EmbeddedGraph g = fixtures::rect_torus(0.5, 0.5);
  const double beta_iso = critical_beta(g, ones(g)).beta_c;
  t.below("|tanh(beta_c) - (sqrt2 - 1)|", std::abs(std::tanh(beta_iso) - kXc), 1e-8);
  Rng rng(202);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto J = uniform_draws(rng, 2, 0.2, 3.0);
    const double b = critical_beta(g, J).beta_c;
    const double x = std::tanh(b * J[0]);
    const double y = std::tanh(b * J[1]);
    worst = std::max(worst, std::abs(x + y + x * y - 1.0));
  }
  t.below("max |x + y + xy - 1| over 5 (J,K)", worst, 1e-8);
  return t.done();
}

Outcome modular_parameter() {
  Tally t;
  const EmbeddedGraph g = fixtures::rect_torus(0.5, 0.5);
  Rng rng(303);
  double worst_tau = 0.0, worst_b = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto J = uniform_draws(rng, 2, 0.3, 2.5);
    const double beta = critical_beta(g, J).beta_c;
    const EmbeddedGraph gc = at_temperature(g, J, beta);
    const ModularData m = hessian_tau(gc);
    const double theta = gc.weights().theta(0);
    worst_tau = std::max(worst_tau, std::abs(m.tau - cplx{0.0, std::tan(theta)}));
    worst_b = std::max(worst_b, std::abs(m.hessian.b));
  }
  t.below("max |tau - i tan(theta)|", worst_tau, 1e-6);
  t.below("max |B|", worst_b, 1e-8);
  return t.done();
}

Outcome kac_ward_factorization() {
  Tally t;
  Rng rng(404);
  const std::vector<EmbeddedGraph> shapes{fixtures::triangle(0.5), fixtures::four_cycle(0.5),
                                          fixtures::rect_torus(0.5, 0.5), fixtures::square_torus(2, 2, 0.5, 0.5)};
  double res = 0.0, rot = 0.0, rev = 0.0;
  for (const EmbeddedGraph& shape : shapes) {
    for (int d = 0; d < 10; ++d) {
      const EmbeddedGraph g = reweighted(shape, rng);
      const CorrReport c = verify_corr(g, random_unitary(g, rng));
      res = std::max({res, c.residual, c.residual_reduced});
      rot = std::max(rot, std::abs(c.det_rotation - c.expected_rotation) / c.expected_rotation);
      rev = std::max(rev, std::abs(c.det_reversal - c.expected_reversal) / c.expected_reversal);
    }
  }
  t.below("factorization residual", res, 1e-12);
  t.below("det(I - qR) rel", rot, 1e-12);
  t.below("det(I - i phi x J) rel", rev, 1e-12);
  return t.done();
}

Outcome determinant_and_dimers() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  Rng rng(505);
  const std::vector<EmbeddedGraph> shapes{
      fixtures::single_edge(0.5),          fixtures::path(4, 0.5),
      fixtures::triangle(0.5),             fixtures::four_cycle(0.5),
      fixtures::square_patch(2, 3, 0.5),   fixtures::rect_torus(0.5, 0.5),
      fixtures::square_torus(2, 1, 0.5, 0.5), fixtures::square_torus(2, 2, 0.5, 0.5),
      fixtures::honeycomb_torus(std::vector<double>{0.5, 0.5, 0.5})};
  double sign_dev = 0.0, dimer = 0.0;
  int largest = 0;
  for (const EmbeddedGraph& shape : shapes) {
    const EmbeddedGraph g = reweighted(shape, rng);
    const cplx first = det_ratio(g, random_unitary(g, rng), Orientation::reduced);
    const double s = first.real() > 0 ? 1.0 : -1.0;
    sign_dev = std::max(sign_dev, std::abs(first - s));
    for (int d = 1; d < 20; ++d) {
      sign_dev = std::max(sign_dev, std::abs(det_ratio(g, random_unitary(g, rng), Orientation::reduced) - s));
    }
    const CGraph c(g);
    largest = std::max(largest, 2 * c.num_white());
    const oracle::DimerValues v = oracle::dimer_Z(c);
    dimer = std::max(dimer, std::abs(v.matchings - v.determinant_combination) / v.matchings);
  }
  t.below("ratio deviation from a fixed sign", sign_dev, 1e-9);
  t.below("matchings vs determinants rel", dimer, 1e-9);
  t.note("largest C graph " + std::to_string(largest) + " vertices");
  t.require("C graphs up to 40 vertices", largest <= 40 && largest >= 32);
  t.below("runtime s", seconds_since(t0), 30.0);
  return t.done();
}

Outcome partition_function_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  const std::vector<EmbeddedGraph> graphs{fixtures::single_edge(0.5),        fixtures::triangle(0.5),
                                          fixtures::four_cycle(0.5),         fixtures::rect_torus(0.5, 0.5),
                                          fixtures::square_torus(2, 2, 0.5, 0.5), fixtures::square_torus(2, 3, 0.5, 0.5)};
  double worst = 0.0;
  for (const EmbeddedGraph& g : graphs) {
    for (double beta : {0.2, 0.4406868, 0.8}) {
      const oracle::IsingValues v = oracle::ising_Z(g, ones(g), beta);
      worst = std::max({worst, std::abs(v.high_temperature - v.spins) / v.spins,
                        std::abs(v.kac_ward - v.spins) / v.spins});
    }
  }
  t.below("max relative disagreement", worst, 1e-9);
  t.below("runtime s", seconds_since(t0), 60.0);
  return t.done();
}

Outcome kramers_wannier() {
  Tally t;
  const std::vector<EmbeddedGraph> tori{fixtures::rect_torus(0.3, 0.6), fixtures::rect_torus(0.8, 0.7),
                                        fixtures::square_torus(2, 2, 0.3, 0.5), fixtures::square_torus(3, 2, 0.7, 0.6),
                                        fixtures::honeycomb_torus(std::vector<double>{0.4, 0.5, 0.6})};
  double kw1 = 0.0;
  int bad_signs = 0;
  std::uint64_t seed = 606;
  for (const EmbeddedGraph& g : tori) {
    const DualityReport r = duality_check(g, 10, seed++);
    kw1 = std::max(kw1, r.kw1_residual);
    for (const DualitySign& s : r.kw2) {
      const int expected = s.character == std::array{1, 1} ? -1 : 1;
      if (s.sign != expected) ++bad_signs;
    }
  }
  t.below("KW1 relative residual", kw1, 1e-9);
  t.require("minus sign exactly on (1,1)", bad_signs == 0);
  t.note(std::to_string(bad_signs) + " sign mismatches over " + std::to_string(tori.size()) + " tori");
  return t.done();
}

Outcome combinatorial_inverse() {
  Tally t;
  Rng rng(707);
  const std::vector<EmbeddedGraph> shapes{
      fixtures::single_edge(0.5),          fixtures::path(4, 0.5),
      fixtures::triangle(0.5),             fixtures::four_cycle(0.5),
      fixtures::square_patch(2, 3, 0.5),   fixtures::rect_torus(0.5, 0.5),
      fixtures::square_torus(2, 1, 0.5, 0.5), fixtures::square_torus(2, 2, 0.5, 0.5),
      fixtures::honeycomb_torus(std::vector<double>{0.5, 0.5, 0.5})};
  double worst = 0.0, at_zero = 0.0;
  for (const EmbeddedGraph& shape : shapes) {
    const EmbeddedGraph g = reweighted(shape, rng);
    const CMatrix kw = kac_ward(g, Cochain::trivial(g.num_darts())).m;
    const double root = sqrt_det_tracked(g, Cochain::trivial(g.num_darts())).value;
    worst = std::max(worst, max_abs(oracle::F_matrix(g) - root * kw.inverse()));
    const CMatrix F0 = oracle::F_matrix(g.with_weights(WeightSystem::uniform(g.num_edges(), 0.0)));
    at_zero = std::max(at_zero, max_abs(F0 - CMatrix::Identity(F0.rows(), F0.cols())));
  }
  t.below("max |F - root KW^-1|", worst, 1e-9);
  t.below("max |F - Id| at x = 0", at_zero, 1e-12);
  return t.done();
}

Outcome sholo_equivalences() {
  Tally t;
  const std::vector<EmbeddedGraph> graphs{
      fixtures::triangle(0.5),           fixtures::four_cycle(0.4),
      fixtures::square_patch(3, 3, 0.35), fixtures::rect_torus(0.3, 0.5),
      fixtures::square_torus(2, 2, kXc, kXc), fixtures::square_torus(3, 3, kXc, kXc),
      fixtures::honeycomb_torus(std::vector<double>(3, 1.0 / std::sqrt(3.0)))};
  Rng rng(808);
  std::normal_distribution<double> normal;
  const cplx back = std::polar(1.0, -kPi / 4);
  int undecided = 0, in_kernel = 0, with_dirac = 0, draws = 0;
  double obs = 0.0;
  for (const EmbeddedGraph& g : graphs) {
    const CGraph c(g);
    const auto kernel = kernel_observables(g);
    for (int d = 0; d < 50; ++d, ++draws) {
      MidpointFunction F = MidpointFunction::zero(g);
      if (!kernel.empty() && d % 2 == 1) {
        for (const MidpointFunction& G : kernel) {
          const double a = normal(rng);
          for (int k = 0; k < g.num_edges(); ++k) F.value[k] += a * back * G(k);
        }
      } else {
        for (cplx& z : F.value) z = {normal(rng), normal(rng)};
      }
      const KernelNorms kn = kernel_norms(c, F);
      std::vector<double> norms{kn.sholo, kn.kac_ward, kn.kasteleyn};
      if (kn.dirac) norms.push_back(*kn.dirac);
      const double n = F.norm();
      const bool small = std::all_of(norms.begin(), norms.end(), [&](double v) { return v < 1e-8 * n; });
      const bool large = std::all_of(norms.begin(), norms.end(), [&](double v) { return v > 1e-3 * n; });
      if (small) ++in_kernel;
      if (!small && !large) ++undecided;
      if (kn.dirac) ++with_dirac;
    }
    for (int e0 = 0; e0 < g.num_darts(); ++e0) {
      MidpointFunction G;
      try {
        G = observable(g, e0, ObservableBackend::inverse_column);
      } catch (const ValidationError&) {
        if (g.num_edges() > oracle::kMaxInverseEdges) break;
        G = observable(g, e0, ObservableBackend::combinatorial);
      }
      const auto res = sholo_residuals(g, G);
      for (int v = 0; v < g.num_vertices(); ++v) {
        if (v != g.origin(e0) && v != g.terminus(e0)) obs = std::max(obs, res[v]);
      }
    }
  }
  t.require("all draws agree in verdict", undecided == 0);
  t.note(std::to_string(draws) + " draws, " + std::to_string(in_kernel) + " in kernel, " +
         std::to_string(with_dirac) + " with Dirac norm, " + std::to_string(undecided) + " undecided");
  t.require("both verdicts exercised", in_kernel > 0 && in_kernel < draws && with_dirac > 0);
  t.below("observable residual away from source", obs, 1e-9);
  return t.done();
}

Outcome critical_kernel() {
  Tally t;
  double worst = 0.0;
  bool shape_ok = true;
  for (int n : {1, 2}) {
    const EmbeddedGraph g = fixtures::square_torus(n, n, 0.5, 0.5);
    const double bc = critical_beta(g, ones(g)).beta_c;
    for (double db : {-0.05, 0.05}) {
      const auto k = kernel_observables(at_temperature(g, ones(g), bc + db));
      shape_ok = shape_ok && k.empty();
    }
    const EmbeddedGraph gc = at_temperature(g, ones(g), bc);
    const auto k = kernel_observables(gc);
    shape_ok = shape_ok && !k.empty();
    for (const MidpointFunction& G : k) worst = std::max(worst, max_of(sholo_residuals(gc, G)));
  }
  t.require("empty off criticality, nonempty at beta_c", shape_ok);
  t.below("kernel observable residual", worst, 1e-7);
  return t.done();
}

Outcome discrete_integral() {
  Tally t;
  struct Patch {
    EmbeddedGraph g;
    bool critical;
  };
  const std::vector<Patch> patches{{fixtures::square_patch(6, 6, kXc), true},
                                   {fixtures::square_patch(5, 4, 0.3), false},
                                   {fixtures::triangle(0.5), false}};
  double closure = 0.0, increments = 0.0, lap_primal = -1e300, lap_dual = 1e300;
  int failures = 0, integrals = 0;
  for (const Patch& p : patches) {
    const EmbeddedGraph& g = p.g;
    const int outer = g.num_vertices() + outer_face(g);
    for (int e0 = 0; e0 < g.num_darts(); e0 += 5) {
      const MidpointFunction G = observable(g, e0, ObservableBackend::inverse_column);
      const std::vector<int> excluded{outer, g.origin(e0), g.terminus(e0)};
      try {
        const HFunction H = integrate_square(g, G, excluded);
        ++integrals;
        closure = std::max(closure, H.closure_residual);
        const IncrementCheck inc = check_increments(g, G, H);
        increments = std::max({increments, inc.primal, inc.dual});
        if (p.critical) {
          const HLaplacian L = laplacian_of_H(g, H);
          for (double v : L.primal) if (!std::isnan(v)) lap_primal = std::max(lap_primal, v);
          for (double v : L.dual) if (!std::isnan(v)) lap_dual = std::min(lap_dual, v);
        }
      } catch (const ValidationError&) {
        ++failures;
      }
    }
  }
  t.require("every integral closes", failures == 0);
  t.note(std::to_string(integrals) + " integrals");
  t.below("loop closure", closure, 1e-9);
  t.below("increment formula", increments, 1e-10);
  t.below("max interior primal Laplacian", lap_primal, 1e-9);
  t.above("min interior dual Laplacian", lap_dual, -1e-9);
  return t.done();
}

Outcome isoradial_identities() {
  Tally t;
  double worst = 0.0;
  for (int n : {2, 3}) worst = std::max(worst, verify_dirac_identities(fixtures::square_torus(n, n, kXc, kXc)).worst());
  t.below("worst identity residual", worst, 1e-10);
  return t.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"rectangular lattice spectral curve", spectral_curve_rectangular},
      {"critical temperature", criticality},
      {"modular parameter at criticality", modular_parameter},
      {"Kac-Ward / Kasteleyn factorization", kac_ward_factorization},
      {"determinant ratio sign and dimer Pfaffian", determinant_and_dimers},
      {"partition function three ways", partition_function_agreement},
      {"Kramers-Wannier duality", kramers_wannier},
      {"combinatorial Kac-Ward inverse", combinatorial_inverse},
      {"s-holomorphicity equivalences", sholo_equivalences},
      {"critical kernel observables", critical_kernel},
      {"discrete integral of the square", discrete_integral},
      {"isoradial operator identities", isoradial_identities},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
