#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "kwlab/critical.hpp"
#include "kwlab/sholo.hpp"

namespace kwlab {
namespace {

using testgen::Rng;
const double kXc = fixtures::kSquareCritical;

MidpointFunction random_function(const EmbeddedGraph& g, Rng& rng) {
  std::normal_distribution<double> n;
  MidpointFunction F = MidpointFunction::zero(g);
  for (cplx& z : F.value) z = {n(rng), n(rng)};
  return F;
}

double max_away(const EmbeddedGraph& g, const MidpointFunction& F, int e0) {
  const auto r = sholo_residuals(g, F);
  double m = 0.0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v != g.origin(e0) && v != g.terminus(e0)) m = std::max(m, r[v]);
  }
  return m;
}

TEST(Projection, OntoLine) {
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const cplx z{testgen::uniform(rng, -2, 2), testgen::uniform(rng, -2, 2)};
    const cplx u = std::polar(testgen::uniform(rng, 0.1, 3), testgen::uniform(rng, -kPi, kPi));
    const cplx p = project(z, u);
    EXPECT_NEAR((p / u).imag(), 0.0, 1e-12);                          // on the line
    EXPECT_NEAR(((z - p) * std::conj(u)).real(), 0.0, 1e-12);         // orthogonal remainder
    EXPECT_LT(std::abs(project(p, u) - p), 1e-12);                    // idempotent
  }
}

TEST(Projection, EighthTurn) {
  const EmbeddedGraph g = fixtures::triangle(0.3);
  MidpointFunction F = MidpointFunction::zero(g);
  F.value = {1.0, cplx{0, 1}, cplx{2, -1}};
  const MidpointFunction G = eighth_turn(eighth_turn(F));
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(G(k) - cplx{0, 1} * F(k)), 1e-15);
}

TEST(SMap, InverseBothWays) {
  Rng rng(52);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = i % 2 ? testgen::torus(rng) : testgen::planar(rng);
    const MidpointFunction F = random_function(g, rng);
    const MidpointFunction back = S_inverse(g, map_S(g, F));
    for (int k = 0; k < g.num_edges(); ++k) EXPECT_LT(std::abs(back(k) - F(k)), 1e-12);

    std::vector<cplx> raw(g.num_darts());
    for (cplx& z : raw) z = {testgen::uniform(rng, -1, 1), testgen::uniform(rng, -1, 1)};
    const auto f = project_to_lines(g, raw);
    const auto again = map_S(g, S_inverse(g, f));
    for (int e = 0; e < g.num_darts(); ++e) EXPECT_LT(std::abs(again[e] - f[e]), 1e-12);
  }
}

TEST(SMap, ZeroAngleIsRejected) {
  EXPECT_THROW(S_inverse(fixtures::triangle(0.0), std::vector<cplx>(6, 1.0)), ValidationError);
}

TEST(KernelNorms, GenericFunctionsAreFarFromTheKernel) {
  Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = i % 2 ? testgen::torus(rng) : testgen::planar(rng);
    const MidpointFunction F = random_function(g, rng);
    const KernelNorms kn = kernel_norms(CGraph(g), F);
    EXPECT_GT(kn.sholo, 1e-3 * F.norm());
    EXPECT_GT(kn.kac_ward, 1e-3 * F.norm());
    EXPECT_GT(kn.kasteleyn, 1e-3 * F.norm());
    EXPECT_FALSE(kn.dirac.has_value());
  }
}

TEST(Observable, BackendsAgreeAndAreSholoAwayFromSource) {
  Rng rng(54);
  for (const EmbeddedGraph& g : {testgen::reweight(fixtures::triangle(0.5), rng),
                                 testgen::reweight(fixtures::four_cycle(0.5), rng),
                                 testgen::reweight(fixtures::square_patch(2, 3, 0.5), rng),
                                 testgen::reweight(fixtures::rect_torus(0.5, 0.5), rng)}) {
    for (int e0 = 0; e0 < g.num_darts(); ++e0) {
      const MidpointFunction a = observable(g, e0, ObservableBackend::inverse_column);
      const MidpointFunction b = observable(g, e0, ObservableBackend::combinatorial);
      for (int k = 0; k < g.num_edges(); ++k) EXPECT_LT(std::abs(a(k) - b(k)), 1e-10);
      EXPECT_LT(max_away(g, a, e0), 1e-10);
    }
  }
}

TEST(Observable, SingularKacWardNeedsCombinatorialBackend) {
  const EmbeddedGraph g = fixtures::square_torus(2, 2, kXc, kXc);
  EXPECT_THROW(observable(g, 0, ObservableBackend::inverse_column), ValidationError);
  EXPECT_LT(max_away(g, observable(g, 0, ObservableBackend::combinatorial), 0), 1e-10);
}

TEST(KernelObservables, OnlyAtCriticality) {
  for (int n : {1, 2, 3}) {
    EXPECT_TRUE(kernel_observables(fixtures::square_torus(n, n, 0.3, 0.3)).empty());
    const EmbeddedGraph g = fixtures::square_torus(n, n, kXc, kXc);
    const auto k = kernel_observables(g);
    ASSERT_FALSE(k.empty()) << n;
    const CGraph c(g);
    for (const MidpointFunction& G : k) {
      const KernelNorms kn = kernel_norms(c, G * std::polar(1.0, -kPi / 4));
      EXPECT_LT(kn.sholo, 1e-9);
      EXPECT_LT(kn.kac_ward, 1e-9);
      EXPECT_LT(kn.kasteleyn, 1e-9);
      ASSERT_TRUE(kn.dirac.has_value());
      EXPECT_LT(*kn.dirac, 1e-9);
    }
  }
}

TEST(OuterFace, PlanarAndTorus) {
  const EmbeddedGraph g = fixtures::square_patch(3, 4, 0.3);
  const int f = outer_face(g);
  ASSERT_GE(f, 0);
  EXPECT_LT(g.face_rotation(f), 0.0);
  EXPECT_EQ(outer_face(fixtures::rect_torus(0.3, 0.4)), -1);
}

TEST(IntegrateSquare, ObservableOnCriticalPatch) {
  const EmbeddedGraph g = fixtures::square_patch(5, 5, kXc);
  const int outer = g.num_vertices() + outer_face(g);
  for (int e0 : {0, 7, 19, 33}) {
    const MidpointFunction G = observable(g, e0, ObservableBackend::inverse_column);
    const std::vector<int> excluded{outer, g.origin(e0), g.terminus(e0)};
    const HFunction H = integrate_square(g, G, excluded);
    EXPECT_LT(H.closure_residual, 1e-9);
    const IncrementCheck inc = check_increments(g, G, H);
    EXPECT_LT(inc.primal, 1e-10);
    EXPECT_LT(inc.dual, 1e-10);
    const HLaplacian L = laplacian_of_H(g, H);
    int interior = 0;
    for (double v : L.primal) {
      if (std::isnan(v)) continue;
      ++interior;
      EXPECT_LE(v, 1e-9);
    }
    for (double v : L.dual) {
      if (!std::isnan(v)) EXPECT_GE(v, -1e-9);
    }
    EXPECT_GT(interior, 0);
    for (int n : excluded) EXPECT_FALSE(H.defined(n));
  }
}

TEST(IntegrateSquare, NonSholoInputDoesNotClose) {
  Rng rng(55);
  const EmbeddedGraph g = fixtures::square_patch(3, 3, kXc);
  EXPECT_THROW(integrate_square(g, random_function(g, rng)), ValidationError);
}

TEST(IntegrateSquare, TorusKernelHasPeriods) {
  const EmbeddedGraph g = fixtures::square_torus(2, 2, kXc, kXc);
  const auto k = kernel_observables(g);
  ASSERT_FALSE(k.empty());
  const HFunction H = integrate_square(g, k.front());
  EXPECT_LT(H.closure_residual, 1e-9);
  for (int n = 0; n < g.num_vertices() + g.num_faces(); ++n) EXPECT_TRUE(H.defined(n));
  const IncrementCheck inc = check_increments(g, k.front(), H);
  EXPECT_LT(std::max(inc.primal, inc.dual), 1e-10);
}

}  // namespace
}  // namespace kwlab
