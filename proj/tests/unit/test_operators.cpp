#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "kwlab/critical.hpp"
#include "kwlab/identities.hpp"
#include "kwlab/operators.hpp"

namespace kwlab {
namespace {

using testgen::Rng;

double tracked(const EmbeddedGraph& g, const Cochain& phi) { return sqrt_det_tracked(g, phi).value; }
double tracked(const EmbeddedGraph& g) { return tracked(g, Cochain::trivial(g.num_darts())); }

// Square roots of P(+-1, +-1) on the isotropic 1x1 torus, factored by hand:
// P(1,1) = (1 - 2x - x^2)^2, P(-1,1) = P(1,-1) = (1 + x^2)^2, P(-1,-1) = (1 + 2x - x^2)^2.
struct TorusRoots {
  double s11, s21, s12, s22;
};
TorusRoots closed_form_roots(double x) {
  return {1 - 2 * x - x * x, 1 + x * x, 1 + x * x, 1 + 2 * x - x * x};
}

TEST(KacWard, RectangularSpectralCurveClosedForm) {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const double x = testgen::uniform(rng, 0.0, 1.0);
    const double y = testgen::uniform(rng, 0.0, 1.0);
    const cplx z = std::polar(1.0, testgen::uniform(rng, -kPi, kPi));
    const cplx w = std::polar(1.0, testgen::uniform(rng, -kPi, kPi));
    const cplx expected =
        (1 + x * x) * (1 + y * y) - x * (1 - y * y) * (z + 1.0 / z) - y * (1 - x * x) * (w + 1.0 / w);
    EXPECT_LT(std::abs(spectral_curve(fixtures::rect_torus(x, y), z, w) - expected), 1e-13);
  }
}

TEST(KacWard, DiagonalIsOneAndNoBacktracking) {
  const EmbeddedGraph g = fixtures::square_torus(2, 2, 0.3, 0.5);
  const CMatrix kw = kac_ward(g, Cochain::trivial(g.num_darts())).m;
  for (int e = 0; e < g.num_darts(); ++e) {
    EXPECT_EQ(kw(e, e), cplx(1.0));
    EXPECT_EQ(kw(e, g.reversal(e)), cplx(0.0));
    for (int e2 = 0; e2 < g.num_darts(); ++e2) {
      if (e2 != e && g.origin(e2) != g.terminus(e)) EXPECT_EQ(kw(e, e2), cplx(0.0));
    }
  }
}

TEST(TrackedRoot, PlanarEvenSubgraphPolynomials) {
  // sqrt det KW = sum over even subgraphs of prod x on planar graphs
  Rng rng(32);
  for (int i = 0; i < 10; ++i) {
    const auto x = testgen::weights(rng, 3);
    EXPECT_NEAR(tracked(fixtures::triangle(x)), 1 + x[0] * x[1] * x[2], 1e-13);
    const double u = x[0];
    EXPECT_NEAR(tracked(fixtures::four_cycle(u)), 1 + std::pow(u, 4), 1e-13);
    EXPECT_NEAR(tracked(fixtures::square_patch(2, 3, u)), 1 + 2 * std::pow(u, 4) + std::pow(u, 6), 1e-13);
    EXPECT_NEAR(tracked(fixtures::path(4, u)), 1.0, 1e-13);
  }
}

TEST(TrackedRoot, TorusSignsAcrossCriticality) {
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.95}) {
    const EmbeddedGraph g = fixtures::rect_torus(x, x);
    const TorusRoots r = closed_form_roots(x);
    EXPECT_NEAR(tracked(g, character_cochain(g, 1.0, 1.0)), r.s11, 1e-12) << x;
    EXPECT_NEAR(tracked(g, character_cochain(g, -1.0, 1.0)), r.s21, 1e-12) << x;
    EXPECT_NEAR(tracked(g, character_cochain(g, 1.0, -1.0)), r.s12, 1e-12) << x;
    EXPECT_NEAR(tracked(g, character_cochain(g, -1.0, -1.0)), r.s22, 1e-12) << x;
  }
}

TEST(TrackedRoot, ResolvesRootNextToCriticalZero) {
  // 7e-9 above beta_c the root is ~ -1.5e-8; sqrt(det) alone only resolves it to ~1e-8
  for (double beta : {0.4406868, 0.44068678, 0.4406867935}) {
    const double x = std::tanh(beta);
    const EmbeddedGraph g = fixtures::rect_torus(x, x);
    EXPECT_NEAR(tracked(g), closed_form_roots(x).s11, 1e-13) << beta;
  }
}

TEST(TrackedRoot, RejectsComplexCochain) {
  const EmbeddedGraph g = fixtures::triangle(0.3);
  Rng rng(33);
  EXPECT_THROW(sqrt_det_tracked(g, testgen::unitary_cochain(g, rng)), ValidationError);
}

TEST(TrackedRoot, SquaresToDeterminant) {
  Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = testgen::torus(rng);
    const Cochain phi = testgen::sign_cochain(g, rng);
    const double s = tracked(g, phi);
    const cplx d = det(kac_ward(g, phi).m);
    EXPECT_LT(std::abs(s * s - d), 1e-10 * std::max(1.0, std::abs(d)));
  }
}

TEST(Laplacian, ConstantsAndSymmetry) {
  const EmbeddedGraph g = fixtures::square_torus(3, 2, 0.3, 0.6);
  const CMatrix L = laplacian(g, Cochain::trivial(g.num_darts())).m;
  EXPECT_LT((L * CMatrix::Ones(L.rows(), 1)).cwiseAbs().maxCoeff(), 1e-13);
  // mu L is symmetric
  Eigen::VectorXd mu(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    double s = 0.0;
    for (int e : g.darts_at(v)) s += std::sin(2 * g.weights().theta(g.edge_of(e)));
    mu[v] = s / 2;
  }
  const CMatrix M = mu.asDiagonal() * L;
  EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Factorization, StructuralDeterminantsOnRandomGraphs) {
  Rng rng(35);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = i % 2 ? testgen::torus(rng) : testgen::planar(rng);
    const CorrReport r = verify_corr(g, testgen::unitary_cochain(g, rng));
    EXPECT_LT(r.residual, 1e-12);
    EXPECT_LT(r.residual_reduced, 1e-12);
    EXPECT_LT(std::abs(r.det_rotation - r.expected_rotation) / r.expected_rotation, 1e-12);
    EXPECT_LT(std::abs(r.det_reversal - r.expected_reversal) / r.expected_reversal, 1e-12);
  }
}

TEST(Factorization, DeterminantRatioIsOneSignPerGraph) {
  Rng rng(36);
  for (int i = 0; i < 10; ++i) {
    const EmbeddedGraph g = i % 2 ? testgen::torus(rng) : testgen::planar(rng);
    const cplx first = det_ratio(g, testgen::unitary_cochain(g, rng), Orientation::reduced);
    EXPECT_NEAR(std::abs(first), 1.0, 1e-10);
    EXPECT_NEAR(first.imag(), 0.0, 1e-10);
    for (int d = 0; d < 5; ++d) {
      EXPECT_LT(std::abs(det_ratio(g, testgen::unitary_cochain(g, rng), Orientation::reduced) - first), 1e-10);
    }
  }
}

TEST(Dirac, IdentitiesOnCriticalHoneycombAndSquare) {
  for (const EmbeddedGraph& g :
       {fixtures::honeycomb_torus(std::vector<double>(3, 1.0 / std::sqrt(3.0))),
        fixtures::square_torus(2, 3, fixtures::kSquareCritical, fixtures::kSquareCritical)}) {
    EXPECT_LT(verify_dirac_identities(g).worst(), 1e-10);
  }
}

TEST(Dirac, SpinCochainIsACocycleOnC) {
  const CGraph c(fixtures::square_torus(2, 2, fixtures::kSquareCritical, fixtures::kSquareCritical));
  for (cplx h : c_face_holonomy(c, spin_cochain(c))) EXPECT_LT(std::abs(h - 1.0), 1e-12);
}

}  // namespace
}  // namespace kwlab
