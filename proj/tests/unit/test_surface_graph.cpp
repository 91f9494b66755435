#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "generators.hpp"
#include "kwlab/graph_io.hpp"
#include "kwlab/linalg.hpp"
#include "kwlab/operators.hpp"

namespace kwlab {
namespace {

using testgen::Rng;

void expect_combinatorial_map(const EmbeddedGraph& g) {
  for (int e = 0; e < g.num_darts(); ++e) {
    EXPECT_EQ(g.reversal(g.reversal(e)), e);
    EXPECT_NE(g.reversal(e), e);
    EXPECT_EQ(g.rotate_inv(g.rotate(e)), e);
    EXPECT_EQ(g.origin(g.rotate(e)), g.origin(e));
    EXPECT_EQ(g.origin(g.reversal(e)), g.terminus(e));
    EXPECT_EQ(g.edge_of(e), e / 2);
  }
  // faces partition the darts
  std::set<int> seen;
  for (int f = 0; f < g.num_faces(); ++f) {
    for (int e : g.faces()[f]) {
      EXPECT_TRUE(seen.insert(e).second);
      EXPECT_EQ(g.face_of(e), f);
    }
  }
  EXPECT_EQ(static_cast<int>(seen.size()), g.num_darts());
  EXPECT_EQ(g.num_vertices() - g.num_edges() + g.num_faces(), 2 - 2 * g.genus());
}

TEST(Angles, WrapRanges) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double a = testgen::uniform(rng, -40.0, 40.0);
    const double p = wrap_pi(a);
    const double q = wrap_two_pi(a);
    EXPECT_GT(p, -kPi);
    EXPECT_LE(p, kPi);
    EXPECT_GT(q, 0.0);
    EXPECT_LE(q, kTwoPi);
    EXPECT_NEAR(std::remainder(p - a, kTwoPi), 0.0, 1e-12);
    EXPECT_NEAR(std::remainder(q - a, kTwoPi), 0.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(wrap_pi(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_two_pi(0.0), kTwoPi);
}

TEST(Weights, ThetaAndDual) {
  Rng rng(12);
  const WeightSystem w(testgen::weights(rng, 50, 0.0, 1.0));
  const WeightSystem d = w.dual();
  const WeightSystem dd = d.dual();
  for (int k = 0; k < 50; ++k) {
    EXPECT_NEAR(w.theta(k), 2 * std::atan(w.x(k)), 1e-15);
    EXPECT_NEAR(d.x(k), (1 - w.x(k)) / (1 + w.x(k)), 1e-15);
    EXPECT_NEAR(d.theta(k), kPi / 2 - w.theta(k), 1e-14);
    EXPECT_NEAR(dd.x(k), w.x(k), 1e-14);
  }
  EXPECT_NEAR(WeightSystem::from_theta(std::vector<double>{kPi / 4}).x(0), fixtures::kSquareCritical, 1e-15);
}

TEST(EmbeddedGraph, FixturesAreCombinatorialMaps) {
  for (const EmbeddedGraph& g :
       {fixtures::single_edge(0.3), fixtures::triangle(0.3), fixtures::four_cycle(0.3), fixtures::path(5, 0.3),
        fixtures::square_patch(3, 4, 0.3), fixtures::rect_torus(0.2, 0.4), fixtures::square_torus(3, 2, 0.2, 0.4),
        fixtures::honeycomb_torus(std::vector<double>{0.2, 0.3, 0.4})}) {
    expect_combinatorial_map(g);
  }
}

TEST(EmbeddedGraph, RandomToriHaveGenusOne) {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = testgen::torus(rng, 4);
    EXPECT_EQ(g.genus(), 1);
    EXPECT_EQ(g.surface(), SurfaceKind::torus);
    expect_combinatorial_map(g);
  }
}

TEST(EmbeddedGraph, TurningAnglesAroundVertexSumToFullTurn) {
  Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = i % 2 ? testgen::torus(rng) : testgen::planar(rng);
    for (int v = 0; v < g.num_vertices(); ++v) {
      double sum = 0.0;
      for (int e : g.darts_at(v)) sum += g.beta(e);
      EXPECT_NEAR(sum, kTwoPi, 1e-12);
    }
  }
}

TEST(EmbeddedGraph, PlanarFaceRotations) {
  // every bounded face turns by +2 pi, the outer one by -2 pi
  const EmbeddedGraph g = fixtures::square_patch(3, 3, 0.4);
  int outer = 0;
  for (int f = 0; f < g.num_faces(); ++f) {
    const double r = g.face_rotation(f);
    if (r < 0) {
      ++outer;
      EXPECT_NEAR(r, -kTwoPi, 1e-12);
    } else {
      EXPECT_NEAR(r, kTwoPi, 1e-12);
    }
  }
  EXPECT_EQ(outer, 1);
}

TEST(Dual, SwapsVerticesAndFaces) {
  const EmbeddedGraph g = fixtures::square_torus(3, 2, 0.3, 0.6);
  const EmbeddedGraph d = dual(g);
  EXPECT_EQ(d.num_vertices(), g.num_faces());
  EXPECT_EQ(d.num_faces(), g.num_vertices());
  EXPECT_EQ(d.num_edges(), g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) EXPECT_NEAR(d.weights().x(k), g.weights().x_dual(k), 1e-15);
  for (int e = 0; e < g.num_darts(); ++e) EXPECT_NEAR(wrap_pi(d.angle(e) - g.angle(e) - kPi / 2), 0.0, 1e-12);
  expect_combinatorial_map(d);
}

TEST(Cochain, CharacterIsCocycle) {
  const EmbeddedGraph g = fixtures::square_torus(2, 3, 0.3, 0.3);
  const Cochain c = character_cochain(g, std::polar(1.0, 0.7), std::polar(1.0, -1.3));
  EXPECT_TRUE(c.is_cocycle(g));
  for (int e = 0; e < g.num_darts(); ++e) EXPECT_NEAR(std::abs(c(e) * c(g.reversal(e)) - 1.0), 0.0, 1e-15);
  Rng rng(15);
  EXPECT_FALSE(testgen::unitary_cochain(g, rng).is_cocycle(g));
}

TEST(Cochain, GaugeLeavesKacWardDeterminantInvariant) {
  Rng rng(16);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedGraph g = i % 2 ? testgen::torus(rng) : testgen::planar(rng);
    const Cochain phi = testgen::unitary_cochain(g, rng);
    const Cochain gauged = phi.gauged(g, testgen::pick(rng, 0, g.num_vertices() - 1),
                                      std::polar(1.0, testgen::uniform(rng, -kPi, kPi)));
    const cplx a = det(kac_ward(g, phi).m);
    const cplx b = det(kac_ward(g, gauged).m);
    EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(GraphIo, RoundTripPreservesGeometryAndWeights) {
  Rng rng(17);
  for (const EmbeddedGraph& g0 : {testgen::torus(rng), testgen::planar(rng)}) {
    const EmbeddedGraph g = parse_graph_json(graph_to_json(g0, true));
    ASSERT_EQ(g.num_darts(), g0.num_darts());
    EXPECT_EQ(g.num_faces(), g0.num_faces());
    for (int e = 0; e < g.num_darts(); ++e) {
      EXPECT_DOUBLE_EQ(g.angle(e), g0.angle(e));
      EXPECT_EQ(g.rotate(e), g0.rotate(e));
    }
    for (int k = 0; k < g.num_edges(); ++k) EXPECT_DOUBLE_EQ(g.weights().x(k), g0.weights().x(k));
    EXPECT_EQ(graph_to_json(g, true), graph_to_json(g0, true));
  }
}

TEST(GraphIo, CouplingsNeedBeta) {
  const std::string base = R"({"surface":"planar","vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],)";
  const GraphDocument d = parse_graph_document(base + R"("beta":0.5,"edges":[{"id":0,"u":0,"v":1,"J":2}]})");
  ASSERT_TRUE(d.couplings && d.beta);
  EXPECT_DOUBLE_EQ(d.graph.weights().x(0), std::tanh(1.0));
  EXPECT_THROW(parse_graph_json(base + R"("edges":[{"id":0,"u":0,"v":1,"J":2}]})"), ValidationError);
  EXPECT_THROW(parse_graph_json(base + R"("beta":1,"edges":[{"id":0,"u":0,"v":1,"J":-1}]})"), ValidationError);
  EXPECT_THROW(parse_graph_json(base + R"("edges":[{"id":0,"u":0,"v":1,"x":1.5}]})"), ValidationError);
  EXPECT_THROW(parse_graph_json("{not json"), ValidationError);
}

}  // namespace
}  // namespace kwlab
