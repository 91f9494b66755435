#include "kwlab/identities.hpp"

#include <algorithm>
#include <cmath>

namespace kwlab {

CMatrix rotation_factor(const EmbeddedGraph& g) {
  const int nd = g.num_darts();
  CMatrix m = CMatrix::Zero(nd, nd);
  for (int e = 0; e < nd; ++e) m(e, g.rotate(e)) += g.q(e);
  return m;
}

CMatrix reversal_factor(const EmbeddedGraph& g, const Cochain& phi) {
  const int nd = g.num_darts();
  CMatrix m = CMatrix::Zero(nd, nd);
  const cplx I{0.0, 1.0};
  for (int e = 0; e < nd; ++e) m(e, g.reversal(e)) = I * phi(e) * g.weights().x(g.edge_of(e));
  return m;
}

CorrReport verify_corr(const EmbeddedGraph& g, const Cochain& phi) {
  const int nd = g.num_darts();
  const CMatrix id = CMatrix::Identity(nd, nd);
  const CMatrix kw = kac_ward(g, phi).m;
  const CMatrix left = id - rotation_factor(g);
  const CMatrix right = id - reversal_factor(g, phi);
  const CGraph c(g);
  // W(e) and B(e) both carry index e, so the Kasteleyn matrix is already a dart matrix
  const CMatrix kt = kasteleyn(c, phi, Orientation::unitary).m;
  const CMatrix kr = kasteleyn(c, phi, Orientation::reduced).m;
  std::vector<cplx> d(nd), dinv(nd);
  for (int e = 0; e < nd; ++e) {
    d[e] = c.gauge(e);
    dinv[e] = 1.0 / d[e];
  }
  CorrReport rep;
  const CMatrix lhs = kw * left;
  rep.residual = scaled_residual(lhs, right * kt);
  rep.residual_reduced = scaled_residual(lhs, right * diagonal(d) * kr * diagonal(dinv));
  rep.det_rotation = det(left);
  rep.expected_rotation = std::ldexp(1.0, g.num_vertices());
  rep.det_reversal = det(right);
  double prod = 1.0;
  for (double x : g.weights().xs()) prod *= 1.0 + x * x;
  rep.expected_reversal = prod;
  return rep;
}

cplx det_ratio(const EmbeddedGraph& g, const Cochain& phi, Orientation o) {
  const CGraph c(g);
  double prod = 1.0;
  for (double x : g.weights().xs()) prod *= 1.0 + x * x;
  const cplx dk = det(kasteleyn(c, phi, o).m);
  return det(kac_ward(g, phi).m) / (std::ldexp(prod, -g.num_vertices()) * dk);
}

std::vector<cplx> c_face_holonomy(const CGraph& c, std::span<const cplx> phi_c) {
  std::vector<cplx> out;
  for (const CFace& f : c_faces(c)) {
    cplx h = 1.0;
    for (std::size_t j = 0; j < f.edges.size(); ++j) {
      // faces alternate white -> black and black -> white steps
      h = j % 2 == 0 ? h * phi_c[f.edges[j]] : h / phi_c[f.edges[j]];
    }
    out.push_back(h);
  }
  return out;
}

std::vector<cplx> spin_cochain(const CGraph& c) {
  const EmbeddedGraph& g = c.base();
  const cplx I{0.0, 1.0};
  std::vector<cplx> phi(c.num_edges());
  for (int i = 0; i < c.num_edges(); ++i) {
    const CEdge& ce = c.edges()[i];
    const double om = ce.omega;
    switch (ce.kind) {
      case CEdgeKind::perpendicular: phi[i] = om; break;
      case CEdgeKind::parallel: phi[i] = -I * om; break;
      case CEdgeKind::corner: {
        const double a = g.weights().theta(g.edge_of(ce.dart));
        const double b = g.weights().theta(g.edge_of(g.rotate(ce.dart)));
        phi[i] = -std::polar(1.0, -(a + b) / 2) * om;
        break;
      }
    }
  }
  return phi;
}

double DiracReport::worst() const {
  return std::max({kasteleyn_dirac, spin_cocycle, double_laplacian, c_black, c_white, c_sum, c_to_d});
}

DiracReport verify_dirac_identities(const EmbeddedGraph& g) {
  const int nd = g.num_darts();
  const CGraph c(g);
  const RhombicGraph rc = rhombic_c(c);
  DiracReport rep;
  const cplx I{0.0, 1.0};

  // Kasteleyn versus dbar with the field at W(e) pointing to B(e)
  {
    const auto phi = spin_cochain(c);
    std::vector<double> field(nd);
    for (int e = 0; e < nd; ++e) field[e] = g.angle(e) - kPi / 2;
    const CMatrix dbar = dirac(rc, phi, field).dbar.m;
    std::vector<cplx> rot(nd), left(nd);
    for (int e = 0; e < nd; ++e) {
      const double th = g.weights().theta(g.edge_of(e));
      rot[e] = std::polar(1.0, -th / 2);
      left[e] = rot[e] * rc.mu_white[e];
    }
    const CMatrix k = kasteleyn(c, Cochain::trivial(nd), Orientation::reduced).m;
    rep.kasteleyn_dirac = scaled_residual(k * diagonal(rot), diagonal(left) * dbar);
    double worst = 0.0;
    for (cplx h : c_face_holonomy(c, phi)) worst = std::max(worst, std::abs(h - 1.0));
    rep.spin_cocycle = worst;
  }

  // double: -4 d dbar is the Laplacian of the graph plus that of its dual
  const DGraph dg(g);
  const RhombicGraph rd = rhombic_d(dg);
  const DiracPair pd = dirac(rd, {});
  {
    const int nv = g.num_vertices();
    const int nl = dg.num_lambda();
    CMatrix lap = CMatrix::Zero(nl, nl);
    lap.topLeftCorner(nv, nv) = laplacian(g, Cochain::trivial(nd)).m;
    lap.bottomRightCorner(nl - nv, nl - nv) = laplacian(dual(g), Cochain::trivial(nd)).m;
    rep.double_laplacian = scaled_residual(-4.0 * pd.d.m * pd.dbar.m, lap);
  }

  // squares of the C operators versus the M graph
  const DiracPair pc = dirac(rc, {});
  {
    const MGraph mg(c);
    const CMatrix lm = m_laplacian(mg).m;
    const CMatrix am = skew_adjacency(mg).m;
    const int n = mg.num_vertices();
    CMatrix pb = CMatrix::Zero(n, nd);  // black function -> M function
    CMatrix pw = CMatrix::Zero(n, nd);
    for (int e = 0; e < nd; ++e) {
      pb(mg.vertex_of_black(e), e) = 1.0;
      pw(mg.vertex_of_white(e), e) = 1.0;
    }
    const CMatrix black_sq = -pb * pc.d.m * pc.dbar.m * pb.transpose();
    const CMatrix white_sq = -pw * pc.dbar.m * pc.d.m * pw.transpose();
    rep.c_black = scaled_residual(black_sq, 0.5 * (lm - I * am));
    rep.c_white = scaled_residual(white_sq, 0.5 * (lm + I * am));
    rep.c_sum = scaled_residual(black_sq + white_sq, lm);
  }

  // C Dirac conjugated into the double
  {
    const int nl = dg.num_lambda();
    const int nz = dg.num_midpoints();
    CMatrix h_dc = CMatrix::Zero(2 * nd, nl + nz);  // rows: B then W; cols: Lambda then midpoints
    for (int e = 0; e < nd; ++e) {
      h_dc(e, g.origin(e)) += 0.5;
      h_dc(e, dg.face_vertex(g.face_of(g.reversal(e)))) += 0.5;
      h_dc(nd + e, nl + g.edge_of(e)) += 0.5;
    }
    // unit weights on the same adjacency, read the other way
    CMatrix h_cd = (2.0 * h_dc).transpose();
    std::vector<cplx> mu_c, mu_d;
    for (double m : rc.mu_black) mu_c.push_back(m);
    for (double m : rc.mu_white) mu_c.push_back(m);
    for (double m : rd.mu_black) mu_d.push_back(m);
    for (double m : rd.mu_white) mu_d.push_back(m);
    const CMatrix lhs = h_cd * diagonal(mu_c) * dirac_block(pc) * h_dc;
    const CMatrix rhs = diagonal(mu_d) * dirac_block(pd);
    rep.c_to_d = scaled_residual(lhs, rhs);
  }
  return rep;
}

}  // namespace kwlab
