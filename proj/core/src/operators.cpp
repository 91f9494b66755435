#include "kwlab/operators.hpp"

#include <array>
#include <cmath>

namespace kwlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

cplx unit(double angle) { return std::polar(1.0, angle); }

}  // namespace

LabeledMatrix kac_ward(const EmbeddedGraph& g, const Cochain& phi) { return kac_ward(g, phi, 1.0); }

LabeledMatrix kac_ward(const EmbeddedGraph& g, const Cochain& phi, double scale) {
  const int nd = g.num_darts();
  require(phi.size() == static_cast<std::size_t>(nd), "cochain size does not match the graph");
  CMatrix m = CMatrix::Identity(nd, nd);
  for (int e = 0; e < nd; ++e) {
    require(std::abs(phi(e)) > 0.0, "cochain takes the value zero");
    const double x = scale * g.weights().x(g.edge_of(e));
    if (x == 0.0) continue;
    const int back = g.reversal(e);
    for (int e2 : g.darts_at(g.terminus(e))) {
      if (e2 == back) continue;
      m(e, e2) -= phi(e) * x * unit(turning(g, e, e2) / 2);
    }
  }
  return {GroundSet::darts, GroundSet::darts, std::move(m)};
}

LabeledMatrix kasteleyn(const CGraph& c, std::span<const cplx> phi_c, Orientation o) {
  require(phi_c.size() == static_cast<std::size_t>(c.num_edges()), "one cochain value per C-edge required");
  CMatrix m = CMatrix::Zero(c.num_white(), c.num_black());
  for (int i = 0; i < c.num_edges(); ++i) {
    const CEdge& ce = c.edges()[i];
    const cplx orient = o == Orientation::unitary ? ce.omega_tilde : cplx(ce.omega, 0.0);
    m(ce.white, ce.black) += phi_c[i] * orient * ce.weight;
  }
  return {GroundSet::white, GroundSet::black, std::move(m)};
}

LabeledMatrix kasteleyn(const CGraph& c, const Cochain& phi, Orientation o) {
  return kasteleyn(c, lift_to_c(c, phi), o);
}

LabeledMatrix laplacian(const EmbeddedGraph& g, const Cochain& phi) {
  const int nv = g.num_vertices();
  require(phi.size() == static_cast<std::size_t>(g.num_darts()), "cochain size does not match the graph");
  std::vector<double> mu(nv, 0.0);
  for (int e = 0; e < g.num_darts(); ++e) {
    const double th = g.weights().theta(g.edge_of(e));
    require(th < kPi / 2 - 1e-15, "laplacian needs theta < pi/2 on every edge");
    mu[g.origin(e)] += 0.5 * std::sin(2 * th);
  }
  CMatrix m = CMatrix::Zero(nv, nv);
  for (int e = 0; e < g.num_darts(); ++e) {
    const int v = g.origin(e);
    require(mu[v] > 0.0, "vertex with zero measure");
    const double c = std::tan(g.weights().theta(g.edge_of(e))) / mu[v];
    m(v, v) += c;
    m(v, g.terminus(e)) -= c * phi(e);
  }
  return {GroundSet::vertices, GroundSet::vertices, std::move(m)};
}

namespace {

void fill_measures(RhombicGraph& r) {
  r.mu_white.assign(r.num_white, 0.0);
  r.mu_black.assign(r.num_black, 0.0);
  for (const RhombusEdge& e : r.edges) {
    const double s = 0.5 * std::sin(2 * e.half_angle);
    r.mu_white[e.white] += s;
    r.mu_black[e.black] += s;
  }
}

void require_rhombic(const EmbeddedGraph& g) {
  for (int k = 0; k < g.num_edges(); ++k) {
    const double th = g.weights().theta(k);
    require(th > 0.0 && th < kPi / 2, "Dirac operators need theta strictly inside (0, pi/2)");
  }
  require(is_isoradial(g), "Dirac operators need isoradial angle data");
}

}  // namespace

RhombicGraph rhombic_c(const CGraph& c) {
  const EmbeddedGraph& g = c.base();
  require_rhombic(g);
  RhombicGraph r;
  r.num_white = c.num_white();
  r.num_black = c.num_black();
  for (const CEdge& ce : c.edges()) {
    const double a = g.angle(ce.dart);
    const int k = g.edge_of(ce.dart);
    const double th = g.weights().theta(k);
    switch (ce.kind) {
      case CEdgeKind::perpendicular:
        r.edges.push_back({ce.white, ce.black, wrap_pi(a - kPi / 2), g.weights().theta_dual(k)});
        break;
      case CEdgeKind::parallel:
        r.edges.push_back({ce.white, ce.black, wrap_pi(a), th});
        break;
      case CEdgeKind::corner:
        r.edges.push_back({ce.white, ce.black, wrap_pi(a + th + kPi / 2), kPi / 2});
        break;
    }
  }
  fill_measures(r);
  return r;
}

RhombicGraph rhombic_d(const DGraph& d) {
  require_rhombic(d.base());
  RhombicGraph r;
  r.white_set = GroundSet::diamond;
  r.black_set = GroundSet::lambda;
  r.num_white = d.num_midpoints();
  r.num_black = d.num_lambda();
  for (const DEdge& de : d.edges()) r.edges.push_back({de.midpoint, de.lambda, de.direction, de.half_angle});
  fill_measures(r);
  return r;
}

DiracPair dirac(const RhombicGraph& r, std::span<const cplx> phi, std::span<const double> x_white,
                std::span<const double> x_black) {
  require(phi.empty() || phi.size() == r.edges.size(), "one cochain value per edge required");
  require(x_white.empty() || x_white.size() == static_cast<std::size_t>(r.num_white), "bad white field size");
  require(x_black.empty() || x_black.size() == static_cast<std::size_t>(r.num_black), "bad black field size");
  CMatrix dbar = CMatrix::Zero(r.num_white, r.num_black);
  CMatrix d = CMatrix::Zero(r.num_black, r.num_white);
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    const RhombusEdge& e = r.edges[i];
    const cplx p = phi.empty() ? cplx(1.0) : phi[i];
    const double xw = x_white.empty() ? 0.0 : x_white[e.white];
    const double xb = x_black.empty() ? 0.0 : x_black[e.black];
    const double s = std::sin(e.half_angle);
    dbar(e.white, e.black) += p * unit(e.direction - xw) * s / r.mu_white[e.white];
    d(e.black, e.white) += (1.0 / p) * unit(-(e.direction + kPi - xb)) * s / r.mu_black[e.black];
  }
  return {{r.white_set, r.black_set, std::move(dbar)}, {r.black_set, r.white_set, std::move(d)}};
}

CMatrix dirac_block(const DiracPair& p) {
  const Eigen::Index nb = p.d.m.rows();
  const Eigen::Index nw = p.dbar.m.rows();
  CMatrix out = CMatrix::Zero(nb + nw, nb + nw);
  out.block(0, nb, nb, nw) = -p.d.m;
  out.block(nb, 0, nw, nb) = p.dbar.m;
  return out;
}

LabeledMatrix m_laplacian(const MGraph& m, std::span<const cplx> phi) {
  require(phi.empty() || phi.size() == m.edges().size(), "one cochain value per M-edge required");
  const int n = m.num_vertices();
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < m.edges().size(); ++i) {
    const MEdge& e = m.edges()[i];
    const cplx p = phi.empty() ? cplx(1.0) : phi[i];
    const double t = std::tan(e.half_angle);
    out(e.from, e.from) += t / m.mu(e.from);
    out(e.from, e.to) -= t * p / m.mu(e.from);
    out(e.to, e.to) += t / m.mu(e.to);
    out(e.to, e.from) -= t / p / m.mu(e.to);
  }
  return {GroundSet::m_vertices, GroundSet::m_vertices, std::move(out)};
}

LabeledMatrix skew_adjacency(const MGraph& m, std::span<const cplx> phi) {
  require(phi.empty() || phi.size() == m.edges().size(), "one cochain value per M-edge required");
  const int n = m.num_vertices();
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < m.edges().size(); ++i) {
    const MEdge& e = m.edges()[i];
    const cplx p = phi.empty() ? cplx(1.0) : phi[i];
    out(e.from, e.to) += p / m.mu(e.from);
    out(e.to, e.from) -= 1.0 / p / m.mu(e.to);
  }
  return {GroundSet::m_vertices, GroundSet::m_vertices, std::move(out)};
}

namespace {

// Branch of det KW^phi(t x)^{1/2} followed from t = 0 by adaptive steps.
class RootPath {
 public:
  RootPath(const EmbeddedGraph& g, const Cochain& phi) : g_(g), phi_(phi) {}

  cplx root_at(double t) const { return std::sqrt(det(kac_ward(g_, phi_, t).m)); }
  cplx current() const { return hist_.back().second; }
  int steps() const { return steps_; }

  // Stops exactly at t_end. Each step picks the root closest to a quadratic
  // extrapolation and is refined until the choice is unambiguous.
  void advance(double t_end) {
    while (hist_.back().first < t_end) {
      const auto [t, s] = hist_.back();
      const double t1 = std::min(t_end, t + h_);
      const cplx r = root_at(t1);
      // linear and quadratic extrapolation; their gap estimates the prediction error
      cplx lin = s;
      cplx quad = s;
      double err = 0.0;
      if (hist_.size() >= 2) {
        const auto [ta, sa] = hist_[hist_.size() - 2];
        lin = s + (s - sa) * ((t1 - t) / (t - ta));
        quad = lin;
        if (hist_.size() >= 3) {
          const auto [tb, sb] = hist_[hist_.size() - 3];
          quad = sb * ((t1 - ta) * (t1 - t) / ((tb - ta) * (tb - t))) +
                 sa * ((t1 - tb) * (t1 - t) / ((ta - tb) * (ta - t))) +
                 s * ((t1 - tb) * (t1 - ta) / ((t - tb) * (t - ta)));
          err = std::abs(quad - lin);
        }
      }
      const cplx b = std::abs(r - quad) <= std::abs(r + quad) ? r : -r;
      const double scale = std::max(1.0, std::abs(s));
      const bool tiny = std::abs(r) < 1e-12 * scale;
      // the chosen branch must sit well inside half the gap between the two roots
      const bool clear = std::abs(b - quad) < 0.5 * std::abs(r) && err < 0.25 * std::abs(r);
      if (!tiny && !clear) {
        if (h_ <= kMinStep) throw ValidationError("sign-ambiguous square root: determinant vanishes on the path");
        h_ /= 2;
        continue;
      }
      hist_.emplace_back(t1, b);
      if (hist_.size() > 3) hist_.erase(hist_.begin());
      ++steps_;
      h_ = std::min(kMaxStep, 2 * h_);
    }
  }

 private:
  static constexpr double kMinStep = 1.0 / 16384.0;
  static constexpr double kMaxStep = 1.0 / 16.0;

  const EmbeddedGraph& g_;
  const Cochain& phi_;
  std::vector<std::pair<double, cplx>> hist_{{0.0, 1.0}};  // newest last, at most three
  double h_ = kMaxStep;
  int steps_ = 0;
};

}  // namespace

TrackedRoot sqrt_det_tracked(const EmbeddedGraph& g, const Cochain& phi) {
  require(phi.is_real_sign(), "tracked square root needs a +-1 valued cochain");
  // The root at t = 1 is also extrapolated from the nodes 1 - j/1024, j = 1..6. Near a
  // zero of the determinant sqrt(det) only carries half the digits; the extrapolant does not.
  constexpr int kNodes = 6;
  constexpr double kNodeStep = 1.0 / 1024.0;
  constexpr std::array<double, kNodes> w6{6, -15, 20, -15, 6, -1};
  constexpr std::array<double, kNodes> w5{5, -10, 10, -5, 1, 0};

  RootPath path(g, phi);
  std::array<cplx, kNodes> node;  // node[j - 1] at t = 1 - j h
  for (int j = kNodes; j >= 1; --j) {
    path.advance(1.0 - j * kNodeStep);
    node[j - 1] = path.current();
  }
  cplx e6, e5;
  for (int j = 0; j < kNodes; ++j) {
    e6 += w6[j] * node[j];
    e5 += w5[j] * node[j];
  }
  const double err = std::abs(e6 - e5);
  const cplx r = path.root_at(1.0);
  const cplx b = std::abs(r - e6) <= std::abs(r + e6) ? r : -r;
  const bool clear = std::abs(b - e6) < 0.5 * std::abs(r) && err < 0.25 * std::abs(r);
  return {clear ? b.real() : e6.real(), path.steps() + 1};
}

}  // namespace kwlab
