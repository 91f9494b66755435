#include "kwlab/sholo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "kwlab/identities.hpp"
#include "kwlab/operators.hpp"
#include "kwlab/oracle.hpp"

namespace kwlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI{0.0, 1.0};

double theta_of(const EmbeddedGraph& g, int e) { return g.weights().theta(g.edge_of(e)); }

// [i exp(i a)]^{-1/2}
cplx inverse_root(double a, RootBranch branch) {
  const cplx r = std::pow(kI * std::polar(1.0, a), -0.5);
  return branch == RootBranch::principal ? r : -r;
}

// Projection line of F(z_e) seen from o(e) on the counterclockwise side of e.
cplx leading_line(const EmbeddedGraph& g, int e, RootBranch b = RootBranch::principal) {
  return inverse_root(g.angle(e) + theta_of(g, e), b);
}
// Same on the clockwise side.
cplx trailing_line(const EmbeddedGraph& g, int e, RootBranch b = RootBranch::principal) {
  return inverse_root(g.angle(e) - theta_of(g, e), b);
}

CVector as_vector(std::span<const cplx> f) {
  CVector v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i];
  return v;
}

Shift operator+(const Shift& a, const Shift& b) { return {a[0] + b[0], a[1] + b[1]}; }
Shift operator-(const Shift& a, const Shift& b) { return {a[0] - b[0], a[1] - b[1]}; }
Shift operator-(const Shift& a) { return {-a[0], -a[1]}; }

// For every dart e, the lattice translate of the copy of face(e) that touches the
// copy of o(e) at shift 0. Each face copy is anchored at the origin of its first dart.
std::vector<Shift> corner_shifts(const EmbeddedGraph& g) {
  std::vector<Shift> out(g.num_darts());
  for (const auto& cyc : g.faces()) {
    Shift acc{0, 0};
    for (int e : cyc) {
      out[e] = -acc;
      acc = acc + g.dart(e).shift;
    }
  }
  return out;
}

// Shift of face(e) relative to face(rev e) across the dual edge e*.
Shift dual_shift(const EmbeddedGraph& g, const std::vector<Shift>& corner, int e) {
  return corner[e] - corner[g.rotate_inv(e)];
}

}  // namespace

MidpointFunction MidpointFunction::zero(const EmbeddedGraph& g) {
  return {std::vector<cplx>(g.num_edges(), cplx{0.0, 0.0})};
}

double MidpointFunction::norm() const {
  double s = 0.0;
  for (cplx z : value) s += std::norm(z);
  return std::sqrt(s);
}

MidpointFunction MidpointFunction::operator*(cplx s) const {
  MidpointFunction out = *this;
  for (cplx& z : out.value) z *= s;
  return out;
}

MidpointFunction eighth_turn(const MidpointFunction& F) { return F * std::polar(1.0, kPi / 4); }

cplx project(cplx z, cplx u) { return (z * std::conj(u)).real() * u / std::norm(u); }

double sholo_residual(const EmbeddedGraph& g, const MidpointFunction& F, int v, RootBranch branch) {
  double worst = 0.0;
  for (int e : g.darts_at(v)) {
    const int e2 = g.rotate(e);
    const cplx lhs = project(F(g.edge_of(e)), leading_line(g, e, branch));
    const double twist = g.beta(e) - theta_of(g, e) - theta_of(g, e2);
    const cplx rhs = project(F(g.edge_of(e2)), trailing_line(g, e2, branch)) * std::polar(1.0, twist / 2);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::vector<double> sholo_residuals(const EmbeddedGraph& g, const MidpointFunction& F) {
  std::vector<double> r(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) r[v] = sholo_residual(g, F, v);
  return r;
}

std::vector<cplx> map_S(const EmbeddedGraph& g, const MidpointFunction& F) {
  std::vector<cplx> f(g.num_darts());
  for (int e = 0; e < g.num_darts(); ++e)
    f[e] = std::sin(theta_of(g, e) / 2) * project(F(g.edge_of(e)), std::conj(g.direction_sqrt(e)));
  return f;
}

MidpointFunction S_inverse(const EmbeddedGraph& g, std::span<const cplx> f) {
  if (static_cast<int>(f.size()) != g.num_darts()) throw ValidationError("dart function has wrong size");
  MidpointFunction F = MidpointFunction::zero(g);
  for (int k = 0; k < g.num_edges(); ++k) {
    const double s = std::sin(g.weights().theta(k) / 2);
    if (s <= 0.0) throw ValidationError("S is not invertible on an edge with zero weight");
    F.value[k] = (f[2 * k] + f[2 * k + 1]) / s;
  }
  return F;
}

std::vector<cplx> project_to_lines(const EmbeddedGraph& g, std::span<const cplx> f) {
  std::vector<cplx> out(f.size());
  for (int e = 0; e < g.num_darts(); ++e) out[e] = project(f[e], std::conj(g.direction_sqrt(e)));
  return out;
}

SpinorImages spinor_maps(const CGraph& c, const MidpointFunction& F) {
  const EmbeddedGraph& g = c.base();
  const int nd = g.num_darts();
  SpinorImages out{RVector::Zero(nd), CVector::Zero(nd), RVector::Zero(nd), CVector::Zero(nd)};
  for (int e0 = 0; e0 < nd; ++e0) {
    double t = 0.0;
    int sign = 1;
    int e = e0;
    do {
      t += (static_cast<double>(sign) * c.half_direction(e) * std::sin(theta_of(g, e) / 2) * F(g.edge_of(e))).real();
      sign *= c.epsilon(e);
      e = g.rotate(e);
    } while (e != e0);
    const double th = theta_of(g, e0);
    out.T(e0) = t;
    out.T_prime(e0) = std::polar(1.0, th / 2) * t;
    const cplx fz = F(g.edge_of(e0));
    out.T_tilde(e0) = (kI * c.half_direction(e0) * std::polar(1.0, -th / 2) * fz).real();
    out.T_tilde_prime(e0) =
        kI * c.half_direction(e0) * project(fz, kI * std::polar(1.0, -(g.angle(e0) - th) / 2));
  }
  return out;
}

KernelNorms kernel_norms(const CGraph& c, const MidpointFunction& F) {
  const EmbeddedGraph& g = c.base();
  const int nd = g.num_darts();
  const Cochain trivial = Cochain::trivial(nd);
  KernelNorms n;
  const auto res = sholo_residuals(g, eighth_turn(F));
  n.sholo = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
  n.kac_ward = (kac_ward(g, trivial).m * as_vector(map_S(g, F))).norm();
  const SpinorImages im = spinor_maps(c, F);
  const CMatrix k = kasteleyn(c, trivial, Orientation::reduced).m;
  n.kasteleyn = (k * im.T.cast<cplx>()).norm();

  bool rhombic = is_isoradial(g);
  for (int e = 0; e < g.num_edges() && rhombic; ++e) {
    const double th = g.weights().theta(e);
    rhombic = th > 0.0 && th < kPi / 2;
  }
  if (rhombic) {
    std::vector<double> field(nd);
    for (int e = 0; e < nd; ++e) field[e] = g.angle(e) - kPi / 2;
    const CMatrix dbar = dirac(rhombic_c(c), spin_cochain(c), field).dbar.m;
    n.dirac = (dbar * im.T_prime).norm();
  }
  return n;
}

MidpointFunction observable(const EmbeddedGraph& g, int e0, ObservableBackend backend) {
  const int nd = g.num_darts();
  if (e0 < 0 || e0 >= nd) throw ValidationError("observable dart out of range");
  const int target = g.reversal(e0);
  std::vector<cplx> f(nd);
  if (backend == ObservableBackend::combinatorial) {
    for (int e = 0; e < nd; ++e) f[e] = oracle::F_combinatorial(g, e, target);
  } else {
    const Cochain trivial = Cochain::trivial(nd);
    const CMatrix kw = kac_ward(g, trivial).m;
    const Eigen::PartialPivLU<CMatrix> lu(kw);
    if (!(lu.rcond() > 1e-13)) throw ValidationError("Kac-Ward matrix is singular; use the combinatorial backend");
    const double root = sqrt_det_tracked(g, trivial).value;
    const CVector col = root * lu.solve(CVector::Unit(nd, target));
    for (int e = 0; e < nd; ++e) f[e] = col(e);
  }
  // The column lies in exp(-i a_e/2) D_{rev e0}^{1/2} R; rotate it onto the lines.
  const cplx frame = std::conj(g.direction_sqrt(target));
  for (cplx& z : f) z *= frame;
  return eighth_turn(S_inverse(g, f));
}

std::vector<MidpointFunction> kernel_observables(const EmbeddedGraph& g, double tol) {
  const int nd = g.num_darts();
  const CMatrix kw = kac_ward(g, Cochain::trivial(nd)).m;
  std::vector<Eigen::VectorXd> basis;  // accepted vectors as stacked (Re, Im)
  std::vector<MidpointFunction> out;
  for (const CVector& v : null_space(kw)) {
    for (cplx s : {cplx{1.0, 0.0}, kI}) {
      const CVector w = s * v;
      const auto p = project_to_lines(g, std::span<const cplx>(w.data(), nd));
      CVector pv = as_vector(p);
      const double pn = pv.norm();
      if (pn < 1e-3 * w.norm()) continue;
      pv /= pn;
      if ((kw * pv).norm() > tol) continue;
      Eigen::VectorXd r(2 * nd);
      r << pv.real(), pv.imag();
      for (const auto& b : basis) r -= b.dot(r) * b;
      if (r.norm() < 1e-6) continue;
      r.normalize();
      basis.push_back(r);
      std::vector<cplx> f(nd);
      for (int e = 0; e < nd; ++e) f[e] = {r(e), r(nd + e)};
      out.push_back(eighth_turn(S_inverse(g, f)));
    }
  }
  return out;
}

bool HFunction::defined(int node) const { return !std::isnan(value[node]); }

double HFunction::difference(int a, int b, const Shift& shift) const {
  const Shift c = lift[a] + shift - lift[b];
  return value[b] + c[0] * periods[0] + c[1] * periods[1] - value[a];
}

int outer_face(const EmbeddedGraph& g) {
  if (g.surface() != SurfaceKind::planar) return -1;
  for (int f = 0; f < g.num_faces(); ++f)
    if (g.face_rotation(f) < 0.0) return f;
  return -1;
}

HFunction integrate_square(const EmbeddedGraph& g, const MidpointFunction& G, std::span<const int> excluded,
                           double tol) {
  const int nv = g.num_vertices();
  const int nl = nv + g.num_faces();
  const int nd = g.num_darts();
  std::vector<bool> active(nl, true);
  for (int x : excluded) {
    if (x < 0 || x >= nl) throw ValidationError("excluded node out of range");
    active[x] = false;
  }

  // Corner relation of dart e: H(o e) - H(face e) = 2 |Pr(G(z_e); leading line)|^2.
  struct Corner {
    int a, b;
    Shift shift;
    double value;
  };
  const auto cshift = corner_shifts(g);
  std::vector<Corner> corners;
  std::vector<std::vector<int>> adj(nl);
  double scale = 1.0;
  for (int e = 0; e < nd; ++e) {
    const int a = g.origin(e);
    const int b = nv + g.face_of(e);
    if (!active[a] || !active[b]) continue;
    const double val = 2.0 * std::norm(project(G(g.edge_of(e)), leading_line(g, e)));
    scale = std::max(scale, val);
    adj[a].push_back(static_cast<int>(corners.size()));
    adj[b].push_back(static_cast<int>(corners.size()));
    corners.push_back({a, b, cshift[e], val});
  }

  HFunction H;
  H.value.assign(nl, kNaN);
  H.lift.assign(nl, Shift{0, 0});
  H.base_point = -1;
  std::vector<bool> tree(corners.size(), false);
  for (int start = 0; start < nl; ++start) {
    if (!active[start] || H.defined(start) || adj[start].empty()) continue;
    if (H.base_point < 0) H.base_point = start;
    H.value[start] = 0.0;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      const int n = queue.front();
      queue.pop_front();
      for (int ci : adj[n]) {
        const Corner& c = corners[ci];
        const int other = c.a == n ? c.b : c.a;
        if (H.defined(other)) continue;
        tree[ci] = true;
        if (n == c.a) {
          H.value[other] = H.value[n] - c.value;
          H.lift[other] = H.lift[n] + c.shift;
        } else {
          H.value[other] = H.value[n] + c.value;
          H.lift[other] = H.lift[n] - c.shift;
        }
        queue.push_back(other);
      }
    }
  }
  if (H.base_point < 0) H.base_point = 0;

  // Homological loops determine the periods by least squares.
  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (std::size_t ci = 0; ci < corners.size(); ++ci) {
    if (tree[ci]) continue;
    const Corner& c = corners[ci];
    const Shift cls = H.lift[c.a] + c.shift - H.lift[c.b];
    if (cls == Shift{0, 0}) continue;
    const Eigen::Vector2d cv(cls[0], cls[1]);
    normal += cv * cv.transpose();
    rhs += cv * (H.value[c.a] - H.value[c.b] - c.value);
  }
  if (normal.determinant() > 0.5) {
    const Eigen::Vector2d p = normal.ldlt().solve(rhs);
    H.periods = {p(0), p(1)};
  } else if (normal.trace() > 0.5) {
    // only one direction of homology is visible from the domain
    const int axis = normal(0, 0) > normal(1, 1) ? 0 : 1;
    H.periods[axis] = rhs(axis) / normal(axis, axis);
  }

  for (std::size_t ci = 0; ci < corners.size(); ++ci) {
    if (tree[ci]) continue;
    const Corner& c = corners[ci];
    const double r = std::abs(H.difference(c.a, c.b, c.shift) + c.value);
    if (r > H.closure_residual) {
      H.closure_residual = r;
      H.worst_loop = {c.a, c.b};
    }
  }
  for (int v = 0; v < nv; ++v)
    if (H.defined(v)) H.max_sholo_residual = std::max(H.max_sholo_residual, sholo_residual(g, G, v));

  if (g.surface() == SurfaceKind::planar && H.closure_residual > tol * scale) {
    std::ostringstream msg;
    msg << "integral of G^2 does not close: residual " << H.closure_residual << " between Lambda nodes "
        << H.worst_loop[0] << " and " << H.worst_loop[1];
    throw ValidationError(msg.str());
  }
  return H;
}

IncrementCheck check_increments(const EmbeddedGraph& g, const MidpointFunction& G, const HFunction& H) {
  const int nv = g.num_vertices();
  const auto cshift = corner_shifts(g);
  IncrementCheck out;
  for (int e = 0; e < g.num_darts(); ++e) {
    const double th = theta_of(g, e);
    const cplx gz2 = G(g.edge_of(e)) * G(g.edge_of(e));
    const int o = g.origin(e);
    const int t = g.terminus(e);
    if (H.defined(o) && H.defined(t)) {
      const double want = (2.0 * std::cos(th) * g.direction(e) * gz2).imag();
      out.primal = std::max(out.primal, std::abs(H.difference(o, t, g.dart(e).shift) - want));
    }
    const int fa = nv + g.face_of(g.reversal(e));
    const int fb = nv + g.face_of(e);
    if (H.defined(fa) && H.defined(fb)) {
      const double want = (2.0 * std::cos(kPi / 2 - th) * kI * g.direction(e) * gz2).imag();
      out.dual = std::max(out.dual, std::abs(H.difference(fa, fb, dual_shift(g, cshift, e)) - want));
    }
  }
  return out;
}

HLaplacian laplacian_of_H(const EmbeddedGraph& g, const HFunction& H) {
  const int nv = g.num_vertices();
  const int nf = g.num_faces();
  const auto cshift = corner_shifts(g);
  HLaplacian out{std::vector<double>(nv, kNaN), std::vector<double>(nf, kNaN)};

  auto conductance = [](double th) {
    if (std::abs(th - kPi / 2) < 1e-12) throw ValidationError("Laplacian undefined for theta = pi/2");
    return std::tan(th);
  };

  for (int v = 0; v < nv; ++v) {
    if (!H.defined(v)) continue;
    double sum = 0.0;
    double mu = 0.0;
    bool inside = true;
    for (int e : g.darts_at(v)) {
      const int w = g.terminus(e);
      if (!H.defined(w) || !H.defined(nv + g.face_of(e))) {
        inside = false;
        break;
      }
      const double th = theta_of(g, e);
      sum -= conductance(th) * H.difference(v, w, g.dart(e).shift);
      mu += std::sin(2 * th) / 2;
    }
    if (!inside) continue;
    if (mu == 0.0) throw ValidationError("Laplacian undefined for vanishing vertex measure");
    out.primal[v] = sum / mu;
  }

  std::vector<double> sum(nf, 0.0), mu(nf, 0.0);
  std::vector<bool> inside(nf, true);
  for (int e = 0; e < g.num_darts(); ++e) {
    const int f = g.face_of(g.reversal(e));
    const int f2 = g.face_of(e);
    if (!H.defined(nv + f)) continue;
    if (!H.defined(nv + f2)) {
      inside[f] = false;
      continue;
    }
    const double th = kPi / 2 - theta_of(g, e);
    sum[f] -= conductance(th) * H.difference(nv + f, nv + f2, dual_shift(g, cshift, e));
    mu[f] += std::sin(2 * th) / 2;
  }
  for (int f = 0; f < nf; ++f)
    for (int e : g.faces()[f])
      if (!H.defined(g.origin(e))) inside[f] = false;
  for (int f = 0; f < nf; ++f) {
    if (!H.defined(nv + f) || !inside[f]) continue;
    if (mu[f] == 0.0) throw ValidationError("Laplacian undefined for vanishing vertex measure");
    out.dual[f] = sum[f] / mu[f];
  }
  return out;
}

}  // namespace kwlab
