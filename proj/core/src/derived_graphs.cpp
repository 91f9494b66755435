#include "kwlab/derived_graphs.hpp"

#include <cmath>
#include <queue>

namespace kwlab {

namespace {

int to_sign(cplx v, const char* what) {
  if (std::abs(v - 1.0) < 1e-9) return 1;
  if (std::abs(v + 1.0) < 1e-9) return -1;
  throw ValidationError(std::string(what) + " is not +-1");
}

int idx(int dart, CEdgeKind k) { return 3 * dart + static_cast<int>(k); }

}  // namespace

// ------------------------------------------------------------------ C graph

CGraph::CGraph(EmbeddedGraph base) : base_(std::move(base)) {
  const EmbeddedGraph& g = base_;
  const int nd = g.num_darts();
  epsilon_.resize(nd);
  for (int e = 0; e < nd; ++e) {
    const int r = g.rotate(e);
    epsilon_[e] = to_sign(g.q(e) * std::conj(g.direction_sqrt(r)) * g.direction_sqrt(e), "epsilon");
  }
  edges_.resize(3 * nd);
  const cplx I{0.0, 1.0};
  for (int e = 0; e < nd; ++e) {
    const int k = g.edge_of(e);
    const double th = g.weights().theta(k);
    const cplx de = half_direction(e);
    CEdge perp{CEdgeKind::perpendicular, e, e, e, std::cos(th), 1.0, 1};
    const int er = g.reversal(e);
    CEdge par{CEdgeKind::parallel, e, e, er, std::sin(th), I, 0};
    par.omega = to_sign(I * de * std::conj(half_direction(er)), "parallel orientation");
    const int r = g.rotate(e);
    CEdge corner{CEdgeKind::corner, e, e, r, 1.0, -g.q(e), -epsilon_[e]};
    edges_[idx(e, CEdgeKind::perpendicular)] = perp;
    edges_[idx(e, CEdgeKind::parallel)] = par;
    edges_[idx(e, CEdgeKind::corner)] = corner;
  }
}

std::vector<int> CGraph::omegas() const {
  std::vector<int> out;
  out.reserve(edges_.size());
  for (const CEdge& ce : edges_) out.push_back(ce.omega);
  return out;
}

std::vector<cplx> lift_to_c(const CGraph& c, const Cochain& phi) {
  if (phi.size() != static_cast<std::size_t>(c.base().num_darts()))
    throw ValidationError("cochain size does not match the graph");
  std::vector<cplx> out(c.num_edges(), 1.0);
  for (int e = 0; e < c.base().num_darts(); ++e) out[idx(e, CEdgeKind::parallel)] = phi(e);
  return out;
}

std::vector<CFace> c_faces(const CGraph& c) {
  const EmbeddedGraph& g = c.base();
  std::vector<CFace> faces;
  auto expected = [](std::size_t len) { return (len / 2) % 2 == 1 ? 1 : -1; };
  for (int k = 0; k < g.num_edges(); ++k) {
    const int e = 2 * k;
    const int er = 2 * k + 1;
    CFace f{{idx(e, CEdgeKind::perpendicular), idx(er, CEdgeKind::parallel),
             idx(er, CEdgeKind::perpendicular), idx(e, CEdgeKind::parallel)},
            0};
    f.expected_sign = expected(f.edges.size());
    faces.push_back(f);
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    CFace f;
    for (int a : g.darts_at(v)) {
      f.edges.push_back(idx(a, CEdgeKind::corner));
      f.edges.push_back(idx(g.rotate(a), CEdgeKind::perpendicular));
    }
    f.expected_sign = expected(f.edges.size());
    faces.push_back(f);
  }
  for (const auto& cyc : g.faces()) {
    CFace f;
    for (int d : cyc) {
      f.edges.push_back(idx(d, CEdgeKind::parallel));
      f.edges.push_back(idx(g.face_next(d), CEdgeKind::corner));
    }
    f.expected_sign = expected(f.edges.size());
    faces.push_back(f);
  }
  return faces;
}

namespace {

// Closed walk in the base graph through which homology generators are read.
std::vector<std::vector<int>> generator_walks(const EmbeddedGraph& g) {
  std::vector<std::vector<int>> walks;
  if (g.surface() != SurfaceKind::torus) return walks;
  const int nv = g.num_vertices();
  std::vector<int> parent_dart(nv, -1);
  std::vector<Shift> acc(nv, Shift{0, 0});
  std::vector<bool> seen(nv, false);
  std::vector<bool> tree_edge(g.num_edges(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int e : g.darts_at(v)) {
      const int w = g.terminus(e);
      if (seen[w]) continue;
      seen[w] = true;
      parent_dart[w] = e;
      tree_edge[g.edge_of(e)] = true;
      acc[w] = {acc[v][0] + g.dart(e).shift[0], acc[v][1] + g.dart(e).shift[1]};
      q.push(w);
    }
  }
  auto path_from_root = [&](int v) {
    std::vector<int> p;
    for (int u = v; parent_dart[u] != -1; u = g.origin(parent_dart[u])) p.push_back(parent_dart[u]);
    return std::vector<int>(p.rbegin(), p.rend());
  };
  std::vector<Shift> classes;
  for (int k = 0; k < g.num_edges() && walks.size() < 2; ++k) {
    if (tree_edge[k]) continue;
    const int e = 2 * k;
    const int o = g.origin(e);
    const int t = g.terminus(e);
    const Shift h{acc[o][0] + g.dart(e).shift[0] - acc[t][0], acc[o][1] + g.dart(e).shift[1] - acc[t][1]};
    if (h == Shift{0, 0}) continue;
    if (!classes.empty() && classes[0][0] * h[1] - classes[0][1] * h[0] == 0) continue;
    classes.push_back(h);
    std::vector<int> walk = path_from_root(o);
    walk.push_back(e);
    for (int d : [&] {
           auto back = path_from_root(t);
           std::vector<int> rev;
           for (auto it = back.rbegin(); it != back.rend(); ++it) rev.push_back(g.reversal(*it));
           return rev;
         }())
      walk.push_back(d);
    walks.push_back(walk);
  }
  return walks;
}

}  // namespace

KasteleynReport validate_kasteleyn(const CGraph& c) {
  const auto om = c.omegas();
  return validate_kasteleyn(c, om);
}

KasteleynReport validate_kasteleyn(const CGraph& c, std::span<const int> omega) {
  if (omega.size() != static_cast<std::size_t>(c.num_edges()))
    throw ValidationError("one orientation sign per C-edge required");
  KasteleynReport rep;
  const auto faces = c_faces(c);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    int prod = 1;
    for (int ce : faces[i].edges) prod *= omega[ce];
    rep.face_product.push_back(prod);
    if (prod != faces[i].expected_sign) {
      rep.failing_faces.push_back(static_cast<int>(i));
      rep.ok = false;
    }
  }
  const EmbeddedGraph& g = c.base();
  for (const auto& walk : generator_walks(g)) {
    cplx prod = 1.0;
    for (std::size_t j = 0; j < walk.size(); ++j) {
      const int d = walk[j];
      const int next = walk[(j + 1) % walk.size()];
      prod *= c.edge(d, CEdgeKind::perpendicular).omega_tilde;                  // W(d) -> B(d)
      prod /= c.edge(g.reversal(d), CEdgeKind::parallel).omega_tilde;           // B(d) -> W(rev d)
      for (int a = g.reversal(d); a != next; a = g.rotate(a)) {
        prod *= c.edge(a, CEdgeKind::corner).omega_tilde;                       // W(a) -> B(R a)
        prod /= c.edge(g.rotate(a), CEdgeKind::perpendicular).omega_tilde;      // B(R a) -> W(R a)
      }
    }
    rep.generator_products.push_back(prod);
    if (std::abs(prod * prod - 1.0) > 1e-9) rep.ok = false;
  }
  return rep;
}

std::vector<int> dual_c_isomorphism(const CGraph& c, const CGraph& c_dual) {
  const EmbeddedGraph& g = c.base();
  if (c_dual.base().num_darts() != g.num_darts()) throw ValidationError("graphs are not dual");
  std::vector<int> map(c_dual.num_edges());
  for (int e = 0; e < g.num_darts(); ++e) {
    map[idx(e, CEdgeKind::perpendicular)] = idx(g.reversal(e), CEdgeKind::parallel);
    map[idx(e, CEdgeKind::parallel)] = idx(e, CEdgeKind::perpendicular);
    map[idx(e, CEdgeKind::corner)] = idx(g.rotate_inv(e), CEdgeKind::corner);
  }
  return map;
}

// ------------------------------------------------------------------ D graph

DGraph::DGraph(EmbeddedGraph base) : base_(std::move(base)) {
  const EmbeddedGraph& g = base_;
  edges_.reserve(4 * g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) {
    const int e = 2 * k;
    const int er = e + 1;
    const double a = g.angle(e);
    const double th = g.weights().theta(k);
    const double ths = g.weights().theta_dual(k);
    edges_.push_back({k, g.terminus(e), true, wrap_pi(a), th, std::sin(th)});
    edges_.push_back({k, face_vertex(g.face_of(e)), false, wrap_pi(a + kPi / 2), ths, std::cos(th)});
    edges_.push_back({k, g.origin(e), true, wrap_pi(a + kPi), th, std::sin(th)});
    edges_.push_back({k, face_vertex(g.face_of(er)), false, wrap_pi(a - kPi / 2), ths, std::cos(th)});
  }
}

SplitCochain split_cochain(const DGraph& d, std::span<const cplx> phi_d) {
  const EmbeddedGraph& g = d.base();
  if (phi_d.size() != d.edges().size()) throw ValidationError("one value per D half-edge required");
  std::vector<cplx> p(g.num_darts()), s(g.num_darts());
  for (int k = 0; k < g.num_edges(); ++k) {
    const cplx* h = &phi_d[4 * k];
    p[2 * k] = h[0] / h[2];
    p[2 * k + 1] = h[2] / h[0];
    s[2 * k] = h[1] / h[3];
    s[2 * k + 1] = h[3] / h[1];
  }
  return {Cochain(std::move(p)), Cochain(std::move(s))};
}

// ------------------------------------------------------------------ M graph

MGraph::MGraph(const CGraph& c) {
  const EmbeddedGraph& g = c.base();
  if (!is_isoradial(g)) throw ValidationError("M graph needs isoradial angle data");
  const int nd = g.num_darts();
  mu_.resize(nd);
  black_to_m_.resize(nd);
  for (int e = 0; e < nd; ++e) {
    const int r = g.rotate(e);
    black_to_m_[r] = e;
    mu_[e] = 0.5 * (std::sin(2 * g.weights().theta(g.edge_of(e))) +
                    std::sin(2 * g.weights().theta(g.edge_of(r))));
  }
  for (int d = 0; d < nd; ++d) {
    const int k = g.edge_of(d);
    edges_.push_back({CEdgeKind::perpendicular, d, g.rotate_inv(d), d, g.weights().theta_dual(k)});
    edges_.push_back({CEdgeKind::parallel, d, d, g.rotate_inv(g.reversal(d)), g.weights().theta(k)});
  }
}

bool is_isoradial(const EmbeddedGraph& g, double tol) {
  for (int e = 0; e < g.num_darts(); ++e) {
    const double want = g.weights().theta(g.edge_of(e)) + g.weights().theta(g.edge_of(g.rotate(e)));
    if (std::abs(g.beta(e) - want) > tol) return false;
  }
  return true;
}

}  // namespace kwlab
