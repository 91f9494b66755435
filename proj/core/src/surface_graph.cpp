#include "kwlab/surface_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kwlab {

namespace {

constexpr double kAngleTol = 1e-12;
constexpr double kSumTol = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

Point lattice_offset(const Lattice& L, const Shift& s) {
  return {s[0] * L[0][0] + s[1] * L[1][0], s[0] * L[0][1] + s[1] * L[1][1]};
}

}  // namespace

double wrap_pi(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r;
}

// ---------------------------------------------------------------- weights

WeightSystem::WeightSystem(std::vector<double> x) : x_(std::move(x)) {
  theta_.reserve(x_.size());
  for (double v : x_) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, "edge weight x outside [0,1]");
    theta_.push_back(2.0 * std::atan(v));
  }
}

WeightSystem WeightSystem::from_theta(std::span<const double> theta) {
  std::vector<double> x;
  x.reserve(theta.size());
  for (double t : theta) {
    require(std::isfinite(t) && t >= 0.0 && t <= kPi / 2 + 1e-15, "theta outside [0, pi/2]");
    x.push_back(std::min(1.0, std::tan(t / 2)));
  }
  WeightSystem w(std::move(x));
  // keep the caller's angles exactly rather than the atan round trip
  for (std::size_t k = 0; k < theta.size(); ++k) w.theta_[k] = std::min(theta[k], kPi / 2);
  return w;
}

WeightSystem WeightSystem::uniform(std::size_t edges, double x) {
  return WeightSystem(std::vector<double>(edges, x));
}

WeightSystem WeightSystem::dual() const {
  std::vector<double> th(size());
  for (std::size_t k = 0; k < size(); ++k) th[k] = theta_dual(static_cast<int>(k));
  WeightSystem w = from_theta(th);
  for (std::size_t k = 0; k < size(); ++k) w.x_[k] = x_dual(static_cast<int>(k));
  return w;
}

// ---------------------------------------------------------------- cochains

Cochain::Cochain(std::vector<cplx> values) : values_(std::move(values)) {
  require(values_.size() % 2 == 0, "cochain needs an even number of darts");
  for (std::size_t e = 0; e < values_.size(); e += 2) {
    const cplx a = values_[e];
    const cplx b = values_[e + 1];
    require(std::abs(a) > 0.0 && std::abs(b) > 0.0, "cochain value is zero");
    require(std::abs(a * b - 1.0) <= 1e-12 * std::max(1.0, std::abs(a) * std::abs(b)),
            "cochain is not inverted by dart reversal");
  }
}

Cochain Cochain::trivial(std::size_t darts) { return Cochain(std::vector<cplx>(darts, 1.0)); }

Cochain Cochain::from_edges(std::span<const cplx> forward) {
  std::vector<cplx> v;
  v.reserve(2 * forward.size());
  for (cplx c : forward) {
    require(std::abs(c) > 0.0, "cochain value is zero");
    v.push_back(c);
    v.push_back(1.0 / c);
  }
  return Cochain(std::move(v));
}

bool Cochain::is_real_sign() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx c) {
    return std::abs(c.imag()) < 1e-14 && std::abs(std::abs(c.real()) - 1.0) < 1e-14;
  });
}

bool Cochain::is_cocycle(const EmbeddedGraph& g, double tol) const {
  for (const auto& face : g.faces()) {
    cplx p = 1.0;
    for (int e : face) p *= values_[e];
    if (std::abs(p - 1.0) > tol) return false;
  }
  return true;
}

Cochain Cochain::gauged(const EmbeddedGraph& g, int vertex, cplx s) const {
  std::vector<cplx> v = values_;
  for (int e = 0; e < g.num_darts(); ++e) {
    if (g.origin(e) == vertex) v[e] *= s;
    if (g.terminus(e) == vertex) v[e] /= s;
  }
  return Cochain(std::move(v));
}

Cochain Cochain::operator*(const Cochain& other) const {
  std::vector<cplx> v(values_.size());
  for (std::size_t e = 0; e < v.size(); ++e) v[e] = values_[e] * other.values_[e];
  return Cochain(std::move(v));
}

// ---------------------------------------------------------------- graph

EmbeddedGraph EmbeddedGraph::assemble(GraphParts parts) {
  EmbeddedGraph g;
  g.surface_ = parts.surface;
  g.lattice_ = parts.lattice;
  g.vertices_ = std::move(parts.vertices);
  g.edges_ = std::move(parts.edges);
  const int nv = g.num_vertices();
  const int ne = g.num_edges();
  require(nv > 0, "graph has no vertices");
  require(parts.weights.size() == static_cast<std::size_t>(ne), "one weight per edge required");
  require(parts.dart_angles.size() == static_cast<std::size_t>(2 * ne), "one angle per dart required");
  g.weights_ = std::move(parts.weights);

  g.darts_.resize(2 * ne);
  for (int k = 0; k < ne; ++k) {
    const EdgeSpec& es = g.edges_[k];
    require(es.u >= 0 && es.u < nv && es.v >= 0 && es.v < nv, "edge endpoint out of range");
    if (g.surface_ == SurfaceKind::planar)
      require(es.shift == Shift{0, 0}, "planar edges carry no shift");
    g.darts_[2 * k] = {es.u, 2 * k + 1, k, wrap_pi(parts.dart_angles[2 * k]), es.shift};
    g.darts_[2 * k + 1] = {es.v, 2 * k, k, wrap_pi(parts.dart_angles[2 * k + 1]),
                           Shift{-es.shift[0], -es.shift[1]}};
  }

  g.star_.assign(nv, {});
  for (int e = 0; e < 2 * ne; ++e) g.star_[g.darts_[e].origin].push_back(e);
  for (int v = 0; v < nv; ++v) require(!g.star_[v].empty(), "isolated vertex");

  g.rotation_.assign(2 * ne, -1);
  if (parts.rotation.empty()) {
    for (int v = 0; v < nv; ++v) {
      auto s = g.star_[v];
      std::sort(s.begin(), s.end(), [&](int a, int b) {
        const double ta = g.darts_[a].dir_angle;
        const double tb = g.darts_[b].dir_angle;
        return ta != tb ? ta < tb : a < b;
      });
      for (std::size_t i = 0; i < s.size(); ++i) {
        const int next = s[(i + 1) % s.size()];
        if (s.size() > 1) {
          const double gap = wrap_two_pi(g.darts_[next].dir_angle - g.darts_[s[i]].dir_angle);
          require(gap > kAngleTol && gap < kTwoPi - kAngleTol,
                  "coincident darts at vertex " + std::to_string(g.vertices_[v].id));
        }
        g.rotation_[s[i]] = next;
      }
    }
  } else {
    require(parts.rotation.size() == static_cast<std::size_t>(2 * ne), "rotation has wrong size");
    g.rotation_ = std::move(parts.rotation);
  }

  g.rotation_inv_.assign(2 * ne, -1);
  for (int e = 0; e < 2 * ne; ++e) {
    const int r = g.rotation_[e];
    require(r >= 0 && r < 2 * ne && g.rotation_inv_[r] == -1, "rotation is not a permutation");
    require(g.darts_[r].origin == g.darts_[e].origin, "rotation leaves the vertex");
    g.rotation_inv_[r] = e;
  }
  // reorder each star along the rotation cycle, starting at its lowest dart id
  for (int v = 0; v < nv; ++v) {
    auto& s = g.star_[v];
    const int start = *std::min_element(s.begin(), s.end());
    std::vector<int> cyc{start};
    for (int e = g.rotation_[start]; e != start; e = g.rotation_[e]) cyc.push_back(e);
    require(cyc.size() == s.size(), "rotation at a vertex is not a single cycle");
    s = std::move(cyc);
  }

  g.trace_faces();
  const int chi = nv - ne + g.num_faces();
  require(chi % 2 == 0 && chi <= 2, "Euler characteristic is not that of an orientable surface");
  g.genus_ = (2 - chi) / 2;
  if (g.surface_ == SurfaceKind::planar) require(g.genus_ == 0, "planar input traced to genus > 0");
  if (g.surface_ == SurfaceKind::torus) require(g.genus_ == 1, "torus input traced to genus != 1");
  g.validate(parts.check_angle_sums);
  return g;
}

void EmbeddedGraph::trace_faces() {
  face_of_.assign(darts_.size(), -1);
  faces_.clear();
  for (int e0 = 0; e0 < num_darts(); ++e0) {
    if (face_of_[e0] != -1) continue;
    std::vector<int> cyc;
    int e = e0;
    do {
      face_of_[e] = static_cast<int>(faces_.size());
      cyc.push_back(e);
      e = face_next(e);
    } while (e != e0);
    faces_.push_back(std::move(cyc));
  }
}

void EmbeddedGraph::validate(bool check_angle_sums) const {
  for (int e = 0; e < num_darts(); ++e) {
    const Dart& d = darts_[e];
    const Dart& r = darts_[d.reversal];
    require(r.reversal == e && d.reversal != e, "reversal is not a fixed-point-free involution");
    require(r.shift[0] == -d.shift[0] && r.shift[1] == -d.shift[1], "shift not reversed");
    const double diff = wrap_pi(r.dir_angle - d.dir_angle - kPi);
    require(std::abs(diff) <= kAngleTol, "reversed dart angle differs from angle + pi");
  }
  if (!check_angle_sums) return;
  for (int v = 0; v < num_vertices(); ++v) {
    double sum = 0.0;
    for (int e : star_[v]) sum += beta(e);
    require(std::abs(sum - kTwoPi) <= kSumTol,
            "angles around vertex " + std::to_string(vertices_[v].id) + " do not sum to 2pi");
  }
  for (int f = 0; f < num_faces(); ++f) {
    const double turns = face_rotation(f) / kTwoPi;
    const double nearest = std::round(turns);
    require(std::abs(turns - nearest) * kTwoPi <= kSumTol &&
                std::abs(std::fmod(std::abs(nearest), 2.0) - 1.0) < 0.5,
            "face boundary rotation is not an odd multiple of 2pi");
  }
}

double EmbeddedGraph::beta(int e) const {
  const int r = rotation_[e];
  if (r == e) return kTwoPi;
  return wrap_two_pi(darts_[r].dir_angle - darts_[e].dir_angle);
}

double EmbeddedGraph::face_rotation(int f) const {
  double sum = 0.0;
  for (int e : faces_[f]) sum += kPi - beta(face_next(e));
  return sum;
}

EmbeddedGraph EmbeddedGraph::with_weights(WeightSystem w) const {
  require(w.size() == edges_.size(), "one weight per edge required");
  EmbeddedGraph g = *this;
  g.weights_ = std::move(w);
  return g;
}

Point EmbeddedGraph::displacement(int e) const {
  const Point a = vertices_[origin(e)].pos;
  const Point b = vertices_[terminus(e)].pos;
  const Point s = lattice_offset(lattice_, darts_[e].shift);
  return {b.x - a.x + s.x, b.y - a.y + s.y};
}

// ---------------------------------------------------------------- builders

GraphParts straight_line_parts(SurfaceKind surface, const Lattice& lattice,
                               std::span<const Vertex> vertices, std::span<const EdgeSpec> edges,
                               WeightSystem weights) {
  GraphParts p;
  p.surface = surface;
  p.lattice = lattice;
  p.vertices.assign(vertices.begin(), vertices.end());
  p.edges.assign(edges.begin(), edges.end());
  p.weights = std::move(weights);
  if (surface == SurfaceKind::torus) {
    const double det = lattice[0][0] * lattice[1][1] - lattice[0][1] * lattice[1][0];
    require(std::abs(det) > 1e-12, "degenerate lattice");
  }
  p.dart_angles.assign(2 * p.edges.size(), 0.0);
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const EdgeSpec& es = p.edges[k];
    require(es.u >= 0 && es.v >= 0 && static_cast<std::size_t>(std::max(es.u, es.v)) < p.vertices.size(),
            "edge endpoint out of range");
    if (surface == SurfaceKind::planar) {
      require(es.u != es.v, "planar loops are not supported");
      require(es.shift == Shift{0, 0}, "planar edges carry no shift");
    }
    const Point a = p.vertices[es.u].pos;
    const Point b = p.vertices[es.v].pos;
    const Point s = surface == SurfaceKind::torus ? lattice_offset(lattice, es.shift) : Point{};
    const double dx = b.x - a.x + s.x;
    const double dy = b.y - a.y + s.y;
    require(std::hypot(dx, dy) > 1e-12, "zero-length edge displacement");
    const double ang = std::atan2(dy, dx);
    p.dart_angles[2 * k] = ang;
    p.dart_angles[2 * k + 1] = wrap_pi(ang + kPi);
  }
  return p;
}

EmbeddedGraph build_planar(std::span<const Vertex> vertices, std::span<const EdgeSpec> edges,
                           std::span<const double> x) {
  WeightSystem w(std::vector<double>(x.begin(), x.end()));
  return EmbeddedGraph::assemble(
      straight_line_parts(SurfaceKind::planar, Lattice{}, vertices, edges, std::move(w)));
}

EmbeddedGraph build_torus(const Lattice& lattice, std::span<const Vertex> vertices,
                          std::span<const EdgeSpec> edges, std::span<const double> x) {
  WeightSystem w(std::vector<double>(x.begin(), x.end()));
  return EmbeddedGraph::assemble(
      straight_line_parts(SurfaceKind::torus, lattice, vertices, edges, std::move(w)));
}

EmbeddedGraph dual(const EmbeddedGraph& g) {
  const int nd = g.num_darts();
  const int nf = g.num_faces();

  // Unroll each face boundary in the plane to get a face centre and, for every
  // dart, the vector from its (lifted) origin to the centre of the face on its left.
  std::vector<Point> centre(nf);
  std::vector<Point> to_centre(nd);
  for (int f = 0; f < nf; ++f) {
    const auto& cyc = g.faces()[f];
    std::vector<Point> lifted;
    Point p = g.vertex(g.origin(cyc.front())).pos;
    for (int e : cyc) {
      lifted.push_back(p);
      const Point d = g.displacement(e);
      p = {p.x + d.x, p.y + d.y};
    }
    Point c{0, 0};
    for (const Point& q : lifted) c = {c.x + q.x, c.y + q.y};
    c = {c.x / lifted.size(), c.y / lifted.size()};
    centre[f] = c;
    for (std::size_t j = 0; j < cyc.size(); ++j)
      to_centre[cyc[j]] = {c.x - lifted[j].x, c.y - lifted[j].y};
  }

  GraphParts p;
  p.surface = g.surface();
  p.lattice = g.lattice();
  p.check_angle_sums = g.surface() != SurfaceKind::planar;
  for (int f = 0; f < nf; ++f) p.vertices.push_back({f, centre[f]});

  const Lattice& L = g.lattice();
  const double det = L[0][0] * L[1][1] - L[0][1] * L[1][0];
  for (int k = 0; k < g.num_edges(); ++k) {
    const int e = 2 * k;
    const int er = e + 1;
    EdgeSpec es{g.edge(k).id, g.face_of(er), g.face_of(e), {0, 0}};
    if (g.surface() == SurfaceKind::torus) {
      const Point d = g.displacement(e);
      const Point want{to_centre[e].x - d.x - to_centre[er].x, to_centre[e].y - d.y - to_centre[er].y};
      const Point have{centre[es.v].x - centre[es.u].x, centre[es.v].y - centre[es.u].y};
      const double rx = want.x - have.x;
      const double ry = want.y - have.y;
      // solve (s1, s2) * L = (rx, ry)
      const double s1 = (rx * L[1][1] - ry * L[1][0]) / det;
      const double s2 = (ry * L[0][0] - rx * L[0][1]) / det;
      es.shift = {static_cast<int>(std::lround(s1)), static_cast<int>(std::lround(s2))};
      require(std::abs(s1 - es.shift[0]) < 1e-6 && std::abs(s2 - es.shift[1]) < 1e-6,
              "dual shift is not integral");
    }
    p.edges.push_back(es);
  }
  p.dart_angles.resize(nd);
  p.rotation.resize(nd);
  for (int e = 0; e < nd; ++e) {
    p.dart_angles[e] = g.angle(e) + kPi / 2;
    p.rotation[e] = g.reversal(g.rotate_inv(e));
  }
  p.weights = g.weights().dual();
  return EmbeddedGraph::assemble(std::move(p));
}

Cochain character_cochain(const EmbeddedGraph& g, cplx z, cplx w) {
  require(g.surface() == SurfaceKind::torus, "character cochains need a torus graph");
  require(std::abs(z) > 0.0 && std::abs(w) > 0.0, "character must be nonzero");
  std::vector<cplx> v(g.num_darts());
  for (int e = 0; e < g.num_darts(); ++e) {
    const Shift& s = g.dart(e).shift;
    v[e] = std::pow(z, s[0]) * std::pow(w, s[1]);
  }
  return Cochain(std::move(v));
}

double turning(const EmbeddedGraph& g, int e, int e2) {
  require(g.terminus(e) == g.origin(e2), "turning needs consecutive darts");
  require(e2 != g.reversal(e), "turning is undefined for backtracking");
  const double a = wrap_pi(g.angle(e2) - g.angle(e));
  require(std::abs(a) < kPi - kAngleTol, "turning angle of +-pi");
  return a;
}

}  // namespace kwlab
