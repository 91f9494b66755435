#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kwlab {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised on malformed input; the CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an exponential-time oracle is asked to run beyond its guard (exit code 3).
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Representative of `a` in (-pi, pi].
double wrap_pi(double a);
// Representative of `a` in (0, 2pi].
double wrap_two_pi(double a);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Shift = std::array<int, 2>;
// Rows are the two generators of the period lattice.
using Lattice = std::array<std::array<double, 2>, 2>;

enum class SurfaceKind { planar, torus };

struct Vertex {
  int id = 0;
  Point pos;
};

struct EdgeSpec {
  int id = 0;
  int u = 0;
  int v = 0;
  Shift shift{0, 0};
};

// Dart 2k runs u -> v of edge k, dart 2k+1 runs back.
struct Dart {
  int origin = 0;
  int reversal = 0;
  int edge = 0;
  double dir_angle = 0.0;  // reduced to (-pi, pi]
  Shift shift{0, 0};
};

// Edge weights x in [0,1], stored together with theta = 2 atan(x).
class WeightSystem {
 public:
  WeightSystem() = default;
  explicit WeightSystem(std::vector<double> x);
  static WeightSystem from_theta(std::span<const double> theta);
  static WeightSystem uniform(std::size_t edges, double x);

  std::size_t size() const { return x_.size(); }
  double x(int edge) const { return x_[edge]; }
  double theta(int edge) const { return theta_[edge]; }
  double x_dual(int edge) const { return (1.0 - x_[edge]) / (1.0 + x_[edge]); }
  double theta_dual(int edge) const { return kPi / 2 - theta_[edge]; }
  std::span<const double> xs() const { return x_; }
  std::span<const double> thetas() const { return theta_; }

  WeightSystem dual() const;

 private:
  std::vector<double> x_;
  std::vector<double> theta_;
};

class EmbeddedGraph;

// Multiplicative function on darts with value(reversal(e)) = 1 / value(e).
class Cochain {
 public:
  Cochain() = default;
  explicit Cochain(std::vector<cplx> values);
  static Cochain trivial(std::size_t darts);
  // Value c on dart 2k and 1/c on dart 2k+1.
  static Cochain from_edges(std::span<const cplx> forward);

  std::size_t size() const { return values_.size(); }
  cplx operator()(int dart) const { return values_[dart]; }
  std::span<const cplx> values() const { return values_; }

  bool is_real_sign() const;  // all values +-1
  bool is_cocycle(const EmbeddedGraph& g, double tol = 1e-9) const;
  // Multiply outgoing darts at v by s and incoming ones by 1/s.
  Cochain gauged(const EmbeddedGraph& g, int vertex, cplx s) const;
  Cochain operator*(const Cochain& other) const;

 private:
  std::vector<cplx> values_;
};

// Raw combinatorial map plus angle data; EmbeddedGraph::assemble validates it.
struct GraphParts {
  SurfaceKind surface = SurfaceKind::planar;
  Lattice lattice{{{1.0, 0.0}, {0.0, 1.0}}};
  std::vector<Vertex> vertices;
  std::vector<EdgeSpec> edges;
  std::vector<double> dart_angles;  // size 2|E|
  std::vector<int> rotation;        // empty: sort darts by angle at each vertex
  WeightSystem weights;
  // The planar dual carries the zero of the constant field at the outer-face vertex,
  // so the per-vertex angle sum and face rotation checks are skipped for it.
  bool check_angle_sums = true;
};

class EmbeddedGraph {
 public:
  static EmbeddedGraph assemble(GraphParts parts);

  SurfaceKind surface() const { return surface_; }
  const Lattice& lattice() const { return lattice_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_darts() const { return static_cast<int>(darts_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int genus() const { return genus_; }

  const Vertex& vertex(int v) const { return vertices_[v]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const EdgeSpec& edge(int k) const { return edges_[k]; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  const Dart& dart(int e) const { return darts_[e]; }

  int origin(int e) const { return darts_[e].origin; }
  int terminus(int e) const { return darts_[darts_[e].reversal].origin; }
  int reversal(int e) const { return darts_[e].reversal; }
  int edge_of(int e) const { return darts_[e].edge; }
  double angle(int e) const { return darts_[e].dir_angle; }

  // Next counterclockwise dart with the same origin, and its inverse.
  int rotate(int e) const { return rotation_[e]; }
  int rotate_inv(int e) const { return rotation_inv_[e]; }
  // Successor along the face lying to the left of e.
  int face_next(int e) const { return rotation_inv_[darts_[e].reversal]; }

  // Angle from e to rotate(e), in (0, 2pi].
  double beta(int e) const;
  cplx q(int e) const { return std::polar(1.0, beta(e) / 2); }
  cplx direction(int e) const { return std::polar(1.0, angle(e)); }
  cplx direction_sqrt(int e) const { return std::polar(1.0, angle(e) / 2); }

  // Outgoing darts at v in counterclockwise order.
  const std::vector<int>& darts_at(int v) const { return star_[v]; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  int face_of(int e) const { return face_of_[e]; }
  // Total turning along the boundary of face f.
  double face_rotation(int f) const;

  const WeightSystem& weights() const { return weights_; }
  EmbeddedGraph with_weights(WeightSystem w) const;

  // Displacement vector of dart e in the universal cover.
  Point displacement(int e) const;

 private:
  EmbeddedGraph() = default;
  void trace_faces();
  void validate(bool check_angle_sums) const;

  SurfaceKind surface_ = SurfaceKind::planar;
  Lattice lattice_{};
  std::vector<Vertex> vertices_;
  std::vector<EdgeSpec> edges_;
  std::vector<Dart> darts_;
  std::vector<int> rotation_;
  std::vector<int> rotation_inv_;
  std::vector<std::vector<int>> star_;
  std::vector<std::vector<int>> faces_;
  std::vector<int> face_of_;
  int genus_ = 0;
  WeightSystem weights_;
};

// Parts with angles taken from straight displacement vectors (lattice ignored when planar).
GraphParts straight_line_parts(SurfaceKind surface, const Lattice& lattice,
                               std::span<const Vertex> vertices, std::span<const EdgeSpec> edges,
                               WeightSystem weights);

// Straight-line planar embedding; darts sorted by angle at each vertex.
EmbeddedGraph build_planar(std::span<const Vertex> vertices, std::span<const EdgeSpec> edges,
                           std::span<const double> x);
// Flat torus R^2 / lattice; edge vectors are pos(v) - pos(u) + shift * lattice.
EmbeddedGraph build_torus(const Lattice& lattice, std::span<const Vertex> vertices,
                          std::span<const EdgeSpec> edges, std::span<const double> x);

// Dual graph: vertex f is face f of g, dart e of the dual is e turned by +pi/2,
// weights are x* = (1 - x) / (1 + x).
EmbeddedGraph dual(const EmbeddedGraph& g);

// phi(e) = z^{s1(e)} w^{s2(e)} on a torus graph.
Cochain character_cochain(const EmbeddedGraph& g, cplx z, cplx w);

// Principal value in (-pi, pi) of angle(e2) - angle(e); requires terminus(e) = origin(e2), e2 != reversal(e).
double turning(const EmbeddedGraph& g, int e, int e2);

}  // namespace kwlab
