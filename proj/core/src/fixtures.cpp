#include "kwlab/fixtures.hpp"

#include <cmath>
#include <vector>

namespace kwlab::fixtures {

namespace {

std::vector<Vertex> numbered(std::initializer_list<Point> pts) {
  std::vector<Vertex> out;
  for (const Point& p : pts) out.push_back({static_cast<int>(out.size()), p});
  return out;
}

std::vector<double> repeat(std::size_t n, double x) { return std::vector<double>(n, x); }

}  // namespace

EmbeddedGraph single_edge(double x) {
  const auto vs = numbered({{0, 0}, {1, 0}});
  const std::vector<EdgeSpec> es{{0, 0, 1, {0, 0}}};
  return build_planar(vs, es, repeat(1, x));
}

EmbeddedGraph triangle(double x) { return triangle(repeat(3, x)); }

EmbeddedGraph triangle(std::span<const double> x) {
  const auto vs = numbered({{0, 0}, {1, 0}, {0, 1}});
  const std::vector<EdgeSpec> es{{0, 0, 1, {0, 0}}, {1, 1, 2, {0, 0}}, {2, 2, 0, {0, 0}}};
  return build_planar(vs, es, x);
}

EmbeddedGraph four_cycle(double x) {
  const auto vs = numbered({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const std::vector<EdgeSpec> es{
      {0, 0, 1, {0, 0}}, {1, 1, 2, {0, 0}}, {2, 2, 3, {0, 0}}, {3, 3, 0, {0, 0}}};
  return build_planar(vs, es, repeat(4, x));
}

EmbeddedGraph path(int n, double x) {
  if (n < 2) throw ValidationError("path needs at least two vertices");
  std::vector<Vertex> vs;
  std::vector<EdgeSpec> es;
  for (int i = 0; i < n; ++i) vs.push_back({i, {static_cast<double>(i), 0.0}});
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i, i + 1, {0, 0}});
  return build_planar(vs, es, repeat(es.size(), x));
}

EmbeddedGraph square_patch(int n, int m, double x) {
  if (n < 1 || m < 1 || n * m < 2) throw ValidationError("grid too small");
  std::vector<Vertex> vs;
  std::vector<EdgeSpec> es;
  auto idx = [n](int i, int j) { return i + n * j; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) vs.push_back({idx(i, j), {static_cast<double>(i), static_cast<double>(j)}});
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n) es.push_back({static_cast<int>(es.size()), idx(i, j), idx(i + 1, j), {0, 0}});
      if (j + 1 < m) es.push_back({static_cast<int>(es.size()), idx(i, j), idx(i, j + 1), {0, 0}});
    }
  return build_planar(vs, es, repeat(es.size(), x));
}

EmbeddedGraph square_torus(int n, int m, double xh, double xv) {
  if (n < 1 || m < 1) throw ValidationError("torus size must be positive");
  std::vector<Vertex> vs;
  std::vector<EdgeSpec> es;
  std::vector<double> x;
  auto idx = [n](int i, int j) { return i + n * j; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) vs.push_back({idx(i, j), {static_cast<double>(i), static_cast<double>(j)}});
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(es.size());
      es.push_back({k, idx(i, j), idx((i + 1) % n, j), {i + 1 == n ? 1 : 0, 0}});
      es.push_back({k + 1, idx(i, j), idx(i, (j + 1) % m), {0, j + 1 == m ? 1 : 0}});
      x.push_back(xh);
      x.push_back(xv);
    }
  const Lattice L{{{static_cast<double>(n), 0.0}, {0.0, static_cast<double>(m)}}};
  return build_torus(L, vs, es, x);
}

EmbeddedGraph rect_torus(double x, double y) { return square_torus(1, 1, x, y); }

EmbeddedGraph honeycomb_torus(std::span<const double> x) {
  if (x.size() != 3) throw ValidationError("honeycomb needs three weights");
  const double r3 = std::sqrt(3.0);
  const Lattice L{{{r3, 0.0}, {r3 / 2, 1.5}}};
  const auto vs = numbered({{0, 0}, {0, 1}});
  const std::vector<EdgeSpec> es{{0, 0, 1, {0, 0}}, {1, 0, 1, {0, -1}}, {2, 0, 1, {1, -1}}};
  return build_torus(L, vs, es, x);
}

}  // namespace kwlab::fixtures
