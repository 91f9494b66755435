#include "kwlab/linalg.hpp"

#include <algorithm>

namespace kwlab {

std::string_view ground_set_name(GroundSet s) {
  switch (s) {
    case GroundSet::darts: return "darts";
    case GroundSet::black: return "black";
    case GroundSet::white: return "white";
    case GroundSet::vertices: return "vertices";
    case GroundSet::lambda: return "lambda";
    case GroundSet::diamond: return "diamond";
    case GroundSet::m_vertices: return "m_vertices";
  }
  return "unknown";
}

cplx det(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("determinant of a non-square matrix");
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<CMatrix>(m).determinant();
}

std::vector<CVector> null_space(const CMatrix& m, double rel_tol) {
  std::vector<CVector> out;
  if (m.cols() == 0) return out;
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  const auto& v = svd.matrixV();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double sj = j < s.size() ? s(j) : 0.0;
    if (sj <= rel_tol * top || top == 0.0) out.push_back(v.col(j));
  }
  return out;
}

double max_abs(const CMatrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

double scaled_residual(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max({max_abs(a), max_abs(b), 1e-300});
  return max_abs(a - b) / scale;
}

CMatrix diagonal(const std::vector<cplx>& d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

}  // namespace kwlab
