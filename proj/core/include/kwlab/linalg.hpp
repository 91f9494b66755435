#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "kwlab/surface_graph.hpp"

namespace kwlab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Index sets that label matrix rows and columns. Order is always ascending id.
enum class GroundSet { darts, black, white, vertices, lambda, diamond, m_vertices };

std::string_view ground_set_name(GroundSet s);

struct LabeledMatrix {
  GroundSet rows = GroundSet::darts;
  GroundSet cols = GroundSet::darts;
  CMatrix m;
};

// LU with partial pivoting; 0 for exactly singular input.
cplx det(const CMatrix& m);

// Orthonormal basis of right singular directions with singular value
// below rel_tol times the largest one.
std::vector<CVector> null_space(const CMatrix& m, double rel_tol = 1e-8);

double max_abs(const CMatrix& m);
// max_abs(a - b) after dividing both by the larger of their max entries.
double scaled_residual(const CMatrix& a, const CMatrix& b);

CMatrix diagonal(const std::vector<cplx>& d);

}  // namespace kwlab
