#pragma once

#include <Eigen/Dense>

#include <complex>

namespace invcx {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Numerical rank policy shared by every pipeline: a singular value counts
/// when it exceeds max(relative * sigma_max, absolute).
struct RankPolicy {
  double relative = 1e-9;
  double absolute = 1e-12;

  double threshold(double sigma_max) const;
  RankPolicy scaled(double factor) const { return {relative * factor, absolute * factor}; }
};

struct SingularData {
  RVector values;  // descending
  CMatrix u;       // full left singular vectors
  CMatrix v;       // full right singular vectors
  double sigma_max = 0.0;
  double threshold = 0.0;
  int rank = 0;
};

SingularData singular_data(const CMatrix& a, const RankPolicy& policy);

int numerical_rank(const CMatrix& a, const RankPolicy& policy);

/// Orthonormal basis (columns) of ker a.
CMatrix kernel_basis(const CMatrix& a, const RankPolicy& policy);

/// Orthonormal basis (columns) of ran a.
CMatrix range_basis(const CMatrix& a, const RankPolicy& policy);

/// Orthonormal basis of the column span of `cols`, discarding directions whose
/// singular value is below `cutoff` (absolute).
CMatrix orthonormal_span(const CMatrix& cols, double cutoff);

/// Frobenius norm; zero for empty matrices.
double frob(const CMatrix& a);

/// ||a b|| / (1 + ||a|| ||b||), the scale-free composition residual.
double composition_residual(const CMatrix& a, const CMatrix& b);

}  // namespace invcx
