#include "invcx/linalg.hpp"
#include "invcx/error.hpp"

#include <algorithm>

namespace invcx {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorCode::NonPositiveMetric: return "NonPositiveMetric";
    case ErrorCode::NotASubalgebra: return "NotASubalgebra";
    case ErrorCode::DependentGenerators: return "DependentGenerators";
    case ErrorCode::BidegreeOutOfRange: return "BidegreeOutOfRange";
    case ErrorCode::NegativeCutoff: return "NegativeCutoff";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::TruncationMismatch: return "TruncationMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoFailureCertificate: return "NoFailureCertificate";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::InvalidModule: return "InvalidModule";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double RankPolicy::threshold(double sigma_max) const {
  return std::max(relative * sigma_max, absolute);
}

SingularData singular_data(const CMatrix& a, const RankPolicy& policy) {
  SingularData out;
  const auto rows = a.rows();
  const auto cols = a.cols();
  if (rows == 0 || cols == 0) {
    out.values = RVector::Zero(0);
    out.u = CMatrix::Identity(rows, rows);
    out.v = CMatrix::Identity(cols, cols);
    out.threshold = policy.threshold(0.0);
    return out;
  }
  // Eigen 3.4.0 BDCSVD loses accuracy on matrices with clustered singular
  // values (projectors, ladder operators), so use the one-sided Jacobi SVD.
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.values = svd.singularValues();
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma_max = out.values.size() > 0 ? out.values(0) : 0.0;
  out.threshold = policy.threshold(out.sigma_max);
  out.rank = 0;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    if (out.values(i) > out.threshold) ++out.rank;
  }
  return out;
}

int numerical_rank(const CMatrix& a, const RankPolicy& policy) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector& s = svd.singularValues();
  const double thr = policy.threshold(s.size() ? s(0) : 0.0);
  return static_cast<int>((s.array() > thr).count());
}

CMatrix kernel_basis(const CMatrix& a, const RankPolicy& policy) {
  const SingularData sd = singular_data(a, policy);
  const auto cols = a.cols();
  return sd.v.rightCols(cols - sd.rank);
}

CMatrix range_basis(const CMatrix& a, const RankPolicy& policy) {
  const SingularData sd = singular_data(a, policy);
  return sd.u.leftCols(sd.rank);
}

CMatrix orthonormal_span(const CMatrix& cols, double cutoff) {
  if (cols.cols() == 0 || cols.rows() == 0) return CMatrix(cols.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(cols, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) >= cutoff) ++keep;
  return svd.matrixU().leftCols(keep);
}

double frob(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.norm();
}

double composition_residual(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "composition_residual: inner dimensions differ");
  }
  if (a.size() == 0 || b.size() == 0) return 0.0;
  const CMatrix ab = a * b;
  return frob(ab) / (1.0 + frob(a) * frob(b));
}

}  // namespace invcx
