#include "invcx/algebra.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace invcx {

LieAlgebraSpec abelian_algebra(int dim, const std::string& name) {
  LieAlgebraSpec spec;
  spec.name = name.empty() ? fmt::format("abelian{}", dim) : name;
  spec.dim = dim;
  spec.c = BracketTable<double>(dim);
  spec.metric = RMatrix::Identity(dim, dim);
  for (int i = 0; i < dim; ++i) spec.labels.push_back(fmt::format("d{}", i + 1));
  return spec;
}

LieAlgebraSpec su2_algebra() {
  LieAlgebraSpec spec;
  spec.name = "su2";
  spec.dim = 3;
  spec.c = BracketTable<double>(3);
  const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (const auto& t : cyc) {
    spec.c(t[0], t[1], t[2]) = 1.0;
    spec.c(t[1], t[0], t[2]) = -1.0;
  }
  spec.metric = RMatrix::Identity(3, 3);
  spec.labels = {"e1", "e2", "e3"};
  return spec;
}

LieAlgebraSpec validate_algebra(LieAlgebraSpec spec, double tol) {
  const int n = spec.dim;
  if (n <= 0 || spec.c.dim() != n || spec.metric.rows() != n || spec.metric.cols() != n) {
    throw Error(ErrorCode::ConfigError, "algebra dimension does not match its tables");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double r = spec.c(i, j, k) + spec.c(j, i, k);
        if (std::abs(r) > tol) {
          throw Error(ErrorCode::AntisymmetryViolation,
                      fmt::format("antisymmetry fails at (i,j,k)=({},{},{}): c_ijk + c_jik = {:.3e}",
                                  i + 1, j + 1, k + 1, r));
        }
      }

  // Jacobi: [[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j] = 0, per output component m.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double r = 0.0;
          for (int l = 0; l < n; ++l) {
            r += spec.c(i, j, l) * spec.c(l, k, m) + spec.c(j, k, l) * spec.c(l, i, m) +
                 spec.c(k, i, l) * spec.c(l, j, m);
          }
          if (std::abs(r) > tol) {
            throw Error(ErrorCode::JacobiViolation,
                        fmt::format("Jacobi identity fails at (i,j,k)=({},{},{}), component {}: residual {:.3e}",
                                    i + 1, j + 1, k + 1, m + 1, r));
          }
        }

  const RMatrix& g = spec.metric;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::NonPositiveMetric, "metric is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(g);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::NonPositiveMetric,
                fmt::format("metric has non-positive eigenvalue {:.3e}", eig.eigenvalues().minCoeff()));
  }
  return spec;
}

RMatrix ad_matrix(const LieAlgebraSpec& spec, int a) {
  RMatrix ad(spec.dim, spec.dim);
  for (int j = 0; j < spec.dim; ++j)
    for (int k = 0; k < spec.dim; ++k) ad(k, j) = spec.c(a, j, k);
  return ad;
}

KillingForm killing_form(const LieAlgebraSpec& spec, const RankPolicy& policy) {
  const int n = spec.dim;
  std::vector<RMatrix> ads;
  ads.reserve(n);
  for (int a = 0; a < n; ++a) ads.push_back(ad_matrix(spec, a));
  RMatrix k(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) k(a, b) = (ads[a] * ads[b]).trace();
  KillingForm out;
  out.matrix = (k + k.transpose()) * 0.5;
  out.determinant = out.matrix.determinant();
  out.semisimple = numerical_rank(out.matrix.cast<cplx>(), policy) == n;
  return out;
}

AdInvariance check_ad_invariance(const LieAlgebraSpec& spec, double tol) {
  const int n = spec.dim;
  AdInvariance out;
  // <[X_i,X_j],X_k> + <X_j,[X_i,X_k]>
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double r = 0.0;
        for (int l = 0; l < n; ++l) r += spec.c(i, j, l) * spec.metric(l, k) + spec.c(i, k, l) * spec.metric(j, l);
        out.worst_residual = std::max(out.worst_residual, std::abs(r));
      }
  out.invariant = out.worst_residual <= tol;
  return out;
}

CVector bracket(const LieAlgebraSpec& spec, const CVector& u, const CVector& v) {
  const int n = spec.dim;
  CVector w = CVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (u(i) == cplx(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (v(j) == cplx(0)) continue;
      const cplx uv = u(i) * v(j);
      for (int k = 0; k < n; ++k) w(k) += uv * spec.c(i, j, k);
    }
  }
  return w;
}

}  // namespace invcx
