#pragma once

#include "invcx/linalg.hpp"

#include <string>
#include <vector>

namespace invcx {

/// Dense table of structure constants: [X_i, X_j] = sum_k c(i, j, k) X_k.
template <class Scalar>
class BracketTable {
 public:
  BracketTable() = default;
  explicit BracketTable(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim, Scalar(0)) {}

  int dim() const { return dim_; }

  Scalar& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  const Scalar& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != Scalar(0)) return false;
    return true;
  }

 private:
  size_t index(int i, int j, int k) const {
    return (static_cast<size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_ = 0;
  std::vector<Scalar> data_;
};

struct LieAlgebraSpec {
  std::string name;
  int dim = 0;
  BracketTable<double> c;
  RMatrix metric;
  std::vector<std::string> labels;
};

LieAlgebraSpec abelian_algebra(int dim, const std::string& name = "");

/// su(2) with [e_i, e_j] = eps_ijk e_k and the identity metric.
LieAlgebraSpec su2_algebra();

/// Throws Error{JacobiViolation | AntisymmetryViolation | NonPositiveMetric}.
LieAlgebraSpec validate_algebra(LieAlgebraSpec spec, double tol = 1e-12);

struct KillingForm {
  RMatrix matrix;
  double determinant = 0.0;
  bool semisimple = false;
};

KillingForm killing_form(const LieAlgebraSpec& spec, const RankPolicy& policy = {});

struct AdInvariance {
  bool invariant = false;
  double worst_residual = 0.0;
};

AdInvariance check_ad_invariance(const LieAlgebraSpec& spec, double tol = 1e-10);

/// Coordinates of [u, v] for complex coefficient vectors u, v.
CVector bracket(const LieAlgebraSpec& spec, const CVector& u, const CVector& v);

/// Matrix of ad X_a: column j holds the coordinates of [X_a, X_j].
RMatrix ad_matrix(const LieAlgebraSpec& spec, int a);

}  // namespace invcx
