#pragma once

#include "invcx/algebra.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace invcx {

using Rational = boost::rational<std::int64_t>;

std::string rational_string(const Rational& r);

/// One Laplacian eigenspace E_lambda with an orthonormal basis and the matrix
/// of every real basis field of the algebra acting on coefficient vectors.
struct EigenLevel {
  Rational lambda;
  double value = 0.0;
  int dim = 0;
  std::vector<std::string> labels;
  std::vector<CMatrix> fields;
};

struct SpectrumTruncation {
  std::string backend;
  LieAlgebraSpec algebra;
  double cutoff = 0.0;
  std::vector<EigenLevel> levels;  // strictly increasing lambda
  double weyl_partial_sum = 0.0;   // sum_{lambda != 0} d_lambda lambda^{-2N}

  int size() const { return static_cast<int>(levels.size()); }
  /// Position of lambda, or -1.
  int find(const Rational& lambda) const;
  long long total_dimension() const;
};

class SpectralBackend {
 public:
  virtual ~SpectralBackend() = default;
  virtual std::string id() const = 0;
  virtual const LieAlgebraSpec& algebra() const = 0;
  /// Levels with lambda <= cutoff, in increasing order.
  virtual std::vector<EigenLevel> levels(double cutoff) const = 0;
};

/// Flat torus T^n with the identity metric; E_lambda spanned by e^{i k.x}, |k|^2 = lambda.
class TorusBackend final : public SpectralBackend {
 public:
  explicit TorusBackend(int dims);
  std::string id() const override;
  const LieAlgebraSpec& algebra() const override { return algebra_; }
  std::vector<EigenLevel> levels(double cutoff) const override;

 private:
  int dims_;
  LieAlgebraSpec algebra_;
};

/// SU(2) with the identity metric on the eps_ijk basis; E_{l(l+1)} spanned by
/// the (2l+1)^2 normalized matrix elements of the spin-l representation.
class Su2Backend final : public SpectralBackend {
 public:
  Su2Backend();
  std::string id() const override { return "su2"; }
  const LieAlgebraSpec& algebra() const override { return algebra_; }
  std::vector<EigenLevel> levels(double cutoff) const override;

 private:
  LieAlgebraSpec algebra_;
};

std::unique_ptr<SpectralBackend> make_backend(const std::string& group, int dims = 1);

SpectrumTruncation enumerate_levels(const SpectralBackend& backend, double cutoff);

const CMatrix& vector_field_symbol(const SpectrumTruncation& truncation, const Rational& lambda, int a);

/// sum_a c_a X_a(lambda).
CMatrix complex_field_symbol(const EigenLevel& level, const CVector& coeffs);

/// Hermitian spin matrices J_x, J_y, J_z for spin twice_l/2 on the basis
/// m = l, l-1, ..., -l.
std::vector<CMatrix> spin_matrices(int twice_l);

struct TorusMode {
  std::vector<int> k;
  std::int64_t norm2 = 0;
};

/// Lattice points with |k|^2 <= cutoff, sorted by (|k|^2, k lexicographic).
std::vector<TorusMode> torus_modes(int dims, std::int64_t cutoff);

}  // namespace invcx
