#include "doctest.h"

#include "invcx/error.hpp"
#include "invcx/spectrum.hpp"

#include <fmt/format.h>

using namespace invcx;

namespace {

std::vector<int> dims_of(const SpectrumTruncation& t) {
  std::vector<int> d;
  for (const auto& l : t.levels) d.push_back(l.dim);
  return d;
}

std::vector<Rational> lambdas_of(const SpectrumTruncation& t) {
  std::vector<Rational> d;
  for (const auto& l : t.levels) d.push_back(l.lambda);
  return d;
}

void check_level_invariants(const SpectrumTruncation& t) {
  const auto& alg = t.algebra;
  const RMatrix ginv = alg.metric.inverse();
  for (const auto& level : t.levels) {
    const int n = alg.dim;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CMatrix rhs = CMatrix::Zero(level.dim, level.dim);
        for (int k = 0; k < n; ++k) rhs += alg.c(i, j, k) * level.fields[k];
        const CMatrix lhs = level.fields[i] * level.fields[j] - level.fields[j] * level.fields[i];
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
    CMatrix casimir = CMatrix::Zero(level.dim, level.dim);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) casimir -= ginv(a, b) * level.fields[a] * level.fields[b];
    CHECK((casimir - level.value * CMatrix::Identity(level.dim, level.dim)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

}  // namespace

TEST_CASE("torus and SU(2) level enumeration") {
  const auto t2 = enumerate_levels(TorusBackend(2), 5.0);
  CHECK(lambdas_of(t2) == std::vector<Rational>{0, 1, 2, 4, 5});
  CHECK(dims_of(t2) == std::vector<int>{1, 4, 4, 4, 8});

  const auto su = enumerate_levels(Su2Backend(), 6.0);
  CHECK(lambdas_of(su) == std::vector<Rational>{0, Rational(3, 4), 2, Rational(15, 4), 6});
  CHECK(dims_of(su) == std::vector<int>{1, 4, 9, 16, 25});

  for (const auto* b : {static_cast<const SpectralBackend*>(new TorusBackend(3)),
                        static_cast<const SpectralBackend*>(new Su2Backend())}) {
    const auto zero = enumerate_levels(*b, 0.0);
    REQUIRE(zero.levels.size() == 1);
    CHECK(zero.levels[0].dim == 1);
    for (const auto& f : zero.levels[0].fields) CHECK(f.norm() == 0.0);
    delete b;
  }
}

TEST_CASE("negative cutoff and unknown level") {
  CHECK_THROWS_AS(enumerate_levels(TorusBackend(1), -1.0), Error);
  const auto t = enumerate_levels(TorusBackend(1), 4.0);
  try {
    vector_field_symbol(t, Rational(2), 0);
    FAIL("expected UnknownLevel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownLevel);
  }
}

TEST_CASE("torus symbols") {
  const auto t1 = enumerate_levels(TorusBackend(1), 9.0);
  for (int k = 1; k <= 3; ++k) {
    const CMatrix& x = vector_field_symbol(t1, Rational(k * k), 0);
    REQUIRE(x.rows() == 2);
    CHECK(x.isDiagonal());
    // Lexicographic labels put -k first.
    const auto& level = t1.levels[t1.find(Rational(k * k))];
    CHECK(level.labels == std::vector<std::string>{fmt::format("({})", -k), fmt::format("({})", k)});
    CHECK(std::abs(x(0, 0) - cplx(0.0, -k)) + std::abs(x(1, 1) - cplx(0.0, k)) < 1e-15);
  }
  const auto t2 = enumerate_levels(TorusBackend(2), 2.0);
  const EigenLevel& l2 = t2.levels[t2.find(Rational(2))];
  CVector c(2);
  c << 1.0, cplx(0.0, 1.0);
  const CMatrix m = complex_field_symbol(l2, c);
  const double a = std::sqrt(2.0);
  CVector ca(2);
  ca << 1.0, a;
  const CMatrix ma = complex_field_symbol(l2, ca);
  for (int i = 0; i < l2.dim; ++i) {
    int k1 = 0, k2 = 0;
    REQUIRE(std::sscanf(l2.labels[i].c_str(), "(%d,%d)", &k1, &k2) == 2);
    CHECK(std::abs(m(i, i) - cplx(-k2, k1)) < 1e-15);
    if (k1 == 1 && k2 == -1) CHECK(std::abs(ma(i, i) - cplx(0.0, 1.0 - a)) < 1e-15);
  }
  CHECK(complex_field_symbol(l2, CVector::Zero(2)).norm() == 0.0);
}

TEST_CASE("spin one half symbols") {
  const auto su = enumerate_levels(Su2Backend(), 1.0);
  const EigenLevel& l = su.levels[su.find(Rational(3, 4))];
  for (const auto& x : l.fields) {
    Eigen::ComplexEigenSolver<CMatrix> es(x);
    int plus = 0, minus = 0;
    for (int i = 0; i < 4; ++i) {
      const cplx ev = es.eigenvalues()(i);
      if (std::abs(ev - cplx(0.0, 0.5)) < 1e-12) ++plus;
      if (std::abs(ev - cplx(0.0, -0.5)) < 1e-12) ++minus;
    }
    CHECK(plus == 2);
    CHECK(minus == 2);
  }
}

TEST_CASE("bracket compatibility and Casimir identity at every level") {
  check_level_invariants(enumerate_levels(TorusBackend(2), 30.0));
  check_level_invariants(enumerate_levels(TorusBackend(3), 12.0));
  check_level_invariants(enumerate_levels(Su2Backend(), 30.0));
}

TEST_CASE("SU(2) symbols are block diagonal with identical blocks") {
  const auto su = enumerate_levels(Su2Backend(), 12.0);
  for (const auto& level : su.levels) {
    const int b = static_cast<int>(std::lround(std::sqrt(level.dim)));
    for (const auto& x : level.fields) {
      const CMatrix block = x.block(0, 0, b, b);
      CMatrix expect = CMatrix::Zero(level.dim, level.dim);
      for (int k = 0; k < b; ++k) expect.block(k * b, k * b, b, b) = block;
      CHECK((x - expect).norm() < 1e-14);
    }
  }
}

TEST_CASE("Weyl partial sums are monotone and bounded") {
  for (const auto* b : {static_cast<const SpectralBackend*>(new TorusBackend(2)),
                        static_cast<const SpectralBackend*>(new Su2Backend())}) {
    double prev = 0.0;
    const double base = enumerate_levels(*b, 25.0).weyl_partial_sum;
    for (double c : {25.0, 50.0, 100.0, 200.0}) {
      const double w = enumerate_levels(*b, c).weyl_partial_sum;
      CHECK(w >= prev);
      CHECK(w <= 2.0 * base);
      prev = w;
    }
    delete b;
  }
}

TEST_CASE("spin matrices satisfy the angular momentum algebra") {
  for (int j2 = 0; j2 <= 4; ++j2) {
    const auto j = spin_matrices(j2);
    const cplx i(0.0, 1.0);
    CHECK((j[0] * j[1] - j[1] * j[0] - i * j[2]).norm() < 1e-13);
    const double l = j2 / 2.0;
    const CMatrix c = j[0] * j[0] + j[1] * j[1] + j[2] * j[2];
    CHECK((c - l * (l + 1) * CMatrix::Identity(j2 + 1, j2 + 1)).norm() < 1e-12);
  }
}
