#include "doctest.h"

#include "rank_oracle.hpp"

#include "invcx/cohomology.hpp"
#include "invcx/error.hpp"
#include "invcx/suite.hpp"

#include <random>

using namespace invcx;

namespace {

std::vector<long long> totals(const Structure& s, double cutoff) {
  const InvolutiveFrame f = structure_frame(s);
  const auto t = structure_truncation(s, cutoff);
  std::vector<long long> out;
  for (int q = 0; q <= f.n; ++q) out.push_back(dprime_cohomology(f, t, 0, q).total);
  return out;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(g(rng), g(rng));
  return Eigen::HouseholderQR<CMatrix>(a).householderQ() * CMatrix::Identity(n, n);
}

}  // namespace

TEST_CASE("level cohomology of zero maps") {
  const LevelCohomology c = level_cohomology(CMatrix::Zero(1, 1), CMatrix::Zero(1, 1));
  CHECK(c.h == 1);
  REQUIRE(c.representatives.cols() == 1);
  CHECK(std::abs(std::abs(c.representatives(0, 0)) - 1.0) < 1e-15);
  CHECK_FALSE(c.tolerance_sensitive);
}

TEST_CASE("level cohomology rejects non-complexes") {
  try {
    level_cohomology(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2));
    FAIL("expected NotAComplex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAComplex);
  }
}

TEST_CASE("T^2 de Rham degree one at levels 0 and 1") {
  const Structure s = find_structure("t2-derham");
  const InvolutiveFrame f = structure_frame(s);
  const auto t = structure_truncation(s, 1.0);
  const CohomologyTable tab = dprime_cohomology(f, t, 0, 1);
  CHECK(tab.levels[0].h == 2);
  CHECK(tab.levels[1].h == 0);
  CHECK(tab.levels[1].columns == 8);
  for (const auto& l : tab.levels) CHECK(l.kernel_dim + l.rank_p == l.columns);
}

TEST_CASE("Betti numbers and left-invariance") {
  CHECK(totals(find_structure("t2-derham"), 25.0) == std::vector<long long>{1, 2, 1});
  CHECK(totals(find_structure("su2-derham"), 12.0) == std::vector<long long>{1, 0, 0, 1});

  const Structure ell = find_structure("t2-d1-i-d2");
  const auto t = structure_truncation(ell, 25.0);
  const CohomologyTable h01 = dprime_cohomology(structure_frame(ell), t, 0, 1);
  CHECK(h01.total == 1);
  CHECK(h01.nonvanishing_levels == 1);
  CHECK(*h01.largest_nonvanishing == Rational(0));

  for (const char* id : {"t2-derham", "su2-derham"}) {
    const Structure s = find_structure(id);
    const InvolutiveFrame f = structure_frame(s);
    const auto tr = structure_truncation(s, 12.0);
    for (int q = 0; q <= f.n; ++q) CHECK(left_invariance_check(dprime_cohomology(f, tr, 0, q)).left_invariant);
  }

  const Structure d1 = find_structure("t2-d1");
  const auto tr = structure_truncation(d1, 9.0);
  const LeftInvarianceVerdict v = left_invariance_check(dprime_cohomology(structure_frame(d1), tr, 0, 1));
  CHECK_FALSE(v.left_invariant);
  // Levels k2^2 with k1 = 0 carry the kernel of i k1.
  CHECK(v.violating_levels == std::vector<Rational>{1, 4, 9});
}

TEST_CASE("injectivity probe") {
  const Structure s = find_structure("t2-derham");
  const InvolutiveFrame f = structure_frame(s);
  const auto t = structure_truncation(s, 4.0);
  const SymbolFamily d0 = assemble_dprime(f, t, 0, 0), d1 = assemble_dprime(f, t, 0, 1);

  const InjectivityResult zero = injectivity_probe(d1, d0, zero_sequence(t, 2));
  CHECK(zero.trivial_class);
  for (const auto& v : zero.preimage.levels) CHECK(v.norm() == 0.0);

  // Exact one-form at lambda = 2.
  TruncatedSequence u = zero_sequence(t, 1);
  const int l2 = t->find(Rational(2));
  u.levels[l2].setConstant(cplx(1.0, -0.5));
  const TruncatedSequence a = apply(d0, u);
  const InjectivityResult ex = injectivity_probe(d1, d0, a);
  CHECK(ex.trivial_class);
  const TruncatedSequence back = apply(d0, ex.preimage);
  for (int i = 0; i < t->size(); ++i) {
    CHECK((back.levels[i] - a.levels[i]).norm() < 1e-12);
    if (i != l2) CHECK(ex.preimage.levels[i].norm() == 0.0);
  }

  // Harmonic representative at lambda = 0.
  TruncatedSequence h = zero_sequence(t, 2);
  h.levels[0](0) = 1.0;
  const InjectivityResult nontriv = injectivity_probe(d1, d0, h);
  CHECK_FALSE(nontriv.trivial_class);
  CHECK(nontriv.obstructed_levels == std::vector<Rational>{0});
  CHECK(nontriv.residuals[0] > 1.0 - 1e-8);

  TruncatedSequence notclosed = zero_sequence(t, 2);
  notclosed.levels[l2](0) = 1.0;
  CHECK_THROWS_AS(injectivity_probe(d1, d0, notclosed), Error);
}

TEST_CASE("SVD cohomology matches the exact row-reduction oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const oracle::RandomComplex c = oracle::random_exact_complex(rng);
    const LevelCohomology lc = level_cohomology(c.p, c.q);
    CHECK(lc.h == c.h);
    CHECK(lc.kernel_dim + lc.rank_p == lc.columns);
    if (lc.h > 0) {
      CHECK((c.p * lc.representatives).norm() < 1e-8);
      if (c.q.cols() > 0) CHECK((c.q.adjoint() * lc.representatives).norm() < 1e-8 * (1.0 + c.q.norm()));
    }
  }
}

TEST_CASE("cohomology is invariant under a unitary change of eigenbasis") {
  const Structure s = find_structure("su2-cr");
  const InvolutiveFrame f = structure_frame(s);
  const auto t = structure_truncation(s, 6.0);
  const SymbolFamily p = assemble_dprime(f, t, 0, 1), q = assemble_dprime(f, t, 0, 0);
  const CohomologyTable base = aggregate(p, q);
  std::mt19937_64 rng(9);
  SymbolFamily p2 = p, q2 = q;
  for (int i = 0; i < t->size(); ++i) {
    const int d = t->levels[i].dim;
    const CMatrix u = random_unitary(d, rng);
    // Conjugate each d-block of source and target alike.
    auto conj = [&](const CMatrix& m) {
      const int rb = static_cast<int>(m.rows()) / d, cb = static_cast<int>(m.cols()) / d;
      CMatrix out = m;
      for (int r = 0; r < rb; ++r)
        for (int c = 0; c < cb; ++c) out.block(r * d, c * d, d, d) = u * m.block(r * d, c * d, d, d) * u.adjoint();
      return out;
    };
    p2.levels[i] = conj(p.levels[i]);
    q2.levels[i] = conj(q.levels[i]);
  }
  const CohomologyTable rot = aggregate(p2, q2);
  for (size_t i = 0; i < base.levels.size(); ++i) CHECK(rot.levels[i].h == base.levels[i].h);
  CHECK(rot.total == base.total);
}
