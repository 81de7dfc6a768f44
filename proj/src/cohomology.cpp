#include "invcx/cohomology.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

namespace invcx {

namespace {

struct CoreCounts {
  int kernel_dim = 0, rank_p = 0, rank_q = 0, h = 0;
  CMatrix reps;
};

CoreCounts core(const CMatrix& p, const CMatrix& q, const RankPolicy& rank, double cutoff) {
  CoreCounts c;
  const SingularData sp = singular_data(p, rank);
  const SingularData sq = singular_data(q, rank);
  c.rank_p = sp.rank;
  c.rank_q = sq.rank;
  c.kernel_dim = static_cast<int>(p.cols()) - sp.rank;
  const CMatrix kernel = sp.v.rightCols(c.kernel_dim);
  const CMatrix range = sq.u.leftCols(sq.rank);
  const CMatrix projected = kernel - range * (range.adjoint() * kernel);
  c.reps = orthonormal_span(projected, cutoff);
  c.h = static_cast<int>(c.reps.cols());
  return c;
}

}  // namespace

LevelCohomology level_cohomology(const CMatrix& p, const CMatrix& q, const CohomologyPolicy& policy) {
  if (p.cols() != q.rows()) throw Error(ErrorCode::ShapeMismatch, "level_cohomology: P and Q do not compose");
  const double residual = composition_residual(p, q);
  if (residual > policy.complex_tol) {
    throw Error(ErrorCode::NotAComplex, fmt::format("P Q does not vanish: residual {:.3e}", residual));
  }
  LevelCohomology out;
  out.columns = static_cast<int>(p.cols());
  const CoreCounts c = core(p, q, policy.rank, policy.representative_cutoff);
  out.kernel_dim = c.kernel_dim;
  out.rank_p = c.rank_p;
  out.rank_q = c.rank_q;
  out.h = c.h;
  out.representatives = c.reps;
  for (double f : {10.0, 0.1}) {
    const CoreCounts alt = core(p, q, policy.rank.scaled(f), policy.representative_cutoff);
    if (alt.h != c.h || alt.kernel_dim - alt.rank_q != c.kernel_dim - c.rank_q) out.tolerance_sensitive = true;
  }
  if (c.h != c.kernel_dim - c.rank_q) out.tolerance_sensitive = true;
  return out;
}

CohomologyTable aggregate(const SymbolFamily& p, const SymbolFamily& q, const CohomologyPolicy& policy) {
  if (!same_truncation(*p.truncation, *q.truncation)) {
    throw Error(ErrorCode::TruncationMismatch, "aggregate: families live on different truncations");
  }
  if (p.source_arity != q.target_arity) throw Error(ErrorCode::ShapeMismatch, "aggregate: arities do not chain");
  CohomologyTable t;
  t.cutoff = p.truncation->cutoff;
  t.structure = p.label;
  const auto& levels = p.truncation->levels;
  for (size_t i = 0; i < levels.size(); ++i) {
    LevelCohomology lc = level_cohomology(p.levels[i], q.levels[i], policy);
    lc.lambda = levels[i].lambda;
    lc.value = levels[i].value;
    lc.dim = levels[i].dim;
    t.total += lc.h;
    if (lc.h > 0) {
      ++t.nonvanishing_levels;
      t.largest_nonvanishing = lc.lambda;
    }
    t.tolerance_sensitive = t.tolerance_sensitive || lc.tolerance_sensitive;
    t.levels.push_back(std::move(lc));
  }
  return t;
}

CohomologyTable dprime_cohomology(const InvolutiveFrame& frame, TruncationPtr truncation, int p, int q,
                                  const CohomologyPolicy& policy) {
  const SymbolFamily out = assemble_dprime(frame, truncation, p, q);
  const SymbolFamily in = q > 0 ? assemble_dprime(frame, truncation, p, q - 1)
                                : zero_family(truncation, 0, out.source_arity);
  CohomologyTable t = aggregate(out, in, policy);
  t.p = p;
  t.q = q;
  return t;
}

LeftInvarianceVerdict left_invariance_check(const CohomologyTable& table) {
  LeftInvarianceVerdict v;
  v.cutoff = table.cutoff;
  for (const auto& l : table.levels)
    if (l.value > 0.0 && l.h > 0) v.violating_levels.push_back(l.lambda);
  v.left_invariant = v.violating_levels.empty();
  v.statement = fmt::format(
      "H^{{{},{}}} restricted to E_lambda {} for every lambda != 0 with lambda <= {} (at cutoff {}); "
      "every class is left-invariant iff this holds for the whole spectrum",
      table.p, table.q, v.left_invariant ? "vanishes" : "does not vanish", table.cutoff, table.cutoff);
  return v;
}

InjectivityResult injectivity_probe(const SymbolFamily& p, const SymbolFamily& q, const TruncatedSequence& a,
                                    const CohomologyPolicy& policy, double tol) {
  const TruncatedSequence pa = apply(p, a);
  for (size_t i = 0; i < pa.levels.size(); ++i) {
    const double scale = std::max(1.0, a.levels[i].norm());
    if (pa.levels[i].norm() > tol * scale * std::max(1.0, frob(p.levels[i]))) {
      throw Error(ErrorCode::NotInKernel,
                  fmt::format("sequence is not closed at level {}", rational_string(a.truncation->levels[i].lambda)));
    }
  }
  InjectivityResult r;
  r.preimage = zero_sequence(q.truncation, q.source_arity);
  r.residuals.assign(a.levels.size(), 0.0);
  for (size_t i = 0; i < a.levels.size(); ++i) {
    const CVector& rhs = a.levels[i];
    if (rhs.norm() == 0.0) continue;
    const SingularData sd = singular_data(q.levels[i], policy.rank);
    CVector x = CVector::Zero(q.levels[i].cols());
    for (int k = 0; k < sd.rank; ++k) {
      x += sd.v.col(k) * (sd.u.col(k).dot(rhs) / sd.values(k));
    }
    const double res = (q.levels[i] * x - rhs).norm();
    r.residuals[i] = res;
    r.preimage.levels[i] = x;
    if (res > tol * std::max(1.0, rhs.norm())) {
      r.trivial_class = false;
      r.obstructed_levels.push_back(a.truncation->levels[i].lambda);
    }
  }
  return r;
}

}  // namespace invcx
