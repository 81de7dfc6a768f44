#pragma once

#include "invcx/symbol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace invcx {

struct CohomologyPolicy {
  RankPolicy rank;
  /// Composition residual above which the input is rejected as not a complex.
  double complex_tol = 1e-8;
  /// Projected kernel vectors shorter than this are discarded.
  double representative_cutoff = 1e-8;
};

struct LevelCohomology {
  Rational lambda;
  double value = 0.0;
  int dim = 0;  // d_lambda
  int columns = 0;
  int kernel_dim = 0;
  int rank_p = 0;
  int rank_q = 0;
  int h = 0;
  /// h recomputed at rank tolerance x10 and /10; differs => tolerance-sensitive.
  bool tolerance_sensitive = false;
  CMatrix representatives;  // orthonormal columns in ker P ∩ (ran Q)^perp
};

/// P : C^cols -> ..., Q : ... -> C^cols with P Q ~ 0.
LevelCohomology level_cohomology(const CMatrix& p, const CMatrix& q, const CohomologyPolicy& policy = {});

struct CohomologyTable {
  std::string structure;
  int p = 0, q = 0;
  double cutoff = 0.0;
  std::vector<LevelCohomology> levels;
  long long total = 0;
  int nonvanishing_levels = 0;
  std::optional<Rational> largest_nonvanishing;
  bool tolerance_sensitive = false;
};

/// Q is the incoming differential (may have zero source arity), P the outgoing one.
CohomologyTable aggregate(const SymbolFamily& p, const SymbolFamily& q, const CohomologyPolicy& policy = {});

/// Incoming and outgoing d' of the frame at bidegree (p, q), with the zero map
/// standing in at the ends of the complex.
CohomologyTable dprime_cohomology(const InvolutiveFrame& frame, TruncationPtr truncation, int p, int q,
                                  const CohomologyPolicy& policy = {});

struct LeftInvarianceVerdict {
  bool left_invariant = false;
  std::vector<Rational> violating_levels;
  double cutoff = 0.0;
  std::string statement;
};

LeftInvarianceVerdict left_invariance_check(const CohomologyTable& table);

struct InjectivityResult {
  bool trivial_class = true;
  std::vector<Rational> obstructed_levels;
  std::vector<double> residuals;  // per level, zero off the support
  TruncatedSequence preimage;     // supported on supp(a)
};

/// Decides levelwise whether a closed sequence a lies in ran Q and builds the
/// preimage on supp(a).
InjectivityResult injectivity_probe(const SymbolFamily& p, const SymbolFamily& q, const TruncatedSequence& a,
                                    const CohomologyPolicy& policy = {}, double tol = 1e-8);

}  // namespace invcx
