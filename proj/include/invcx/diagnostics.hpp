#pragma once

#include "invcx/weights.hpp"

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace invcx {

constexpr double kSigmaSentinel = std::numeric_limits<double>::infinity();

/// Per level: smallest singular value of P(lambda) on (ker P(lambda))^perp
/// (+inf when P(lambda) = 0) and the largest singular value.
struct SigmaSequence {
  std::vector<Rational> lambdas;
  std::vector<double> values;
  std::vector<double> sigma_min;
  std::vector<double> sigma_max;
  /// Unit right singular vector realizing sigma_min (dense path only).
  std::vector<CVector> min_vectors;

  int size() const { return static_cast<int>(values.size()); }
  int finite_count() const;
};

SigmaSequence sigma_sequence(const SymbolFamily& p, const RankPolicy& policy = {});

using LongComplex = std::complex<long double>;

/// Fast path for a scalar constant-coefficient field sum_a c_a d_a on T^n:
/// the symbol is diagonal with entries i sum_a c_a k_a, so no SVD is needed.
SigmaSequence torus_field_sigma_sequence(int dims, const std::vector<LongComplex>& coeffs, std::int64_t cutoff,
                                         const RankPolicy& policy = {});

/// inf over 0 < |k|^2 <= cutoff of |c_1 k_1 + c_2 k_2| on T^2 (nonzero symbols
/// only), scanning k_2 and minimizing the quadratic in k_1.
double torus2_field_inf(const std::vector<LongComplex>& coeffs, std::int64_t cutoff, double zero_tol = 1e-12);

/// Partial sum of sum_j 10^{-j!} for j <= terms, in extended precision.
long double liouville_alpha(int terms = 6);

struct ClosedRangeReport {
  std::vector<double> cutoffs;
  std::vector<double> infs;  // +inf when every symbol up to the cutoff vanishes
  std::string verdict;       // uniform-bound-evidence | vanishing-inf | inconclusive
  std::optional<double> constant;
  std::string note;
};

ClosedRangeReport l2_closed_range_report(const SigmaSequence& sigma, const std::vector<double>& cutoffs);
ClosedRangeReport closed_range_verdict(const std::vector<double>& cutoffs, const std::vector<double>& infs);

struct InfRow {
  double s = 0.0;
  std::vector<double> infs;  // inf_{lambda <= cutoff} sigma e^{-s omega}
  bool stable = false;       // relative change < 5% across the top two cutoffs
  bool decaying = false;     // drops by > 10x across the ladder
};

struct EstimateFit {
  std::string weight;
  Flavor flavor = Flavor::Beurling;
  double exponent = 0.0;      // s*
  double log_constant = 0.0;  // log C*
  std::string exponent_source;
  std::vector<double> cutoffs;
  std::vector<InfRow> table;
  std::string verdict;  // consistent-at-cutoff | decaying-trend | inconclusive
  std::string interpretation;
};

std::vector<double> default_ladder(Flavor flavor);

EstimateFit aghe_fit(const SigmaSequence& sigma, const WeightFunction& w, const std::vector<double>& cutoffs,
                     const std::vector<double>& s_ladder = {});

/// inf_{lambda <= cutoff} sigma(lambda) e^{-s omega(lambda)} over finite entries.
double weighted_inf(const SigmaSequence& sigma, const WeightFunction& w, double s, double cutoff);

enum class WitnessKind { K1a, K1b, K2a, K2b };

const char* to_string(WitnessKind k);
WitnessKind parse_witness_kind(const std::string& text);

struct WitnessParams {
  WeightFunction weight = WeightFunction::smooth();
  double s = -0.5;
  /// Exponent rho of the summability condition; NaN selects 2N for the smooth weight.
  double rho = std::numeric_limits<double>::quiet_NaN();
};

struct WitnessRecord {
  WitnessKind kind = WitnessKind::K2a;
  std::vector<Rational> support;
  std::vector<double> symbol_norms;  // ||P(lambda_nu) u(lambda_nu)||
  std::vector<double> bounds;        // claimed bound at each support level
  bool bounds_hold = false;
  double max_kernel_component = 0.0;
  bool kernel_orthogonal = false;
  std::optional<EnvelopeReport> image_envelope;
  std::optional<EnvelopeReport> witness_envelope;
  bool passed = false;
  std::string claim;
};

struct Witness {
  TruncatedSequence sequence;
  WitnessRecord record;
};

/// Throws Error{NoFailureCertificate} when the harvest finds no failing level.
Witness construct_witness(const SymbolFamily& p, WitnessKind kind, const WitnessParams& params,
                          const RankPolicy& policy = {});

struct EstimateCertificate {
  double s = 0.0;
  double constant = 0.0;  // C with sigma_min >= C e^{s omega} on every level
};

/// C = inf over finite levels of sigma e^{-s omega}; empty when every symbol vanishes.
std::optional<EstimateCertificate> harvest_certificate(const SigmaSequence& sigma, const WeightFunction& w, double s);

struct EstimateCheck {
  double lhs = 0.0;  // ||u - v||_{s+t}
  double rhs = 0.0;  // C^{-1} ||P u||_t
  double measured_constant = 0.0;  // lhs * C / ||P u||_t
};

/// v is the levelwise projection of u onto ker P.
EstimateCheck check_estimate(const SymbolFamily& p, const EstimateCertificate& cert, const WeightFunction& w,
                             const TruncatedSequence& u, double t, const RankPolicy& policy = {});

}  // namespace invcx
