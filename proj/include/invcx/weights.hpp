#pragma once

#include "invcx/symbol.hpp"

#include <functional>
#include <string>
#include <vector>

namespace invcx {

enum class WeightKind { Smooth, Gevrey, Custom };
enum class Flavor { Beurling, Roumieu };

const char* to_string(Flavor f);

/// Increasing unbounded weight on the spectrum: log(1+lambda) for smooth,
/// (1+lambda)^{1/(2s)} for Gevrey order s.
struct WeightFunction {
  WeightKind kind = WeightKind::Smooth;
  double gevrey_order = 1.0;
  std::function<double(double)> custom;
  Flavor flavor = Flavor::Beurling;

  static WeightFunction smooth(Flavor f = Flavor::Beurling);
  static WeightFunction gevrey(double s, Flavor f = Flavor::Roumieu);

  double operator()(double lambda) const;
  std::string name() const;
};

/// Parses "smooth" or "gevrey:<s>".
WeightFunction parse_weight(const std::string& text, Flavor flavor);

/// log of the D_{omega,t} norm; -inf for the zero sequence.
double log_weighted_norm(const TruncatedSequence& a, const WeightFunction& w, double t);
double weighted_norm(const TruncatedSequence& a, const WeightFunction& w, double t);

/// max_{k <= k_max} h^{-2k} (2k)!^{-s} ||(I + Delta)^k a||.
double gevrey_seminorm(const TruncatedSequence& a, double s, double h, int k_max);

struct TailFit {
  int points = 0;
  double from_lambda = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
};

struct EnvelopeReport {
  double slope = 0.0;      // t* in ||a(lambda)|| ~ C* e^{-t* omega(lambda)}
  double intercept = 0.0;  // log C*
  double max_positive_residual = 0.0;
  int points = 0;
  std::vector<TailFit> nested_tails;  // full, top half, top quarter
  std::string hint;
  std::string caveat = "finite-cutoff evidence only; membership is not decidable from a truncation";
};

/// Least-squares fit of log||a(lambda)|| against -omega(lambda) over levels where a is nonzero.
EnvelopeReport envelope_fit(const TruncatedSequence& a, const WeightFunction& w);

/// Same fit on raw (lambda, norm) samples; zero norms are skipped.
EnvelopeReport envelope_fit_samples(const std::vector<double>& lambdas, const std::vector<double>& norms,
                                    const WeightFunction& w);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace invcx
