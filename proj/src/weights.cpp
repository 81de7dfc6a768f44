#include "invcx/weights.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace invcx {

const char* to_string(Flavor f) { return f == Flavor::Beurling ? "beurling" : "roumieu"; }

WeightFunction WeightFunction::smooth(Flavor f) {
  WeightFunction w;
  w.kind = WeightKind::Smooth;
  w.flavor = f;
  return w;
}

WeightFunction WeightFunction::gevrey(double s, Flavor f) {
  WeightFunction w;
  w.kind = WeightKind::Gevrey;
  w.gevrey_order = s;
  w.flavor = f;
  return w;
}

double WeightFunction::operator()(double lambda) const {
  switch (kind) {
    case WeightKind::Smooth: return std::log1p(lambda);
    case WeightKind::Gevrey: return std::pow(1.0 + lambda, 1.0 / (2.0 * gevrey_order));
    case WeightKind::Custom: return custom(lambda);
  }
  return 0.0;
}

std::string WeightFunction::name() const {
  switch (kind) {
    case WeightKind::Smooth: return "smooth";
    case WeightKind::Gevrey: return fmt::format("gevrey:{}", gevrey_order);
    case WeightKind::Custom: return "custom";
  }
  return "unknown";
}

WeightFunction parse_weight(const std::string& text, Flavor flavor) {
  if (text == "smooth") return WeightFunction::smooth(flavor);
  if (text.rfind("gevrey:", 0) == 0) {
    const double s = std::stod(text.substr(7));
    if (!(s >= 1.0)) throw Error(ErrorCode::ConfigError, "Gevrey order must be >= 1");
    return WeightFunction::gevrey(s, flavor);
  }
  throw Error(ErrorCode::ConfigError, fmt::format("unknown weight '{}'", text));
}

namespace {

double log_sum_exp(const std::vector<double>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : terms) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : terms) s += std::exp(x - top);
  return top + std::log(s);
}

}  // namespace

double log_weighted_norm(const TruncatedSequence& a, const WeightFunction& w, double t) {
  std::vector<double> terms;
  const auto& levels = a.truncation->levels;
  for (size_t i = 0; i < levels.size(); ++i) {
    const double n2 = a.levels[i].squaredNorm();
    if (n2 == 0.0) continue;
    terms.push_back(2.0 * t * w(levels[i].value) + std::log(n2));
  }
  return 0.5 * log_sum_exp(terms);
}

double weighted_norm(const TruncatedSequence& a, const WeightFunction& w, double t) {
  return std::exp(log_weighted_norm(a, w, t));
}

double gevrey_seminorm(const TruncatedSequence& a, double s, double h, int k_max) {
  const auto& levels = a.truncation->levels;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; ++k) {
    std::vector<double> terms;
    for (size_t i = 0; i < levels.size(); ++i) {
      const double n2 = a.levels[i].squaredNorm();
      if (n2 == 0.0) continue;
      terms.push_back(2.0 * k * std::log1p(levels[i].value) + std::log(n2));
    }
    const double log_term = -2.0 * k * std::log(h) - s * std::lgamma(2.0 * k + 1.0) + 0.5 * log_sum_exp(terms);
    best = std::max(best, log_term);
  }
  return std::exp(best);
}

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

EnvelopeReport envelope_fit_samples(const std::vector<double>& lambdas, const std::vector<double>& norms,
                                    const WeightFunction& w) {
  std::vector<double> lam, x, y;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (!(norms[i] > 0.0)) continue;
    lam.push_back(lambdas[i]);
    x.push_back(-w(lambdas[i]));
    y.push_back(std::log(norms[i]));
  }
  if (lam.empty()) throw Error(ErrorCode::AllZero, "envelope_fit: sequence vanishes on every level");

  EnvelopeReport r;
  r.points = static_cast<int>(lam.size());
  const LineFit full = least_squares_line(x, y);
  r.slope = full.slope;
  r.intercept = full.intercept;
  for (size_t i = 0; i < x.size(); ++i)
    r.max_positive_residual = std::max(r.max_positive_residual, y[i] - (full.intercept + full.slope * x[i]));

  for (int div : {1, 2, 4}) {
    const size_t start = lam.size() - lam.size() / div;
    const size_t begin = div == 1 ? 0 : start;
    if (lam.size() - begin < 2) break;
    const std::vector<double> tx(x.begin() + begin, x.end()), ty(y.begin() + begin, y.end());
    const LineFit f = least_squares_line(tx, ty);
    r.nested_tails.push_back({static_cast<int>(tx.size()), lam[begin], f.slope, f.intercept});
  }

  constexpr double flat = 1e-9;
  if (r.points < 2) {
    r.hint = "inconclusive (single nonzero level)";
  } else if (r.slope < -flat) {
    r.hint = "tempered-growth (negative slope)";
  } else if (r.slope <= flat) {
    r.hint = "no-decay (flat envelope)";
  } else {
    const double first = r.nested_tails.front().slope;
    const double last = r.nested_tails.back().slope;
    double lo = first, hi = first;
    for (const auto& t : r.nested_tails) {
      lo = std::min(lo, t.slope);
      hi = std::max(hi, t.slope);
    }
    if (last > 1.5 * first) {
      r.hint = "beurling-type decay (slope grows along nested tails)";
    } else if (lo > 0.0 && hi <= 1.25 * lo) {
      r.hint = "roumieu-type decay (stable positive slope)";
    } else if (last < first) {
      r.hint = "sub-weight decay (slope shrinks along nested tails)";
    } else {
      r.hint = "inconclusive";
    }
  }
  return r;
}

EnvelopeReport envelope_fit(const TruncatedSequence& a, const WeightFunction& w) {
  std::vector<double> lambdas, norms;
  for (size_t i = 0; i < a.levels.size(); ++i) {
    lambdas.push_back(a.truncation->levels[i].value);
    norms.push_back(a.levels[i].norm());
  }
  return envelope_fit_samples(lambdas, norms, w);
}

}  // namespace invcx
