#include "invcx/diagnostics.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace invcx {

int SigmaSequence::finite_count() const {
  return static_cast<int>(std::count_if(sigma_min.begin(), sigma_min.end(), [](double x) { return std::isfinite(x); }));
}

SigmaSequence sigma_sequence(const SymbolFamily& p, const RankPolicy& policy) {
  SigmaSequence out;
  const auto& levels = p.truncation->levels;
  for (size_t i = 0; i < levels.size(); ++i) {
    out.lambdas.push_back(levels[i].lambda);
    out.values.push_back(levels[i].value);
    const SingularData sd = singular_data(p.levels[i], policy);
    out.sigma_max.push_back(sd.sigma_max);
    if (sd.rank == 0) {
      out.sigma_min.push_back(kSigmaSentinel);
      out.min_vectors.emplace_back(CVector::Zero(p.levels[i].cols()));
    } else {
      out.sigma_min.push_back(sd.values(sd.rank - 1));
      out.min_vectors.emplace_back(sd.v.col(sd.rank - 1));
    }
  }
  return out;
}

namespace {

// Calls f(k, |k|^2) for every k in Z^dims with |k|^2 <= cutoff.
void for_each_mode(int dims, std::int64_t cutoff, const std::function<void(const std::vector<int>&, std::int64_t)>& f) {
  std::vector<int> k(dims, 0);
  std::function<void(int, std::int64_t)> rec = [&](int axis, std::int64_t used) {
    if (axis == dims) {
      f(k, used);
      return;
    }
    const auto bound = static_cast<int>(std::floor(std::sqrt(static_cast<long double>(cutoff - used))));
    for (int v = -bound; v <= bound; ++v) {
      const std::int64_t next = used + static_cast<std::int64_t>(v) * v;
      if (next > cutoff) continue;
      k[axis] = v;
      rec(axis + 1, next);
    }
    k[axis] = 0;
  };
  rec(0, 0);
}

}  // namespace

SigmaSequence torus_field_sigma_sequence(int dims, const std::vector<LongComplex>& coeffs, std::int64_t cutoff,
                                         const RankPolicy& policy) {
  if (static_cast<int>(coeffs.size()) != dims) throw Error(ErrorCode::ShapeMismatch, "one coefficient per direction");
  if (cutoff < 0) throw Error(ErrorCode::NegativeCutoff, "cutoff must be nonnegative");
  const auto n = static_cast<size_t>(cutoff) + 1;
  std::vector<double> smax(n, -1.0), smin(n, kSigmaSentinel);
  auto symbol = [&](const std::vector<int>& k) {
    LongComplex s = 0.0L;
    for (int a = 0; a < dims; ++a) s += coeffs[a] * static_cast<long double>(k[a]);
    return static_cast<double>(std::abs(s));
  };
  for_each_mode(dims, cutoff, [&](const std::vector<int>& k, std::int64_t m) {
    smax[m] = std::max(smax[m], symbol(k));
  });
  for_each_mode(dims, cutoff, [&](const std::vector<int>& k, std::int64_t m) {
    const double v = symbol(k);
    if (v > policy.threshold(smax[m])) smin[m] = std::min(smin[m], v);
  });
  SigmaSequence out;
  for (size_t m = 0; m < n; ++m) {
    if (smax[m] < 0.0) continue;
    out.lambdas.emplace_back(static_cast<std::int64_t>(m));
    out.values.push_back(static_cast<double>(m));
    out.sigma_max.push_back(smax[m]);
    out.sigma_min.push_back(smin[m]);
  }
  return out;
}

double torus2_field_inf(const std::vector<LongComplex>& coeffs, std::int64_t cutoff, double zero_tol) {
  if (coeffs.size() != 2) throw Error(ErrorCode::ShapeMismatch, "torus2_field_inf expects two coefficients");
  const LongComplex c1 = coeffs[0], c2 = coeffs[1];
  const long double a = std::norm(c1);
  long double best = std::numeric_limits<long double>::infinity();
  const auto k2max = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(cutoff))));
  for (std::int64_t k2 = -k2max; k2 <= k2max; ++k2) {
    const auto k1max =
        static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(cutoff - k2 * k2))));
    std::vector<std::int64_t> cand{-k1max, k1max, 0};
    if (a > 0.0L) {
      const long double b = (std::conj(c1) * c2).real() * static_cast<long double>(k2);
      const auto centre = static_cast<std::int64_t>(std::floor(-b / a));
      for (std::int64_t d = -1; d <= 2; ++d) cand.push_back(centre + d);
    }
    for (std::int64_t k1 : cand) {
      if (k1 < -k1max || k1 > k1max || (k1 == 0 && k2 == 0)) continue;
      const long double v =
          std::abs(c1 * static_cast<long double>(k1) + c2 * static_cast<long double>(k2));
      if (v > zero_tol) best = std::min(best, v);
    }
  }
  return static_cast<double>(best);
}

long double liouville_alpha(int terms) {
  long double s = 0.0L;
  long double fact = 1.0L;
  for (int j = 1; j <= terms; ++j) {
    fact *= j;
    s += std::pow(10.0L, -fact);
  }
  return s;
}

ClosedRangeReport closed_range_verdict(const std::vector<double>& cutoffs, const std::vector<double>& infs) {
  if (cutoffs.size() < 2) throw Error(ErrorCode::InsufficientData, "closed-range report needs at least two cutoffs");
  ClosedRangeReport r;
  r.cutoffs = cutoffs;
  r.infs = infs;
  const double first = infs.front(), last = infs.back(), prev = infs[infs.size() - 2];
  const bool all_sentinel = std::all_of(infs.begin(), infs.end(), [](double x) { return !std::isfinite(x); });
  if (all_sentinel) {
    r.verdict = "uniform-bound-evidence";
    r.note = "finitely many nonzero symbols";
  } else if (std::isfinite(first) && first > 10.0 * last) {
    r.verdict = "vanishing-inf";
    r.note = fmt::format("inf drops by a factor {:.4g} across the ladder", first / last);
  } else if (std::isfinite(prev) && std::abs(last - prev) < 0.05 * prev) {
    r.verdict = "uniform-bound-evidence";
    r.constant = last;
  } else {
    r.verdict = "inconclusive";
  }
  if (r.note.empty()) r.note = "heuristic thresholds: 5% stability, 10x decay; finite-cutoff evidence only";
  return r;
}

ClosedRangeReport l2_closed_range_report(const SigmaSequence& sigma, const std::vector<double>& cutoffs) {
  std::vector<double> infs;
  for (double c : cutoffs) {
    double m = kSigmaSentinel;
    for (int i = 0; i < sigma.size(); ++i)
      if (sigma.values[i] <= c) m = std::min(m, sigma.sigma_min[i]);
    infs.push_back(m);
  }
  return closed_range_verdict(cutoffs, infs);
}

double weighted_inf(const SigmaSequence& sigma, const WeightFunction& w, double s, double cutoff) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma.values[i] > cutoff || !std::isfinite(sigma.sigma_min[i])) continue;
    best = std::min(best, std::log(sigma.sigma_min[i]) - s * w(sigma.values[i]));
  }
  return std::exp(best);
}

std::vector<double> default_ladder(Flavor flavor) {
  if (flavor == Flavor::Beurling) return {-4.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5};
  return {-1.0, -0.5, -0.25, -0.1, -0.05, -0.01};
}

EstimateFit aghe_fit(const SigmaSequence& sigma, const WeightFunction& w, const std::vector<double>& cutoffs,
                     const std::vector<double>& s_ladder) {
  if (sigma.finite_count() < 5) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("estimate fit needs 5 finite sigma entries, got {}", sigma.finite_count()));
  }
  if (cutoffs.empty()) throw Error(ErrorCode::InsufficientData, "estimate fit needs at least one cutoff");
  EstimateFit f;
  f.weight = w.name();
  f.flavor = w.flavor;
  f.cutoffs = cutoffs;

  // Exponent from the record lows of sigma (the lower envelope read left to
  // right); a monotone sequence has no such staircase, so fall back to the
  // top half of the finite entries.
  std::vector<double> ex, ey, tx, ty;
  double record = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sigma.size(); ++i) {
    const double sm = sigma.sigma_min[i];
    if (!std::isfinite(sm) || sigma.values[i] <= 0.0) continue;
    tx.push_back(w(sigma.values[i]));
    ty.push_back(std::log(sm));
    if (sm < record) {
      record = sm;
      ex.push_back(tx.back());
      ey.push_back(ty.back());
    }
  }
  LineFit line;
  if (ex.size() >= 3) {
    line = least_squares_line(ex, ey);
    f.exponent_source = fmt::format("record-low envelope ({} points)", ex.size());
  } else {
    const size_t half = tx.size() / 2;
    line = least_squares_line({tx.begin() + half, tx.end()}, {ty.begin() + half, ty.end()});
    f.exponent_source = fmt::format("top-half tail ({} points)", tx.size() - half);
  }
  f.exponent = line.slope;
  f.log_constant = line.intercept;

  const std::vector<double> ladder = s_ladder.empty() ? default_ladder(w.flavor) : s_ladder;
  for (double s : ladder) {
    InfRow row;
    row.s = s;
    for (double c : cutoffs) row.infs.push_back(weighted_inf(sigma, w, s, c));
    if (row.infs.size() >= 2) {
      const double last = row.infs.back(), prev = row.infs[row.infs.size() - 2];
      row.stable = std::isfinite(prev) && std::abs(last - prev) < 0.05 * prev;
      row.decaying = std::isfinite(row.infs.front()) && row.infs.front() > 10.0 * last;
    }
    f.table.push_back(std::move(row));
  }
  const auto any = [&](auto pred) { return std::any_of(f.table.begin(), f.table.end(), pred); };
  const auto all = [&](auto pred) { return std::all_of(f.table.begin(), f.table.end(), pred); };
  if (f.flavor == Flavor::Beurling) {
    if (any([](const InfRow& r) { return r.stable; })) f.verdict = "consistent-at-cutoff";
    else if (all([](const InfRow& r) { return r.decaying; })) f.verdict = "decaying-trend";
    else f.verdict = "inconclusive";
    f.interpretation =
        "the estimate sigma >= C e^{s omega} for some s and C > 0 holds iff P is globally hypoelliptic in the "
        "Beurling class iff P has closed range; the table is finite-cutoff evidence";
  } else {
    if (any([](const InfRow& r) { return r.decaying; })) f.verdict = "decaying-trend";
    else if (all([](const InfRow& r) { return r.stable; })) f.verdict = "consistent-at-cutoff";
    else f.verdict = "inconclusive";
    f.interpretation =
        "the estimate sigma >= C_s e^{s omega} for every s < 0 holds iff P is globally hypoelliptic in the "
        "Roumieu class iff P has closed range; the table is finite-cutoff evidence";
  }
  return f;
}

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::K1a: return "1a";
    case WitnessKind::K1b: return "1b";
    case WitnessKind::K2a: return "2a";
    case WitnessKind::K2b: return "2b";
  }
  return "?";
}

WitnessKind parse_witness_kind(const std::string& text) {
  if (text == "1a") return WitnessKind::K1a;
  if (text == "1b") return WitnessKind::K1b;
  if (text == "2a") return WitnessKind::K2a;
  if (text == "2b") return WitnessKind::K2b;
  throw Error(ErrorCode::ConfigError, fmt::format("unknown witness kind '{}'", text));
}

Witness construct_witness(const SymbolFamily& p, WitnessKind kind, const WitnessParams& params,
                          const RankPolicy& policy) {
  const SigmaSequence sigma = sigma_sequence(p, policy);
  const WeightFunction& w = params.weight;
  const double s = params.s;
  const bool second = kind == WitnessKind::K2a || kind == WitnessKind::K2b;
  if (second && !(s < 0.0)) throw Error(ErrorCode::ConfigError, "kinds 2a and 2b need s < 0");
  double rho = params.rho;
  if (std::isnan(rho)) rho = 2.0 * static_cast<double>(p.truncation->algebra.dim);

  // Harvest the failure certificate: (level index, nu).
  std::vector<std::pair<int, int>> picks;
  if (second) {
    double record = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sigma.size(); ++i) {
      const double sm = sigma.sigma_min[i];
      if (!std::isfinite(sm)) continue;
      const double om = w(sigma.values[i]);
      const double log_ratio = std::log(sm) - s * om;
      if (log_ratio < 0.0 && log_ratio < record) {
        record = log_ratio;
        picks.emplace_back(i, static_cast<int>(picks.size()) + 1);
      }
    }
  } else {
    int nu = 1;
    for (int i = 0; i < sigma.size(); ++i) {
      const double sm = sigma.sigma_min[i];
      if (!std::isfinite(sm)) continue;
      const double om = w(sigma.values[i]);
      if (std::log(sm) < -nu * std::log(2.0) - nu * om) picks.emplace_back(i, nu++);
    }
  }
  if (picks.empty()) {
    throw Error(ErrorCode::NoFailureCertificate,
                fmt::format("no level up to cutoff {} violates the kind-{} threshold", p.truncation->cutoff,
                            to_string(kind)));
  }

  Witness out;
  out.sequence = zero_sequence(p.truncation, p.source_arity);
  WitnessRecord& rec = out.record;
  rec.kind = kind;
  rec.bounds_hold = true;
  std::vector<double> lam, image, wnorm;
  for (auto [i, nu] : picks) {
    const double om = w(sigma.values[i]);
    double log_scale = 0.0, log_bound = 0.0;
    switch (kind) {
      case WitnessKind::K1a:
        log_scale = -(s + rho / 2.0) * om;
        log_bound = -nu * std::log(2.0) - (s + rho / 2.0 + nu) * om;
        break;
      case WitnessKind::K1b:
        log_scale = nu * om;
        log_bound = -nu * std::log(2.0);
        break;
      case WitnessKind::K2a:
        log_scale = 0.0;
        log_bound = s * om;
        break;
      case WitnessKind::K2b:
        log_scale = -s * om;
        log_bound = 0.0;
        break;
    }
    const CVector u = sigma.min_vectors[i] * std::exp(log_scale);
    out.sequence.levels[i] = u;
    const double pu = (p.levels[i] * u).norm();
    rec.support.push_back(sigma.lambdas[i]);
    rec.symbol_norms.push_back(pu);
    rec.bounds.push_back(std::exp(log_bound));
    if (pu > std::exp(log_bound) * (1.0 + 1e-9)) rec.bounds_hold = false;

    const CMatrix kernel = kernel_basis(p.levels[i], policy);
    const double kc = kernel.cols() == 0 ? 0.0 : (kernel.adjoint() * u).norm() / u.norm();
    rec.max_kernel_component = std::max(rec.max_kernel_component, kc);

    lam.push_back(sigma.values[i]);
    image.push_back(pu);
    wnorm.push_back(u.norm());
  }
  rec.kernel_orthogonal = rec.max_kernel_component <= 1e-9;
  rec.image_envelope = envelope_fit_samples(lam, image, w);
  rec.witness_envelope = envelope_fit_samples(lam, wnorm, w);

  bool decay_ok = true;
  if (kind == WitnessKind::K2a && lam.size() >= 2) decay_ok = rec.image_envelope->slope > 0.0;
  rec.passed = rec.bounds_hold && rec.kernel_orthogonal && decay_ok;

  switch (kind) {
    case WitnessKind::K1a:
      rec.claim = fmt::format("||P u(lambda_nu)|| <= 2^-nu e^{{-(s + rho/2 + nu) omega}} with s = {}, rho = {}", s, rho);
      break;
    case WitnessKind::K1b: rec.claim = "||P u(lambda_nu)|| <= 2^-nu while ||u(lambda_nu)|| = e^{nu omega}"; break;
    case WitnessKind::K2a:
      rec.claim = fmt::format("||P u(lambda_nu)|| < e^{{{} omega}} (decaying image) while ||u(lambda_nu)|| = 1", s);
      break;
    case WitnessKind::K2b:
      rec.claim = fmt::format("||P u(lambda_nu)|| < 1 while ||u(lambda_nu)|| = e^{{{} omega}}", -s);
      break;
  }
  return out;
}

std::optional<EstimateCertificate> harvest_certificate(const SigmaSequence& sigma, const WeightFunction& w, double s) {
  if (sigma.finite_count() == 0) return std::nullopt;
  double cutoff = 0.0;
  for (double v : sigma.values) cutoff = std::max(cutoff, v);
  return EstimateCertificate{s, weighted_inf(sigma, w, s, cutoff)};
}

EstimateCheck check_estimate(const SymbolFamily& p, const EstimateCertificate& cert, const WeightFunction& w,
                             const TruncatedSequence& u, double t, const RankPolicy& policy) {
  TruncatedSequence orth = u;
  for (size_t i = 0; i < u.levels.size(); ++i) {
    const CMatrix kernel = kernel_basis(p.levels[i], policy);
    if (kernel.cols() > 0) orth.levels[i] -= kernel * (kernel.adjoint() * u.levels[i]);
  }
  const TruncatedSequence pu = apply(p, u);
  EstimateCheck c;
  c.lhs = weighted_norm(orth, w, cert.s + t);
  const double image = weighted_norm(pu, w, t);
  c.rhs = image / cert.constant;
  c.measured_constant = image > 0.0 ? c.lhs * cert.constant / image : 0.0;
  return c;
}

}  // namespace invcx
