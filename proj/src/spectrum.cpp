#include "invcx/spectrum.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace invcx {

std::string rational_string(const Rational& r) {
  return fmt::format("{}/{}", r.numerator(), r.denominator());
}

int SpectrumTruncation::find(const Rational& lambda) const {
  const auto it = std::lower_bound(levels.begin(), levels.end(), lambda,
                                   [](const EigenLevel& l, const Rational& x) { return l.lambda < x; });
  if (it == levels.end() || it->lambda != lambda) return -1;
  return static_cast<int>(it - levels.begin());
}

long long SpectrumTruncation::total_dimension() const {
  long long total = 0;
  for (const auto& l : levels) total += l.dim;
  return total;
}

std::vector<TorusMode> torus_modes(int dims, std::int64_t cutoff) {
  std::vector<TorusMode> out;
  if (cutoff < 0) return out;
  const int radius = static_cast<int>(std::floor(std::sqrt(static_cast<double>(cutoff)) + 1e-9));
  std::vector<int> k(dims, -radius);
  auto norm2 = [&] {
    std::int64_t s = 0;
    for (int x : k) s += static_cast<std::int64_t>(x) * x;
    return s;
  };
  if (dims == 0) return out;
  while (true) {
    const auto n2 = norm2();
    if (n2 <= cutoff) out.push_back({k, n2});
    int i = dims - 1;
    while (i >= 0 && k[i] == radius) {
      k[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TorusMode& a, const TorusMode& b) { return a.norm2 < b.norm2; });
  return out;
}

TorusBackend::TorusBackend(int dims) : dims_(dims), algebra_(abelian_algebra(dims, fmt::format("t{}", dims))) {}

std::string TorusBackend::id() const { return fmt::format("torus{}", dims_); }

std::vector<EigenLevel> TorusBackend::levels(double cutoff) const {
  const auto modes = torus_modes(dims_, static_cast<std::int64_t>(std::floor(cutoff + 1e-12)));
  std::vector<EigenLevel> out;
  size_t i = 0;
  while (i < modes.size()) {
    size_t j = i;
    while (j < modes.size() && modes[j].norm2 == modes[i].norm2) ++j;
    EigenLevel level;
    level.lambda = Rational(modes[i].norm2);
    level.value = static_cast<double>(modes[i].norm2);
    level.dim = static_cast<int>(j - i);
    for (int a = 0; a < dims_; ++a) level.fields.push_back(CMatrix::Zero(level.dim, level.dim));
    for (size_t r = i; r < j; ++r) {
      const auto& k = modes[r].k;
      std::string label = "(";
      for (int a = 0; a < dims_; ++a) {
        label += fmt::format("{}{}", a ? "," : "", k[a]);
        level.fields[a](r - i, r - i) = cplx(0.0, k[a]);
      }
      level.labels.push_back(label + ")");
    }
    out.push_back(std::move(level));
    i = j;
  }
  return out;
}

std::vector<CMatrix> spin_matrices(int twice_l) {
  const int d = twice_l + 1;
  const double l = twice_l / 2.0;
  CMatrix jz = CMatrix::Zero(d, d), jp = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = l - i;
    jz(i, i) = m;
    // J+ |m> = sqrt((l-m)(l+m+1)) |m+1>, and |m+1> sits at position i-1.
    if (i > 0) jp(i - 1, i) = std::sqrt((l - m) * (l + m + 1));
  }
  const CMatrix jm = jp.adjoint();
  const CMatrix jx = (jp + jm) * 0.5;
  const CMatrix jy = (jp - jm) * cplx(0.0, -0.5);
  return {jx, jy, jz};
}

Su2Backend::Su2Backend() : algebra_(su2_algebra()) {}

std::vector<EigenLevel> Su2Backend::levels(double cutoff) const {
  std::vector<EigenLevel> out;
  for (int j2 = 0;; ++j2) {
    const Rational lambda(static_cast<std::int64_t>(j2) * (j2 + 2), 4);
    const double value = boost::rational_cast<double>(lambda);
    if (value > cutoff + 1e-12) break;
    const int d = j2 + 1;
    EigenLevel level;
    level.lambda = lambda;
    level.value = value;
    level.dim = d * d;
    const auto spins = spin_matrices(j2);
    const CMatrix id = CMatrix::Identity(d, d);
    for (int a = 0; a < 3; ++a) {
      const CMatrix rho = cplx(0.0, -1.0) * spins[a];
      // Basis index k*d + j: the field acts on j, identically in each k-block.
      CMatrix x = CMatrix::Zero(level.dim, level.dim);
      for (int k = 0; k < d; ++k) x.block(k * d, k * d, d, d) = rho;
      level.fields.push_back(std::move(x));
    }
    const std::string l = j2 % 2 == 0 ? fmt::format("{}", j2 / 2) : fmt::format("{}/2", j2);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) level.labels.push_back(fmt::format("({},{},{})", l, j + 1, k + 1));
    out.push_back(std::move(level));
  }
  return out;
}

std::unique_ptr<SpectralBackend> make_backend(const std::string& group, int dims) {
  if (group == "torus") return std::make_unique<TorusBackend>(dims);
  if (group == "su2") return std::make_unique<Su2Backend>();
  throw Error(ErrorCode::ConfigError, fmt::format("unknown group '{}'", group));
}

SpectrumTruncation enumerate_levels(const SpectralBackend& backend, double cutoff) {
  if (cutoff < 0.0) {
    throw Error(ErrorCode::NegativeCutoff, fmt::format("cutoff {} is negative", cutoff));
  }
  SpectrumTruncation t;
  t.backend = backend.id();
  t.algebra = backend.algebra();
  t.cutoff = cutoff;
  t.levels = backend.levels(cutoff);
  const int big_n = t.algebra.dim;
  for (const auto& l : t.levels) {
    if (l.value > 0.0) t.weyl_partial_sum += l.dim * std::pow(l.value, -2.0 * big_n);
  }
  return t;
}

const CMatrix& vector_field_symbol(const SpectrumTruncation& truncation, const Rational& lambda, int a) {
  const int pos = truncation.find(lambda);
  if (pos < 0) {
    throw Error(ErrorCode::UnknownLevel,
                fmt::format("level {} is not in the truncation", rational_string(lambda)));
  }
  if (a < 0 || a >= truncation.algebra.dim) {
    throw Error(ErrorCode::UnknownLevel, fmt::format("basis field {} out of range", a + 1));
  }
  return truncation.levels[pos].fields[a];
}

CMatrix complex_field_symbol(const EigenLevel& level, const CVector& coeffs) {
  if (coeffs.size() != static_cast<Eigen::Index>(level.fields.size())) {
    throw Error(ErrorCode::ArityMismatch, "coefficient vector length differs from algebra dimension");
  }
  CMatrix out = CMatrix::Zero(level.dim, level.dim);
  for (size_t a = 0; a < level.fields.size(); ++a)
    if (coeffs(a) != cplx(0)) out += coeffs(a) * level.fields[a];
  return out;
}

}  // namespace invcx
