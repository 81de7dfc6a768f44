#include "invcx/frame.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>

namespace invcx {

namespace {

FormFactor frame_factor(const InvolutiveFrame& frame, int a) {
  return a < frame.n ? FormFactor{Species::Tau, a} : FormFactor{Species::Zeta, a - frame.n};
}

int frame_index(const InvolutiveFrame& frame, const FormFactor& f) {
  return f.species == Species::Tau ? f.index : frame.n + f.index;
}

}  // namespace

InvolutiveFrame build_frame(const LieAlgebraSpec& spec, const std::vector<CVector>& v_basis, double tol,
                            const RankPolicy& policy) {
  const int dim = spec.dim;
  const int n = static_cast<int>(v_basis.size());
  CMatrix lmat(dim, n);
  for (int a = 0; a < n; ++a) {
    if (v_basis[a].size() != dim) {
      throw Error(ErrorCode::ConfigError,
                  fmt::format("generator {} has {} coefficients, algebra has dimension {}", a + 1,
                              v_basis[a].size(), dim));
    }
    lmat.col(a) = v_basis[a];
  }
  if (numerical_rank(lmat, policy) != n) {
    throw Error(ErrorCode::DependentGenerators, "structure generators are linearly dependent");
  }

  // Greedy completion by coordinate vectors, in index order.
  CMatrix basis = lmat;
  std::vector<CVector> complement;
  for (int i = 0; i < dim && static_cast<int>(complement.size()) < dim - n; ++i) {
    CMatrix trial(dim, basis.cols() + 1);
    trial << basis, CVector::Unit(dim, i);
    if (numerical_rank(trial, policy) == trial.cols()) {
      basis = trial;
      complement.push_back(CVector::Unit(dim, i));
    }
  }

  InvolutiveFrame frame;
  frame.algebra = spec;
  frame.n = n;
  frame.m = dim - n;
  frame.l_basis = v_basis;
  frame.m_basis = complement;
  frame.basis = basis;
  frame.dual = basis.inverse();

  frame.frame_brackets = BracketTable<cplx>(dim);
  double scale = 0.0;
  std::vector<CVector> coords(static_cast<size_t>(dim) * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      coords[a * dim + b] = frame.dual * bracket(spec, basis.col(a), basis.col(b));
      scale = std::max(scale, coords[a * dim + b].cwiseAbs().maxCoeff());
    }
  // Round-off from the inversion is flushed so that exact zeros stay exact.
  const double flush = 1e-14 * std::max(1.0, scale);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        cplx x = coords[a * dim + b](c);
        if (std::abs(x.real()) < flush) x.real(0.0);
        if (std::abs(x.imag()) < flush) x.imag(0.0);
        frame.frame_brackets(a, b, c) = x;
      }

  double worst = 0.0;
  std::ostringstream residuals;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = n; c < dim; ++c) {
        const double r = std::abs(frame.frame_brackets(a, b, c));
        worst = std::max(worst, r);
        if (r > tol) residuals << fmt::format(" [L{},L{}] has M{} component {:.3e};", a + 1, b + 1, c - n + 1, r);
      }
  if (worst > tol) {
    throw Error(ErrorCode::NotASubalgebra, "span of generators is not closed under bracket:" + residuals.str());
  }
  return frame;
}

InvolutiveFrame de_rham_frame(const LieAlgebraSpec& spec) {
  std::vector<CVector> gens;
  for (int i = 0; i < spec.dim; ++i) gens.push_back(CVector::Unit(spec.dim, i));
  return build_frame(spec, gens);
}

bool check_ellipticity(const InvolutiveFrame& frame, const RankPolicy& policy) {
  const int dim = frame.algebra.dim;
  CMatrix stack(2 * frame.n, dim);
  for (int a = 0; a < frame.n; ++a) {
    stack.row(a) = frame.l_basis[a].transpose();
    stack.row(frame.n + a) = frame.l_basis[a].conjugate().transpose();
  }
  return numerical_rank(stack, policy) == dim;
}

DPrimeConstants dprime_structure_constants(const InvolutiveFrame& frame, int p, int q) {
  if (p < 0 || p > frame.m || q < 0 || q > frame.n) {
    throw Error(ErrorCode::BidegreeOutOfRange,
                fmt::format("bidegree ({},{}) outside [0,{}]x[0,{}]", p, q, frame.m, frame.n));
  }
  DPrimeConstants out;
  out.p = p;
  out.q = q;
  out.source = MultiIndexBasis(frame.m, frame.n, p, q);
  out.target = MultiIndexBasis(frame.m, frame.n, p, q + 1);
  const int dim = frame.algebra.dim;

  for (int s = 0; s < out.source.size(); ++s) {
    const auto& [zi, tj] = out.source[s];
    std::vector<FormFactor> factors;
    for (int i : zi) factors.push_back({Species::Zeta, i});
    for (int j : tj) factors.push_back({Species::Tau, j});

    // Leibniz: d(chi_1 ^ ... ^ chi_r) = sum_pos (-1)^pos chi_1 ^ .. ^ d chi_pos ^ .. ^ chi_r,
    // with d chi^f = - sum_{b<c} c~_bc^f chi^b ^ chi^c.
    for (size_t pos = 0; pos < factors.size(); ++pos) {
      const int f = frame_index(frame, factors[pos]);
      const double pos_sign = (pos % 2 == 0) ? 1.0 : -1.0;
      for (int b = 0; b < dim; ++b)
        for (int c = b + 1; c < dim; ++c) {
          const cplx coeff = -frame.frame_brackets(b, c, f);
          if (coeff == cplx(0)) continue;
          std::vector<FormFactor> term;
          term.insert(term.end(), factors.begin(), factors.begin() + pos);
          term.push_back(frame_factor(frame, b));
          term.push_back(frame_factor(frame, c));
          term.insert(term.end(), factors.begin() + pos + 1, factors.end());
          const auto normalized = wedge_into_basis(term);
          if (!normalized) continue;
          // Projection modulo forms with p+1 zeta factors.
          if (static_cast<int>(normalized->zeta.size()) != p) continue;
          const int t = out.target.find(normalized->zeta, normalized->tau);
          if (t < 0) continue;
          out.alpha[{s, t}] += pos_sign * normalized->sign * coeff;
        }
    }
  }
  for (auto it = out.alpha.begin(); it != out.alpha.end();) {
    it = (it->second == cplx(0)) ? out.alpha.erase(it) : std::next(it);
  }
  return out;
}

}  // namespace invcx
