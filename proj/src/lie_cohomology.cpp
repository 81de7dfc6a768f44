#include "invcx/lie_cohomology.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <optional>

namespace invcx {

namespace {

using SubsetIndex = std::map<MultiIndex, int>;

SubsetIndex index_subsets(int n, int r) {
  SubsetIndex idx;
  if (r < 0 || r > n) return idx;
  const auto subsets = combinations(n, r);
  for (size_t i = 0; i < subsets.size(); ++i) idx.emplace(subsets[i], static_cast<int>(i));
  return idx;
}

// Sorts distinct indices ascending and returns the permutation sign; nullopt on a repeat.
std::optional<int> sort_with_sign(MultiIndex& v) {
  int sign = 1;
  for (size_t i = 1; i < v.size(); ++i) {
    for (size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] == v[i]) return std::nullopt;
  return sign;
}

CVector bracket_vec(const ComplexLieAlgebra& g, const CVector& u, const CVector& v) {
  CVector out = CVector::Zero(g.dim);
  for (int i = 0; i < g.dim; ++i) {
    if (u(i) == cplx(0)) continue;
    for (int j = 0; j < g.dim; ++j) {
      if (v(j) == cplx(0)) continue;
      for (int k = 0; k < g.dim; ++k) out(k) += u(i) * v(j) * g.c(i, j, k);
    }
  }
  return out;
}

CMatrix columns(const std::vector<CVector>& vs, int rows) {
  CMatrix m(rows, static_cast<Eigen::Index>(vs.size()));
  for (size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != rows) throw Error(ErrorCode::ShapeMismatch, "basis vector has the wrong length");
    m.col(static_cast<Eigen::Index>(i)) = vs[i];
  }
  return m;
}

// Greedy coordinate completion of h_basis to a basis of g: columns H then M.
CMatrix adapted_basis(int n, const std::vector<CVector>& h_basis) {
  CMatrix b = columns(h_basis, n);
  const RankPolicy policy;
  for (int a = 0; a < n && b.cols() < n; ++a) {
    CMatrix trial(n, b.cols() + 1);
    trial << b, CVector::Unit(n, a);
    if (numerical_rank(trial, policy) == trial.cols()) b = trial;
  }
  return b;
}

CMatrix kron_identity(const CMatrix& a, int d) {
  CMatrix out = CMatrix::Zero(a.rows() * d, a.cols() * d);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != cplx(0))
        for (int v = 0; v < d; ++v) out(i * d + v, j * d + v) = a(i, j);
  return out;
}

// Orthonormal basis of N^{p,q} inside C^{p+q}(g; V).
CMatrix filtration_space(int n, const CMatrix& h, int d, int p, int q) {
  const int r = p + q;
  if (p < 0 || q < 0 || r > n) {
    const long long rows = (r >= 0 && r <= n) ? binomial(n, r) * d : 0;
    return CMatrix(rows, 0);
  }
  const auto total = static_cast<Eigen::Index>(binomial(n, r) * d);
  const int dh = static_cast<int>(h.cols());
  if (p == 0 || dh < q + 1) return CMatrix::Identity(total, total);

  const auto h_choices = combinations(dh, q + 1);
  const auto g_choices = combinations(n, p - 1);
  const auto subsets = combinations(n, r);
  CMatrix a(static_cast<Eigen::Index>(h_choices.size() * g_choices.size()),
            static_cast<Eigen::Index>(subsets.size()));
  Eigen::Index row = 0;
  for (const auto& hc : h_choices) {
    for (const auto& gc : g_choices) {
      CMatrix y(n, r);
      int col = 0;
      for (int i : hc) y.col(col++) = h.col(i);
      for (int j : gc) y.col(col++) = CVector::Unit(n, j);
      for (size_t s = 0; s < subsets.size(); ++s) {
        CMatrix minor(r, r);
        for (int i = 0; i < r; ++i) minor.row(i) = y.row(subsets[s][i]);
        a(row, static_cast<Eigen::Index>(s)) = minor.determinant();
      }
      ++row;
    }
  }
  return kron_identity(kernel_basis(a, RankPolicy{}), d);
}

}  // namespace

ComplexLieAlgebra complexify(const LieAlgebraSpec& spec) {
  ComplexLieAlgebra g;
  g.name = spec.name + "^C";
  g.dim = spec.dim;
  g.c = BracketTable<cplx>(spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    for (int j = 0; j < spec.dim; ++j)
      for (int k = 0; k < spec.dim; ++k) g.c(i, j, k) = spec.c(i, j, k);
  return g;
}

ComplexLieAlgebra subalgebra(const ComplexLieAlgebra& g, const std::vector<CVector>& basis, double tol) {
  const CMatrix h = columns(basis, g.dim);
  const int dh = static_cast<int>(h.cols());
  if (numerical_rank(h, RankPolicy{}) != dh) throw Error(ErrorCode::DependentGenerators, "subalgebra generators are dependent");
  ComplexLieAlgebra out;
  out.name = "h";
  out.dim = dh;
  out.c = BracketTable<cplx>(dh);
  if (dh == 0) return out;
  const Eigen::CompleteOrthogonalDecomposition<CMatrix> solver(h);
  for (int i = 0; i < dh; ++i) {
    for (int j = 0; j < dh; ++j) {
      const CVector b = bracket_vec(g, basis[i], basis[j]);
      const CVector x = solver.solve(b);
      const double res = (h * x - b).norm();
      if (res > tol * (1.0 + b.norm())) {
        throw Error(ErrorCode::NotASubalgebra,
                    fmt::format("[h_{}, h_{}] leaves the span (residual {:.3e})", i + 1, j + 1, res));
      }
      for (int k = 0; k < dh; ++k) out.c(i, j, k) = std::abs(x(k)) < 1e-14 ? cplx(0) : x(k);
    }
  }
  return out;
}

void validate_module(const ComplexLieAlgebra& g, const GModule& module, double tol) {
  if (static_cast<int>(module.action.size()) != g.dim) {
    throw Error(ErrorCode::InvalidModule,
                fmt::format("module has {} action matrices for an algebra of dimension {}", module.action.size(), g.dim));
  }
  for (const auto& m : module.action)
    if (m.rows() != module.dim || m.cols() != module.dim) throw Error(ErrorCode::InvalidModule, "action matrix has the wrong size");
  for (int i = 0; i < g.dim; ++i) {
    for (int j = i + 1; j < g.dim; ++j) {
      CMatrix lhs = module.action[i] * module.action[j] - module.action[j] * module.action[i];
      CMatrix rhs = CMatrix::Zero(module.dim, module.dim);
      for (int k = 0; k < g.dim; ++k) rhs += g.c(i, j, k) * module.action[k];
      const double res = frob(lhs - rhs);
      const double scale = 1.0 + frob(module.action[i]) * frob(module.action[j]);
      if (res > tol * scale) {
        throw Error(ErrorCode::InvalidModule,
                    fmt::format("not a homomorphism at ({}, {}): residual {:.3e}", i + 1, j + 1, res));
      }
    }
  }
}

GModule trivial_module(int algebra_dim, int dim) {
  GModule m;
  m.dim = dim;
  m.action.assign(algebra_dim, CMatrix::Zero(dim, dim));
  m.label = fmt::format("trivial({})", dim);
  return m;
}

GModule spin_module(int twice_l) {
  GModule m;
  m.dim = twice_l + 1;
  for (const auto& j : spin_matrices(twice_l)) m.action.push_back(cplx(0.0, -1.0) * j);
  m.label = fmt::format("spin({}/2)", twice_l);
  return m;
}

GModule level_module(const EigenLevel& level) {
  GModule m;
  m.dim = level.dim;
  m.action = level.fields;
  m.label = fmt::format("E_{}", rational_string(level.lambda));
  return m;
}

CMatrix module_action(const GModule& module, const CVector& v) {
  CMatrix out = CMatrix::Zero(module.dim, module.dim);
  for (Eigen::Index a = 0; a < v.size(); ++a)
    if (v(a) != cplx(0)) out += v(a) * module.action[a];
  return out;
}

CMatrix ce_differential(const ComplexLieAlgebra& g, const GModule& module, int r) {
  const int n = g.dim;
  if (r < 0 || r > n) throw Error(ErrorCode::DegreeOutOfRange, fmt::format("degree {} outside [0, {}]", r, n));
  const int d = module.dim;
  const auto source = index_subsets(n, r);
  const auto targets = combinations(n, r + 1);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(targets.size()) * d,
                              static_cast<Eigen::Index>(binomial(n, r)) * d);
  for (size_t t = 0; t < targets.size(); ++t) {
    const MultiIndex& tt = targets[t];
    const auto row0 = static_cast<Eigen::Index>(t) * d;
    for (int i = 0; i <= r; ++i) {
      MultiIndex rest = tt;
      rest.erase(rest.begin() + i);
      const int col = source.at(rest);
      const double sign = i % 2 == 0 ? 1.0 : -1.0;
      out.block(row0, static_cast<Eigen::Index>(col) * d, d, d) += sign * module.action[tt[i]];
    }
    for (int i = 0; i <= r; ++i) {
      for (int j = i + 1; j <= r; ++j) {
        const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
        for (int k = 0; k < n; ++k) {
          const cplx c = g.c(tt[i], tt[j], k);
          if (c == cplx(0)) continue;
          MultiIndex args{k};
          for (int a = 0; a <= r; ++a)
            if (a != i && a != j) args.push_back(tt[a]);
          const auto perm = sort_with_sign(args);
          if (!perm) continue;
          const int col = source.at(args);
          for (int v = 0; v < d; ++v) out(row0 + v, static_cast<Eigen::Index>(col) * d + v) += sign * (*perm) * c;
        }
      }
    }
  }
  return out;
}

std::vector<int> ce_cohomology(const ComplexLieAlgebra& g, const GModule& module, const RankPolicy& policy) {
  std::vector<int> ranks(g.dim + 1, 0);
  for (int r = 0; r < g.dim; ++r) ranks[r] = numerical_rank(ce_differential(g, module, r), policy);
  std::vector<int> dims;
  for (int r = 0; r <= g.dim; ++r) {
    const auto size = static_cast<int>(binomial(g.dim, r) * module.dim);
    dims.push_back(size - ranks[r] - (r > 0 ? ranks[r - 1] : 0));
  }
  return dims;
}

RelativeComplex relative_cohomology(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                                    const GModule& module, int p, const RankPolicy& policy) {
  subalgebra(g, h_basis);
  RelativeComplex rc;
  rc.p = p;
  rc.g_dim = g.dim;
  rc.h_dim = static_cast<int>(h_basis.size());
  const CMatrix h = columns(h_basis, g.dim);
  const int d = module.dim;
  for (int q = 0; q <= rc.h_dim; ++q) {
    const CMatrix w = filtration_space(g.dim, h, d, p, q);
    const CMatrix k = filtration_space(g.dim, h, d, p + 1, q - 1);
    const CMatrix projected = k.cols() == 0 ? w : CMatrix(w - k * (k.adjoint() * w));
    rc.u_bases.push_back(orthonormal_span(projected, 1e-8));
  }
  std::vector<int> ranks(rc.h_dim + 1, 0);
  for (int q = 0; q < rc.h_dim; ++q) {
    const int r = p + q;
    CMatrix dq;
    if (r >= 0 && r < g.dim && rc.u_bases[q].cols() > 0 && rc.u_bases[q + 1].rows() > 0) {
      dq = rc.u_bases[q + 1].adjoint() * ce_differential(g, module, r) * rc.u_bases[q];
    } else {
      dq = CMatrix::Zero(rc.u_bases[q + 1].cols(), rc.u_bases[q].cols());
    }
    ranks[q] = numerical_rank(dq, policy);
    rc.differentials.push_back(std::move(dq));
  }
  for (size_t q = 1; q < rc.differentials.size(); ++q)
    rc.max_square_residual =
        std::max(rc.max_square_residual, composition_residual(rc.differentials[q], rc.differentials[q - 1]));
  for (int q = 0; q <= rc.h_dim; ++q)
    rc.dims.push_back(static_cast<int>(rc.u_bases[q].cols()) - ranks[q] - (q > 0 ? ranks[q - 1] : 0));
  return rc;
}

GModule quotient_cochain_module(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                                const GModule& module, int p) {
  subalgebra(g, h_basis);
  const int n = g.dim;
  const int dh = static_cast<int>(h_basis.size());
  const int dm = n - dh;
  const int d = module.dim;
  const CMatrix b = adapted_basis(n, h_basis);
  const CMatrix binv = b.inverse();
  const auto subsets = combinations(dm, p);
  const auto index = index_subsets(dm, p);

  GModule out;
  out.dim = static_cast<int>(subsets.size()) * d;
  out.label = fmt::format("C^{}(g/h; {})", p, module.label);
  for (int x = 0; x < dh; ++x) {
    // Quotient action of h_x on g/h in the M coordinates.
    CMatrix ad = CMatrix::Zero(dm, dm);
    for (int a = 0; a < dm; ++a) {
      const CVector coords = binv * bracket_vec(g, h_basis[x], b.col(dh + a));
      ad.col(a) = coords.tail(dm);
    }
    const CMatrix rho = module_action(module, h_basis[x]);
    CMatrix act = CMatrix::Zero(out.dim, out.dim);
    for (size_t s = 0; s < subsets.size(); ++s) {
      const auto r0 = static_cast<Eigen::Index>(s) * d;
      act.block(r0, r0, d, d) += rho;
      for (int i = 0; i < p; ++i) {
        for (int bb = 0; bb < dm; ++bb) {
          const cplx coef = ad(bb, subsets[s][i]);
          if (std::abs(coef) < 1e-14) continue;
          MultiIndex args = subsets[s];
          args[i] = bb;
          const auto perm = sort_with_sign(args);
          if (!perm) continue;
          const auto c0 = static_cast<Eigen::Index>(index.at(args)) * d;
          for (int v = 0; v < d; ++v) act(r0 + v, c0 + v) -= static_cast<double>(*perm) * coef;
        }
      }
    }
    out.action.push_back(std::move(act));
  }
  return out;
}

PhiCheck phi_dimension_check(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                             const GModule& module, int p, int q, const RankPolicy& policy) {
  const int dh = static_cast<int>(h_basis.size());
  if (q < 0 || q > dh) throw Error(ErrorCode::DegreeOutOfRange, fmt::format("q = {} outside [0, {}]", q, dh));
  PhiCheck c;
  c.p = p;
  c.q = q;
  c.relative_dim = relative_cohomology(g, h_basis, module, p, policy).dims[q];
  const ComplexLieAlgebra h = subalgebra(g, h_basis);
  const GModule w = quotient_cochain_module(g, h_basis, module, p);
  c.phi_dim = ce_cohomology(h, w, policy)[q];
  c.equal = c.relative_dim == c.phi_dim;
  return c;
}

CMatrix invariants_subspace(const GModule& module, const std::vector<CVector>& h_basis, const RankPolicy& policy) {
  if (h_basis.empty()) return CMatrix::Identity(module.dim, module.dim);
  CMatrix stacked(static_cast<Eigen::Index>(h_basis.size()) * module.dim, module.dim);
  for (size_t i = 0; i < h_basis.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * module.dim, module.dim) = module_action(module, h_basis[i]);
  return kernel_basis(stacked, policy);
}

WhiteheadReport whitehead_report(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                                 const GModule& module, const RankPolicy& policy) {
  const ComplexLieAlgebra h = subalgebra(g, h_basis);
  WhiteheadReport r;
  CMatrix killing = CMatrix::Zero(h.dim, h.dim);
  std::vector<CMatrix> ad(h.dim, CMatrix::Zero(h.dim, h.dim));
  for (int i = 0; i < h.dim; ++i)
    for (int j = 0; j < h.dim; ++j)
      for (int k = 0; k < h.dim; ++k) ad[i](k, j) = h.c(i, j, k);
  for (int i = 0; i < h.dim; ++i)
    for (int j = 0; j < h.dim; ++j) killing(i, j) = (ad[i] * ad[j]).trace();
  r.semisimple = h.dim > 0 && numerical_rank(killing, policy) == h.dim;
  r.invariants_dim = static_cast<int>(invariants_subspace(module, h_basis, policy).cols());
  r.theorem_applies = r.semisimple && r.invariants_dim == 0;

  GModule restricted;
  restricted.dim = module.dim;
  restricted.label = module.label;
  for (const auto& v : h_basis) restricted.action.push_back(module_action(module, v));
  r.dims = ce_cohomology(h, restricted, policy);
  r.vanishing = std::all_of(r.dims.begin(), r.dims.end(), [](int x) { return x == 0; });
  if (r.theorem_applies) {
    r.statement = fmt::format("h semisimple and V^h = 0, so Whitehead's theorem gives H^*(h; V) = 0; direct computation {}",
                              r.vanishing ? "agrees" : "DISAGREES");
  } else {
    r.statement = fmt::format("theorem inapplicable ({}); direct dimensions reported",
                              !r.semisimple ? "h not semisimple" : "V^h != 0");
  }
  return r;
}

CrossPipelineResult cross_pipeline_check(const InvolutiveFrame& frame, TruncationPtr truncation, int p, int q,
                                         const CohomologyPolicy& policy) {
  const CohomologyTable table = dprime_cohomology(frame, truncation, p, q, policy);
  const ComplexLieAlgebra g = complexify(frame.algebra);
  CrossPipelineResult out;
  out.p = p;
  out.q = q;
  for (size_t i = 0; i < truncation->levels.size(); ++i) {
    const auto& level = truncation->levels[i];
    const RelativeComplex rc = relative_cohomology(g, frame.l_basis, level_module(level), p, policy.rank);
    CrossPipelineRow row{level.lambda, table.levels[i].h, rc.dims[q]};
    if (row.spectral_h != row.relative_h) ++out.mismatches;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace invcx
