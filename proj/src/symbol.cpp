#include "invcx/symbol.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

namespace invcx {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::AssembledDPrime: return "assembled-dprime";
    case Provenance::UserDefined: return "user-defined";
    case Provenance::Quantized: return "quantized";
  }
  return "unknown";
}

bool same_truncation(const SpectrumTruncation& a, const SpectrumTruncation& b) {
  if (&a == &b) return true;
  if (a.backend != b.backend || a.levels.size() != b.levels.size()) return false;
  for (size_t i = 0; i < a.levels.size(); ++i)
    if (a.levels[i].lambda != b.levels[i].lambda || a.levels[i].dim != b.levels[i].dim) return false;
  return true;
}

namespace {

void require_same(const SpectrumTruncation& a, const SpectrumTruncation& b, const char* what) {
  if (!same_truncation(a, b)) {
    throw Error(ErrorCode::TruncationMismatch, fmt::format("{}: operands live on different truncations", what));
  }
}

}  // namespace

SymbolFamily identity_family(TruncationPtr t, int arity) {
  SymbolFamily f;
  f.source_arity = f.target_arity = arity;
  for (const auto& l : t->levels) f.levels.push_back(CMatrix::Identity(arity * l.dim, arity * l.dim));
  f.truncation = std::move(t);
  f.label = "identity";
  return f;
}

SymbolFamily zero_family(TruncationPtr t, int source_arity, int target_arity) {
  SymbolFamily f;
  f.source_arity = source_arity;
  f.target_arity = target_arity;
  for (const auto& l : t->levels) f.levels.push_back(CMatrix::Zero(target_arity * l.dim, source_arity * l.dim));
  f.truncation = std::move(t);
  f.label = "zero";
  return f;
}

TruncatedSequence zero_sequence(TruncationPtr t, int arity) {
  TruncatedSequence s;
  s.arity = arity;
  for (const auto& l : t->levels) s.levels.push_back(CVector::Zero(arity * l.dim));
  s.truncation = std::move(t);
  return s;
}

SymbolFamily assemble_dprime(const InvolutiveFrame& frame, TruncationPtr truncation, int p, int q) {
  const DPrimeConstants alpha = dprime_structure_constants(frame, p, q);
  const auto& alg = truncation->algebra;
  if (alg.dim != frame.algebra.dim) {
    throw Error(ErrorCode::TruncationMismatch, "truncation and frame are built on different algebras");
  }
  for (int i = 0; i < alg.dim; ++i)
    for (int j = 0; j < alg.dim; ++j)
      for (int k = 0; k < alg.dim; ++k)
        if (alg.c(i, j, k) != frame.algebra.c(i, j, k)) {
          throw Error(ErrorCode::TruncationMismatch, "truncation and frame are built on different algebras");
        }

  const int ns = alpha.source.size();
  const int nt = alpha.target.size();

  // Vector-field part: tau_j ^ zeta_I ^ tau_J normalized into the target basis.
  struct FieldEntry {
    int source, target, field, sign;
  };
  std::vector<FieldEntry> entries;
  for (int s = 0; s < ns; ++s) {
    const auto& [zi, tj] = alpha.source[s];
    for (int j = 0; j < frame.n; ++j) {
      std::vector<FormFactor> factors{{Species::Tau, j}};
      for (int i : zi) factors.push_back({Species::Zeta, i});
      for (int t : tj) factors.push_back({Species::Tau, t});
      const auto normalized = wedge_into_basis(factors);
      if (!normalized) continue;
      const int t = alpha.target.find(normalized->zeta, normalized->tau);
      entries.push_back({s, t, j, normalized->sign});
    }
  }

  SymbolFamily fam;
  fam.truncation = truncation;
  fam.source_arity = ns;
  fam.target_arity = nt;
  fam.provenance = Provenance::AssembledDPrime;
  fam.label = fmt::format("d'({},{})", p, q);
  for (const auto& level : truncation->levels) {
    const int d = level.dim;
    std::vector<CMatrix> lhat;
    lhat.reserve(frame.n);
    for (int j = 0; j < frame.n; ++j) lhat.push_back(complex_field_symbol(level, frame.l_basis[j]));
    CMatrix mat = CMatrix::Zero(nt * d, ns * d);
    for (const auto& e : entries) mat.block(e.target * d, e.source * d, d, d) += double(e.sign) * lhat[e.field];
    // Constant part d(zeta_I ^ tau_J) enters with the Leibniz sign.
    for (const auto& [key, a] : alpha.alpha) {
      mat.block(key.second * d, key.first * d, d, d).diagonal().array() += a;
    }
    fam.levels.push_back(std::move(mat));
  }
  return fam;
}

double check_complex(const SymbolFamily& p, const SymbolFamily& q) {
  require_same(*p.truncation, *q.truncation, "check_complex");
  if (p.source_arity != q.target_arity) {
    throw Error(ErrorCode::ShapeMismatch,
                fmt::format("check_complex: P takes {} blocks, Q produces {}", p.source_arity, q.target_arity));
  }
  double worst = 0.0;
  for (size_t i = 0; i < p.levels.size(); ++i)
    worst = std::max(worst, composition_residual(p.levels[i], q.levels[i]));
  return worst;
}

SymbolFamily compose(const SymbolFamily& p, const SymbolFamily& q) {
  require_same(*p.truncation, *q.truncation, "compose");
  if (p.source_arity != q.target_arity) {
    throw Error(ErrorCode::ShapeMismatch, "compose: arities do not chain");
  }
  SymbolFamily out;
  out.truncation = p.truncation;
  out.source_arity = q.source_arity;
  out.target_arity = p.target_arity;
  out.label = p.label + "*" + q.label;
  for (size_t i = 0; i < p.levels.size(); ++i) out.levels.push_back(p.levels[i] * q.levels[i]);
  return out;
}

TruncatedSequence apply(const SymbolFamily& p, const TruncatedSequence& a) {
  require_same(*p.truncation, *a.truncation, "apply");
  if (p.source_arity != a.arity) {
    throw Error(ErrorCode::ArityMismatch,
                fmt::format("apply: operator takes arity {}, sequence has {}", p.source_arity, a.arity));
  }
  TruncatedSequence out;
  out.truncation = p.truncation;
  out.arity = p.target_arity;
  for (size_t i = 0; i < p.levels.size(); ++i) out.levels.push_back(p.levels[i] * a.levels[i]);
  return out;
}

cplx pairing(const TruncatedSequence& u, const TruncatedSequence& v) {
  require_same(*u.truncation, *v.truncation, "pairing");
  if (u.arity != v.arity) throw Error(ErrorCode::ArityMismatch, "pairing: arities differ");
  cplx total = 0.0;
  for (size_t i = 0; i < u.levels.size(); ++i) total += (u.levels[i].array() * v.levels[i].array()).sum();
  return total;
}

}  // namespace invcx
