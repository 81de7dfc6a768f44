#pragma once

#include "invcx/algebra.hpp"
#include "invcx/exterior.hpp"

#include <map>
#include <utility>
#include <vector>

namespace invcx {

/// Basis L_1..L_n of a complex subalgebra v of Cg, completed by M_1..M_m to a
/// basis of Cg, together with the dual forms tau_1..tau_n, zeta_1..zeta_m.
struct InvolutiveFrame {
  LieAlgebraSpec algebra;
  int n = 0;  // dim v
  int m = 0;  // codim
  std::vector<CVector> l_basis;
  std::vector<CVector> m_basis;
  CMatrix basis;  // columns: L_1..L_n, M_1..M_m in algebra coordinates
  CMatrix dual;   // rows: tau_1..tau_n, zeta_1..zeta_m
  /// Brackets in frame coordinates: frame index a < n is L_a, otherwise M_{a-n}.
  BracketTable<cplx> frame_brackets;
};

InvolutiveFrame build_frame(const LieAlgebraSpec& spec, const std::vector<CVector>& v_basis,
                            double tol = 1e-10, const RankPolicy& policy = {});

/// v = Cg, spanned by the coordinate basis.
InvolutiveFrame de_rham_frame(const LieAlgebraSpec& spec);

/// v + conj(v) = Cg.
bool check_ellipticity(const InvolutiveFrame& frame, const RankPolicy& policy = {});

struct DPrimeConstants {
  int p = 0, q = 0;
  MultiIndexBasis source;
  MultiIndexBasis target;
  /// (source position, target position) -> alpha
  std::map<std::pair<int, int>, cplx> alpha;

  cplx at(int source_pos, int target_pos) const {
    const auto it = alpha.find({source_pos, target_pos});
    return it == alpha.end() ? cplx(0) : it->second;
  }
};

/// Constant part of d' on the invariant forms zeta_I ^ tau_J of bidegree (p, q).
DPrimeConstants dprime_structure_constants(const InvolutiveFrame& frame, int p, int q);

}  // namespace invcx
