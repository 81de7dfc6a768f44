#pragma once

#include "invcx/cohomology.hpp"

#include <string>
#include <vector>

namespace invcx {

/// Complex Lie algebra given by structure constants in a chosen basis.
struct ComplexLieAlgebra {
  std::string name;
  int dim = 0;
  BracketTable<cplx> c;
};

ComplexLieAlgebra complexify(const LieAlgebraSpec& spec);

/// Subalgebra spanned by the given vectors (coordinates in g), with structure
/// constants in that basis. Throws NotASubalgebra or DependentGenerators.
ComplexLieAlgebra subalgebra(const ComplexLieAlgebra& g, const std::vector<CVector>& basis, double tol = 1e-10);

struct GModule {
  int dim = 0;
  std::vector<CMatrix> action;  // rho(X_a), one per basis element of the acting algebra
  std::string label;
};

/// Checks [rho(X_i), rho(X_j)] = sum_k c_ij^k rho(X_k); throws InvalidModule.
void validate_module(const ComplexLieAlgebra& g, const GModule& module, double tol = 1e-9);

GModule trivial_module(int algebra_dim, int dim = 1);
/// Spin-l representation of su(2), rho(e_a) = -i J_a, dimension twice_l + 1.
GModule spin_module(int twice_l);
/// E_lambda with the left-invariant fields acting through their symbols.
GModule level_module(const EigenLevel& level);
/// rho(v) = sum_a v_a rho(X_a).
CMatrix module_action(const GModule& module, const CVector& v);

/// C^r(g; V) -> C^{r+1}(g; V), basis (ordered r-subset, module index) with
/// index subset_position * dim V + v.
CMatrix ce_differential(const ComplexLieAlgebra& g, const GModule& module, int r);

/// dim H^0 .. dim H^{dim g}.
std::vector<int> ce_cohomology(const ComplexLieAlgebra& g, const GModule& module, const RankPolicy& policy = {});

struct RelativeComplex {
  int p = 0;
  int g_dim = 0;
  int h_dim = 0;
  std::vector<CMatrix> u_bases;       // orthonormal bases of U^{p,q}, q = 0..dim h, inside C^{p+q}(g;V)
  std::vector<CMatrix> differentials;  // induced d'_q : U^{p,q} -> U^{p,q+1}
  std::vector<int> dims;               // dim H^{p,q}
  double max_square_residual = 0.0;    // over d'_{q+1} d'_q
};

/// h_basis holds coordinates in g. Throws NotASubalgebra.
RelativeComplex relative_cohomology(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                                    const GModule& module, int p, const RankPolicy& policy = {});

/// The h-module C^p(g/h; V) with the quotient action, in the basis of h_basis.
GModule quotient_cochain_module(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                                const GModule& module, int p);

struct PhiCheck {
  int p = 0, q = 0;
  int relative_dim = 0;  // dim H^{p,q}_h(g; V)
  int phi_dim = 0;       // dim H^q(h; C^p(g/h; V))
  bool equal = false;
};

PhiCheck phi_dimension_check(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                             const GModule& module, int p, int q, const RankPolicy& policy = {});

/// Joint kernel of rho(L) over L in h_basis (coordinates in g).
CMatrix invariants_subspace(const GModule& module, const std::vector<CVector>& h_basis,
                            const RankPolicy& policy = {});

struct WhiteheadReport {
  bool semisimple = false;
  int invariants_dim = 0;
  bool theorem_applies = false;
  std::vector<int> dims;
  bool vanishing = false;  // H^q = 0 for every q
  std::string statement;
};

WhiteheadReport whitehead_report(const ComplexLieAlgebra& g, const std::vector<CVector>& h_basis,
                                 const GModule& module, const RankPolicy& policy = {});

struct CrossPipelineRow {
  Rational lambda;
  int spectral_h = 0;
  int relative_h = 0;
};

struct CrossPipelineResult {
  int p = 0, q = 0;
  std::vector<CrossPipelineRow> rows;
  int mismatches = 0;
};

/// Compares the spectral H^{p,q} at every level with the relative CE dimension
/// for the module E_lambda and h = v.
CrossPipelineResult cross_pipeline_check(const InvolutiveFrame& frame, TruncationPtr truncation, int p, int q,
                                         const CohomologyPolicy& policy = {});

}  // namespace invcx
