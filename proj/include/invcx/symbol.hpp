#pragma once

#include "invcx/frame.hpp"
#include "invcx/spectrum.hpp"

#include <memory>
#include <string>
#include <vector>

namespace invcx {

using TruncationPtr = std::shared_ptr<const SpectrumTruncation>;

enum class Provenance { AssembledDPrime, UserDefined, Quantized };

const char* to_string(Provenance p);

/// A Laplacian-invariant operator system, represented by its symbol: one
/// (target_arity * d) x (source_arity * d) matrix per eigenvalue.
struct SymbolFamily {
  TruncationPtr truncation;
  int source_arity = 0;
  int target_arity = 0;
  std::vector<CMatrix> levels;
  Provenance provenance = Provenance::UserDefined;
  std::string label;
};

/// Finite model of a spectral sequence: one coefficient vector of length
/// arity * d per eigenvalue.
struct TruncatedSequence {
  TruncationPtr truncation;
  int arity = 0;
  std::vector<CVector> levels;
};

bool same_truncation(const SpectrumTruncation& a, const SpectrumTruncation& b);

SymbolFamily identity_family(TruncationPtr t, int arity);
SymbolFamily zero_family(TruncationPtr t, int source_arity, int target_arity);
TruncatedSequence zero_sequence(TruncationPtr t, int arity);

/// d' from bidegree (p, q) to (p, q+1), block layout following MultiIndexBasis.
SymbolFamily assemble_dprime(const InvolutiveFrame& frame, TruncationPtr truncation, int p, int q);

/// max over levels of ||P Q|| / (1 + ||P|| ||Q||).
double check_complex(const SymbolFamily& p, const SymbolFamily& q);

SymbolFamily compose(const SymbolFamily& p, const SymbolFamily& q);

TruncatedSequence apply(const SymbolFamily& p, const TruncatedSequence& a);

/// Bilinear pairing sum_lambda sum_i u_i v_i.
cplx pairing(const TruncatedSequence& u, const TruncatedSequence& v);

}  // namespace invcx
