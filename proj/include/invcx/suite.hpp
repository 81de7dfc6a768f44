#pragma once

#include "invcx/diagnostics.hpp"
#include "invcx/symbol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace invcx {

/// A named involutive structure on a backend group.
struct Structure {
  std::string id;
  std::string group;  // "torus" or "su2"
  int dims = 1;
  /// Generators of v in algebra coordinates; empty means v = Cg (de Rham).
  std::vector<CVector> generators;
  /// Extended-precision coefficients for a single torus field (fast path).
  std::optional<std::vector<LongComplex>> field;
};

std::vector<Structure> suite_structures();
Structure find_structure(const std::string& id);

/// Scalar field sum_a c_a d_a on T^n.
Structure torus_field_structure(const std::string& id, const std::vector<LongComplex>& coeffs);

std::unique_ptr<SpectralBackend> structure_backend(const Structure& s);
InvolutiveFrame structure_frame(const Structure& s);
TruncationPtr structure_truncation(const Structure& s, double cutoff);

}  // namespace invcx
