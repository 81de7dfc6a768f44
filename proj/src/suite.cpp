#include "invcx/suite.hpp"
#include "invcx/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace invcx {

Structure torus_field_structure(const std::string& id, const std::vector<LongComplex>& coeffs) {
  Structure s;
  s.id = id;
  s.group = "torus";
  s.dims = static_cast<int>(coeffs.size());
  CVector g(s.dims);
  for (int a = 0; a < s.dims; ++a) g(a) = cplx(static_cast<double>(coeffs[a].real()), static_cast<double>(coeffs[a].imag()));
  s.generators.push_back(g);
  s.field = coeffs;
  return s;
}

std::vector<Structure> suite_structures() {
  std::vector<Structure> out;
  out.push_back(torus_field_structure("t1-d", {1.0L}));
  out.push_back({"t2-derham", "torus", 2, {}, std::nullopt});
  out.push_back(torus_field_structure("t2-d1", {1.0L, 0.0L}));
  out.push_back(torus_field_structure("t2-d1-i-d2", {1.0L, LongComplex(0.0L, 1.0L)}));
  out.push_back(torus_field_structure("t2-sqrt2", {1.0L, std::sqrt(2.0L)}));
  out.push_back(torus_field_structure("t2-liouville", {1.0L, liouville_alpha()}));
  out.push_back({"su2-derham", "su2", 3, {}, std::nullopt});
  Structure cr{"su2-cr", "su2", 3, {}, std::nullopt};
  CVector l(3);
  l << 0.0, 1.0, cplx(0.0, 1.0);
  cr.generators.push_back(l);
  out.push_back(cr);
  return out;
}

Structure find_structure(const std::string& id) {
  for (auto& s : suite_structures())
    if (s.id == id) return s;
  throw Error(ErrorCode::ConfigError, fmt::format("unknown structure '{}'", id));
}

std::unique_ptr<SpectralBackend> structure_backend(const Structure& s) { return make_backend(s.group, s.dims); }

InvolutiveFrame structure_frame(const Structure& s) {
  const auto backend = structure_backend(s);
  const LieAlgebraSpec& algebra = backend->algebra();
  return s.generators.empty() ? de_rham_frame(algebra) : build_frame(algebra, s.generators);
}

TruncationPtr structure_truncation(const Structure& s, double cutoff) {
  const auto backend = structure_backend(s);
  return std::make_shared<const SpectrumTruncation>(enumerate_levels(*backend, cutoff));
}

}  // namespace invcx
