#pragma once

#include "invcx/suite.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace invcx {

constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string group = "torus";
  int dims = 2;
  /// Suite structure id; when set it fixes group, dims and generators.
  std::string structure;
  /// Algebra read from [algebra]/[structure]/[metric]; otherwise the backend's.
  std::optional<LieAlgebraSpec> algebra;
  /// Generators of v in algebra coordinates; empty means de Rham.
  std::vector<CVector> generators;
  /// Extended-precision field coefficients, kept when generators came from a suite id.
  std::optional<std::vector<LongComplex>> field;

  std::vector<double> cutoffs{25.0};
  std::vector<std::pair<int, int>> bidegrees;  // empty: every bidegree
  std::string weight = "smooth";
  Flavor flavor = Flavor::Beurling;
  std::vector<double> s_ladder;
  std::string witness;  // empty: no witness
  double witness_s = -0.5;

  RankPolicy rank;
  double structure_tol = 1e-10;
  double complex_tol = 1e-8;
  double representative_cutoff = 1e-8;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool emit_representatives = false;
};

/// Parses "re+imj" style complex literals; also accepts the constants
/// sqrt2 and liouville, optionally scaled ("2*sqrt2", "-liouville").
LongComplex parse_complex(const std::string& text);

Flavor parse_flavor(const std::string& text);

/// Reads an INI document; throws Error{ConfigError} or the algebra validation errors.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Replaces group, dims and generators by those of a suite structure.
void apply_structure(RunConfig& cfg, const std::string& id);

/// Cutoffs strictly increasing, nonnegative; bidegrees nonnegative.
void check_config(const RunConfig& cfg);

/// Canonical one-line-per-field rendering used for the digest.
std::string canonical_config(const RunConfig& cfg);
/// Hex SHA-256 of canonical_config.
std::string config_digest(const RunConfig& cfg);

/// Structure described by the config (suite id, or group plus generators).
Structure config_structure(const RunConfig& cfg);
/// Algebra used by the frame: the config's, or the backend's.
LieAlgebraSpec config_algebra(const RunConfig& cfg);
InvolutiveFrame config_frame(const RunConfig& cfg);

}  // namespace invcx
