#pragma once

#include "invcx/config.hpp"
#include "invcx/error.hpp"

#include <string>
#include <vector>

namespace invcx {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitToleranceSensitive = 3,
  kExitCrossPipelineMismatch = 4,
};

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string content;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string report;  // canonical JSON, empty on error
  std::vector<Artifact> csv;
  std::string error;  // error JSON, empty on success
};

const std::vector<std::string>& command_names();

/// Runs one of describe, spectrum, cohomology, diagnose, lie-cohomology.
/// Library errors become exit code 2 with an error record; nothing is thrown.
RunResult run(const std::string& command, const RunConfig& cfg);

std::string error_json(ErrorCode code, const std::string& message);

/// Writes report.json and the CSV projections into dir.
void write_artifacts(const RunResult& result, const std::string& command, const std::string& dir);

}  // namespace invcx
