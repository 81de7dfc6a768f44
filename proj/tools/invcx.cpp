#include "invcx/config.hpp"
#include "invcx/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> group;
  std::optional<int> dims;
  std::optional<std::string> structure;
  std::optional<double> cutoff;
  std::optional<std::string> cutoffs;
  std::vector<std::string> bidegrees;
  std::optional<std::string> weight;
  std::optional<std::string> flavor;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> witness;
  std::optional<double> witness_s;
  bool emit_representatives = false;
};

void add_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "INI configuration file");
  cmd.add_option("--group", o.group, "torus or su2");
  cmd.add_option("--dims", o.dims, "torus dimension");
  cmd.add_option("--structure", o.structure, "suite structure id");
  cmd.add_option("--cutoff", o.cutoff, "single cutoff");
  cmd.add_option("--cutoffs", o.cutoffs, "comma-separated increasing cutoffs");
  cmd.add_option("--bidegree", o.bidegrees, "bidegree p,q (repeatable)");
  cmd.add_option("--weight", o.weight, "smooth or gevrey:s");
  cmd.add_option("--flavor", o.flavor, "beurling or roumieu");
  cmd.add_option("--tol", o.tol, "relative rank tolerance");
  cmd.add_option("--seed", o.seed, "random seed");
  cmd.add_option("--out", o.out, "output directory for JSON and CSV");
  cmd.add_option("--witness", o.witness, "witness kind 1a, 1b, 2a or 2b");
  cmd.add_option("--witness-s", o.witness_s, "exponent s for witnesses and certificates");
  cmd.add_flag("--emit-representatives", o.emit_representatives, "include harmonic representatives");
}

invcx::RunConfig build_config(const Overrides& o) {
  using invcx::Error;
  using invcx::ErrorCode;
  invcx::RunConfig cfg = o.config.empty() ? invcx::RunConfig{} : invcx::load_config(o.config);
  if (o.structure) invcx::apply_structure(cfg, *o.structure);
  if (o.group) {
    if (!cfg.structure.empty() && *o.group != cfg.group)
      throw Error(ErrorCode::ConfigError, fmt::format("--group {} conflicts with structure {}", *o.group, cfg.structure));
    if (*o.group != cfg.group) {
      cfg.generators.clear();
      cfg.field.reset();
    }
    cfg.group = *o.group;
    if (cfg.group == "su2") cfg.dims = 3;
  }
  if (o.dims) {
    if (!cfg.structure.empty() && *o.dims != cfg.dims)
      throw Error(ErrorCode::ConfigError, fmt::format("--dims {} conflicts with structure {}", *o.dims, cfg.structure));
    cfg.dims = *o.dims;
  }
  if (o.cutoff && o.cutoffs) throw Error(ErrorCode::ConfigError, "give --cutoff or --cutoffs, not both");
  if (o.cutoff) cfg.cutoffs = {*o.cutoff};
  if (o.cutoffs) {
    cfg.cutoffs.clear();
    for (const auto& t : CLI::detail::split(*o.cutoffs, ',')) {
      try {
        cfg.cutoffs.push_back(std::stod(t));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, fmt::format("cannot parse cutoff '{}'", t));
      }
    }
  }
  if (!o.bidegrees.empty()) {
    cfg.bidegrees.clear();
    for (const auto& b : o.bidegrees) {
      int p = 0, q = 0;
      char tail = 0;
      if (std::sscanf(b.c_str(), "%d,%d%c", &p, &q, &tail) != 2)
        throw Error(ErrorCode::ConfigError, fmt::format("bidegree '{}' is not of the form p,q", b));
      cfg.bidegrees.emplace_back(p, q);
    }
  }
  if (o.weight) cfg.weight = *o.weight;
  if (o.flavor) cfg.flavor = invcx::parse_flavor(*o.flavor);
  if (o.tol) cfg.rank.relative = *o.tol;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  if (o.witness) cfg.witness = *o.witness;
  if (o.witness_s) cfg.witness_s = *o.witness_s;
  if (o.emit_representatives) cfg.emit_representatives = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Left-invariant differential complexes on compact Lie groups"};
  app.set_version_flag("--version", invcx::kToolVersion);
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"describe", "algebra, frame, ellipticity and semisimplicity summary"},
      {"spectrum", "Laplacian levels and Weyl partial sums"},
      {"cohomology", "per-level cohomology tables and left-invariance verdicts"},
      {"diagnose", "sigma tables, closed-range evidence, estimate fits, witnesses"},
      {"lie-cohomology", "Chevalley-Eilenberg and relative dimensions against the spectral pipeline"},
  };
  for (const auto& [name, help] : commands) add_options(*app.add_subcommand(name, help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << invcx::error_json(invcx::ErrorCode::ConfigError, e.what());
    return invcx::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  invcx::RunResult result;
  try {
    const invcx::RunConfig cfg = build_config(o);
    result = invcx::run(command, cfg);
    if (result.error.empty()) {
      if (cfg.out_dir.empty()) {
        std::cout << result.report;
      } else {
        invcx::write_artifacts(result, command, cfg.out_dir);
      }
    }
  } catch (const invcx::Error& e) {
    result.exit_code = invcx::kExitValidation;
    result.error = invcx::error_json(e.code(), e.what());
  }
  if (!result.error.empty()) std::cerr << result.error;
  return result.exit_code;
}
