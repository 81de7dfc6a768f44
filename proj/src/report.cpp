#include "invcx/report.hpp"
#include "invcx/cohomology.hpp"
#include "invcx/diagnostics.hpp"
#include "invcx/lie_cohomology.hpp"

#include <fmt/format.h>
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <random>

namespace invcx {

namespace {

using Json = nlohmann::ordered_json;

// Levels beyond this count are summarized in JSON and kept whole in CSV.
constexpr int kJsonSigmaRows = 2000;

std::string fnum(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

Json opt_num(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

std::string cstr(cplx z) { return fmt::format("{:.17g}{:+.17g}j", z.real(), z.imag()); }

Json cvec(const CVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cstr(v(i)));
  return a;
}

Json rat(const Rational& r) { return rational_string(r); }

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json ints(const std::vector<int>& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x);
  return a;
}

void write_string(std::string& out, const std::string& s) { out += Json(s).dump(); }

// Canonical rendering: two-space indent, keys in insertion order, floats with
// 17 significant digits.
void write_json(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<size_t>(indent + 2), ' ');
  const std::string close(static_cast<size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(out, it.key());
        out += ": ";
        write_json(out, it.value(), indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalar = true;
      for (const auto& e : j) scalar = scalar && !e.is_structured();
      if (scalar) {
        out += "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(out, j[i], indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += fmt::format("{:.17g}", j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string render(const Json& j) {
  std::string out;
  write_json(out, j, 0);
  out += "\n";
  return out;
}

Json error_record(const Error& e) { return Json{{"error", to_string(e.code())}, {"message", e.what()}}; }

CohomologyPolicy cohomology_policy(const RunConfig& cfg) {
  CohomologyPolicy p;
  p.rank = cfg.rank;
  p.complex_tol = cfg.complex_tol;
  p.representative_cutoff = cfg.representative_cutoff;
  return p;
}

std::vector<std::pair<int, int>> bidegrees(const RunConfig& cfg, const InvolutiveFrame& f) {
  if (!cfg.bidegrees.empty()) {
    for (const auto& [p, q] : cfg.bidegrees)
      if (p > f.m || q > f.n)
        throw Error(ErrorCode::BidegreeOutOfRange,
                    fmt::format("bidegree ({},{}) outside 0..{} x 0..{}", p, q, f.m, f.n));
    return cfg.bidegrees;
  }
  std::vector<std::pair<int, int>> all;
  for (int p = 0; p <= f.m; ++p)
    for (int q = 0; q <= f.n; ++q) all.emplace_back(p, q);
  return all;
}

double max_cutoff(const RunConfig& cfg) { return cfg.cutoffs.back(); }

TruncationPtr truncation_for(const RunConfig& cfg, const Structure& s) {
  return structure_truncation(s, max_cutoff(cfg));
}

struct Outcome {
  Json result;
  std::vector<Artifact> csv;
  int exit_code = kExitOk;
};

Outcome describe(const RunConfig& cfg) {
  const LieAlgebraSpec alg = config_algebra(cfg);
  const InvolutiveFrame f = config_frame(cfg);
  const KillingForm kf = killing_form(alg, cfg.rank);
  const AdInvariance ad = check_ad_invariance(alg, cfg.structure_tol);

  Json consts = Json::array();
  for (int i = 0; i < alg.dim; ++i)
    for (int j = i + 1; j < alg.dim; ++j)
      for (int k = 0; k < alg.dim; ++k)
        if (alg.c(i, j, k) != 0.0) consts.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"value", alg.c(i, j, k)}});
  Json metric = Json::array(), killing = Json::array();
  for (int i = 0; i < alg.dim; ++i) {
    Json mr = Json::array(), kr = Json::array();
    for (int j = 0; j < alg.dim; ++j) {
      mr.push_back(alg.metric(i, j));
      kr.push_back(kf.matrix(i, j));
    }
    metric.push_back(mr);
    killing.push_back(kr);
  }

  const ComplexLieAlgebra g = complexify(alg);
  const WhiteheadReport sub = whitehead_report(g, f.l_basis, trivial_module(g.dim), cfg.rank);
  Json lb = Json::array(), mb = Json::array();
  for (const auto& l : f.l_basis) lb.push_back(cvec(l));
  for (const auto& m : f.m_basis) mb.push_back(cvec(m));

  Json forms = Json::array();
  for (int p = 0; p <= f.m; ++p)
    for (int q = 0; q <= f.n; ++q)
      forms.push_back(Json{{"p", p}, {"q", q}, {"arity", binomial(f.m, p) * binomial(f.n, q)}});

  Outcome o;
  o.result = Json{
      {"algebra",
       Json{{"name", alg.name},
            {"dim", alg.dim},
            {"labels", alg.labels},
            {"structure_constants", consts},
            {"metric", metric},
            {"killing_form", killing},
            {"killing_determinant", kf.determinant},
            {"semisimple", kf.semisimple},
            {"metric_ad_invariant", ad.invariant},
            {"ad_invariance_residual", ad.worst_residual}}},
      {"frame", Json{{"n", f.n}, {"m", f.m}, {"l_basis", lb}, {"m_basis", mb}}},
      {"elliptic", check_ellipticity(f, cfg.rank)},
      {"subalgebra", Json{{"dim", f.n}, {"semisimple", sub.semisimple}}},
      {"bidegrees", forms},
  };
  return o;
}

Outcome spectrum(const RunConfig& cfg) {
  const Structure s = config_structure(cfg);
  const auto backend = structure_backend(s);
  Outcome o;
  Json ladder = Json::array();
  std::shared_ptr<const SpectrumTruncation> last;
  for (double c : cfg.cutoffs) {
    last = std::make_shared<const SpectrumTruncation>(enumerate_levels(*backend, c));
    ladder.push_back(Json{{"cutoff", c},
                          {"levels", last->size()},
                          {"total_dimension", last->total_dimension()},
                          {"weyl_partial_sum", last->weyl_partial_sum}});
  }
  Json levels = Json::array();
  std::string csv = "lambda,value,dim\n";
  for (const auto& l : last->levels) {
    levels.push_back(Json{{"lambda", rat(l.lambda)}, {"value", l.value}, {"dim", l.dim}});
    csv += fmt::format("{},{},{}\n", rational_string(l.lambda), fnum(l.value), l.dim);
  }
  o.result = Json{{"backend", backend->id()}, {"cutoffs", ladder}, {"levels", levels}};
  o.csv.push_back({"spectrum.csv", csv});
  return o;
}

Outcome cohomology(const RunConfig& cfg) {
  const Structure s = config_structure(cfg);
  const InvolutiveFrame f = config_frame(cfg);
  const TruncationPtr t = truncation_for(cfg, s);
  const CohomologyPolicy policy = cohomology_policy(cfg);

  Outcome o;
  Json tables = Json::array();
  std::string csv = "p,q,lambda,dim,kernel,rank_in,rank_out,h,tolerance_sensitive\n";
  bool sensitive = false;
  for (const auto& [p, q] : bidegrees(cfg, f)) {
    const CohomologyTable table = dprime_cohomology(f, t, p, q, policy);
    const LeftInvarianceVerdict li = left_invariance_check(table);
    Json levels = Json::array();
    for (const auto& l : table.levels) {
      Json row{{"lambda", rat(l.lambda)}, {"dim", l.dim},        {"kernel", l.kernel_dim}, {"rank_in", l.rank_q},
               {"rank_out", l.rank_p},    {"h", l.h}, {"tolerance_sensitive", l.tolerance_sensitive}};
      if (cfg.emit_representatives && l.h > 0) {
        Json reps = Json::array();
        for (Eigen::Index c = 0; c < l.representatives.cols(); ++c) reps.push_back(cvec(l.representatives.col(c)));
        row["representatives"] = reps;
      }
      levels.push_back(row);
      csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", p, q, rational_string(l.lambda), l.dim, l.kernel_dim, l.rank_q,
                         l.rank_p, l.h, l.tolerance_sensitive ? 1 : 0);
    }
    csv += fmt::format("{},{},total,,,,,{},{}\n", p, q, table.total, table.tolerance_sensitive ? 1 : 0);
    Json violating = Json::array();
    for (const auto& r : li.violating_levels) violating.push_back(rat(r));
    Json residual = nullptr;
    if (q < f.n && q > 0)
      residual = check_complex(assemble_dprime(f, t, p, q), assemble_dprime(f, t, p, q - 1));
    sensitive = sensitive || table.tolerance_sensitive;
    tables.push_back(Json{
        {"p", p},
        {"q", q},
        {"total", table.total},
        {"nonvanishing_levels", table.nonvanishing_levels},
        {"largest_nonvanishing", table.largest_nonvanishing ? rat(*table.largest_nonvanishing) : Json(nullptr)},
        {"tolerance_sensitive", table.tolerance_sensitive},
        {"complex_residual", residual},
        {"left_invariance", Json{{"left_invariant", li.left_invariant}, {"violating_levels", violating}, {"statement", li.statement}}},
        {"levels", levels},
    });
  }
  o.result = Json{{"cutoff", t->cutoff}, {"tables", tables}};
  o.csv.push_back({"cohomology.csv", csv});
  if (sensitive) o.exit_code = kExitToleranceSensitive;
  return o;
}

Json envelope_json(const std::optional<EnvelopeReport>& e) {
  if (!e) return nullptr;
  return Json{{"slope", e->slope}, {"intercept", e->intercept}, {"points", e->points}, {"hint", e->hint}, {"caveat", e->caveat}};
}

Outcome diagnose(const RunConfig& cfg) {
  const Structure s = config_structure(cfg);
  const InvolutiveFrame f = config_frame(cfg);
  const WeightFunction w = parse_weight(cfg.weight, cfg.flavor);
  const std::pair<int, int> pq = cfg.bidegrees.empty() ? std::pair{0, 0} : cfg.bidegrees.front();
  if (pq.first > f.m || pq.second >= f.n)
    throw Error(ErrorCode::BidegreeOutOfRange,
                fmt::format("bidegree ({},{}) has no outgoing differential", pq.first, pq.second));

  const bool fast = s.group == "torus" && s.field && !cfg.algebra && pq == std::pair{0, 0};
  std::optional<SymbolFamily> family;
  auto dense = [&]() -> const SymbolFamily& {
    if (!family) family = assemble_dprime(f, truncation_for(cfg, s), pq.first, pq.second);
    return *family;
  };
  const SigmaSequence sigma =
      fast ? torus_field_sigma_sequence(s.dims, *s.field, static_cast<std::int64_t>(std::floor(max_cutoff(cfg))), cfg.rank)
           : sigma_sequence(dense(), cfg.rank);

  Outcome o;
  std::string csv = "lambda,value,sigma_min,sigma_max\n";
  Json table = Json::array(), lows = Json::array();
  double low = kSigmaSentinel;
  for (int i = 0; i < sigma.size(); ++i) {
    csv += fmt::format("{},{},{},{}\n", rational_string(sigma.lambdas[i]), fnum(sigma.values[i]), fnum(sigma.sigma_min[i]),
                       fnum(sigma.sigma_max[i]));
    Json row{{"lambda", rat(sigma.lambdas[i])},
             {"value", sigma.values[i]},
             {"sigma_min", num(sigma.sigma_min[i])},
             {"sigma_max", num(sigma.sigma_max[i])}};
    if (sigma.size() <= kJsonSigmaRows) table.push_back(row);
    if (sigma.sigma_min[i] < low) {
      low = sigma.sigma_min[i];
      lows.push_back(row);
    }
  }
  o.csv.push_back({"sigma.csv", csv});

  Json closed;
  if (cfg.cutoffs.size() < 2) {
    closed = Json{{"skipped", "needs at least two cutoffs"}};
  } else {
    try {
      const ClosedRangeReport r = l2_closed_range_report(sigma, cfg.cutoffs);
      closed = Json{{"cutoffs", doubles(r.cutoffs)}, {"infs", doubles(r.infs)}, {"verdict", r.verdict},
                    {"constant", opt_num(r.constant)}, {"note", r.note}};
    } catch (const Error& e) {
      closed = error_record(e);
    }
  }

  Json fit;
  try {
    const EstimateFit ef = aghe_fit(sigma, w, cfg.cutoffs, cfg.s_ladder);
    Json rows = Json::array();
    std::string fcsv = "s,cutoff,inf\n";
    for (const auto& r : ef.table) {
      rows.push_back(Json{{"s", r.s}, {"infs", doubles(r.infs)}, {"stable", r.stable}, {"decaying", r.decaying}});
      for (size_t c = 0; c < r.infs.size(); ++c) fcsv += fmt::format("{},{},{}\n", fnum(r.s), fnum(ef.cutoffs[c]), fnum(r.infs[c]));
    }
    o.csv.push_back({"fit.csv", fcsv});
    fit = Json{{"exponent", num(ef.exponent)},
               {"log_constant", num(ef.log_constant)},
               {"exponent_source", ef.exponent_source},
               {"cutoffs", doubles(ef.cutoffs)},
               {"table", rows},
               {"verdict", ef.verdict},
               {"interpretation", ef.interpretation}};
  } catch (const Error& e) {
    fit = error_record(e);
  }

  Json certificate = nullptr;
  const auto cert = harvest_certificate(sigma, w, cfg.witness_s);
  if (cert) {
    certificate = Json{{"s", cert->s}, {"constant", num(cert->constant)}};
    if (!fast && cert->constant > 0.0) {
      // Spot check of the weighted estimate on seeded random data.
      std::mt19937_64 rng(cfg.seed);
      std::normal_distribution<double> gauss;
      double worst = 0.0;
      bool holds = true;
      for (int trial = 0; trial < 8; ++trial) {
        TruncatedSequence u = zero_sequence(dense().truncation, dense().source_arity);
        for (auto& v : u.levels)
          for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
        const EstimateCheck chk = check_estimate(dense(), *cert, w, u, 0.0, cfg.rank);
        worst = std::max(worst, chk.measured_constant);
        holds = holds && chk.lhs <= chk.rhs * (1.0 + 1e-9);
      }
      certificate["spot_check"] = Json{{"trials", 8}, {"seed", cfg.seed}, {"max_measured_constant", worst}, {"holds", holds}};
    }
  }

  Json witness = nullptr;
  if (!cfg.witness.empty()) {
    try {
      const Witness wt = construct_witness(dense(), parse_witness_kind(cfg.witness), WitnessParams{w, cfg.witness_s}, cfg.rank);
      const WitnessRecord& r = wt.record;
      Json support = Json::array();
      for (const auto& l : r.support) support.push_back(rat(l));
      witness = Json{{"kind", to_string(r.kind)},
                     {"support", support},
                     {"symbol_norms", doubles(r.symbol_norms)},
                     {"bounds", doubles(r.bounds)},
                     {"bounds_hold", r.bounds_hold},
                     {"max_kernel_component", r.max_kernel_component},
                     {"kernel_orthogonal", r.kernel_orthogonal},
                     {"image_envelope", envelope_json(r.image_envelope)},
                     {"witness_envelope", envelope_json(r.witness_envelope)},
                     {"passed", r.passed},
                     {"claim", r.claim}};
    } catch (const Error& e) {
      witness = error_record(e);
    }
  }

  o.result = Json{{"bidegree", Json::array({pq.first, pq.second})},
                  {"weight", w.name()},
                  {"flavor", to_string(cfg.flavor)},
                  {"sigma_path", fast ? "diagonal" : "dense-svd"},
                  {"levels", sigma.size()},
                  {"finite_levels", sigma.finite_count()},
                  {"sigma_record_lows", lows},
                  {"sigma_table", sigma.size() <= kJsonSigmaRows ? table : Json("see sigma.csv")},
                  {"closed_range", closed},
                  {"fit", fit},
                  {"certificate", certificate},
                  {"witness", witness}};
  return o;
}

Outcome lie_cohomology(const RunConfig& cfg) {
  const Structure s = config_structure(cfg);
  const InvolutiveFrame f = config_frame(cfg);
  const ComplexLieAlgebra g = complexify(f.algebra);
  const TruncationPtr t = truncation_for(cfg, s);
  const CohomologyPolicy policy = cohomology_policy(cfg);

  Outcome o;
  const WhiteheadReport trivial = whitehead_report(g, f.l_basis, trivial_module(g.dim), cfg.rank);
  Json levels = Json::array();
  for (const auto& level : t->levels) {
    const WhiteheadReport wr = whitehead_report(g, f.l_basis, level_module(level), cfg.rank);
    levels.push_back(Json{{"lambda", rat(level.lambda)},
                          {"dim", level.dim},
                          {"invariants_dim", wr.invariants_dim},
                          {"subalgebra_dims", ints(wr.dims)},
                          {"whitehead_applies", wr.theorem_applies},
                          {"vanishing", wr.vanishing}});
  }

  Json checks = Json::array();
  std::string csv = "p,q,lambda,spectral_h,relative_h,delta\n";
  int mismatches = 0, phi_mismatches = 0;
  for (const auto& [p, q] : bidegrees(cfg, f)) {
    const CrossPipelineResult r = cross_pipeline_check(f, t, p, q, policy);
    Json rows = Json::array();
    for (const auto& row : r.rows) {
      rows.push_back(Json{{"lambda", rat(row.lambda)},
                          {"spectral_h", row.spectral_h},
                          {"relative_h", row.relative_h},
                          {"delta", row.relative_h - row.spectral_h}});
      csv += fmt::format("{},{},{},{},{},{}\n", p, q, rational_string(row.lambda), row.spectral_h, row.relative_h,
                         row.relative_h - row.spectral_h);
    }
    int phi_bad = 0;
    for (const auto& level : t->levels)
      if (!phi_dimension_check(g, f.l_basis, level_module(level), p, q, cfg.rank).equal) ++phi_bad;
    mismatches += r.mismatches;
    phi_mismatches += phi_bad;
    checks.push_back(Json{{"p", p}, {"q", q}, {"mismatches", r.mismatches}, {"phi_mismatches", phi_bad}, {"rows", rows}});
  }

  o.result = Json{
      {"algebra", f.algebra.name},
      {"subalgebra", Json{{"dim", f.n}, {"semisimple", trivial.semisimple}}},
      {"module", "E_lambda"},
      {"ce_trivial_dims", ints(ce_cohomology(g, trivial_module(g.dim), cfg.rank))},
      {"subalgebra_trivial_dims", ints(trivial.dims)},
      {"cutoff", t->cutoff},
      {"levels", levels},
      {"checks", checks},
      {"mismatches", mismatches},
      {"phi_mismatches", phi_mismatches},
  };
  o.csv.push_back({"lie_cohomology.csv", csv});
  if (mismatches > 0 || phi_mismatches > 0) o.exit_code = kExitCrossPipelineMismatch;
  return o;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"describe", "spectrum", "cohomology", "diagnose", "lie-cohomology"};
  return names;
}

std::string error_json(ErrorCode code, const std::string& message) {
  return render(Json{{"error", to_string(code)}, {"message", message}, {"exit_code", static_cast<int>(kExitValidation)}});
}

RunResult run(const std::string& command, const RunConfig& cfg) {
  RunResult out;
  try {
    check_config(cfg);
    Outcome o;
    if (command == "describe") o = describe(cfg);
    else if (command == "spectrum") o = spectrum(cfg);
    else if (command == "cohomology") o = cohomology(cfg);
    else if (command == "diagnose") o = diagnose(cfg);
    else if (command == "lie-cohomology") o = lie_cohomology(cfg);
    else throw Error(ErrorCode::ConfigError, fmt::format("unknown command '{}'", command));

    const Structure s = config_structure(cfg);
    Json report{{"tool", "invcx"},
                {"version", kToolVersion},
                {"command", command},
                {"config_digest", config_digest(cfg)},
                {"tolerances",
                 Json{{"rank_relative", cfg.rank.relative},
                      {"rank_absolute", cfg.rank.absolute},
                      {"structure", cfg.structure_tol},
                      {"complex", cfg.complex_tol},
                      {"representative", cfg.representative_cutoff}}},
                {"structure", Json{{"id", s.id}, {"group", s.group}, {"dims", s.dims}}},
                {"exit_code", o.exit_code},
                {"result", std::move(o.result)}};
    out.report = render(report);
    out.csv = std::move(o.csv);
    out.exit_code = o.exit_code;
  } catch (const Error& e) {
    out.exit_code = kExitValidation;
    out.error = error_json(e.code(), e.what());
  }
  return out;
}

void write_artifacts(const RunResult& result, const std::string& command, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, fmt::format("cannot write '{}'", (fs::path(dir) / name).string()));
    f << content;
  };
  put(command + ".json", result.report);
  for (const auto& a : result.csv) put(a.name, a.content);
}

}  // namespace invcx
