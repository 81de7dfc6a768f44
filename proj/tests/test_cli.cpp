#include "doctest.h"

#include "invcx/config.hpp"
#include "invcx/diagnostics.hpp"
#include "invcx/report.hpp"

#include "json.hpp"

using namespace invcx;
using Json = nlohmann::json;

namespace {

RunConfig suite_config(const std::string& id, std::vector<double> cutoffs) {
  RunConfig cfg;
  apply_structure(cfg, id);
  cfg.cutoffs = std::move(cutoffs);
  return cfg;
}

std::string csv_of(const RunResult& r, const std::string& name) {
  for (const auto& a : r.csv)
    if (a.name == name) return a.content;
  FAIL("missing artifact " << name);
  return "";
}

}  // namespace

TEST_CASE("complex literals") {
  CHECK(parse_complex("1") == LongComplex(1.0L, 0.0L));
  CHECK(parse_complex("1j") == LongComplex(0.0L, 1.0L));
  CHECK(parse_complex("-j") == LongComplex(0.0L, -1.0L));
  CHECK(parse_complex("0.5-2j") == LongComplex(0.5L, -2.0L));
  CHECK(parse_complex("1e-3+1e2j") == LongComplex(1e-3L, 1e2L));
  CHECK(parse_complex("sqrt2") == LongComplex(std::sqrt(2.0L), 0.0L));
  CHECK(parse_complex("2*sqrt2j") == LongComplex(0.0L, 2.0L * std::sqrt(2.0L)));
  CHECK(parse_complex("-liouville") == LongComplex(-liouville_alpha(), 0.0L));
  CHECK_THROWS_AS(parse_complex("1+x"), Error);
  CHECK_THROWS_AS(parse_complex(""), Error);
}

TEST_CASE("configuration parsing") {
  const RunConfig cfg = parse_config(R"(
[run]
group = su2
cutoffs = 2, 6
bidegrees = 0,0; 0,1
weight = gevrey:2
flavor = roumieu
seed = 11

[tolerance]
rank_relative = 1e-8

[algebra]
dim = 3
c(1,2,3) = 1
c(2,3,1) = 1
c(3,1,2) = 1

[structure]
L1 = 0, 1, 1j
)");
  CHECK(cfg.group == "su2");
  CHECK(cfg.dims == 3);
  CHECK(cfg.cutoffs == std::vector<double>{2.0, 6.0});
  CHECK(cfg.bidegrees == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}});
  CHECK(cfg.flavor == Flavor::Roumieu);
  CHECK(cfg.rank.relative == 1e-8);
  CHECK(cfg.seed == 11);
  REQUIRE(cfg.algebra);
  CHECK(cfg.algebra->c(1, 0, 2) == -1.0);
  REQUIRE(cfg.generators.size() == 1);
  CHECK(cfg.generators[0](2) == cplx(0.0, 1.0));
  CHECK_NOTHROW(check_config(cfg));

  const RunConfig suite = parse_config("[structure]\nid = t2-liouville\n");
  CHECK(suite.group == "torus");
  REQUIRE(suite.field);
  CHECK((*suite.field)[1] == LongComplex(liouville_alpha(), 0.0L));

  for (const char* bad : {"[run]\ncolour = red\n", "[nowhere]\nx = 1\n", "[run]\ndims = two\n",
                          "[structure]\nid = t2-sqrt2\nL1 = 1, 0\n", "[structure]\nL2 = 1, 0\n"}) {
    CHECK_THROWS_AS(parse_config(bad), Error);
  }
  RunConfig decreasing;
  decreasing.cutoffs = {10.0, 5.0};
  CHECK_THROWS_AS(check_config(decreasing), Error);
}

TEST_CASE("malformed structure constants name the violated triple") {
  RunConfig cfg;
  try {
    cfg = parse_config("[algebra]\ndim = 3\nc(1,2,3) = 1\nc(2,1,3) = 1\n");
    FAIL("expected an antisymmetry violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AntisymmetryViolation);
    CHECK(std::string(e.what()).find("(1,2,3)") != std::string::npos);
  }
  try {
    parse_config("[algebra]\ndim = 3\nc(1,2,3) = 1\nc(2,3,1) = 2\nc(3,1,2) = 1\nc(1,3,1) = 1\n");
    FAIL("expected a Jacobi violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::JacobiViolation);
    CHECK(std::string(e.what()).find("(i,j,k)=") != std::string::npos);
  }
}

TEST_CASE("config digest tracks every field") {
  const RunConfig a = suite_config("t2-sqrt2", {25.0});
  RunConfig b = a;
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a).size() == 64);
  b.seed = 1;
  CHECK(config_digest(a) != config_digest(b));
  b = a;
  b.rank.relative = 2e-9;
  CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("cohomology command reproduces the torus Betti numbers") {
  const RunResult r = run("cohomology", suite_config("t2-derham", {25.0}));
  REQUIRE(r.exit_code == kExitOk);
  const std::string csv = csv_of(r, "cohomology.csv");
  CHECK(csv.find("0,0,total,,,,,1,0") != std::string::npos);
  CHECK(csv.find("0,1,total,,,,,2,0") != std::string::npos);
  CHECK(csv.find("0,2,total,,,,,1,0") != std::string::npos);
  const Json j = Json::parse(r.report);
  CHECK(j["version"] == kToolVersion);
  CHECK(j["config_digest"] == config_digest(suite_config("t2-derham", {25.0})));
  CHECK(j["tolerances"]["rank_relative"] == 1e-9);
  for (const auto& t : j["result"]["tables"]) CHECK(t["left_invariance"]["left_invariant"] == true);
}

TEST_CASE("describe reports ellipticity and semisimplicity") {
  const Json cr = Json::parse(run("describe", suite_config("su2-cr", {6.0})).report)["result"];
  CHECK(cr["subalgebra"]["semisimple"] == false);
  // span{e2 + i e3} and its conjugate only reach span{e2, e3}.
  CHECK(cr["elliptic"] == false);
  CHECK(cr["algebra"]["semisimple"] == true);
  const Json dr = Json::parse(run("describe", suite_config("su2-derham", {6.0})).report)["result"];
  CHECK(dr["elliptic"] == true);
  CHECK(dr["subalgebra"]["semisimple"] == true);
  const Json t2 = Json::parse(run("describe", suite_config("t2-d1-i-d2", {6.0})).report)["result"];
  CHECK(t2["elliptic"] == true);
}

TEST_CASE("reports are byte-stable") {
  RunConfig cfg = suite_config("t2-sqrt2", {100.0, 400.0});
  cfg.witness = "2b";
  for (const auto& cmd : command_names()) {
    const RunResult a = run(cmd, cfg), b = run(cmd, cfg);
    CHECK(a.report == b.report);
    REQUIRE(a.csv.size() == b.csv.size());
    for (size_t i = 0; i < a.csv.size(); ++i) CHECK(a.csv[i].content == b.csv[i].content);
  }
}

TEST_CASE("exit codes") {
  CHECK(run("lie-cohomology", suite_config("su2-cr", {6.0})).exit_code == kExitOk);
  const RunResult unknown = run("plot", suite_config("t1-d", {4.0}));
  CHECK(unknown.exit_code == kExitValidation);
  CHECK(Json::parse(unknown.error)["error"] == "ConfigError");

  RunConfig neg = suite_config("t1-d", {-1.0});
  const RunResult r = run("spectrum", neg);
  CHECK(r.exit_code == kExitValidation);
  CHECK(Json::parse(r.error)["error"] == "NegativeCutoff");

  RunConfig bid = suite_config("t2-d1", {4.0});
  bid.bidegrees = {{3, 0}};
  CHECK(Json::parse(run("cohomology", bid).error)["error"] == "BidegreeOutOfRange");
}

TEST_CASE("diagnose report contents") {
  RunConfig cfg = suite_config("t1-d", {100.0, 1000.0, 10000.0});
  const Json j = Json::parse(run("diagnose", cfg).report)["result"];
  CHECK(j["closed_range"]["verdict"] == "uniform-bound-evidence");
  CHECK(j["fit"]["verdict"] == "consistent-at-cutoff");
  CHECK(std::abs(j["fit"]["exponent"].get<double>() - 0.5) < 0.01);
  CHECK(j["sigma_path"] == "diagonal");

  cfg.witness = "2a";
  const Json w = Json::parse(run("diagnose", cfg).report)["result"]["witness"];
  CHECK(w["error"] == "NoFailureCertificate");
}
