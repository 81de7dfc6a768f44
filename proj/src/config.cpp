#include "invcx/config.hpp"
#include "invcx/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace invcx {

namespace {

using boost::property_tree::ptree;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Splits on any character in seps, dropping empty pieces.
std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

long double parse_real_factor(const std::string& f, const std::string& context) {
  if (f == "sqrt2") return std::sqrt(2.0L);
  if (f == "liouville") return liouville_alpha();
  if (f.empty()) config_error(fmt::format("empty factor in '{}'", context));
  char* end = nullptr;
  const long double v = std::strtold(f.c_str(), &end);
  if (end != f.c_str() + f.size() || !std::isfinite(v)) config_error(fmt::format("cannot parse number '{}' in '{}'", f, context));
  return v;
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) config_error(fmt::format("{}: cannot parse number '{}'", key, text));
  return v;
}

long long parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) config_error(fmt::format("{}: cannot parse integer '{}'", key, text));
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  config_error(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& t : split(text, ", \t")) out.push_back(parse_double(t, key));
  return out;
}

std::vector<std::pair<int, int>> parse_bidegrees(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  for (const auto& tok : split(text, "; \t")) {
    const auto pq = split(tok, ",");
    if (pq.size() != 2) config_error(fmt::format("bidegree '{}' is not of the form p,q", tok));
    out.emplace_back(static_cast<int>(parse_int(pq[0], "bidegree")), static_cast<int>(parse_int(pq[1], "bidegree")));
  }
  return out;
}

std::vector<LongComplex> parse_complex_list(const std::string& text) {
  std::vector<LongComplex> out;
  for (const auto& t : split(text, ", \t")) out.push_back(parse_complex(t));
  return out;
}

// Matches keys of the form c(i,j,k) with 1-based indices.
bool parse_triple_key(const std::string& key, int& i, int& j, int& k) {
  const std::string t = lower(trim(key));
  if (t.size() < 3 || t[0] != 'c' || t[1] != '(' || t.back() != ')') return false;
  const auto parts = split(t.substr(2, t.size() - 3), ",");
  if (parts.size() != 3) return false;
  i = static_cast<int>(parse_int(parts[0], key));
  j = static_cast<int>(parse_int(parts[1], key));
  k = static_cast<int>(parse_int(parts[2], key));
  return true;
}

LieAlgebraSpec parse_algebra(const ptree& alg, const ptree* metric, double tol) {
  LieAlgebraSpec spec;
  spec.dim = static_cast<int>(parse_int(alg.get<std::string>("dim", ""), "algebra.dim"));
  const int n = spec.dim;
  if (n <= 0) config_error("algebra.dim must be positive");
  spec.name = trim(alg.get<std::string>("name", "custom"));
  spec.c = BracketTable<double>(n);

  std::map<std::tuple<int, int, int>, double> given;
  for (const auto& [key, node] : alg) {
    if (key == "dim" || key == "name" || key == "labels") continue;
    int i = 0, j = 0, k = 0;
    if (!parse_triple_key(key, i, j, k)) config_error(fmt::format("algebra: unknown key '{}'", key));
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n)
      config_error(fmt::format("algebra: index out of range in '{}'", key));
    given[{i - 1, j - 1, k - 1}] = parse_double(node.data(), key);
  }
  // A constant given for one ordering only is completed antisymmetrically;
  // both orderings given are kept verbatim so validation can reject them.
  for (const auto& [ijk, v] : given) {
    const auto [i, j, k] = ijk;
    spec.c(i, j, k) = v;
    if (!given.count({j, i, k})) spec.c(j, i, k) = -v;
  }

  const auto labels = split(alg.get<std::string>("labels", ""), ", \t");
  if (labels.empty()) {
    for (int a = 0; a < n; ++a) spec.labels.push_back(fmt::format("X{}", a + 1));
  } else if (static_cast<int>(labels.size()) == n) {
    spec.labels = labels;
  } else {
    config_error(fmt::format("algebra.labels has {} entries, expected {}", labels.size(), n));
  }

  spec.metric = RMatrix::Identity(n, n);
  if (metric) {
    for (const auto& [key, node] : *metric) {
      const std::string k = lower(key);
      if (k == "diagonal") {
        const auto d = parse_double_list(node.data(), "metric.diagonal");
        if (static_cast<int>(d.size()) != n) config_error("metric.diagonal has the wrong length");
        spec.metric = RMatrix::Zero(n, n);
        for (int a = 0; a < n; ++a) spec.metric(a, a) = d[a];
      } else if (k.rfind("row", 0) == 0) {
        const long long r = parse_int(k.substr(3), key);
        if (r < 1 || r > n) config_error(fmt::format("metric: row index out of range in '{}'", key));
        const auto row = parse_double_list(node.data(), key);
        if (static_cast<int>(row.size()) != n) config_error(fmt::format("metric.{} has the wrong length", key));
        for (int b = 0; b < n; ++b) spec.metric(r - 1, b) = row[b];
      } else {
        config_error(fmt::format("metric: unknown key '{}'", key));
      }
    }
  }
  return validate_algebra(spec, tol);
}

void check_keys(const ptree& section, const std::string& name, const std::vector<std::string>& allowed) {
  for (const auto& [key, node] : section)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      config_error(fmt::format("{}: unknown key '{}'", name, key));
}

CVector to_cvector(const std::vector<LongComplex>& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (size_t a = 0; a < v.size(); ++a)
    out(static_cast<Eigen::Index>(a)) = cplx(static_cast<double>(v[a].real()), static_cast<double>(v[a].imag()));
  return out;
}

}  // namespace

Flavor parse_flavor(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "beurling") return Flavor::Beurling;
  if (t == "roumieu") return Flavor::Roumieu;
  config_error(fmt::format("unknown flavor '{}'", text));
}

LongComplex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s.empty()) config_error("empty complex literal");

  // Terms start at a sign that is not the sign of an exponent.
  std::vector<std::string> terms;
  std::string cur;
  for (size_t i = 0; i < s.size(); ++i) {
    const bool sign = s[i] == '+' || s[i] == '-';
    const bool exponent = i >= 2 && s[i - 1] == 'e' && (std::isdigit(static_cast<unsigned char>(s[i - 2])) || s[i - 2] == '.');
    if (sign && i > 0 && !exponent) {
      terms.push_back(cur);
      cur.clear();
    }
    cur += s[i];
  }
  terms.push_back(cur);

  LongComplex z(0.0L, 0.0L);
  for (std::string t : terms) {
    long double sgn = 1.0L;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
      if (t[0] == '-') sgn = -1.0L;
      t.erase(0, 1);
    }
    bool imag = false;
    if (!t.empty() && t.back() == 'j') {
      imag = true;
      t.pop_back();
      if (!t.empty() && t.back() == '*') t.pop_back();
    }
    long double v = 1.0L;
    if (!t.empty())
      for (const auto& f : split(t, "*")) v *= parse_real_factor(f, text);
    else if (!imag)
      config_error(fmt::format("cannot parse complex literal '{}'", text));
    z += imag ? LongComplex(0.0L, sgn * v) : LongComplex(sgn * v, 0.0L);
  }
  return z;
}

RunConfig parse_config(const std::string& text) {
  ptree root;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(fmt::format("malformed configuration: {}", e.message()));
  }

  RunConfig cfg;
  for (const auto& [name, section] : root) {
    if (name != "run" && name != "tolerance" && name != "algebra" && name != "metric" && name != "structure")
      config_error(fmt::format("unknown section [{}]", name));
    if (section.empty() && !section.data().empty()) config_error(fmt::format("key '{}' outside a section", name));
  }

  if (const auto run = root.get_child_optional("run")) {
    check_keys(*run, "run",
               {"group", "dims", "cutoff", "cutoffs", "bidegrees", "weight", "flavor", "s_ladder", "witness", "witness_s",
                "seed", "out", "emit_representatives"});
    for (const auto& [key, node] : *run) {
      const std::string v = trim(node.data());
      if (key == "group") cfg.group = lower(v);
      else if (key == "dims") cfg.dims = static_cast<int>(parse_int(v, "run.dims"));
      else if (key == "cutoff" || key == "cutoffs") cfg.cutoffs = parse_double_list(v, "run." + key);
      else if (key == "bidegrees") cfg.bidegrees = parse_bidegrees(v);
      else if (key == "weight") cfg.weight = lower(v);
      else if (key == "flavor") cfg.flavor = parse_flavor(v);
      else if (key == "s_ladder") cfg.s_ladder = parse_double_list(v, "run.s_ladder");
      else if (key == "witness") cfg.witness = lower(v);
      else if (key == "witness_s") cfg.witness_s = parse_double(v, "run.witness_s");
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(v, "run.seed"));
      else if (key == "out") cfg.out_dir = v;
      else if (key == "emit_representatives") cfg.emit_representatives = parse_bool(v, "run.emit_representatives");
    }
  }

  if (cfg.group == "su2" && !root.get_optional<std::string>("run.dims")) cfg.dims = 3;

  if (const auto tol = root.get_child_optional("tolerance")) {
    check_keys(*tol, "tolerance", {"rank_relative", "rank_absolute", "structure", "complex", "representative"});
    for (const auto& [key, node] : *tol) {
      const double v = parse_double(node.data(), "tolerance." + key);
      if (key == "rank_relative") cfg.rank.relative = v;
      else if (key == "rank_absolute") cfg.rank.absolute = v;
      else if (key == "structure") cfg.structure_tol = v;
      else if (key == "complex") cfg.complex_tol = v;
      else if (key == "representative") cfg.representative_cutoff = v;
    }
  }

  if (const auto alg = root.get_child_optional("algebra")) {
    const auto metric = root.get_child_optional("metric");
    cfg.algebra = parse_algebra(*alg, metric ? &*metric : nullptr, cfg.structure_tol);
  } else if (root.get_child_optional("metric")) {
    config_error("[metric] requires an [algebra] section");
  }

  if (const auto st = root.get_child_optional("structure")) {
    std::map<int, std::vector<LongComplex>> gens;
    for (const auto& [key, node] : *st) {
      if (key == "id") {
        cfg.structure = trim(node.data());
      } else if (key.size() > 1 && (key[0] == 'L' || key[0] == 'l')) {
        const long long idx = parse_int(key.substr(1), "structure." + key);
        if (idx < 1) config_error(fmt::format("structure: bad generator key '{}'", key));
        gens[static_cast<int>(idx)] = parse_complex_list(node.data());
      } else {
        config_error(fmt::format("structure: unknown key '{}'", key));
      }
    }
    if (!cfg.structure.empty() && !gens.empty()) config_error("structure: give either id or generators, not both");
    int expect = 1;
    std::vector<std::vector<LongComplex>> list;
    for (const auto& [idx, g] : gens) {
      if (idx != expect++) config_error("structure: generators must be numbered L1, L2, ... without gaps");
      list.push_back(g);
    }
    for (const auto& g : list) cfg.generators.push_back(to_cvector(g));
    if (list.size() == 1 && !cfg.algebra && cfg.group == "torus") cfg.field = list[0];
  }

  if (!cfg.structure.empty()) apply_structure(cfg, cfg.structure);
  return cfg;
}

void apply_structure(RunConfig& cfg, const std::string& id) {
  if (cfg.algebra) config_error("a suite structure id cannot be combined with an [algebra] section");
  const Structure s = find_structure(id);
  cfg.structure = s.id;
  cfg.group = s.group;
  cfg.dims = s.dims;
  cfg.generators = s.generators;
  cfg.field = s.field;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(fmt::format("cannot read configuration '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void check_config(const RunConfig& cfg) {
  if (cfg.group != "torus" && cfg.group != "su2") config_error(fmt::format("unknown group '{}'", cfg.group));
  if (cfg.group == "torus" && (cfg.dims < 1 || cfg.dims > 8)) config_error("torus dims must lie in 1..8");
  if (cfg.group == "su2" && cfg.dims != 3) config_error("su2 has dimension 3");
  if (cfg.cutoffs.empty()) config_error("at least one cutoff is required");
  for (size_t i = 0; i < cfg.cutoffs.size(); ++i) {
    if (cfg.cutoffs[i] < 0.0)
      throw Error(ErrorCode::NegativeCutoff, fmt::format("cutoff {} is negative", cfg.cutoffs[i]));
    if (i > 0 && cfg.cutoffs[i] <= cfg.cutoffs[i - 1]) config_error("cutoffs must be strictly increasing");
  }
  for (const auto& [p, q] : cfg.bidegrees)
    if (p < 0 || q < 0) throw Error(ErrorCode::BidegreeOutOfRange, fmt::format("bidegree ({},{}) is negative", p, q));
  for (double t : {cfg.rank.relative, cfg.rank.absolute, cfg.structure_tol, cfg.complex_tol, cfg.representative_cutoff})
    if (!(t > 0.0)) config_error("tolerances must be positive");
  parse_weight(cfg.weight, cfg.flavor);
  if (!cfg.witness.empty()) parse_witness_kind(cfg.witness);
  const int n = cfg.algebra ? cfg.algebra->dim : cfg.dims;
  for (const auto& g : cfg.generators)
    if (g.size() != n) config_error(fmt::format("generator has {} coordinates, algebra has dimension {}", g.size(), n));
}

std::string canonical_config(const RunConfig& cfg) {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  line("version", kToolVersion);
  line("group", cfg.group);
  line("dims", std::to_string(cfg.dims));
  line("structure", cfg.structure);
  if (cfg.algebra) {
    const auto& a = *cfg.algebra;
    line("algebra.name", a.name);
    line("algebra.dim", std::to_string(a.dim));
    line("algebra.labels", fmt::format("{}", fmt::join(a.labels, ",")));
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j)
        for (int k = 0; k < a.dim; ++k)
          if (a.c(i, j, k) != 0.0) line(fmt::format("c({},{},{})", i + 1, j + 1, k + 1), fmt::format("{:.17g}", a.c(i, j, k)));
    for (int i = 0; i < a.dim; ++i) {
      std::vector<std::string> row;
      for (int j = 0; j < a.dim; ++j) row.push_back(fmt::format("{:.17g}", a.metric(i, j)));
      line(fmt::format("metric.row{}", i + 1), fmt::format("{}", fmt::join(row, ",")));
    }
  }
  for (size_t g = 0; g < cfg.generators.size(); ++g) {
    std::vector<std::string> c;
    for (Eigen::Index a = 0; a < cfg.generators[g].size(); ++a)
      c.push_back(fmt::format("{:.17g}{:+.17g}j", cfg.generators[g](a).real(), cfg.generators[g](a).imag()));
    line(fmt::format("L{}", g + 1), fmt::format("{}", fmt::join(c, ",")));
  }
  if (cfg.field) {
    std::vector<std::string> c;
    for (const auto& z : *cfg.field) c.push_back(fmt::format("{:.21Lg}{:+.21Lg}j", z.real(), z.imag()));
    line("field", fmt::format("{}", fmt::join(c, ",")));
  }
  std::vector<std::string> cut;
  for (double c : cfg.cutoffs) cut.push_back(fmt::format("{:.17g}", c));
  line("cutoffs", fmt::format("{}", fmt::join(cut, ",")));
  std::vector<std::string> bid;
  for (const auto& [p, q] : cfg.bidegrees) bid.push_back(fmt::format("{},{}", p, q));
  line("bidegrees", fmt::format("{}", fmt::join(bid, ";")));
  line("weight", cfg.weight);
  line("flavor", to_string(cfg.flavor));
  std::vector<std::string> lad;
  for (double s : cfg.s_ladder) lad.push_back(fmt::format("{:.17g}", s));
  line("s_ladder", fmt::format("{}", fmt::join(lad, ",")));
  line("witness", cfg.witness);
  line("witness_s", fmt::format("{:.17g}", cfg.witness_s));
  line("rank_relative", fmt::format("{:.17g}", cfg.rank.relative));
  line("rank_absolute", fmt::format("{:.17g}", cfg.rank.absolute));
  line("structure_tol", fmt::format("{:.17g}", cfg.structure_tol));
  line("complex_tol", fmt::format("{:.17g}", cfg.complex_tol));
  line("representative_cutoff", fmt::format("{:.17g}", cfg.representative_cutoff));
  line("seed", std::to_string(cfg.seed));
  line("emit_representatives", cfg.emit_representatives ? "true" : "false");
  return out;
}

std::string config_digest(const RunConfig& cfg) {
  const std::string text = canonical_config(cfg);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

Structure config_structure(const RunConfig& cfg) {
  if (!cfg.structure.empty()) return find_structure(cfg.structure);
  Structure s;
  s.group = cfg.group;
  s.dims = cfg.dims;
  s.generators = cfg.generators;
  s.field = cfg.field;
  s.id = cfg.generators.empty() ? fmt::format("{}-derham", cfg.group) : "custom";
  return s;
}

LieAlgebraSpec config_algebra(const RunConfig& cfg) {
  if (cfg.algebra) return *cfg.algebra;
  return make_backend(cfg.group, cfg.dims)->algebra();
}

InvolutiveFrame config_frame(const RunConfig& cfg) {
  const LieAlgebraSpec alg = config_algebra(cfg);
  return cfg.generators.empty() ? de_rham_frame(alg) : build_frame(alg, cfg.generators, cfg.structure_tol, cfg.rank);
}

}  // namespace invcx
