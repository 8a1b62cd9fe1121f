#include "rpart/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rpart/errors.hpp"
#include "rpart/explicit_construction.hpp"
#include "rpart/janson_analysis.hpp"
#include "rpart/partition_core.hpp"
#include "rpart/random_multiplicities.hpp"
#include "rpart/serialization.hpp"

#ifndef RPART_VERSION
#define RPART_VERSION "unknown"
#endif

namespace rpart::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kJansonSlack = 1e-12;
constexpr double kClaimRelTol = 1e-9;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw input_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw input_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw input_error("cannot create directory '" + dir + "': " + ec.message());
  return p;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& args, const Json& config) {
  Json m;
  m["command"] = command;
  m["argv"] = args;
  m["config"] = config;
  m["version"] = RPART_VERSION;
  m["timestamp"] = utc_timestamp();
  write_json(dir / "run.json", m);
}

// "@path" reads the file; the rest is taken literally.
std::string resolve_inline(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return read_file(arg.substr(1));
  return arg;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// A JSON array, or naturals separated by commas and/or whitespace.
std::vector<Natural> parse_set_text(const std::string& raw) {
  const std::string text = trim(raw);
  if (!text.empty() && text.front() == '[') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw input_error(std::string("malformed set: ") + e.what());
    }
    return PartSequence::from_json(j).list;
  }
  std::vector<Natural> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_natural(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',') {
      if (token.empty()) throw input_error("malformed set: empty entry in '" + text + "'");
      flush();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

PartSequence parse_sequence_arg(const std::string& arg) {
  const std::string text = trim(resolve_inline(arg));
  if (text == "factorials" || text == "powers_kk" || text == "kk") return PartSequence::parse(text);
  PartSequence seq;
  seq.kind = PartSequence::Kind::list;
  seq.list = parse_set_text(text);
  return seq;
}

Json natural_array(const std::vector<Natural>& xs) {
  Json arr = Json::array();
  for (const auto& x : xs) arr.push_back(to_string(x));
  return arr;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string fnv1a_hex(const std::vector<std::uint64_t>& xs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t x : xs) {
    for (int k = 0; k < 8; ++k) {
      h ^= (x >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

Json block_summary(const MultiplicityFamily& family) {
  Json arr = Json::array();
  for (const auto& [key, block] : family.blocks()) {
    Json b;
    b["a"] = std::to_string(key.first);
    b["i"] = key.second;
    b["full"] = block.is_full();
    b["size"] = block.size();
    b["checksum"] = block.is_full() ? std::string("full") : fnv1a_hex(block.elements());
    arr.push_back(b);
  }
  return arr;
}

bool within_rel(double lhs, double rhs, double rel) {
  return lhs <= rhs + rel * std::abs(rhs);
}

// ---------------------------------------------------------------- count

struct CountOptions {
  std::string n;
  std::string parts;
  std::string mults;
  std::string oracle = "both";
  std::size_t witnesses = 0;
  std::string out;
};

int cmd_count(const CountOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  const Natural n = parse_natural(o.n);
  const PartSequence seq = parse_sequence_arg(o.parts);
  const PartSet parts = seq.kind == PartSequence::Kind::list ? PartSet::custom(seq.list)
                                                             : seq.materialize(n);
  const MultSet mults(parse_set_text(resolve_inline(o.mults)));

  std::optional<Natural> by_search;
  std::optional<Natural> by_series;
  if (o.oracle == "search" || o.oracle == "both") by_search = count_partitions(n, parts, mults);
  if (o.oracle == "series" || o.oracle == "both") by_series = count_via_series(n, parts, mults);
  if (by_search && by_series && *by_search != *by_series) {
    throw invariant_violation("oracles disagree at n=" + to_string(n) + ": search " +
                              to_string(*by_search) + ", series " + to_string(*by_series));
  }
  const Natural count = by_search ? *by_search : *by_series;

  Json result;
  result["n"] = to_string(n);
  result["count"] = to_string(count);
  if (o.witnesses > 0) {
    Json ws = Json::array();
    for (const auto& rep : enumerate_partitions(n, parts, mults, o.witnesses)) {
      if (!validate_representation(rep, n, parts, mults)) {
        throw invariant_violation("enumerated witness fails validation");
      }
      ws.push_back(to_json(rep));
    }
    result["witnesses"] = ws;
  }
  out << result.dump() << "\n";

  if (!o.out.empty()) {
    const fs::path dir = prepare_dir(o.out);
    write_json(dir / "count.json", result);
    Json cfg;
    cfg["n"] = to_string(n);
    cfg["parts"] = natural_array(parts.elements());
    cfg["mults"] = natural_array(mults.elements());
    cfg["oracle"] = o.oracle;
    cfg["witnesses"] = o.witnesses;
    write_manifest(dir, "count", args, cfg);
  }
  return kExitOk;
}

// ------------------------------------------------------------ construct

struct ConstructOptions {
  std::string b_rule = "evens";
  std::optional<std::string> bound;
  std::uint64_t verify_upto = 0;
  std::optional<std::string> decode_n;
  std::string out = ".";
};

ExponentSet parse_b_rule(const std::string& rule) {
  const auto colon = rule.find(':');
  const std::string head = rule.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : rule.substr(colon + 1);
  if (head == "evens" && arg.empty()) return ExponentSet::evens();
  if (head == "odds" && arg.empty()) return ExponentSet::odds();
  if (head == "blocks") {
    return ExponentSet::blocks(arg.empty() ? 2 : to_u64(parse_natural(arg), "block width"));
  }
  if (head == "from_g" && !arg.empty()) {
    const Json j = read_json_file(arg);
    GTable g;
    try {
      g.values = (j.is_object() ? j.at("g") : j).get<std::vector<Exponent>>();
    } catch (const nlohmann::json::exception& e) {
      throw input_error(std::string("malformed g-table: ") + e.what());
    }
    if (g.values.empty()) throw input_error("g-table is empty");
    return build_B_from_g(g, g.values.size() - 1);
  }
  if (head == "explicit" && !arg.empty()) {
    const Json j = read_json_file(arg);
    if (j.is_array()) {
      return ExponentSet::explicit_list(j.get<std::vector<Exponent>>());
    }
    Json rule = j;
    rule["rule"] = "explicit";
    return exponent_set_from_json(rule);
  }
  if (head == "json" && !arg.empty()) return exponent_set_from_json(read_json_file(arg));
  throw input_error("unknown --b-rule '" + rule + "'");
}

int cmd_construct(const ConstructOptions& o, const std::vector<std::string>& args,
                  std::ostream& out) {
  const ExponentSet B = parse_b_rule(o.b_rule);
  require_construction_input(B);
  const ExponentSet C = B.complement();
  const Natural bound = o.bound ? parse_natural(*o.bound)
                                : Natural(std::max<std::uint64_t>(o.verify_upto, 64));
  if (bound < 1) throw input_error("--bound must be >= 1");

  const Exponent d_bound = bit_length(bound) - 1;
  const std::vector<Exponent> a_exp = build_A_exponents(B, d_bound);
  const PartSet parts_for_bound = construction_parts(B, bound);
  const MultSet m_prefix = build_M_prefix(C, bound);

  const fs::path dir = prepare_dir(o.out);
  Json aj;
  aj["b"] = to_json(B);
  aj["bound"] = to_string(bound);
  aj["exponents"] = a_exp;
  aj["parts"] = natural_array(parts_for_bound.elements());
  write_json(dir / "a_exponents.json", aj);
  Json mj;
  mj["bound"] = to_string(bound);
  mj["elements"] = natural_array(m_prefix.elements());
  write_json(dir / "m_prefix.json", mj);

  std::string csv = "n,count,decode_match\n";
  std::uint64_t bad = 0;
  if (o.verify_upto > 0) {
    const Natural v(o.verify_upto);
    const PartSet parts = construction_parts(B, v);
    const MultSet mults = build_M_prefix(C, v);
    for (std::uint64_t k = 1; k <= o.verify_upto; ++k) {
      const Natural n(k);
      const Natural count = count_partitions(n, parts, mults);
      bool match = false;
      if (count >= 1) {
        const auto reps = enumerate_partitions(n, parts, mults, 1);
        match = !reps.empty() && reps.front() == decode(n, B).to_representation();
      }
      if (count != 1 || !match) ++bad;
      csv += std::to_string(k) + "," + to_string(count) + "," + bool_text(match) + "\n";
    }
  }
  write_file(dir / "verify.csv", csv);

  if (o.decode_n) {
    const Natural n = parse_natural(*o.decode_n);
    if (n < 1) throw input_error("--decode needs n >= 1");
    out << decode_to_json(n, decode(n, B)).dump() << "\n";
  }

  Json cfg;
  cfg["b"] = to_json(B);
  cfg["bound"] = to_string(bound);
  cfg["verify_upto"] = o.verify_upto;
  if (o.decode_n) cfg["decode"] = *o.decode_n;
  write_manifest(dir, "construct", args, cfg);

  if (bad > 0) {
    throw invariant_violation(std::to_string(bad) + " of " + std::to_string(o.verify_upto) +
                              " rows failed uniqueness or decode agreement");
  }
  return kExitOk;
}

// --------------------------------------------------------------- sample

struct SampleOptions {
  unsigned beta = 6;
  std::string seed = "0";
  Exponent i_max = 20;
  Exponent tail_slack = 8;
  std::string a_seq = "factorials";
  std::string checkpoints;
  std::string out = ".";
};

int cmd_sample(const SampleOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  FamilyDescriptor desc;
  desc.config.beta = o.beta;
  desc.config.seed = to_u64(parse_natural(o.seed), "seed");
  desc.config.i_max = o.i_max;
  desc.config.tail_slack = o.tail_slack;
  desc.config.validate();
  desc.a_seq = parse_sequence_arg(o.a_seq);
  const MultiplicityFamily family = desc.sample();

  std::vector<std::uint64_t> checkpoints;
  if (o.checkpoints.empty()) {
    for (Exponent k = 1; k <= o.i_max; ++k) checkpoints.push_back(std::uint64_t{1} << k);
  } else {
    for (const Natural& c : parse_set_text(o.checkpoints)) {
      checkpoints.push_back(to_u64(c, "checkpoint"));
    }
  }
  const auto rows = density_report(family, checkpoints);

  const fs::path dir = prepare_dir(o.out);
  Json fj = desc.to_json();
  fj["parts"] = natural_array(family.parts().elements());
  fj["blocks"] = block_summary(family);
  write_json(dir / "family.json", fj);

  std::string csv = "n,m_density,bound,ratio\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.n) + "," + std::to_string(r.count) + "," + format_double(r.log_bound) +
           "," + format_double(r.ratio) + "\n";
  }
  write_file(dir / "density.csv", csv);
  write_manifest(dir, "sample", args, desc.to_json());

  out << "sampled " << family.blocks().size() << " blocks over " << family.parts().size()
      << " parts into " << dir.string() << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- verify

struct VerifyOptions {
  std::string family;
  std::uint64_t n_lo = 0;
  std::uint64_t n_hi = 0;
  std::string out = ".";
};

int cmd_verify(const VerifyOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  const Json fj = read_json_file(o.family);
  const FamilyDescriptor desc = FamilyDescriptor::from_json(fj);
  const MultiplicityFamily family = desc.sample();
  if (fj.contains("blocks") && fj.at("blocks") != block_summary(family)) {
    throw invariant_violation("resampled family does not match the block summary in " + o.family);
  }
  if (o.n_lo < 1) throw input_error("--n-lo must be >= 1");
  const CoverageReport report = coverage_scan(o.n_lo, o.n_hi, family.parts(), family);

  const fs::path dir = prepare_dir(o.out);
  std::string csv = "n,found,witness,nodes_expanded,error\n";
  std::uint64_t errors = 0;
  for (const auto& row : report.rows) {
    if (!row.error.empty()) ++errors;
    csv += std::to_string(row.n) + "," + bool_text(row.found) + "," +
           csv_field(row.witness ? to_json(*row.witness).dump() : "") + "," +
           std::to_string(row.nodes_expanded) + "," + csv_field(row.error) + "\n";
  }
  write_file(dir / "coverage.csv", csv);

  const std::uint64_t total = report.rows.size();
  const std::uint64_t found = total - report.failures.size();
  Json summary;
  summary["n_lo"] = o.n_lo;
  summary["n_hi"] = o.n_hi;
  summary["rows"] = total;
  summary["found"] = found;
  summary["error_rows"] = errors;
  summary["fraction"] = report.fraction;
  summary["failures"] = report.failures;
  summary["family"] = desc.to_json();
  write_json(dir / "summary.json", summary);

  Json cfg;
  cfg["family"] = desc.to_json();
  cfg["n_lo"] = o.n_lo;
  cfg["n_hi"] = o.n_hi;
  write_manifest(dir, "verify", args, cfg);

  out << "coverage " << found << "/" << total << " fraction=" << format_double(report.fraction)
      << " error_rows=" << errors << " wall_s=" << report.wall_time.count()
      << " slowest_row_s=" << report.slowest_row.count() << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- janson

struct JansonOptions {
  std::optional<std::string> n;
  std::string a_seq = "factorials";
  unsigned beta = 6;
  std::optional<std::string> micro;
  std::string out;
};

Json analysis_json(const Natural& n, const PartSequence& seq, unsigned beta) {
  const PartSet A = seq.kind == PartSequence::Kind::list ? PartSet::custom(seq.list)
                                                         : seq.materialize(n);
  const SpecialIndexSet idx = special_indices(n, A);
  const AnalysisInstance inst = AnalysisInstance::from_indices(idx, beta);
  const double mu = compute_mu(inst);
  const double expected = expected_events(inst);
  const Claim1 c1 = claim1_bound(inst);
  const double delta = delta_total_bound(inst);

  Json j;
  j["n"] = to_string(n);
  j["beta"] = beta;
  j["a_list"] = idx.a_list;
  j["i_list"] = idx.i_list;
  j["mu"] = mu;
  j["log_mu"] = log_mu(inst);
  j["expected_events"] = expected;
  j["claim1"] = c1.bound;
  if (c1.crude) j["claim1_crude"] = *c1.crude;
  Json c2 = Json::array();
  for (std::size_t ell = 2; ell <= inst.q(); ++ell) {
    c2.push_back(Json{{"ell", ell}, {"bound", claim2_bound(inst, ell)}});
  }
  j["claim2"] = c2;
  j["delta_bound"] = delta;
  const double D = std::max(expected, delta);
  j["janson_bound"] = expected > 0 ? janson_failure_bound(expected, D) : 1.0;
  const double e2 = expected * expected;
  j["ratios"] = Json{{"claim1_over_mu_squared", c1.bound / e2},
                     {"delta_over_mu_squared", delta / e2},
                     {"mu_squared_over_2D", e2 / (2 * D)}};
  return j;
}

struct Check {
  std::string name;
  double lhs;
  double rhs;
  bool pass;
};

Json micro_json(const Json& input, bool& all_pass) {
  std::vector<Check> checks;
  Json j;
  MicroInstance mi;
  std::optional<StructuredMicro> sm;
  if (input.contains("structured")) {
    const Json& s = input.at("structured");
    try {
      sm = build_structured_micro(s.at("i_list").get<std::vector<Exponent>>(),
                                  s.at("a_list").get<std::vector<std::uint64_t>>(),
                                  s.at("n").get<std::uint64_t>(),
                                  s.at("p_values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw input_error(std::string("malformed structured instance: ") + e.what());
    }
    mi = sm->instance;
    j["kind"] = "structured";
  } else {
    mi = micro_from_json(input);
    j["kind"] = "micro";
  }

  const double exact = exact_no_event_probability(mi);
  const ExactDelta ed = exact_delta(mi);
  const double D = std::max(ed.mu, ed.delta);
  const double bound = ed.mu > 0 ? janson_failure_bound(ed.mu, D) : 1.0;
  j["ground_set"] = mi.probabilities.size();
  j["events"] = mi.events.size();
  j["mu"] = ed.mu;
  j["delta"] = ed.delta;
  j["D"] = D;
  j["exact_no_event"] = exact;
  j["janson_bound"] = bound;
  checks.push_back({"janson", exact, bound + kJansonSlack, exact <= bound + kJansonSlack});

  if (sm) {
    const auto levels = exact_delta_by_level(*sm);
    const BlockModel model = sm->block_model();
    double level_sum = 0;
    for (double x : levels) level_sum += x;
    checks.push_back({"level_sum", level_sum, ed.delta,
                      std::abs(level_sum - ed.delta) <= kClaimRelTol * std::max(1.0, ed.delta)});
    const double c1 = claim1_bound(model);
    checks.push_back({"claim1", levels[0], c1, within_rel(levels[0], c1, kClaimRelTol)});
    for (std::size_t ell = 2; ell <= model.q(); ++ell) {
      const double c2 = claim2_bound(model, ell);
      checks.push_back({"claim2_" + std::to_string(ell), levels[ell - 1], c2,
                        within_rel(levels[ell - 1], c2, kClaimRelTol)});
    }
    const std::uint64_t window = residual_window_count(sm->i_list, sm->a_list, sm->n);
    checks.push_back({"tuple_count", static_cast<double>(sm->tuples.size()),
                      static_cast<double>(window), window == sm->tuples.size()});
    j["delta_by_level"] = levels;
    j["formal_mu"] = formal_mu(model);
  }

  Json cj = Json::array();
  all_pass = true;
  for (const auto& c : checks) {
    cj.push_back(Json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
    all_pass = all_pass && c.pass;
  }
  j["checks"] = cj;
  j["pass"] = all_pass;
  return j;
}

int cmd_janson(const JansonOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.micro.has_value() == o.n.has_value()) {
    throw input_error("janson needs exactly one of --n or --micro");
  }
  Json result;
  Json cfg;
  bool all_pass = true;
  if (o.micro) {
    const Json input = read_json_file(*o.micro);
    result = micro_json(input, all_pass);
    cfg["micro"] = input;
  } else {
    const Natural n = parse_natural(*o.n);
    const PartSequence seq = parse_sequence_arg(o.a_seq);
    result = analysis_json(n, seq, o.beta);
    cfg["n"] = to_string(n);
    cfg["a_seq"] = seq.to_json();
    cfg["beta"] = o.beta;
  }
  out << result.dump(2) << "\n";
  if (!o.out.empty()) {
    const fs::path dir = prepare_dir(o.out);
    write_json(dir / "janson.json", result);
    write_manifest(dir, "janson", args, cfg);
  }
  if (!all_pass) throw invariant_violation("an inequality check failed");
  return kExitOk;
}

// --------------------------------------------------------------- replay

std::vector<std::string> retarget(const std::vector<std::string>& argv, const std::string& out) {
  std::vector<std::string> next;
  for (std::size_t k = 0; k < argv.size(); ++k) {
    if (argv[k] == "--out") {
      ++k;
      continue;
    }
    if (argv[k].rfind("--out=", 0) == 0) continue;
    next.push_back(argv[k]);
  }
  next.push_back("--out");
  next.push_back(out);
  return next;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             bool allow_replay);

int cmd_replay(const std::string& manifest, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  const Json m = read_json_file(manifest);
  std::vector<std::string> argv;
  try {
    argv = m.at("argv").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed manifest: ") + e.what());
  }
  if (argv.empty() || argv.front() != m.value("command", std::string())) {
    throw input_error("manifest argv does not start with its command");
  }
  return dispatch(retarget(argv, out_dir), out, err, false);
}

// ------------------------------------------------------------- dispatch

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             bool allow_replay) {
  CLI::App app{"Restricted partition systems: exact counting, explicit and random constructions"};
  app.name("rpart");
  app.require_subcommand(1);
  app.set_version_flag("--version", RPART_VERSION);

  CountOptions count;
  auto* c = app.add_subcommand("count", "Count representations of n");
  c->add_option("--n", count.n, "Target integer")->required();
  c->add_option("--parts", count.parts,
                "Part set: comma list, factorials, powers_kk, or @file")->required();
  c->add_option("--mults", count.mults, "Multiplicity set: comma list or @file")->required();
  c->add_option("--oracle", count.oracle, "search|series|both")
      ->check(CLI::IsMember({"search", "series", "both"}));
  c->add_option("--witnesses", count.witnesses, "Print up to k representations");
  c->add_option("--out", count.out, "Also write count.json and run.json here");

  ConstructOptions construct;
  auto* k = app.add_subcommand("construct", "Build the unique-representation system for B");
  k->add_option("--b-rule", construct.b_rule,
                "evens|odds|blocks[:W]|from_g:FILE|explicit:FILE|json:FILE");
  k->add_option("--bound", construct.bound, "Emit A and M up to this bound");
  k->add_option("--verify-upto", construct.verify_upto, "Brute-force check n = 1..V");
  k->add_option("--decode", construct.decode_n, "Print the representation of N");
  k->add_option("--out", construct.out, "Output directory");

  SampleOptions sample;
  auto* s = app.add_subcommand("sample", "Sample a random multiplicity family");
  s->add_option("--beta", sample.beta, "Exponent in i^beta / 2^i");
  s->add_option("--seed", sample.seed, "64-bit seed");
  s->add_option("--imax", sample.i_max, "Largest block index");
  s->add_option("--tail-slack", sample.tail_slack, "Extra indices beyond ceil(log2 bound)");
  s->add_option("--a-seq", sample.a_seq, "factorials, powers_kk, comma list or @file");
  s->add_option("--checkpoints", sample.checkpoints, "Density checkpoints (comma list)");
  s->add_option("--out", sample.out, "Output directory");

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Search special representations over a range");
  v->add_option("--family", verify.family, "family.json written by sample")->required();
  v->add_option("--n-lo", verify.n_lo, "First n")->required();
  v->add_option("--n-hi", verify.n_hi, "Last n")->required();
  v->add_option("--out", verify.out, "Output directory");

  JansonOptions janson;
  auto* j = app.add_subcommand("janson", "Second-moment bounds and exact micro-instance checks");
  j->add_option("--n", janson.n, "Target n for the index-set analysis");
  j->add_option("--a-seq", janson.a_seq, "factorials, powers_kk, comma list or @file");
  j->add_option("--beta", janson.beta, "Exponent in i^beta / 2^i");
  j->add_option("--micro", janson.micro, "Micro-instance JSON file");
  j->add_option("--out", janson.out, "Also write janson.json and run.json here");

  std::string manifest;
  std::string replay_out = ".";
  CLI::App* r = nullptr;
  if (allow_replay) {
    r = app.add_subcommand("replay", "Re-run a run.json manifest");
    r->add_option("--manifest", manifest, "run.json to replay")->required();
    r->add_option("--out", replay_out, "Output directory");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (c->parsed()) return cmd_count(count, args, out);
  if (k->parsed()) return cmd_construct(construct, args, out);
  if (s->parsed()) return cmd_sample(sample, args, out);
  if (v->parsed()) return cmd_verify(verify, args, out);
  if (j->parsed()) return cmd_janson(janson, args, out);
  if (r && r->parsed()) return cmd_replay(manifest, replay_out, out, err);
  return kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, true);
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const invariant_violation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace rpart::cli
