#include "rpart/serialization.hpp"

#include <charconv>
#include <cmath>

#include "rpart/errors.hpp"

namespace rpart {

namespace {

Natural natural_from_json(const Json& j) {
  if (j.is_string()) return parse_natural(j.get<std::string>());
  if (j.is_number_unsigned()) return Natural(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Natural(j.get<std::int64_t>());
  throw input_error("expected a non-negative integer, got " + j.dump());
}

std::uint64_t u64_from_json(const Json& j, const char* what) {
  return to_u64(natural_from_json(j), what);
}

const char* rule_name(ExponentRule rule) {
  switch (rule) {
    case ExponentRule::evens:
      return "evens";
    case ExponentRule::odds:
      return "odds";
    case ExponentRule::blocks:
      return "blocks";
    case ExponentRule::all:
      return "all";
    case ExponentRule::explicit_list:
      return "explicit";
    case ExponentRule::from_g:
      return "from_g";
  }
  return "?";
}

}  // namespace

Json to_json(const Representation& rep) {
  Json j = Json::object();
  for (const auto& [part, mult] : rep.terms()) j[to_string(part)] = to_string(mult);
  return j;
}

Representation representation_from_json(const Json& j) {
  if (!j.is_object()) throw input_error("representation must be a JSON object");
  Representation rep;
  for (const auto& [key, value] : j.items()) rep.add(parse_natural(key), natural_from_json(value));
  return rep;
}

Json to_json(const ExponentSet& s) {
  Json j;
  j["rule"] = rule_name(s.rule());
  switch (s.rule()) {
    case ExponentRule::blocks:
      j["width"] = s.width();
      break;
    case ExponentRule::explicit_list:
      j["list"] = s.list();
      if (s.period()) j["period"] = *s.period();
      break;
    case ExponentRule::from_g:
      j["g"] = s.g_values();
      break;
    default:
      break;
  }
  if (!s.overrides().empty()) {
    Json ov = Json::array();
    for (const auto& [idx, member] : s.overrides()) ov.push_back(Json::array({idx, member}));
    j["overrides"] = ov;
  }
  if (s.complemented()) j["complement"] = true;
  return j;
}

ExponentSet exponent_set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rule")) throw input_error("exponent set needs a \"rule\"");
  const std::string rule = j.at("rule").get<std::string>();
  ExponentSet s = ExponentSet::evens();
  try {
    if (rule == "evens") {
      s = ExponentSet::evens();
    } else if (rule == "odds") {
      s = ExponentSet::odds();
    } else if (rule == "all") {
      s = ExponentSet::all();
    } else if (rule == "blocks") {
      s = ExponentSet::blocks(j.value("width", Exponent{2}));
    } else if (rule == "explicit") {
      std::optional<Exponent> period;
      if (j.contains("period")) period = j.at("period").get<Exponent>();
      s = ExponentSet::explicit_list(j.value("list", std::vector<Exponent>{}), period);
    } else if (rule == "from_g") {
      GTable g{j.at("g").get<std::vector<Exponent>>()};
      if (g.values.empty()) throw input_error("from_g needs a non-empty \"g\" table");
      s = build_B_from_g(g, g.values.size() - 1);
    } else {
      throw input_error("unknown exponent-set rule '" + rule + "'");
    }
    // Overrides are written against the base rule, so apply them before complementing.
    if (j.contains("overrides")) {
      for (const auto& ov : j.at("overrides")) {
        if (!ov.is_array() || ov.size() != 2) throw input_error("override must be [index, bool]");
        s = s.with_override(ov[0].get<Exponent>(), ov[1].get<bool>());
      }
    }
    if (j.value("complement", false)) s = s.complement();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed exponent set: ") + e.what());
  }
  return s;
}

Json decode_to_json(const Natural& n, const ExponentRepresentation& rep) {
  Json j;
  j["n"] = to_string(n);
  Json terms = Json::array();
  for (const auto& [d, m] : rep.terms) terms.push_back(Json{{"d", d}, {"m", to_string(m)}});
  j["terms"] = terms;
  return j;
}

PartSequence PartSequence::parse(std::string_view text) {
  PartSequence seq;
  if (text == "factorials") {
    seq.kind = Kind::factorials;
  } else if (text == "powers_kk" || text == "kk") {
    seq.kind = Kind::powers_kk;
  } else {
    seq.kind = Kind::list;
    seq.list = parse_natural_list(text);
  }
  return seq;
}

PartSequence PartSequence::from_json(const Json& j) {
  if (j.is_string()) return parse(j.get<std::string>());
  if (j.is_array()) {
    PartSequence seq;
    seq.kind = Kind::list;
    for (const auto& x : j) seq.list.push_back(natural_from_json(x));
    return seq;
  }
  throw input_error("a_seq must be \"factorials\", \"powers_kk\" or a list");
}

Json PartSequence::to_json() const {
  switch (kind) {
    case Kind::factorials:
      return "factorials";
    case Kind::powers_kk:
      return "powers_kk";
    case Kind::list: {
      Json arr = Json::array();
      for (const auto& x : list) arr.push_back(to_string(x));
      return arr;
    }
  }
  return nullptr;
}

PartSet PartSequence::materialize(const Natural& bound) const {
  switch (kind) {
    case Kind::factorials:
      return PartSet::factorials(bound);
    case Kind::powers_kk:
      return PartSet::powers_kk(bound);
    case Kind::list: {
      std::vector<Natural> kept;
      for (const auto& x : list) {
        if (x <= bound) kept.push_back(x);
      }
      return PartSet::custom(std::move(kept));
    }
  }
  throw input_error("bad part sequence");
}

Json FamilyDescriptor::to_json() const {
  Json j;
  j["beta"] = config.beta;
  j["seed"] = config.seed;
  j["i_max"] = config.i_max;
  j["tail_slack"] = config.tail_slack;
  j["a_seq"] = a_seq.to_json();
  return j;
}

FamilyDescriptor FamilyDescriptor::from_json(const Json& j) {
  FamilyDescriptor d;
  try {
    d.config.beta = j.at("beta").get<unsigned>();
    d.config.seed = u64_from_json(j.at("seed"), "seed");
    d.config.i_max = j.at("i_max").get<Exponent>();
    d.config.tail_slack = j.value("tail_slack", Exponent{8});
    d.a_seq = PartSequence::from_json(j.at("a_seq"));
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed family descriptor: ") + e.what());
  }
  d.config.validate();
  return d;
}

PartSet FamilyDescriptor::parts() const { return a_seq.materialize(pow2(config.i_max)); }

MultiplicityFamily FamilyDescriptor::sample() const { return sample_family(parts(), config); }

Json to_json(const MicroInstance& mi) {
  Json j;
  j["probabilities"] = mi.probabilities;
  j["events"] = mi.events;
  return j;
}

MicroInstance micro_from_json(const Json& j) {
  MicroInstance mi;
  try {
    mi.probabilities = j.at("probabilities").get<std::vector<double>>();
    mi.events = j.at("events").get<std::vector<std::vector<std::uint32_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed micro-instance: ") + e.what());
  }
  mi.validate();
  return mi;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == std::floor(x) && std::abs(x) < 1e15) return std::to_string(static_cast<long long>(x));
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<Natural> parse_natural_list(std::string_view text) {
  std::vector<Natural> out;
  std::size_t start = 0;
  bool any = false;
  for (char c : text) any = any || !std::isspace(static_cast<unsigned char>(c));
  if (!any) return out;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_natural(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace rpart
