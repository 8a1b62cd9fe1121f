#pragma once

// File and wire formats. Big integers are always written as decimal strings.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rpart/explicit_construction.hpp"
#include "rpart/janson_analysis.hpp"
#include "rpart/partition_core.hpp"
#include "rpart/random_multiplicities.hpp"

namespace rpart {

using Json = nlohmann::ordered_json;

/// {"part": "mult", ...}, ascending by part.
Json to_json(const Representation& rep);
Representation representation_from_json(const Json& j);

/// {"rule": ..., "list": [...], "period": p, "width": w, "g": [...],
///  "overrides": [[idx, bool], ...], "complement": bool}
Json to_json(const ExponentSet& s);
ExponentSet exponent_set_from_json(const Json& j);

/// {"n": "...", "terms": [{"d": k, "m": "..."}, ...]}
Json decode_to_json(const Natural& n, const ExponentRepresentation& rep);

/// Named or explicit part sequence: "factorials", "powers_kk", or a list.
struct PartSequence {
  enum class Kind { factorials, powers_kk, list };
  Kind kind = Kind::factorials;
  std::vector<Natural> list;

  /// Accepts "factorials", "powers_kk" (alias "kk") or a comma-separated list.
  static PartSequence parse(std::string_view text);
  static PartSequence from_json(const Json& j);
  Json to_json() const;
  /// The sequence intersected with [bound].
  PartSet materialize(const Natural& bound) const;
};

/// Everything needed to regenerate a MultiplicityFamily bit for bit.
struct FamilyDescriptor {
  SamplerConfig config;
  PartSequence a_seq;

  Json to_json() const;
  static FamilyDescriptor from_json(const Json& j);
  PartSet parts() const;  // a_seq ∩ [2^i_max]
  MultiplicityFamily sample() const;
};

/// {"probabilities": [...], "events": [[...], ...]}
Json to_json(const MicroInstance& mi);
MicroInstance micro_from_json(const Json& j);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);
/// Shortest decimal that round-trips the double.
std::string format_double(double x);

/// Comma-separated naturals; the empty string gives an empty list.
std::vector<Natural> parse_natural_list(std::string_view text);

}  // namespace rpart
