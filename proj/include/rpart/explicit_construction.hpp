#pragma once

// Unique-representation system built from a split of the non-negative integers
// into B and its complement C:
//   D = numbers whose binary support lies in B,   E = same for C,
//   A = {2^d : d in D},                           M = numbers whose support lies in E.
// Every n >= 1 then has exactly one representation n = sum m_a * a, obtained by
// splitting each exponent of n's binary expansion as t = d + e.
//
// A is doubly exponential, so it is handled in exponent space (d, not 2^d)
// until a concrete Representation is materialized.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpart/natural.hpp"
#include "rpart/partition_core.hpp"

namespace rpart {

/// Tabulated g(r) for r = 0..size-1.
struct GTable {
  std::vector<Exponent> values;

  /// Throws infeasible_error unless 0 <= g(r) <= r and both g(r) and r - g(r)
  /// are non-decreasing on the stored range.
  void validate() const;
};

enum class ExponentRule { evens, odds, blocks, all, explicit_list, from_g };

/// A set of non-negative integers described by a rule plus finitely many
/// overrides. Membership is total; complement() flips it.
class ExponentSet {
 public:
  static ExponentSet evens();
  static ExponentSet odds();
  static ExponentSet all();
  /// t is a member iff floor(t / width) is even.
  static ExponentSet blocks(Exponent width);
  /// Without a period the set is exactly `list`; with a period p, t is a member
  /// iff (t mod p) is in `list`.
  static ExponentSet explicit_list(std::vector<Exponent> list,
                                   std::optional<Exponent> period = std::nullopt);

  ExponentSet complement() const;
  ExponentSet with_override(Exponent index, bool member) const;

  bool contains(Exponent t) const;
  /// Members t < limit, ascending.
  std::vector<Exponent> members_below(Exponent limit) const;

  bool is_infinite() const;
  bool complement_is_infinite() const;

  ExponentRule rule() const { return rule_; }
  bool complemented() const { return complemented_; }
  const std::vector<Exponent>& list() const { return list_; }
  const std::optional<Exponent>& period() const { return period_; }
  Exponent width() const { return width_; }
  const std::vector<Exponent>& g_values() const { return g_.values; }
  /// Overrides of the base rule, applied before complementation.
  const std::map<Exponent, bool>& overrides() const { return overrides_; }

  friend bool operator==(const ExponentSet& x, const ExponentSet& y);

 private:
  friend ExponentSet build_B_from_g(const GTable& g, Exponent r_max);

  explicit ExponentSet(ExponentRule rule) : rule_(rule) {}
  bool base_contains(Exponent t) const;

  ExponentRule rule_;
  bool complemented_ = false;
  std::vector<Exponent> list_;  // sorted, unique
  std::optional<Exponent> period_;
  Exponent width_ = 0;
  GTable g_;
  std::vector<bool> g_members_;  // greedy membership on [0, g_.values.size())
  std::map<Exponent, bool> overrides_;
};

/// Throws config_error unless both B and its complement are infinite.
void require_construction_input(const ExponentSet& B);

struct SplitExponent {
  Exponent d;  // bits of t lying in B
  Exponent e;  // bits of t lying outside B
  friend bool operator==(const SplitExponent&, const SplitExponent&) = default;
};

/// The unique t = d + e with d in D and e in E.
SplitExponent split_exponent(Exponent t, const ExponentSet& B);

/// All v in [1, bound] whose binary support lies in S, ascending.
std::vector<Natural> enumerate_support_numbers(const ExponentSet& S, const Natural& bound);

/// D ∩ {0, ..., d_bound} (0 included: 2^0 = 1 is always a part).
std::vector<Exponent> build_A_exponents(const ExponentSet& B, Exponent d_bound);

/// M ∩ [bound], where M is built from C (the complement of B).
MultSet build_M_prefix(const ExponentSet& C, const Natural& bound);

/// The parts of A up to `bound` as a PartSet (2^d materialized).
PartSet construction_parts(const ExponentSet& B, const Natural& bound);

/// A representation whose parts are given by their exponents d.
struct ExponentRepresentation {
  std::map<Exponent, Natural> terms;  // d -> m_{2^d}

  Representation to_representation() const;
  friend bool operator==(const ExponentRepresentation&, const ExponentRepresentation&) = default;
};

/// The representation of n >= 1 in the construction defined by B.
ExponentRepresentation decode(const Natural& n, const ExponentSet& B);

struct DensityCheck {
  Natural exact;    // |D ∩ [2^r]|
  Natural formula;  // |B ∩ {r}| + 2^{|B ∩ {0..r-1}|}
};

DensityCheck density_A(const ExponentSet& B, Exponent r);

/// Greedy B with |B ∩ {0..r}| = r - g(r) for r <= r_max.
ExponentSet build_B_from_g(const GTable& g, Exponent r_max);

/// Named standard splits used as test fixtures.
std::vector<std::pair<std::string, ExponentSet>> standard_catalog();

}  // namespace rpart
