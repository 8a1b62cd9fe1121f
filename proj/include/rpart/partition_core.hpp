#pragma once

// Exact evaluation of the restricted partition function p(n, A, M): the number
// of ways to write n = sum_a m_a * a with a in A and every m_a in M u {0}.
//
// A and M are infinite in general; here they are handled as finite prefixes
// carrying the bound up to which the prefix is complete. Queries that a prefix
// cannot answer exactly are refused with bound_error.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "rpart/natural.hpp"

namespace rpart {

enum class PartOrigin { factorials, powers_kk, explicit_exponents, custom_list };

/// Strictly increasing prefix of a set of positive integers, complete up to
/// `bound`. A missing bound means the element list is the whole set.
class SortedPrefix {
 public:
  const std::vector<Natural>& elements() const { return elements_; }
  const std::optional<Natural>& bound() const { return bound_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  /// True when membership of every integer <= n is known.
  bool covers(const Natural& n) const { return !bound_ || *bound_ >= n; }
  bool contains(const Natural& x) const;
  /// |S ∩ [m]|.
  std::size_t count_up_to(const Natural& m) const;

 protected:
  SortedPrefix(std::vector<Natural> elements, std::optional<Natural> bound);

  std::vector<Natural> elements_;
  std::optional<Natural> bound_;
};

/// A prefix of the part set A.
class PartSet : public SortedPrefix {
 public:
  /// {k!} ∩ [bound].
  static PartSet factorials(const Natural& bound);
  /// {k^k} ∩ [bound].
  static PartSet powers_kk(const Natural& bound);
  /// {2^d : d in exponents} ∩ [bound].
  static PartSet from_exponents(const std::vector<Exponent>& exponents, const Natural& bound);
  static PartSet custom(std::vector<Natural> elements, std::optional<Natural> bound = std::nullopt);

  PartOrigin origin() const { return origin_; }

 private:
  PartSet(std::vector<Natural> elements, std::optional<Natural> bound, PartOrigin origin)
      : SortedPrefix(std::move(elements), std::move(bound)), origin_(origin) {}

  PartOrigin origin_;
};

/// A prefix of the multiplicity set M. Zero is never stored; it is always an
/// admissible multiplicity.
class MultSet : public SortedPrefix {
 public:
  explicit MultSet(std::vector<Natural> elements, std::optional<Natural> bound = std::nullopt)
      : SortedPrefix(std::move(elements), std::move(bound)) {}
};

/// One solution of n = sum m_a * a: a sparse map part -> multiplicity, both >= 1,
/// ordered ascending by part.
class Representation {
 public:
  using Terms = std::map<Natural, Natural>;

  Representation() = default;
  explicit Representation(Terms terms);

  /// Adds the term mult * part. Throws input_error on a zero entry or a repeated part.
  void add(const Natural& part, const Natural& mult);

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Natural value() const;

  /// Lexicographic on the ascending (part, mult) sequence; this is the
  /// canonical order used by enumerate_partitions.
  friend auto operator<=>(const Representation&, const Representation&) = default;
  friend bool operator==(const Representation&, const Representation&) = default;

 private:
  Terms terms_;
};

/// p(n, A, M) by depth-first search over parts in decreasing order, memoized on
/// (part index, remainder). Returns 1 for n = 0 (the empty sum).
Natural count_partitions(const Natural& n, const PartSet& parts, const MultSet& mults);

/// Coefficient of x^n in prod_a (1 + sum_{m in M, m*a <= n} x^{m*a}). An
/// independent route to p(n, A, M).
Natural count_via_series(const Natural& n, const PartSet& parts, const MultSet& mults);

/// Up to `limit` representations of n, in canonical order.
std::vector<Representation> enumerate_partitions(const Natural& n, const PartSet& parts,
                                                 const MultSet& mults, std::size_t limit);

bool validate_representation(const Representation& rep, const Natural& n, const PartSet& parts,
                             const MultSet& mults);

struct CumulativeBound {
  Natural sum;    // sum_{1 <= n <= m} p(n, A, M)
  Natural bound;  // (|M ∩ [m]| + 1)^{|A ∩ [m]|}
  bool holds;
};

/// Checks the deterministic counting bound on the number of representations of
/// all integers up to m.
CumulativeBound cumulative_count_bound(const Natural& m, const PartSet& parts, const MultSet& mults);

}  // namespace rpart
