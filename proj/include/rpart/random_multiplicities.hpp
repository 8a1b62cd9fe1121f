#pragma once

// Random multiplicity sets M = ∪_a ∪_{i : 2^i >= a} M_{a,i}, where M_{a,i} keeps
// each element of [2^i] independently with probability min(1, i^beta / 2^i),
// together with the "special representation" search that uses one block per
// small part, and density / coverage reports over a sampled family.
//
// Every block is drawn from its own stream derived from (seed, a, i), so the
// family is identical no matter in which order (or on which thread) blocks are
// generated.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpart/natural.hpp"
#include "rpart/partition_core.hpp"

namespace rpart {

/// Largest block index supported; universes [2^i] must fit in 64 bits.
inline constexpr Exponent kMaxBlockIndex = 62;

struct SamplerConfig {
  unsigned beta = 6;
  std::uint64_t seed = 0;
  Exponent i_max = 20;
  Exponent tail_slack = 8;

  /// Throws config_error on beta == 0 or i_max outside [1, kMaxBlockIndex].
  void validate() const;
  /// Smallest i_max that covers `bound`: ceil(log2 bound) + tail_slack.
  Exponent i_max_for(const Natural& bound) const;

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

/// i^beta >= 2^i, decided in exact integer arithmetic.
bool block_is_full(Exponent i, unsigned beta);
/// min(1, i^beta / 2^i).
double inclusion_probability(Exponent i, unsigned beta);
/// Seed of the private stream for block (a, i).
std::uint64_t block_stream_seed(std::uint64_t seed, std::uint64_t a, Exponent i);

/// One block M_{a,i} ⊆ [1, 2^i]. Full blocks are stored implicitly.
class MultBlock {
 public:
  static MultBlock full(Exponent i);
  static MultBlock sparse(Exponent i, std::vector<std::uint64_t> elements);

  Exponent index() const { return index_; }
  std::uint64_t universe() const { return std::uint64_t{1} << index_; }
  bool is_full() const { return full_; }
  std::uint64_t size() const { return full_ ? universe() : elements_.size(); }
  bool empty() const { return size() == 0; }
  bool contains(std::uint64_t x) const;
  /// Smallest / largest element; the block must be non-empty.
  std::uint64_t min() const;
  std::uint64_t max() const;
  /// Sparse elements, ascending. Empty for full blocks.
  const std::vector<std::uint64_t>& elements() const { return elements_; }

  /// Calls fn(x) for members x in [lo, hi] ascending until fn returns false.
  /// Returns false iff fn stopped the walk.
  template <class Fn>
  bool for_each_in(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const;

  friend bool operator==(const MultBlock&, const MultBlock&) = default;

 private:
  MultBlock(Exponent i, bool full, std::vector<std::uint64_t> elements)
      : index_(i), full_(full), elements_(std::move(elements)) {}

  Exponent index_;
  bool full_;
  std::vector<std::uint64_t> elements_;
};

/// Draws M_{a,i} from the stream for (seed, a, i) by geometric gap skipping,
/// so a sparse block costs O(i^beta) expected work rather than O(2^i).
MultBlock sample_block(std::uint64_t seed, std::uint64_t a, Exponent i, unsigned beta);

class MultiplicityFamily {
 public:
  using Key = std::pair<std::uint64_t, Exponent>;  // (a, i)

  MultiplicityFamily(SamplerConfig config, PartSet parts, std::map<Key, MultBlock> blocks);

  const SamplerConfig& config() const { return config_; }
  /// The parts a <= 2^{i_max} that own blocks.
  const PartSet& parts() const { return parts_; }
  const std::map<Key, MultBlock>& blocks() const { return blocks_; }

  /// Throws coverage_error if the family holds no block (a, i).
  const MultBlock& block(std::uint64_t a, Exponent i) const;

 private:
  SamplerConfig config_;
  PartSet parts_;
  std::map<Key, MultBlock> blocks_;
};

/// Samples every block (a, i) with a in A, a <= 2^i, i <= i_max.
MultiplicityFamily sample_family(const PartSet& A, const SamplerConfig& config);

/// M ∩ [bound] for a family, kept compact: the longest run [1, full_prefix]
/// covered by full blocks plus the remaining sparse elements above it.
class MergedView {
 public:
  MergedView(const MultiplicityFamily& family, std::uint64_t bound);

  std::uint64_t bound() const { return bound_; }
  /// |M ∩ [n]| for n <= bound.
  std::uint64_t count_up_to(std::uint64_t n) const;
  std::vector<std::uint64_t> materialize() const;

 private:
  std::uint64_t bound_;
  std::uint64_t full_prefix_;
  std::vector<std::uint64_t> extra_;  // sorted, unique, all in (full_prefix_, bound_]
};

/// M ∩ [bound] as a MultSet. Contributions of blocks with i > i_max are not
/// included; membership_probability reports the size of that tail.
MultSet merged_M(const MultiplicityFamily& family, const Natural& bound);

struct MembershipProbability {
  double probability;    // Pr[m in M] over the truncated family
  double tail_per_part;  // sum_{i > i_max} min(1, i^beta / 2^i), the omitted mass per part
};

MembershipProbability membership_probability(const Natural& m, const PartSet& A,
                                             const SamplerConfig& config);

/// The parts a_1 < ... < a_q of A not exceeding n^{1/3}, and the block index
/// chosen for each: i_1 = min{t : 2^t >= n}, i_j = min{t : 2^t >= n / (a_j log2 n)}.
struct SpecialIndexSet {
  Natural n;
  std::vector<std::uint64_t> a_list;
  std::vector<Exponent> i_list;

  std::size_t q() const { return a_list.size(); }
};

SpecialIndexSet special_indices(const Natural& n, const PartSet& A);

struct IndexInvariants {
  bool first_part_is_one = false;   // a_1 = 1
  bool parts_below_cube_root = false;  // a_j^3 <= n
  bool first_sandwich = false;      // n <= 2^{i_1} < 2n
  bool later_sandwiches = false;    // n/(a_j log n) <= 2^{i_j} < 2n/(a_j log n), j >= 2
  bool above_half_log = false;      // i_j > (1/2) log2 n for every j

  bool all() const {
    return first_part_is_one && parts_below_cube_root && first_sandwich && later_sandwiches &&
           above_half_log;
  }
};

IndexInvariants check_index_invariants(const SpecialIndexSet& idx);

struct SpecialSearch {
  SpecialIndexSet indices;
  std::optional<Representation> witness;
  std::vector<std::uint64_t> multiplicities;  // m_1..m_q when found
  std::uint64_t nodes_expanded = 0;
};

/// Looks for n = sum_j m_j a_j with every m_j in M_{a_j, i_j}. Branches over
/// j = q down to 2 with ascending m_j and checks the residual against
/// M_{a_1, i_1}; the first hit in that order is returned.
SpecialSearch find_special_representation(const Natural& n, const PartSet& A,
                                          const MultiplicityFamily& family);

struct CoverageRow {
  std::uint64_t n;
  bool found = false;
  std::optional<Representation> witness;
  std::uint64_t nodes_expanded = 0;
  std::string error;  // non-empty when n was outside the search's preconditions
};

struct CoverageReport {
  std::vector<CoverageRow> rows;  // ascending n
  std::vector<std::uint64_t> failures;
  double fraction = 0.0;
  std::chrono::duration<double> wall_time{};
  std::chrono::duration<double> slowest_row{};
};

/// Runs find_special_representation for every n in [n_lo, n_hi]. Rows whose n
/// violates a precondition (q < 2) carry an error and count as failures;
/// a family coverage gap is thrown.
CoverageReport coverage_scan(std::uint64_t n_lo, std::uint64_t n_hi, const PartSet& A,
                             const MultiplicityFamily& family);

struct DensityRow {
  std::uint64_t n;
  std::uint64_t count;  // |M ∩ [n]|
  double log_bound;     // (log2 n)^{beta + 2}
  double ratio;         // count / log_bound
};

std::vector<DensityRow> density_report(const MultiplicityFamily& family,
                                       const std::vector<std::uint64_t>& checkpoints);

// ---------------------------------------------------------------------------

template <class Fn>
bool MultBlock::for_each_in(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
  if (lo < 1) lo = 1;
  if (full_) {
    if (hi > universe()) hi = universe();
    for (std::uint64_t x = lo; x <= hi && x >= lo; ++x) {
      if (!fn(x)) return false;
    }
    return true;
  }
  auto it = std::lower_bound(elements_.begin(), elements_.end(), lo);
  for (; it != elements_.end() && *it <= hi; ++it) {
    if (!fn(*it)) return false;
  }
  return true;
}

}  // namespace rpart
