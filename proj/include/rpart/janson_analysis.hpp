#pragma once

// Computable forms of the second-moment estimates behind the special
// representation argument.
//
// Ground set: a disjoint union of blocks X_j = [N_j] (N_j = 2^{i_j}), each
// element of block j kept with probability p_j. Events are the tuples
// (m_1..m_q), m_j in X_j, with sum_j m_j a_j = n. Writing
//     mu_f = p_1 * prod_{j>=2} N_j p_j
// (the expected number of events when every choice of m_2..m_q admits an m_1),
// the ordered-pair correlation sum splits by the first coordinate l at which
// the two tuples differ, and
//     Delta_1 <= mu_f^2 * (prod_{j>=2} (1 + 1/(N_j p_j)) - 1)
//     Delta_l <= mu_f^2 * prod_{r>l} (1 + 1/(N_r p_r)) / (p_1 N_l prod_{2<=j<l} N_j p_j)
// With p_j = i_j^beta / 2^{i_j} these become the index-set bounds exposed
// through AnalysisInstance. Everything is evaluated in log space.
//
// MicroInstance and the exact_* functions are brute-force oracles used to
// check these bounds and the Janson inequality itself on small instances.

#include <cstdint>
#include <optional>
#include <vector>

#include "rpart/natural.hpp"

namespace rpart {

struct SpecialIndexSet;

/// Per-block sizes N_j and inclusion probabilities p_j.
struct BlockModel {
  std::vector<double> sizes;
  std::vector<double> probs;

  std::size_t q() const { return sizes.size(); }
  void validate() const;
};

double formal_mu(const BlockModel& model);
double claim1_bound(const BlockModel& model);
double claim2_bound(const BlockModel& model, std::size_t ell);
double delta_total_bound(const BlockModel& model);

struct AnalysisInstance {
  std::vector<Exponent> i_list;
  std::vector<std::uint64_t> a_list;
  unsigned beta = 6;
  std::optional<Natural> n;

  std::size_t q() const { return i_list.size(); }
  /// Throws precondition_error unless q >= 2, sizes agree, a_1 = 1, a ascending, i_j >= 1.
  void validate() const;
  /// N_j = 2^{i_j}, p_j = i_j^beta / 2^{i_j} (not capped at 1).
  BlockModel block_model() const;

  static AnalysisInstance from_indices(const SpecialIndexSet& idx, unsigned beta);
};

/// (prod_{j>=2} i_j^beta) / 2^{i_1}. This is the expected event count without
/// the p_1 numerator i_1^beta; expected_events gives the full count.
double compute_mu(const AnalysisInstance& inst);
/// Natural log of compute_mu, finite even when mu itself over- or underflows.
double log_mu(const AnalysisInstance& inst);
/// formal_mu of the block model: i_1^beta * compute_mu.
double expected_events(const AnalysisInstance& inst);

struct Claim1 {
  double bound;                 // mu^2 (prod_{j>=2}(1 + i_j^-beta) - 1)
  std::optional<double> crude;  // expected_events^2 / (log2 n)^{beta-1}, when n is known
};

Claim1 claim1_bound(const AnalysisInstance& inst);
/// 2 <= ell <= q (1-based, as in Delta_ell).
double claim2_bound(const AnalysisInstance& inst, std::size_t ell);
/// claim1 + sum_{ell=2}^q claim2.
double delta_total_bound(const AnalysisInstance& inst);

/// exp(-mu^2 / (2 D)); requires D >= mu > 0.
double janson_failure_bound(double mu, double D);

/// A small abstract instance: independent element probabilities and a list of
/// events, each the set of element indices that must all be present.
struct MicroInstance {
  std::vector<double> probabilities;
  std::vector<std::vector<std::uint32_t>> events;

  void validate() const;
};

inline constexpr std::size_t kMaxExactGroundSet = 24;
inline constexpr std::size_t kMaxExactEvents = 20000;

/// Pr[no event occurs], summed over all 2^|X| outcomes.
double exact_no_event_probability(const MicroInstance& mi);

struct ExactDelta {
  double mu;     // sum_i Pr[B_i]
  double delta;  // sum over ordered pairs i != j with C_i ∩ C_j != {} of Pr[B_i ∩ B_j]
};

ExactDelta exact_delta(const MicroInstance& mi);

/// A micro-instance whose events are the solution tuples of sum m_j a_j = n.
struct StructuredMicro {
  std::vector<Exponent> i_list;
  std::vector<std::uint64_t> a_list;
  std::uint64_t n = 0;
  std::vector<double> p_values;
  MicroInstance instance;
  std::vector<std::vector<std::uint64_t>> tuples;  // tuples[k] generates instance.events[k]

  BlockModel block_model() const;
};

inline constexpr std::uint64_t kMaxStructuredTuples = std::uint64_t{1} << 16;

StructuredMicro build_structured_micro(const std::vector<Exponent>& i_list,
                                       const std::vector<std::uint64_t>& a_list, std::uint64_t n,
                                       const std::vector<double>& p_values);

/// Exact Delta_1..Delta_q (index 0 holds Delta_1): ordered pairs of
/// intersecting tuples grouped by the first coordinate where they differ.
std::vector<double> exact_delta_by_level(const StructuredMicro& sm);

/// Number of (m_2..m_q) in prod_{j>=2} [2^{i_j}] whose residual
/// n - sum_{j>=2} m_j a_j lies in [1, 2^{i_1}] (requires a_1 = 1).
std::uint64_t residual_window_count(const std::vector<Exponent>& i_list,
                                    const std::vector<std::uint64_t>& a_list, std::uint64_t n);

}  // namespace rpart
