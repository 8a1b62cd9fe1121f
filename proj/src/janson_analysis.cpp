#include "rpart/janson_analysis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rpart/errors.hpp"
#include "rpart/random_multiplicities.hpp"

namespace rpart {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// log(p_1) + sum_{j>=2} log(N_j p_j)
double log_formal_mu(const BlockModel& m) {
  double acc = safe_log(m.probs[0]);
  for (std::size_t j = 1; j < m.q(); ++j) acc += safe_log(m.sizes[j]) + safe_log(m.probs[j]);
  return acc;
}

}  // namespace

void BlockModel::validate() const {
  if (sizes.size() != probs.size()) throw precondition_error("block sizes and probabilities differ in length");
  if (sizes.size() < 2) throw precondition_error("need q >= 2 blocks");
  for (std::size_t j = 0; j < q(); ++j) {
    if (!(sizes[j] >= 1.0)) throw precondition_error("block sizes must be >= 1");
    if (!(probs[j] >= 0.0)) throw precondition_error("block probabilities must be >= 0");
  }
}

double formal_mu(const BlockModel& model) {
  model.validate();
  return std::exp(log_formal_mu(model));
}

double claim1_bound(const BlockModel& model) {
  model.validate();
  const double lmu = log_formal_mu(model);
  if (lmu == kNegInf) return 0.0;
  // prod_{j>=2} (1 + 1/(N_j p_j)) - 1, all N_j p_j > 0 here.
  double log_prod = 0.0;
  for (std::size_t j = 1; j < model.q(); ++j) {
    log_prod += std::log1p(1.0 / (model.sizes[j] * model.probs[j]));
  }
  return std::exp(2.0 * lmu) * std::expm1(log_prod);
}

double claim2_bound(const BlockModel& model, std::size_t ell) {
  model.validate();
  if (ell < 2 || ell > model.q()) {
    throw precondition_error("the level bound needs 2 <= ell <= q, got ell = " + std::to_string(ell));
  }
  const double lmu = log_formal_mu(model);
  if (lmu == kNegInf) return 0.0;
  const std::size_t l = ell - 1;  // 0-based block of the first difference
  double acc = 2.0 * lmu;
  for (std::size_t r = l + 1; r < model.q(); ++r) {
    acc += std::log1p(1.0 / (model.sizes[r] * model.probs[r]));
  }
  acc -= std::log(model.probs[0]) + std::log(model.sizes[l]);
  for (std::size_t j = 1; j < l; ++j) acc -= std::log(model.sizes[j]) + std::log(model.probs[j]);
  return std::exp(acc);
}

double delta_total_bound(const BlockModel& model) {
  double total = claim1_bound(model);
  for (std::size_t ell = 2; ell <= model.q(); ++ell) total += claim2_bound(model, ell);
  return total;
}

void AnalysisInstance::validate() const {
  if (q() < 2) throw precondition_error("analysis instance needs q >= 2");
  if (a_list.size() != q()) throw precondition_error("a_list and i_list differ in length");
  if (a_list.front() != 1) throw precondition_error("a_1 must be 1");
  for (std::size_t j = 0; j < q(); ++j) {
    if (i_list[j] < 1) throw precondition_error("block indices must be >= 1");
    if (j > 0 && a_list[j] <= a_list[j - 1]) throw precondition_error("a_list must be ascending");
  }
}

BlockModel AnalysisInstance::block_model() const {
  validate();
  BlockModel m;
  for (Exponent i : i_list) {
    m.sizes.push_back(std::ldexp(1.0, static_cast<int>(i)));
    m.probs.push_back(std::exp(beta * std::log(static_cast<double>(i)) -
                               static_cast<double>(i) * std::log(2.0)));
  }
  return m;
}

AnalysisInstance AnalysisInstance::from_indices(const SpecialIndexSet& idx, unsigned beta) {
  AnalysisInstance inst;
  inst.i_list = idx.i_list;
  inst.a_list = idx.a_list;
  inst.beta = beta;
  inst.n = idx.n;
  inst.validate();
  return inst;
}

double log_mu(const AnalysisInstance& inst) {
  inst.validate();
  double acc = -static_cast<double>(inst.i_list[0]) * std::log(2.0);
  for (std::size_t j = 1; j < inst.q(); ++j) {
    acc += inst.beta * std::log(static_cast<double>(inst.i_list[j]));
  }
  return acc;
}

double compute_mu(const AnalysisInstance& inst) { return std::exp(log_mu(inst)); }

double expected_events(const AnalysisInstance& inst) { return formal_mu(inst.block_model()); }

Claim1 claim1_bound(const AnalysisInstance& inst) {
  Claim1 out{claim1_bound(inst.block_model()), std::nullopt};
  if (inst.n && *inst.n >= 2) {
    const double log2n = std::log2(inst.n->convert_to<double>());
    out.crude = std::exp(2.0 * log_formal_mu(inst.block_model()) -
                         (static_cast<double>(inst.beta) - 1.0) * std::log(log2n));
  }
  return out;
}

double claim2_bound(const AnalysisInstance& inst, std::size_t ell) {
  return claim2_bound(inst.block_model(), ell);
}

double delta_total_bound(const AnalysisInstance& inst) {
  return delta_total_bound(inst.block_model());
}

double janson_failure_bound(double mu, double D) {
  if (!(mu > 0.0)) throw precondition_error("Janson bound needs mu > 0");
  if (!(D >= mu)) throw precondition_error("Janson bound needs D >= mu");
  return std::exp(-(mu * mu) / (2.0 * D));
}

void MicroInstance::validate() const {
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw input_error("element probabilities must lie in [0, 1]");
  }
  for (const auto& ev : events) {
    for (std::uint32_t x : ev) {
      if (x >= probabilities.size()) throw input_error("event refers to unknown element");
    }
  }
}

double exact_no_event_probability(const MicroInstance& mi) {
  mi.validate();
  const std::size_t size = mi.probabilities.size();
  if (size > kMaxExactGroundSet) {
    throw size_error("exact enumeration limited to |X| <= " + std::to_string(kMaxExactGroundSet));
  }
  std::vector<std::uint32_t> masks;
  for (const auto& ev : mi.events) {
    std::uint32_t mask = 0;
    for (std::uint32_t x : ev) mask |= std::uint32_t{1} << x;
    masks.push_back(mask);
  }
  // Depth-first over elements, carrying the probability of the partial outcome.
  double total = 0.0;
  auto walk = [&](auto&& self, std::size_t x, std::uint32_t present, double prob) -> void {
    if (prob == 0.0) return;
    if (x == size) {
      for (std::uint32_t m : masks) {
        if ((m & present) == m) return;
      }
      total += prob;
      return;
    }
    const double p = mi.probabilities[x];
    self(self, x + 1, present | (std::uint32_t{1} << x), prob * p);
    self(self, x + 1, present, prob * (1.0 - p));
  };
  walk(walk, 0, 0, 1.0);
  return total;
}

ExactDelta exact_delta(const MicroInstance& mi) {
  mi.validate();
  if (mi.events.size() > kMaxExactEvents) {
    throw size_error("pairwise enumeration limited to " + std::to_string(kMaxExactEvents) + " events");
  }
  const std::size_t size = mi.probabilities.size();
  std::vector<std::vector<bool>> member(mi.events.size(), std::vector<bool>(size, false));
  ExactDelta out{0.0, 0.0};
  for (std::size_t k = 0; k < mi.events.size(); ++k) {
    double prob = 1.0;
    for (std::uint32_t x : mi.events[k]) {
      if (!member[k][x]) prob *= mi.probabilities[x];
      member[k][x] = true;
    }
    out.mu += prob;
  }
  for (std::size_t i = 0; i < mi.events.size(); ++i) {
    for (std::size_t j = 0; j < mi.events.size(); ++j) {
      if (i == j) continue;
      bool meet = false;
      for (std::uint32_t x : mi.events[j]) meet = meet || member[i][x];
      if (!meet) continue;
      double prob = 1.0;
      for (std::size_t x = 0; x < size; ++x) {
        if (member[i][x] || member[j][x]) prob *= mi.probabilities[x];
      }
      out.delta += prob;
    }
  }
  return out;
}

BlockModel StructuredMicro::block_model() const {
  BlockModel m;
  for (std::size_t j = 0; j < i_list.size(); ++j) {
    m.sizes.push_back(std::ldexp(1.0, static_cast<int>(i_list[j])));
    m.probs.push_back(p_values[j]);
  }
  return m;
}

StructuredMicro build_structured_micro(const std::vector<Exponent>& i_list,
                                       const std::vector<std::uint64_t>& a_list, std::uint64_t n,
                                       const std::vector<double>& p_values) {
  const std::size_t q = i_list.size();
  if (q < 2) throw precondition_error("structured micro-instance needs q >= 2");
  if (a_list.size() != q || p_values.size() != q) {
    throw precondition_error("i_list, a_list and p_values must have equal length");
  }
  Exponent total_bits = 0;
  for (Exponent i : i_list) total_bits += i;
  if (total_bits > 16) throw size_error("structured micro-instance limited to 2^16 tuples");

  StructuredMicro sm;
  sm.i_list = i_list;
  sm.a_list = a_list;
  sm.n = n;
  sm.p_values = p_values;

  std::vector<std::uint32_t> offset(q, 0);
  for (std::size_t j = 0; j < q; ++j) {
    const std::uint32_t block = std::uint32_t{1} << i_list[j];
    if (j + 1 < q) offset[j + 1] = offset[j] + block;
    for (std::uint32_t m = 0; m < block; ++m) sm.instance.probabilities.push_back(p_values[j]);
  }

  // Odometer over prod_j [1, 2^{i_j}], first coordinate most significant.
  std::vector<std::uint64_t> m(q, 1);
  for (;;) {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < q; ++j) sum += m[j] * a_list[j];
    if (sum == n) {
      std::vector<std::uint32_t> ev;
      for (std::size_t j = 0; j < q; ++j) ev.push_back(offset[j] + static_cast<std::uint32_t>(m[j] - 1));
      sm.instance.events.push_back(std::move(ev));
      sm.tuples.push_back(m);
    }
    std::size_t j = q;
    while (j > 0) {
      --j;
      if (m[j] < (std::uint64_t{1} << i_list[j])) {
        ++m[j];
        break;
      }
      m[j] = 1;
      if (j == 0) return sm;
    }
  }
}

std::vector<double> exact_delta_by_level(const StructuredMicro& sm) {
  const std::size_t q = sm.i_list.size();
  std::vector<double> levels(q, 0.0);
  const auto& tuples = sm.tuples;
  for (std::size_t x = 0; x < tuples.size(); ++x) {
    for (std::size_t y = 0; y < tuples.size(); ++y) {
      if (x == y) continue;
      std::size_t first_diff = q;
      bool share = false;
      for (std::size_t j = 0; j < q; ++j) {
        if (tuples[x][j] == tuples[y][j]) {
          share = true;
        } else if (first_diff == q) {
          first_diff = j;
        }
      }
      if (!share || first_diff == q) continue;
      // Shared coordinates contribute one factor, differing ones two.
      double prob = 1.0;
      for (std::size_t j = 0; j < q; ++j) {
        prob *= sm.p_values[j];
        if (tuples[x][j] != tuples[y][j]) prob *= sm.p_values[j];
      }
      levels[first_diff] += prob;
    }
  }
  return levels;
}

std::uint64_t residual_window_count(const std::vector<Exponent>& i_list,
                                    const std::vector<std::uint64_t>& a_list, std::uint64_t n) {
  const std::size_t q = i_list.size();
  if (q < 2 || a_list.size() != q) throw precondition_error("need matching lists with q >= 2");
  if (a_list.front() != 1) throw precondition_error("residual window count needs a_1 = 1");
  const std::int64_t window = std::int64_t{1} << i_list[0];
  std::uint64_t count = 0;
  std::vector<std::uint64_t> m(q, 1);  // m[0] unused
  for (;;) {
    std::int64_t residual = static_cast<std::int64_t>(n);
    for (std::size_t j = 1; j < q; ++j) residual -= static_cast<std::int64_t>(m[j] * a_list[j]);
    if (residual >= 1 && residual <= window) ++count;
    std::size_t j = q;
    for (;;) {
      --j;
      if (j == 0) return count;
      if (m[j] < (std::uint64_t{1} << i_list[j])) {
        ++m[j];
        break;
      }
      m[j] = 1;
    }
  }
}

}  // namespace rpart
