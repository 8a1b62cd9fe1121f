#include "rpart/random_multiplicities.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rpart/errors.hpp"

namespace rpart {

namespace {

// SplitMix64 finalizer (Steele, Lea & Flood). Used both to derive per-block
// stream seeds and as the block generator itself; its output is fully
// specified, so sampled families are identical across platforms.
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }
  /// Uniform on (0, 1].
  double unit_open_closed() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

using i128 = __int128;

}  // namespace

void SamplerConfig::validate() const {
  if (beta == 0) throw config_error("beta must be >= 1");
  if (i_max < 1 || i_max > kMaxBlockIndex) {
    throw config_error("i_max must lie in [1, " + std::to_string(kMaxBlockIndex) + "]");
  }
}

Exponent SamplerConfig::i_max_for(const Natural& bound) const {
  return ceil_log2(bound) + tail_slack;
}

bool block_is_full(Exponent i, unsigned beta) {
  return boost::multiprecision::pow(Natural(i), beta) >= pow2(i);
}

double inclusion_probability(Exponent i, unsigned beta) {
  if (block_is_full(i, beta)) return 1.0;
  return std::ldexp(std::pow(static_cast<double>(i), static_cast<double>(beta)), -static_cast<int>(i));
}

std::uint64_t block_stream_seed(std::uint64_t seed, std::uint64_t a, Exponent i) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (a + 2 * kGolden));
  h = mix64(h ^ (i + 3 * kGolden));
  return h;
}

MultBlock MultBlock::full(Exponent i) {
  if (i > kMaxBlockIndex) throw size_error("block index too large");
  return MultBlock(i, true, {});
}

MultBlock MultBlock::sparse(Exponent i, std::vector<std::uint64_t> elements) {
  if (i > kMaxBlockIndex) throw size_error("block index too large");
  const std::uint64_t universe = std::uint64_t{1} << i;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (elements[k] < 1 || elements[k] > universe) {
      throw input_error("block element outside [1, 2^" + std::to_string(i) + "]");
    }
    if (k > 0 && elements[k] <= elements[k - 1]) {
      throw input_error("block elements must be strictly increasing");
    }
  }
  return MultBlock(i, false, std::move(elements));
}

bool MultBlock::contains(std::uint64_t x) const {
  if (full_) return x >= 1 && x <= universe();
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::uint64_t MultBlock::min() const {
  if (empty()) throw precondition_error("min of empty block");
  return full_ ? 1 : elements_.front();
}

std::uint64_t MultBlock::max() const {
  if (empty()) throw precondition_error("max of empty block");
  return full_ ? universe() : elements_.back();
}

MultBlock sample_block(std::uint64_t seed, std::uint64_t a, Exponent i, unsigned beta) {
  if (i > kMaxBlockIndex) throw size_error("block index too large");
  if (block_is_full(i, beta)) return MultBlock::full(i);
  const double p = inclusion_probability(i, beta);
  const std::uint64_t universe = std::uint64_t{1} << i;
  std::vector<std::uint64_t> out;
  if (p <= 0.0) return MultBlock::sparse(i, std::move(out));
  out.reserve(static_cast<std::size_t>(p * static_cast<double>(universe) * 1.1) + 16);

  SplitMix64 rng(block_stream_seed(seed, a, i));
  const double log_q = std::log1p(-p);
  std::uint64_t pos = 0;  // last position considered
  for (;;) {
    // Number of rejected positions before the next kept one.
    const double gap = std::floor(std::log(rng.unit_open_closed()) / log_q);
    if (gap >= static_cast<double>(universe - pos)) break;
    pos += static_cast<std::uint64_t>(gap) + 1;
    if (pos > universe) break;
    out.push_back(pos);
  }
  return MultBlock::sparse(i, std::move(out));
}

MultiplicityFamily::MultiplicityFamily(SamplerConfig config, PartSet parts,
                                       std::map<Key, MultBlock> blocks)
    : config_(config), parts_(std::move(parts)), blocks_(std::move(blocks)) {}

const MultBlock& MultiplicityFamily::block(std::uint64_t a, Exponent i) const {
  auto it = blocks_.find({a, i});
  if (it == blocks_.end()) {
    throw coverage_error("family has no block M_{" + std::to_string(a) + "," + std::to_string(i) +
                         "}");
  }
  return it->second;
}

MultiplicityFamily sample_family(const PartSet& A, const SamplerConfig& config) {
  config.validate();
  if (A.empty() || A.elements().front() != 1) throw config_error("A must contain 1");
  const Natural top = pow2(config.i_max);
  if (!A.covers(top)) {
    throw config_error("part prefix must be complete up to 2^i_max = " + to_string(top));
  }
  std::vector<Natural> kept;
  std::map<MultiplicityFamily::Key, MultBlock> blocks;
  for (const Natural& part : A.elements()) {
    if (part > top) break;
    kept.push_back(part);
    const auto a = part.convert_to<std::uint64_t>();
    for (Exponent i = ceil_log2(part); i <= config.i_max; ++i) {
      blocks.emplace(MultiplicityFamily::Key{a, i}, sample_block(config.seed, a, i, config.beta));
    }
  }
  return MultiplicityFamily(config, PartSet::custom(std::move(kept), top), std::move(blocks));
}

MergedView::MergedView(const MultiplicityFamily& family, std::uint64_t bound)
    : bound_(bound), full_prefix_(0) {
  if (bound > (std::uint64_t{1} << family.config().i_max)) {
    throw coverage_error("bound " + std::to_string(bound) + " exceeds 2^i_max");
  }
  for (const auto& [key, block] : family.blocks()) {
    if (block.is_full()) full_prefix_ = std::max(full_prefix_, std::min(block.universe(), bound));
  }
  for (const auto& [key, block] : family.blocks()) {
    if (block.is_full()) continue;
    auto it = std::upper_bound(block.elements().begin(), block.elements().end(), full_prefix_);
    for (; it != block.elements().end() && *it <= bound; ++it) extra_.push_back(*it);
  }
  std::sort(extra_.begin(), extra_.end());
  extra_.erase(std::unique(extra_.begin(), extra_.end()), extra_.end());
}

std::uint64_t MergedView::count_up_to(std::uint64_t n) const {
  if (n > bound_) throw coverage_error("count query above merged bound");
  const auto above = static_cast<std::uint64_t>(
      std::upper_bound(extra_.begin(), extra_.end(), n) - extra_.begin());
  return std::min(n, full_prefix_) + above;
}

std::vector<std::uint64_t> MergedView::materialize() const {
  std::vector<std::uint64_t> out;
  out.reserve(full_prefix_ + extra_.size());
  for (std::uint64_t x = 1; x <= full_prefix_; ++x) out.push_back(x);
  out.insert(out.end(), extra_.begin(), extra_.end());
  return out;
}

MultSet merged_M(const MultiplicityFamily& family, const Natural& bound) {
  const MergedView view(family, to_u64(bound, "bound"));
  std::vector<Natural> elements;
  for (std::uint64_t x : view.materialize()) elements.emplace_back(x);
  return MultSet(std::move(elements), bound);
}

MembershipProbability membership_probability(const Natural& m, const PartSet& A,
                                             const SamplerConfig& config) {
  config.validate();
  if (m < 1) throw input_error("membership probability needs m >= 1");
  MembershipProbability out{0.0, 0.0};
  for (Exponent i = config.i_max + 1; i < config.i_max + 2048; ++i) {
    const double p = inclusion_probability(i, config.beta);
    out.tail_per_part += p;
    if (p < 1e-300) break;
  }

  const Exponent i_from_m = ceil_log2(m);
  const Natural top = pow2(config.i_max);
  double log_miss = 0.0;  // log Pr[m not in any applicable block]
  for (const Natural& part : A.elements()) {
    if (part > top) break;
    for (Exponent i = std::max(ceil_log2(part), i_from_m); i <= config.i_max; ++i) {
      const double p = inclusion_probability(i, config.beta);
      if (p >= 1.0) {
        out.probability = 1.0;
        return out;
      }
      log_miss += std::log1p(-p);
    }
  }
  out.probability = -std::expm1(log_miss);
  return out;
}

SpecialIndexSet special_indices(const Natural& n, const PartSet& A) {
  const std::uint64_t n64 = to_u64(n, "n");
  if (n64 < 2) throw precondition_error("special indices need n >= 2");
  const Natural root = integer_cube_root(n);
  if (!A.covers(root)) throw bound_error("part prefix does not reach n^(1/3)");

  SpecialIndexSet out;
  out.n = n;
  for (const Natural& a : A.elements()) {
    if (a > root) break;
    out.a_list.push_back(a.convert_to<std::uint64_t>());
  }
  if (out.q() < 2) {
    throw precondition_error("n = " + to_string(n) + " gives q = " + std::to_string(out.q()) +
                             " < 2 parts below n^(1/3)");
  }
  if (out.a_list.front() != 1) throw config_error("A must contain 1");

  out.i_list.push_back(ceil_log2(n));
  const long double log_n = std::log2(static_cast<long double>(n64));
  for (std::size_t j = 1; j < out.q(); ++j) {
    const long double target = static_cast<long double>(n64) / (out.a_list[j] * log_n);
    long long t = static_cast<long long>(std::ceil(std::log2(target)));
    while (std::ldexp(1.0L, static_cast<int>(t)) < target) ++t;
    while (std::ldexp(1.0L, static_cast<int>(t - 1)) >= target) --t;
    if (t < 0) throw precondition_error("negative block index for n = " + to_string(n));
    out.i_list.push_back(static_cast<Exponent>(t));
  }
  return out;
}

IndexInvariants check_index_invariants(const SpecialIndexSet& idx) {
  IndexInvariants out;
  if (idx.q() == 0 || idx.i_list.size() != idx.q()) return out;
  const Natural& n = idx.n;
  const long double n_real = static_cast<long double>(to_u64(n, "n"));
  const long double log_n = std::log2(n_real);

  out.first_part_is_one = idx.a_list.front() == 1;
  out.parts_below_cube_root = true;
  for (std::uint64_t a : idx.a_list) {
    const Natural a3 = Natural(a) * a * a;
    if (a3 > n) out.parts_below_cube_root = false;
  }
  const Natural p1 = pow2(idx.i_list.front());
  out.first_sandwich = n <= p1 && p1 < 2 * n;

  out.later_sandwiches = true;
  for (std::size_t j = 1; j < idx.q(); ++j) {
    const long double target = n_real / (idx.a_list[j] * log_n);
    const long double p = std::ldexp(1.0L, static_cast<int>(idx.i_list[j]));
    if (!(target <= p && p < 2 * target)) out.later_sandwiches = false;
  }
  out.above_half_log = true;
  for (Exponent i : idx.i_list) {
    if (!(static_cast<long double>(i) > log_n / 2)) out.above_half_log = false;
  }
  return out;
}

SpecialSearch find_special_representation(const Natural& n, const PartSet& A,
                                          const MultiplicityFamily& family) {
  SpecialSearch out;
  out.indices = special_indices(n, A);
  const SpecialIndexSet& idx = out.indices;
  const std::size_t q = idx.q();

  std::vector<const MultBlock*> blocks;
  for (std::size_t j = 0; j < q; ++j) blocks.push_back(&family.block(idx.a_list[j], idx.i_list[j]));
  for (const MultBlock* b : blocks) {
    if (b->empty()) return out;
  }

  // Residual window [lo_rest[j], hi_rest[j]] that parts 0..j-1 can still absorb.
  std::vector<i128> lo_rest(q + 1, 0);
  std::vector<i128> hi_rest(q + 1, 0);
  for (std::size_t j = 0; j < q; ++j) {
    lo_rest[j + 1] = lo_rest[j] + static_cast<i128>(idx.a_list[j]) * blocks[j]->min();
    hi_rest[j + 1] = hi_rest[j] + static_cast<i128>(idx.a_list[j]) * blocks[j]->max();
  }

  std::vector<std::uint64_t> chosen(q, 0);
  std::uint64_t nodes = 0;

  auto search = [&](auto&& self, std::size_t j, i128 residual) -> bool {
    ++nodes;
    if (j == 0) {
      // a_1 = 1, so the residual itself must be the first multiplicity.
      if (residual < 1 || residual > static_cast<i128>(blocks[0]->max())) return false;
      const auto m1 = static_cast<std::uint64_t>(residual);
      if (!blocks[0]->contains(m1)) return false;
      chosen[0] = m1;
      return true;
    }
    const i128 a = idx.a_list[j];
    // residual - m*a must land in [lo_rest[j], hi_rest[j]].
    const i128 lo_num = residual - hi_rest[j];
    const i128 hi_num = residual - lo_rest[j];
    if (hi_num < a) return false;
    const i128 m_lo = lo_num <= a ? 1 : (lo_num + a - 1) / a;
    const i128 m_hi = hi_num / a;
    bool found = false;
    blocks[j]->for_each_in(static_cast<std::uint64_t>(m_lo),
                           static_cast<std::uint64_t>(std::min<i128>(m_hi, blocks[j]->max())),
                           [&](std::uint64_t m) {
                             chosen[j] = m;
                             found = self(self, j - 1, residual - a * static_cast<i128>(m));
                             return !found;
                           });
    return found;
  };

  const i128 target = static_cast<i128>(to_u64(n, "n"));
  if (search(search, q - 1, target)) {
    Representation rep;
    for (std::size_t j = 0; j < q; ++j) rep.add(idx.a_list[j], chosen[j]);
    out.witness = std::move(rep);
    out.multiplicities = chosen;
  }
  out.nodes_expanded = nodes;
  return out;
}

CoverageReport coverage_scan(std::uint64_t n_lo, std::uint64_t n_hi, const PartSet& A,
                             const MultiplicityFamily& family) {
  if (n_lo > n_hi) throw input_error("empty range: n_lo > n_hi");
  using clock = std::chrono::steady_clock;
  CoverageReport report;
  const auto start = clock::now();
  std::uint64_t found = 0;
  for (std::uint64_t n = n_lo;; ++n) {
    CoverageRow row;
    row.n = n;
    const auto row_start = clock::now();
    try {
      SpecialSearch s = find_special_representation(Natural(n), A, family);
      row.found = s.witness.has_value();
      row.witness = std::move(s.witness);
      row.nodes_expanded = s.nodes_expanded;
    } catch (const precondition_error& e) {
      row.error = e.what();
    }
    report.slowest_row = std::max<std::chrono::duration<double>>(report.slowest_row,
                                                                 clock::now() - row_start);
    if (row.found) {
      ++found;
    } else {
      report.failures.push_back(n);
    }
    report.rows.push_back(std::move(row));
    if (n == n_hi) break;
  }
  report.fraction = static_cast<double>(found) / static_cast<double>(report.rows.size());
  report.wall_time = clock::now() - start;
  return report;
}

std::vector<DensityRow> density_report(const MultiplicityFamily& family,
                                       const std::vector<std::uint64_t>& checkpoints) {
  std::vector<DensityRow> rows;
  if (checkpoints.empty()) return rows;
  const std::uint64_t top = *std::max_element(checkpoints.begin(), checkpoints.end());
  const MergedView view(family, top);
  const double exponent = static_cast<double>(family.config().beta) + 2.0;
  for (std::uint64_t n : checkpoints) {
    if (n < 2) throw input_error("density checkpoints must be >= 2");
    DensityRow row;
    row.n = n;
    row.count = view.count_up_to(n);
    row.log_bound = std::pow(std::log2(static_cast<double>(n)), exponent);
    row.ratio = static_cast<double>(row.count) / row.log_bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rpart
