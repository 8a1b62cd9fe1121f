#include "rpart/partition_core.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>

#include "rpart/errors.hpp"

namespace rpart {

namespace {

// The series oracle allocates n + 1 coefficients.
constexpr std::uint64_t kMaxSeriesDegree = 50'000'000;

void check_strictly_increasing_positive(const std::vector<Natural>& elements, const char* what) {
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (elements[k] < 1) throw input_error(std::string(what) + " elements must be >= 1");
    if (k > 0 && elements[k] <= elements[k - 1]) {
      throw input_error(std::string(what) + " elements must be strictly increasing");
    }
  }
}

void require_cover(const Natural& n, const PartSet& parts, const MultSet& mults) {
  if (!parts.covers(n)) {
    throw bound_error("part prefix complete only up to " + to_string(*parts.bound()) +
                      ", query needs " + to_string(n));
  }
  if (!mults.covers(n)) {
    throw bound_error("multiplicity prefix complete only up to " + to_string(*mults.bound()) +
                      ", query needs " + to_string(n));
  }
}

// Parts and multiplicities that can occur in a representation of n, as 64-bit values.
struct Reduced {
  std::uint64_t n;
  std::vector<std::uint64_t> parts;
  std::vector<std::uint64_t> mults;
};

Reduced reduce(const Natural& n, const PartSet& parts, const MultSet& mults) {
  Reduced r;
  r.n = to_u64(n, "n");
  for (const auto& a : parts.elements()) {
    if (a > n) break;
    r.parts.push_back(a.convert_to<std::uint64_t>());
  }
  for (const auto& m : mults.elements()) {
    if (m > n) break;
    r.mults.push_back(m.convert_to<std::uint64_t>());
  }
  return r;
}

// All coefficients up to x^n of prod_a (1 + sum_{m*a <= n} x^{m*a}).
std::vector<Natural> series_coefficients(const Reduced& r) {
  if (r.n > kMaxSeriesDegree) {
    throw size_error("series oracle limited to degree " + std::to_string(kMaxSeriesDegree));
  }
  const std::size_t degree = static_cast<std::size_t>(r.n);
  std::vector<Natural> poly(degree + 1, Natural(0));
  poly[0] = 1;
  std::vector<Natural> next;
  for (std::uint64_t a : r.parts) {
    next = poly;
    for (std::uint64_t m : r.mults) {
      if (m > r.n / a) break;
      const std::size_t shift = static_cast<std::size_t>(m * a);
      for (std::size_t k = 0; k + shift <= degree; ++k) {
        if (poly[k] != 0) next[k + shift] += poly[k];
      }
    }
    poly.swap(next);
  }
  return poly;
}

struct StateHash {
  std::size_t operator()(const std::pair<std::size_t, std::uint64_t>& s) const noexcept {
    std::uint64_t h = s.second * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(s.first) + 0x7F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Number of ways to write `rem` using parts[0..=k] only.
class PrefixCounter {
 public:
  explicit PrefixCounter(const Reduced& r) : r_(r) {}

  Natural count(std::size_t k, std::uint64_t rem) {
    if (rem == 0) return 1;
    const auto key = std::make_pair(k, rem);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::uint64_t a = r_.parts[k];
    Natural total = 0;
    if (k == 0) {
      // Only the smallest part left: rem must be m * a for some admissible m.
      if (rem % a == 0 && std::binary_search(r_.mults.begin(), r_.mults.end(), rem / a)) total = 1;
    } else {
      total = count(k - 1, rem);
      for (std::uint64_t m : r_.mults) {
        if (m > rem / a) break;
        total += count(k - 1, rem - m * a);
      }
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  const Reduced& r_;
  std::unordered_map<std::pair<std::size_t, std::uint64_t>, Natural, StateHash> memo_;
};

// Whether `rem` is reachable from parts[k..] (suffix); drives pruning in enumeration.
class SuffixFeasibility {
 public:
  explicit SuffixFeasibility(const Reduced& r) : r_(r) {}

  bool reachable(std::size_t k, std::uint64_t rem) {
    if (rem == 0) return true;
    if (k >= r_.parts.size()) return false;
    const auto key = std::make_pair(k, rem);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = reachable(k + 1, rem);
    const std::uint64_t a = r_.parts[k];
    for (std::uint64_t m : r_.mults) {
      if (ok || m > rem / a) break;
      ok = reachable(k + 1, rem - m * a);
    }
    memo_.emplace(key, ok);
    return ok;
  }

 private:
  const Reduced& r_;
  std::unordered_map<std::pair<std::size_t, std::uint64_t>, bool, StateHash> memo_;
};

}  // namespace

SortedPrefix::SortedPrefix(std::vector<Natural> elements, std::optional<Natural> bound)
    : elements_(std::move(elements)), bound_(std::move(bound)) {
  check_strictly_increasing_positive(elements_, "set");
  if (bound_ && !elements_.empty() && elements_.back() > *bound_) {
    throw input_error("set element " + to_string(elements_.back()) + " exceeds declared bound " +
                      to_string(*bound_));
  }
}

bool SortedPrefix::contains(const Natural& x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::size_t SortedPrefix::count_up_to(const Natural& m) const {
  return static_cast<std::size_t>(std::upper_bound(elements_.begin(), elements_.end(), m) -
                                  elements_.begin());
}

PartSet PartSet::factorials(const Natural& bound) {
  std::vector<Natural> out;
  Natural f = 1;
  for (unsigned k = 2; f <= bound; ++k) {
    out.push_back(f);
    f *= k;
  }
  return PartSet(std::move(out), bound, PartOrigin::factorials);
}

PartSet PartSet::powers_kk(const Natural& bound) {
  std::vector<Natural> out;
  for (unsigned k = 1;; ++k) {
    Natural v = boost::multiprecision::pow(Natural(k), k);
    if (v > bound) break;
    out.push_back(std::move(v));
  }
  return PartSet(std::move(out), bound, PartOrigin::powers_kk);
}

PartSet PartSet::from_exponents(const std::vector<Exponent>& exponents, const Natural& bound) {
  std::vector<Natural> out;
  const Exponent limit = bit_length(bound);  // 2^d <= bound  =>  d < bit_length(bound)
  for (Exponent d : exponents) {
    if (d >= limit) continue;
    Natural v = pow2(d);
    if (v <= bound) out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return PartSet(std::move(out), bound, PartOrigin::explicit_exponents);
}

PartSet PartSet::custom(std::vector<Natural> elements, std::optional<Natural> bound) {
  return PartSet(std::move(elements), std::move(bound), PartOrigin::custom_list);
}

Representation::Representation(Terms terms) : terms_(std::move(terms)) {
  for (const auto& [part, mult] : terms_) {
    if (part < 1 || mult < 1) throw input_error("representation entries must be >= 1");
  }
}

void Representation::add(const Natural& part, const Natural& mult) {
  if (part < 1 || mult < 1) throw input_error("representation entries must be >= 1");
  if (!terms_.emplace(part, mult).second) {
    throw input_error("part " + to_string(part) + " appears twice in representation");
  }
}

Natural Representation::value() const {
  Natural total = 0;
  for (const auto& [part, mult] : terms_) total += part * mult;
  return total;
}

Natural count_partitions(const Natural& n, const PartSet& parts, const MultSet& mults) {
  require_cover(n, parts, mults);
  if (n == 0) return 1;
  const Reduced r = reduce(n, parts, mults);
  if (r.parts.empty() || r.mults.empty()) return 0;
  PrefixCounter counter(r);
  return counter.count(r.parts.size() - 1, r.n);
}

Natural count_via_series(const Natural& n, const PartSet& parts, const MultSet& mults) {
  require_cover(n, parts, mults);
  return series_coefficients(reduce(n, parts, mults)).back();
}

std::vector<Representation> enumerate_partitions(const Natural& n, const PartSet& parts,
                                                 const MultSet& mults, std::size_t limit) {
  if (limit < 1) throw input_error("limit must be >= 1");
  require_cover(n, parts, mults);
  std::vector<Representation> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  const Reduced r = reduce(n, parts, mults);
  SuffixFeasibility feasible(r);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> stack;

  // Next term is chosen by (part index ascending, multiplicity ascending), which
  // emits representations in canonical lexicographic order.
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t from, std::uint64_t rem) {
    if (out.size() >= limit) return;
    if (rem == 0) {
      Representation rep;
      for (const auto& [part, mult] : stack) rep.add(part, mult);
      out.push_back(std::move(rep));
      return;
    }
    for (std::size_t k = from; k < r.parts.size() && out.size() < limit; ++k) {
      const std::uint64_t a = r.parts[k];
      if (a > rem) break;
      for (std::uint64_t m : r.mults) {
        if (m > rem / a || out.size() >= limit) break;
        const std::uint64_t left = rem - m * a;
        if (!feasible.reachable(k + 1, left)) continue;
        stack.emplace_back(a, m);
        walk(k + 1, left);
        stack.pop_back();
      }
    }
  };
  walk(0, r.n);
  return out;
}

bool validate_representation(const Representation& rep, const Natural& n, const PartSet& parts,
                             const MultSet& mults) {
  Natural total = 0;
  for (const auto& [part, mult] : rep.terms()) {
    if (!parts.covers(part) || !parts.contains(part)) return false;
    if (!mults.covers(mult) || !mults.contains(mult)) return false;
    total += part * mult;
  }
  return total == n;
}

CumulativeBound cumulative_count_bound(const Natural& m, const PartSet& parts, const MultSet& mults) {
  require_cover(m, parts, mults);
  const std::vector<Natural> poly = series_coefficients(reduce(m, parts, mults));
  CumulativeBound result;
  result.sum = 0;
  for (std::size_t k = 1; k < poly.size(); ++k) result.sum += poly[k];
  const auto base = Natural(mults.count_up_to(m) + 1);
  result.bound = boost::multiprecision::pow(base, static_cast<unsigned>(parts.count_up_to(m)));
  result.holds = result.sum <= result.bound;
  return result;
}

}  // namespace rpart
