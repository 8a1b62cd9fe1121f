#include "rpart/explicit_construction.hpp"

#include <algorithm>
#include <string>

#include "rpart/errors.hpp"

namespace rpart {

namespace {

// Enumeration visits 2^k subsets of the admissible bit positions.
constexpr std::size_t kMaxEnumerationBits = 40;

}  // namespace

void GTable::validate() const {
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (values[r] > r) {
      throw infeasible_error("g(" + std::to_string(r) + ") = " + std::to_string(values[r]) +
                             " exceeds r");
    }
    if (r == 0) continue;
    if (values[r] < values[r - 1]) {
      throw infeasible_error("g decreases at r = " + std::to_string(r));
    }
    // r - g(r) must not decrease, i.e. g grows by at most one per step.
    if (values[r] > values[r - 1] + 1) {
      throw infeasible_error("r - g(r) decreases at r = " + std::to_string(r));
    }
  }
}

ExponentSet ExponentSet::evens() { return ExponentSet(ExponentRule::evens); }
ExponentSet ExponentSet::odds() { return ExponentSet(ExponentRule::odds); }
ExponentSet ExponentSet::all() { return ExponentSet(ExponentRule::all); }

ExponentSet ExponentSet::blocks(Exponent width) {
  if (width == 0) throw config_error("block width must be >= 1");
  ExponentSet s(ExponentRule::blocks);
  s.width_ = width;
  return s;
}

ExponentSet ExponentSet::explicit_list(std::vector<Exponent> list, std::optional<Exponent> period) {
  if (period && *period == 0) throw config_error("period must be >= 1");
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
  if (period && !list.empty() && list.back() >= *period) {
    throw config_error("explicit residues must be < period");
  }
  ExponentSet s(ExponentRule::explicit_list);
  s.list_ = std::move(list);
  s.period_ = period;
  return s;
}

ExponentSet ExponentSet::complement() const {
  ExponentSet s = *this;
  s.complemented_ = !s.complemented_;
  return s;
}

ExponentSet ExponentSet::with_override(Exponent index, bool member) const {
  ExponentSet s = *this;
  // Overrides apply to the base rule, before complementation.
  s.overrides_[index] = member != complemented_;
  return s;
}

bool ExponentSet::base_contains(Exponent t) const {
  switch (rule_) {
    case ExponentRule::evens:
      return t % 2 == 0;
    case ExponentRule::odds:
      return t % 2 == 1;
    case ExponentRule::all:
      return true;
    case ExponentRule::blocks:
      return (t / width_) % 2 == 0;
    case ExponentRule::explicit_list: {
      const Exponent key = period_ ? t % *period_ : t;
      return std::binary_search(list_.begin(), list_.end(), key);
    }
    case ExponentRule::from_g: {
      if (t < g_members_.size()) return g_members_[t];
      const Exponent r_max = g_members_.size() - 1;
      return (t - r_max) % 2 == 0;
    }
  }
  return false;
}

bool ExponentSet::contains(Exponent t) const {
  const auto it = overrides_.find(t);
  const bool base = it != overrides_.end() ? it->second : base_contains(t);
  return base != complemented_;
}

std::vector<Exponent> ExponentSet::members_below(Exponent limit) const {
  std::vector<Exponent> out;
  for (Exponent t = 0; t < limit; ++t) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

bool ExponentSet::is_infinite() const {
  bool base_infinite = false;
  bool base_cofinite = false;  // complement of the base rule is finite
  switch (rule_) {
    case ExponentRule::evens:
    case ExponentRule::odds:
    case ExponentRule::blocks:
    case ExponentRule::from_g:
      base_infinite = true;
      break;
    case ExponentRule::all:
      base_infinite = true;
      base_cofinite = true;
      break;
    case ExponentRule::explicit_list:
      if (period_) {
        base_infinite = !list_.empty();
        base_cofinite = list_.size() == *period_;
      }
      break;
  }
  // Finitely many overrides never change (co)finiteness.
  return complemented_ ? !base_cofinite : base_infinite;
}

bool ExponentSet::complement_is_infinite() const { return complement().is_infinite(); }

bool operator==(const ExponentSet& x, const ExponentSet& y) {
  return x.rule_ == y.rule_ && x.complemented_ == y.complemented_ && x.list_ == y.list_ &&
         x.period_ == y.period_ && x.width_ == y.width_ && x.g_.values == y.g_.values &&
         x.overrides_ == y.overrides_;
}

void require_construction_input(const ExponentSet& B) {
  if (!B.is_infinite()) throw config_error("B must be infinite");
  if (!B.complement_is_infinite()) throw config_error("C (complement of B) must be infinite");
}

SplitExponent split_exponent(Exponent t, const ExponentSet& B) {
  SplitExponent out{0, 0};
  for (Exponent s = 0; s < 64; ++s) {
    const Exponent bit = Exponent{1} << s;
    if (bit > t) break;
    if ((t & bit) == 0) continue;
    if (B.contains(s)) {
      out.d |= bit;
    } else {
      out.e |= bit;
    }
  }
  return out;
}

std::vector<Natural> enumerate_support_numbers(const ExponentSet& S, const Natural& bound) {
  std::vector<Natural> out;
  if (bound < 1) return out;
  const std::vector<Exponent> bits = S.members_below(bit_length(bound));
  if (bits.size() > kMaxEnumerationBits) {
    throw size_error("support enumeration over " + std::to_string(bits.size()) +
                     " admissible bits is too large");
  }
  // Depositing the bits of k onto the admissible positions is strictly
  // increasing in k, so values come out sorted and we can stop at the bound.
  const std::uint64_t subsets = std::uint64_t{1} << bits.size();
  for (std::uint64_t k = 1; k < subsets; ++k) {
    Natural v = 0;
    for (std::size_t b = 0; b < bits.size(); ++b) {
      if (k & (std::uint64_t{1} << b)) boost::multiprecision::bit_set(v, static_cast<unsigned>(bits[b]));
    }
    if (v > bound) break;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Exponent> build_A_exponents(const ExponentSet& B, Exponent d_bound) {
  require_construction_input(B);
  std::vector<Exponent> out{0};
  for (const Natural& d : enumerate_support_numbers(B, Natural(d_bound))) {
    out.push_back(d.convert_to<Exponent>());
  }
  return out;
}

MultSet build_M_prefix(const ExponentSet& C, const Natural& bound) {
  if (bound < 1) throw input_error("bound must be >= 1");
  require_construction_input(C.complement());
  // Elements of E that can appear as bit positions of numbers <= bound.
  const Exponent positions = bit_length(bound);
  std::vector<Exponent> e_members{0};
  for (const Natural& e : enumerate_support_numbers(C, Natural(positions - 1))) {
    e_members.push_back(e.convert_to<Exponent>());
  }
  const ExponentSet E = ExponentSet::explicit_list(std::move(e_members));
  return MultSet(enumerate_support_numbers(E, bound), bound);
}

PartSet construction_parts(const ExponentSet& B, const Natural& bound) {
  const Exponent d_max = bit_length(bound) == 0 ? 0 : bit_length(bound) - 1;
  return PartSet::from_exponents(build_A_exponents(B, d_max), bound);
}

Representation ExponentRepresentation::to_representation() const {
  Representation rep;
  for (const auto& [d, m] : terms) rep.add(pow2(d), m);
  return rep;
}

ExponentRepresentation decode(const Natural& n, const ExponentSet& B) {
  if (n < 1) throw input_error("decode requires n >= 1");
  ExponentRepresentation rep;
  for (Exponent t : binary_support(n)) {
    const SplitExponent split = split_exponent(t, B);
    auto [it, inserted] = rep.terms.try_emplace(split.d, 0);
    it->second += pow2(split.e);
  }
  return rep;
}

DensityCheck density_A(const ExponentSet& B, Exponent r) {
  DensityCheck out;
  out.exact = enumerate_support_numbers(B, pow2(r)).size();
  Exponent below = 0;
  for (Exponent s = 0; s < r; ++s) below += B.contains(s) ? 1 : 0;
  out.formula = Natural(B.contains(r) ? 1 : 0) + pow2(below);
  return out;
}

ExponentSet build_B_from_g(const GTable& g, Exponent r_max) {
  if (g.values.size() <= r_max) {
    throw infeasible_error("g table covers r < " + std::to_string(g.values.size()) +
                           ", need r_max = " + std::to_string(r_max));
  }
  GTable used{std::vector<Exponent>(g.values.begin(), g.values.begin() + r_max + 1)};
  used.validate();

  ExponentSet s(ExponentRule::from_g);
  s.g_members_.assign(r_max + 1, false);
  Exponent count = 0;
  for (Exponent r = 0; r <= r_max; ++r) {
    const Exponent target = r - used.values[r];
    if (target < count || target > count + 1) {
      throw infeasible_error("|B ∩ {0..r}| cannot move from " + std::to_string(count) + " to " +
                             std::to_string(target) + " at r = " + std::to_string(r));
    }
    s.g_members_[r] = target == count + 1;
    count = target;
  }
  s.g_ = std::move(used);
  return s;
}

std::vector<std::pair<std::string, ExponentSet>> standard_catalog() {
  GTable half{{}};
  GTable step{{}};
  for (Exponent r = 0; r <= 16; ++r) {
    half.values.push_back(r / 2);
    step.values.push_back(r < 4 ? 0 : 1);
  }
  return {
      {"evens", ExponentSet::evens()},
      {"odds", ExponentSet::odds()},
      {"blocks2", ExponentSet::blocks(2)},
      {"from_g_half", build_B_from_g(half, 16)},
      {"from_g_step", build_B_from_g(step, 16)},
  };
}

}  // namespace rpart
