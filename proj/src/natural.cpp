#include "rpart/natural.hpp"

#include <cctype>

#include "rpart/errors.hpp"

namespace rpart {

Natural parse_natural(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (begin == end) throw input_error("empty integer literal");
  Natural value = 0;
  for (std::size_t k = begin; k < end; ++k) {
    const char c = text[k];
    if (c < '0' || c > '9') {
      throw input_error("not a non-negative decimal integer: '" + std::string(text) + "'");
    }
    value *= 10;
    value += c - '0';
  }
  return value;
}

std::string to_string(const Natural& value) { return value.str(); }

Natural pow2(Exponent k) {
  Natural one = 1;
  return one << k;
}

bool fits_u64(const Natural& value) {
  return value >= 0 && value <= Natural(std::numeric_limits<std::uint64_t>::max());
}

std::uint64_t to_u64(const Natural& value, std::string_view what) {
  if (!fits_u64(value)) {
    throw size_error(std::string(what) + " does not fit in 64 bits: " + value.str());
  }
  return value.convert_to<std::uint64_t>();
}

Exponent bit_length(const Natural& value) {
  if (value <= 0) return 0;
  return static_cast<Exponent>(boost::multiprecision::msb(value)) + 1;
}

std::vector<Exponent> binary_support(const Natural& value) {
  std::vector<Exponent> bits;
  const Exponent len = bit_length(value);
  for (Exponent t = 0; t < len; ++t) {
    if (boost::multiprecision::bit_test(value, static_cast<unsigned>(t))) bits.push_back(t);
  }
  return bits;
}

Exponent ceil_log2(const Natural& value) {
  if (value <= 1) return 0;
  return bit_length(value - 1);
}

Natural integer_cube_root(const Natural& value) {
  if (value <= 0) return 0;
  // Bisection on [0, 2^(ceil(bits/3)+1)].
  Natural lo = 0;
  Natural hi = pow2(bit_length(value) / 3 + 1);
  while (lo < hi) {
    Natural mid = (lo + hi + 1) / 2;
    if (mid * mid * mid <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace rpart
