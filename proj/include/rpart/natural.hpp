#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rpart {

/// Arbitrary-precision non-negative integer. Parts, multiplicities and counts
/// all use this type; negativity is rejected at the parsing boundary.
using Natural = boost::multiprecision::cpp_int;

/// Non-negative exponent, used wherever a value lives in "exponent space"
/// (bit positions, the d and e of a binary split, the index i of M_{a,i}).
using Exponent = std::uint64_t;

Natural parse_natural(std::string_view text);
std::string to_string(const Natural& value);

Natural pow2(Exponent k);

/// Returns value as uint64, throwing size_error when it does not fit.
std::uint64_t to_u64(const Natural& value, std::string_view what);
bool fits_u64(const Natural& value);

/// Number of binary digits (0 for value 0).
Exponent bit_length(const Natural& value);

/// Positions of the one bits of value, ascending.
std::vector<Exponent> binary_support(const Natural& value);

/// Smallest t with 2^t >= value (0 for value <= 1).
Exponent ceil_log2(const Natural& value);

/// Largest c with c^3 <= value.
Natural integer_cube_root(const Natural& value);

}  // namespace rpart
