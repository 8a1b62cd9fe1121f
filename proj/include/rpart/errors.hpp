#pragma once

#include <stdexcept>
#include <string>

namespace rpart {

/// Caller supplied something malformed or out of contract. The CLI maps every
/// input_error to exit code 2.
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite prefix of A or M cannot answer the query completely.
class bound_error : public input_error {
 public:
  using input_error::input_error;
};

/// Sampler config, set description or part sequence rejected.
class config_error : public input_error {
 public:
  using input_error::input_error;
};

/// A g-table whose counts cannot be realised by any B.
class infeasible_error : public input_error {
 public:
  using input_error::input_error;
};

/// A multiplicity family lacks a block M_{a,i} the query needs.
class coverage_error : public input_error {
 public:
  using input_error::input_error;
};

/// An instance is too large for exact enumeration or fixed-width arithmetic.
class size_error : public input_error {
 public:
  using input_error::input_error;
};

/// A mathematical precondition (q >= 2, D >= mu > 0, ...) does not hold.
class precondition_error : public input_error {
 public:
  using input_error::input_error;
};

/// Two independent computations disagreed, or a proven inequality failed.
/// Indicates a bug; the CLI maps it to exit code 3.
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rpart
