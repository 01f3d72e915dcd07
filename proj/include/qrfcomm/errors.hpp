#pragma once

#include <stdexcept>

namespace qrfcomm {

/// A caller-supplied argument is outside the operation's domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Probability mass would leave (or already lies outside) the grid.
class SupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical guard tripped: quadrature resolution, optimizer failure, or a
/// state invariant broken by an operation that should preserve it.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrfcomm
