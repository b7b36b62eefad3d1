#pragma once

#include <stdexcept>
#include <string>

namespace icsguard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rating factor outside the three-point scale {1, 2, 3}.
class RatingOutOfRange : public Error {
 public:
  using Error::Error;
};

/// No attack can disrupt the target: every disruption path crosses an
/// element with infinite cost.
class TargetIndestructible : public Error {
 public:
  using Error::Error;
};

/// Oracle enumeration refused because the model has too many atomic nodes.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// The solver ran past its deadline.
class Interrupted : public Error {
 public:
  using Error::Error;
};

}  // namespace icsguard
