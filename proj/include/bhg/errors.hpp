#pragma once

#include <stdexcept>
#include <string>

namespace bhg {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class domain_error : public error {
 public:
  using error::error;
};

/// A value lies outside the admissible range (e.g. a digit b_i >= q_{i+1}).
class range_error : public error {
 public:
  using error::error;
};

/// A computed floor is too close to an integer at the working precision.
/// Retrying with a larger precision resolves it.
class precision_error : public error {
 public:
  using error::error;
};

/// A configured work or memory cap would be exceeded.
class budget_error : public error {
 public:
  using error::error;
};

/// A self-check failed. This always indicates a bug, never bad luck.
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace bhg
