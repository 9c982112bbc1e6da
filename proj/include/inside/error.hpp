#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inside {

// Coarse failure class; maps one-to-one onto CLI exit codes.
enum class ErrorCategory { Input, Capacity, Io };

enum class ErrorKind {
  ZeroVector,
  DimensionMismatch,
  AntipodalPair,
  InvalidAlpha,
  GenderMismatch,
  IdenticalParents,
  DuplicateId,
  InvalidArgument,
  GroupTooSmall,
  TargetExceedsCapacity,
  UnknownIdentity,
  EmptyPool,
  PoolTooSmall,
  DegenerateCovariance,
  InvalidSpec,
  ParseError,
  IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;
std::string_view to_string(ErrorCategory category) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace inside
