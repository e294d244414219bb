#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcplan {

enum class ErrorCode {
  ZeroVector,
  AtPole,
  OddAmbientDim,
  EvenAmbientDim,
  DomainError,
  DimensionMismatch,
  NonFinite,
  NotOnSphere,
  JunctionMismatch,
  DegenerateSegment,
  BadMargin,
  AntipodalPair,
  EqualPair,
  PoleOfField,
  Uncovered,
  LiftFailure,
  SingleRegion,
  InvalidGerm,
  TooFewPoints,
  AmbiguousAssignment,
  WrongCodomain,
  Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when continuation cannot follow the base path past parameter `t_star`.
class LiftFailure : public Error {
 public:
  LiftFailure(double t_star, const std::string& reason)
      : Error(ErrorCode::LiftFailure, reason + " at t*=" + std::to_string(t_star)),
        t_star_(t_star),
        reason_(reason) {}

  double t_star() const noexcept { return t_star_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  double t_star_;
  std::string reason_;
};

}  // namespace tcplan
