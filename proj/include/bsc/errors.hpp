#pragma once

#include <stdexcept>
#include <string>

namespace bsc {

/// Violation of an input contract (the caller asked for something the
/// mathematics does not define). The CLI maps these to exit status 2.
class ContractError : public std::runtime_error {
 public:
  enum class Kind {
    NonSymplectic,
    CosFloorViolated,
    BallEscapesPatch,
    WindowEscapesPatch,
    InterpolationDegenerate,
    DegenerateRescale,
    StepUnderflow,
    OutOfRange,
  };

  ContractError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Malformed configuration text.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Parse, UnknownKey, Range };

  ConfigError(Kind kind, int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        kind_(kind),
        line_(line) {}

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  Kind kind_;
  int line_;
};

}  // namespace bsc
