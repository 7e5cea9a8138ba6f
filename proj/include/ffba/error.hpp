#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ffba {

enum class Errc {
  NonPrimeP,
  ReducibleModulus,
  MissingModulus,
  FieldTooLarge,
  DivisionByZero,
  InsufficientPrecision,
  InvalidEll,
  InvalidSchedule,
  DegenerateSchedule,
  BudgetExhaustedBeforeFirstStage,
  TooLargeToEnumerate,
  InvalidArgument,
  Parse,
};

const char* errc_name(Errc code) noexcept;

/// Base of every error raised by the library. The code identifies the failure
/// class; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// A coefficient past the guarantee of its source was requested.
class InsufficientPrecision : public Error {
 public:
  explicit InsufficientPrecision(std::size_t needed, const std::string& context = {});
  /// 1-based index of the first coefficient that could not be supplied.
  std::size_t needed() const noexcept { return needed_; }

 private:
  std::size_t needed_;
};

}  // namespace ffba
