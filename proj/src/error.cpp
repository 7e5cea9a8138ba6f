#include "ffba/error.hpp"

namespace ffba {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPrimeP: return "NonPrimeP";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::MissingModulus: return "MissingModulus";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InsufficientPrecision: return "InsufficientPrecision";
    case Errc::InvalidEll: return "InvalidEll";
    case Errc::InvalidSchedule: return "InvalidSchedule";
    case Errc::DegenerateSchedule: return "DegenerateSchedule";
    case Errc::BudgetExhaustedBeforeFirstStage: return "BudgetExhaustedBeforeFirstStage";
    case Errc::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

InsufficientPrecision::InsufficientPrecision(std::size_t needed, const std::string& context)
    : Error(Errc::InsufficientPrecision,
            "insufficient precision: coefficient " + std::to_string(needed) + " is required" +
                (context.empty() ? std::string{} : " (" + context + ")") +
                "; supply a longer prefix or an exact (rational/periodic) source"),
      needed_(needed) {}

}  // namespace ffba
