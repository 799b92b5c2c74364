#pragma once

#include <stdexcept>
#include <string>

namespace btlab {

// Error kinds raised by the library; the CLI maps them to exit codes.
enum class ErrorKind {
  RadiusExceedsPrecision,
  NonEisensteinPolynomial,
  MixedContexts,
  NonUnitInverse,
  ReducibleExtension,
  KindConstraintViolated,
  NotDyadic,
  InsufficientPrecision,
  BadHasse,
  BadLevel,
  RegimeMismatch,
  WrongShape,
  IndexOutOfRange,
  IncompatibleLevels,
  BudgetExceeded,
  CapExceedsPrecision,
  NoWitness,
  UnknownCheck,
  BadInput,
};

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::RadiusExceedsPrecision: return "RadiusExceedsPrecision";
    case ErrorKind::NonEisensteinPolynomial: return "NonEisensteinPolynomial";
    case ErrorKind::MixedContexts: return "MixedContexts";
    case ErrorKind::NonUnitInverse: return "NonUnitInverse";
    case ErrorKind::ReducibleExtension: return "ReducibleExtension";
    case ErrorKind::KindConstraintViolated: return "KindConstraintViolated";
    case ErrorKind::NotDyadic: return "NotDyadic";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::BadHasse: return "BadHasse";
    case ErrorKind::BadLevel: return "BadLevel";
    case ErrorKind::RegimeMismatch: return "RegimeMismatch";
    case ErrorKind::WrongShape: return "WrongShape";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::IncompatibleLevels: return "IncompatibleLevels";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::CapExceedsPrecision: return "CapExceedsPrecision";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::UnknownCheck: return "UnknownCheck";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace btlab
