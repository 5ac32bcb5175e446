#ifndef CKALG_ERRORS_HPP
#define CKALG_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckalg {

// Every failure the library can report. The numeric values double as the
// CLI exit codes, so they must stay stable.
enum class ErrorKind : int {
  Parse = 2,
  ZeroRowOrColumn = 3,
  OrderViolation = 4,
  DimensionMismatch = 5,
  NotAperiodic = 6,
  TooSmall = 7,
  NonCommuting = 8,
  NotAnEndomorphism = 9,
  NotFiniteOrder = 10,
  IdentityFailed = 11,
  ModelInvariantViolated = 12,
  ProbeExceeded = 13,
  IndexOutOfRange = 14,
  MatrixMismatch = 15,
  MixedDegree = 16,
  LevelTooSmall = 17,
  DepthTooSmall = 18,
  ZeroInput = 19,
  NotInCommutant = 20,
  ZeroCorner = 21,
  NotUnitary = 22,
  InvalidGraph = 23,
};

inline std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::ZeroRowOrColumn: return "ZeroRowOrColumn";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotAperiodic: return "NotAperiodic";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::NonCommuting: return "NonCommuting";
    case ErrorKind::NotAnEndomorphism: return "NotAnEndomorphism";
    case ErrorKind::NotFiniteOrder: return "NotFiniteOrder";
    case ErrorKind::IdentityFailed: return "IdentityFailed";
    case ErrorKind::ModelInvariantViolated: return "ModelInvariantViolated";
    case ErrorKind::ProbeExceeded: return "ProbeExceeded";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::MatrixMismatch: return "MatrixMismatch";
    case ErrorKind::MixedDegree: return "MixedDegree";
    case ErrorKind::LevelTooSmall: return "LevelTooSmall";
    case ErrorKind::DepthTooSmall: return "DepthTooSmall";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::NotInCommutant: return "NotInCommutant";
    case ErrorKind::ZeroCorner: return "ZeroCorner";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ckalg

#endif  // CKALG_ERRORS_HPP
