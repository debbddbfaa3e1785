#pragma once

#include <stdexcept>
#include <string>

namespace kacjl {

enum class ErrorCode {
  Dimension,     // d < 2 for a walk, length mismatch, index out of range
  Range,         // k > d, K > d, s > d
  Parameter,     // epsilon / n / probability outside their domain
  Cap,           // dense or enumeration cap exceeded
  NotSymmetric,  // symmetric-walk routine called with ORA
  MagicMismatch,
  PayloadShort,
  NonNumeric,
  RaggedRows,
  Io,
  Format,        // malformed JSON / unknown enum tag
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Range: return "range";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Cap: return "cap exceeded";
    case ErrorCode::NotSymmetric: return "walk not symmetric";
    case ErrorCode::MagicMismatch: return "magic mismatch";
    case ErrorCode::PayloadShort: return "payload short";
    case ErrorCode::NonNumeric: return "non-numeric field";
    case ErrorCode::RaggedRows: return "ragged rows";
    case ErrorCode::Io: return "io";
    case ErrorCode::Format: return "format";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kacjl
