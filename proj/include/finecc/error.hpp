#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace finecc {

// Position in a source text, 1-based. line == 0 means "no position".
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class ErrorKind {
  Syntax,
  UnknownClass,
  DuplicateClass,
  InheritanceCycle,
  DuplicateField,
  DuplicateMethod,
  UnknownField,
  UnknownMethod,
  BadPrefixedSend,
  ReservedName,
  DuplicateName,
  UnknownInstance,
  InvalidRequest,
  TransactionState,
  TooLarge,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownClass: return "unknown class";
    case ErrorKind::DuplicateClass: return "duplicate class";
    case ErrorKind::InheritanceCycle: return "inheritance cycle";
    case ErrorKind::DuplicateField: return "duplicate field";
    case ErrorKind::DuplicateMethod: return "duplicate method";
    case ErrorKind::UnknownField: return "unknown field";
    case ErrorKind::UnknownMethod: return "unknown method";
    case ErrorKind::BadPrefixedSend: return "invalid prefixed send";
    case ErrorKind::ReservedName: return "reserved name";
    case ErrorKind::DuplicateName: return "duplicate name";
    case ErrorKind::UnknownInstance: return "unknown instance";
    case ErrorKind::InvalidRequest: return "invalid request";
    case ErrorKind::TransactionState: return "invalid transaction state";
    case ErrorKind::TooLarge: return "too large";
  }
  return "error";
}

// Every user-facing failure (bad input, unknown names, protocol misuse) is
// reported as an Error. Anything else escaping the library is a bug.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, SourcePos pos = {})
      : std::runtime_error(format(kind, message, pos)),
        kind_(kind),
        pos_(pos),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message,
                            SourcePos pos) {
    std::string out;
    if (pos.line != 0) {
      out += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
    }
    out += to_string(kind);
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  SourcePos pos_;
  std::string detail_;
};

}  // namespace finecc
