#pragma once

#include <stdexcept>
#include <string>

namespace vndim {

enum class ErrorKind {
  ContextMismatch,
  CapExceeded,
  EmptySet,
  MalformedCollection,
  PreconditionViolation,
  PostconditionViolation,
  InternalInvariant,
  ExhaustionExhausted,
  BadPrime,
  OracleInconclusive,
  ParseError,
  IoError,
};

inline const char* error_kind_name(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::ContextMismatch: return "context mismatch";
    case ErrorKind::CapExceeded: return "cap exceeded";
    case ErrorKind::EmptySet: return "empty set";
    case ErrorKind::MalformedCollection: return "malformed collection";
    case ErrorKind::PreconditionViolation: return "precondition violation";
    case ErrorKind::PostconditionViolation: return "postcondition violation";
    case ErrorKind::InternalInvariant: return "internal invariant";
    case ErrorKind::ExhaustionExhausted: return "exhaustion exhausted";
    case ErrorKind::BadPrime: return "bad prime";
    case ErrorKind::OracleInconclusive: return "oracle inconclusive";
    case ErrorKind::ParseError: return "parse error";
    case ErrorKind::IoError: return "io error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace vndim
