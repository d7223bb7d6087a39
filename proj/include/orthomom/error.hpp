#pragma once

#include <stdexcept>
#include <string>

namespace orthomom {

/// Caller passed an argument outside an operation's contract.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well-formed but numerically meaningless, e.g. asking
/// for more discrete polynomials than there are nodes.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Relative error against an all-zero reference image.
class ZeroReferenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file exists but its content does not parse.
class FormatError : public IoError {
 public:
  enum class Kind { UnsupportedMagic, MalformedHeader, TruncatedPayload, Malformed };

  FormatError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace orthomom
