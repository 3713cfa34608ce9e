#ifndef RPSGMM_ERRORS_HPP
#define RPSGMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rpsgmm {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad CSV cell, bad numeric field). Carries the line
/// number when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long line = -1)
      : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Input violates the declared channel schema or label set.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Two observations share the same (series, day, channel) key.
class DuplicateSampleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A channel has too few observations to interpolate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Series shorter than the minimum length for the requested embedding.
class SeriesTooShortError : public Error {
 public:
  SeriesTooShortError(const std::string& msg, int required_len)
      : Error(msg), required_len_(required_len) {}
  int required_length() const { return required_len_; }

 private:
  int required_len_;
};

/// Covariance matrix failed Cholesky factorization.
class NonPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// A mixture component stayed degenerate after the reset policy.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// Serialized file has an unknown or unsupported format version.
class IncompatibilityError : public Error {
 public:
  using Error::Error;
};

/// Serialized file failed its integrity check.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (open, write, rename).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rpsgmm

#endif  // RPSGMM_ERRORS_HPP
