#ifndef FOCALE_ERRORS_HPP
#define FOCALE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace focale {

/// Base error. `kind()` carries a stable machine-checkable tag
/// (e.g. "UnbalancedTag", "ZeroSupport") next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Error tied to a position in parsed text: a character offset for inline
/// annotation / pattern syntax, a line number for TSV-style row formats.
class ParseError : public Error {
 public:
  ParseError(std::string kind, std::size_t offset, const std::string& message)
      : Error(std::move(kind), message + " (at " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Violated numeric/structural precondition (hypergeometric domain,
/// span out of range, too few documents, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace focale

#endif  // FOCALE_ERRORS_HPP
