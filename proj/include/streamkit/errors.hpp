#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace streamkit {

/// Library error with a machine-readable category.
///
/// Categories used across the library:
///   "parse"        malformed input text (carries a line number where known)
///   "validation"   structurally valid input with an illegal value
///   "model"        operation not allowed under the sketch's stream model
///   "merge"        merge attempted between incompatible sketches
///   "solver"       linear system cannot be solved as posed
///   "shape"        dimension/length requirement violated
///   "domain"       argument outside the declared domain
///   "convergence"  iteration cap reached without meeting the tolerance
class Error : public std::runtime_error {
public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

private:
  std::string category_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse", "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace streamkit
