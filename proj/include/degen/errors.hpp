#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace degen {

// Base class for all failures raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input: config schema violations, parameter-window violations,
// mismatched grids/fields, malformed problem descriptions.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Numeric failure during a solve: singular systems, residuals above
// tolerance, singular resolvent samples.
class SolveError : public Error {
 public:
  explicit SolveError(const std::string& what) : Error(what) {}
};

// Expression-language failure, annotated with the source offset where
// scanning stopped.
class DslError : public Error {
 public:
  DslError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace degen
