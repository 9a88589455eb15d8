#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace geol {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed WKT token stream. Carries the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// WKT type outside the supported set (e.g. GEOMETRYCOLLECTION).
class UnsupportedTypeError : public Error {
 public:
  using Error::Error;
};

/// Structural geometry constraint violated during construction.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a non-empty geometry.
class EmptyGeometryError : public Error {
 public:
  using Error::Error;
};

/// An operation requiring OGC-valid input was handed an invalid geometry.
class InvalidGeometryError : public Error {
 public:
  using Error::Error;
};

/// Relation is undefined for the dimension pair (e.g. crosses for area/area).
class UndefinedRelationError : public Error {
 public:
  using Error::Error;
};

/// HTTP failure or malformed response from a SPARQL endpoint. When raised
/// mid-retrieval, first_missing_index reports where a resumed download must
/// continue; rows before it are already persisted.
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& message) : Error(message) {}
  EndpointError(const std::string& message, std::int64_t first_missing_index)
      : Error(message), first_missing_(first_missing_index) {}

  bool has_first_missing_index() const { return first_missing_ >= 0; }
  std::int64_t first_missing_index() const { return first_missing_; }

 private:
  std::int64_t first_missing_ = -1;
};

/// The endpoint reported a fault in the query itself.
class QueryError : public Error {
 public:
  using Error::Error;
};

/// Persistent store failure (I/O, corrupt metadata).
class StorageError : public Error {
 public:
  using Error::Error;
};

/// read_rows was asked for a range outside the cached coverage. Signals an
/// orchestration bug, not a user error.
class CacheMissError : public Error {
 public:
  using Error::Error;
};

/// Task configuration failed validation; every violation is listed at once.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& vs) {
    std::string out = "invalid configuration:";
    for (const auto& v : vs) {
      out += "\n  - " + v;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Cooperative cancellation (REST DELETE on a running job).
class CancelledError : public Error {
 public:
  CancelledError() : Error("task cancelled") {}
};

}  // namespace geol
