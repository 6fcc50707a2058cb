#pragma once

#include <stdexcept>
#include <string>

namespace metaeval {

/// Malformed input: files, manifests, matrix shapes, parameter ranges.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation has no defined result (e.g. every group degenerate).
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure (missing file, unwritable directory, ...).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metaeval
