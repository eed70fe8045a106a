#pragma once

#include <stdexcept>
#include <string>

namespace vqclab {

/// Bad or inconsistent user-supplied configuration (CLI exit code 2).
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical invariant (norm, Hermiticity, spectral bound, ...) failed at
/// runtime (CLI exit code 3).
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vqclab
