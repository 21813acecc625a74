#pragma once

#include <stdexcept>
#include <string>

namespace tmc {

/// Thrown when Dempster combination meets (numerically) total conflict,
/// i.e. the normalizer 1 - C falls below the guard threshold.
class conflict_error : public std::runtime_error {
 public:
  explicit conflict_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a training loss stops being finite.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tmc
