#pragma once

#include <stdexcept>
#include <string>

namespace lanekit {

// Malformed input files / records. The message names the offending line or key.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scene constraints could not be satisfied within the attempt budget.
class InfeasibleSceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lanekit
