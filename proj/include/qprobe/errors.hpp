#pragma once

#include <stdexcept>
#include <string>

namespace qprobe {

/// A physical or numerical parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The adaptive integrator needed a step below its floor.
class StepUnderflow : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace qprobe
