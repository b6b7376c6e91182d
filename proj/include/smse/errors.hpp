#pragma once

#include <stdexcept>
#include <string>

namespace smse {

// Malformed input: bad CSV, invalid indices, out-of-range list counts.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural failures of a model on a dataset. The CLI maps these to exit 2.
class EstimabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonexistentMle : public EstimabilityError {
 public:
  using EstimabilityError::EstimabilityError;
};

class Unidentifiable : public EstimabilityError {
 public:
  using EstimabilityError::EstimabilityError;
};

// Numerical failure of the optimizer; distinct from the structural cases.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smse
