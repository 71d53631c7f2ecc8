#pragma once

#include <stdexcept>
#include <string>

namespace dtc {

// Invalid inputs are reported with std::invalid_argument. The types below
// cover failures that happen after the inputs were accepted.

/// An iterative solver did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The transverse mode matrix has a non-positive eigenvalue (zigzag).
class ChainUnstable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A statistical procedure produced too few usable samples.
class AnalysisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtc
