#pragma once

#include <stdexcept>

namespace qkdcert {

// Observed statistics violate the proven phase-error constraint even at its
// maximum; the protocol run must be aborted.
class inconsistent_statistics : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A tally cell required for parameter estimation is empty.
class insufficient_statistics : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkdcert
