#pragma once

#include <stdexcept>
#include <string>

namespace crmorse {

// Malformed or inconsistent user input (dimension mismatch, non-Hermitian
// entries, nonpositive weight, schema violations).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// det(R + 2sL) vanishes identically, or a chamber interior is singular.
class DegeneratePencil : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lattice calibration constants are missing, inconsistent with the
// Fourier oracle, or produce non-integer dimensions.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crmorse
