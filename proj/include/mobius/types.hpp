#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mobius {

using Real = long double;
using Complex = std::complex<Real>;

/// Raised for invalid geometric input: wrong dimensions, points off the
/// light cone, non-immersed or fully umbilic surfaces.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mobius
