#pragma once

/// \file
/// Scalar configuration. Every type in the library is templated on the real
/// scalar underlying its complex coefficients; `default_real` is the one place
/// a wider backend (e.g. a quad-precision type with std::complex support) is
/// selected for the convenience aliases.

#include <complex>

namespace flatdual {

using default_real = double;

template <typename Real>
using complex_t = std::complex<Real>;

}  // namespace flatdual
