#pragma once

#include <complex>
#include <map>
#include <string>

#include "msgate/params.hpp"

namespace msgate {

/// Drive envelope on tau in [0, 1] as a finite Fourier series
/// sum_M c_M exp(i 2 pi M tau), scaled so the overall amplitude is omega_T.
struct PulseShape {
  std::string name;
  std::map<int, std::complex<double>> coefficients;

  static PulseShape rectangular();
  static PulseShape sin2();

  /// Largest |M| with a nonzero coefficient.
  int max_harmonic() const;
};

double envelope_at(const PulseShape& shape, double tau);

/// Complex envelope value; the imaginary part vanishes for symmetric maps.
std::complex<double> envelope_complex(const PulseShape& shape, double tau);

/// Checks c_{-M} = conj(c_M) to 1e-14 and that at least one coefficient is
/// nonzero.
ValidationReport validate_shape(const PulseShape& shape);

}  // namespace msgate
