#include "msgate/pulses.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace msgate {

PulseShape PulseShape::rectangular() { return {"rect", {{0, 1.0}}}; }

PulseShape PulseShape::sin2() {
  // sin^2(pi tau) = 1/2 - (e^{i2pi tau} + e^{-i2pi tau})/4
  return {"sin2", {{-1, -0.25}, {0, 0.5}, {1, -0.25}}};
}

int PulseShape::max_harmonic() const {
  int h = 0;
  for (const auto& [M, c] : coefficients)
    if (c != 0.0) h = std::max(h, std::abs(M));
  return h;
}

std::complex<double> envelope_complex(const PulseShape& shape, double tau) {
  std::complex<double> sum = 0.0;
  for (const auto& [M, c] : shape.coefficients)
    sum += c * std::polar(1.0, 2.0 * std::numbers::pi * M * tau);
  return sum;
}

double envelope_at(const PulseShape& shape, double tau) {
  return envelope_complex(shape, tau).real();
}

ValidationReport validate_shape(const PulseShape& shape) {
  ValidationReport report;
  bool any = false;
  for (const auto& [M, c] : shape.coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      report.violations.push_back({"finite", "non-finite coefficient", M, 0});
      continue;
    }
    if (c != 0.0) any = true;
    auto it = shape.coefficients.find(-M);
    const std::complex<double> partner =
        it == shape.coefficients.end() ? std::complex<double>(0.0) : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-14) {
      std::ostringstream msg;
      msg << "c_{" << -M << "} != conj(c_{" << M << "})";
      report.violations.push_back({"conjugate_symmetry", msg.str(), M, -M});
    }
  }
  if (!any) report.violations.push_back({"nonzero", "all coefficients vanish", 0, 0});
  return report;
}

}  // namespace msgate
