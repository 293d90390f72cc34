#include <doctest.h>

#include <random>

#include "msgate/pulses.hpp"

using namespace msgate;

TEST_CASE("envelopes") {
  const auto rect = PulseShape::rectangular();
  const auto s2 = PulseShape::sin2();
  for (double t : {0.0, 0.3, 1.0}) CHECK(envelope_at(rect, t) == doctest::Approx(1.0));
  CHECK(envelope_at(s2, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(envelope_at(s2, 0.5) == doctest::Approx(1.0));
  CHECK(envelope_at(s2, 0.25) == doctest::Approx(0.5));
  for (double t = 0; t <= 1; t += 0.0625) {
    CHECK(std::abs(envelope_complex(s2, t).imag()) <= 1e-14);
    const double ref = std::pow(std::sin(M_PI * t), 2);
    CHECK(envelope_at(s2, t) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("sin2 integrates to one half") {
  const auto s2 = PulseShape::sin2();
  const int n = 4000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += envelope_at(s2, (i + 0.5) / n);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s2.coefficients.at(0).real() == 0.5);
}

TEST_CASE("shape validation") {
  CHECK(validate_shape(PulseShape::sin2()).ok());
  CHECK(PulseShape::sin2().max_harmonic() == 1);
  CHECK(PulseShape::rectangular().max_harmonic() == 0);

  PulseShape broken{"broken", {{0, 0.5}, {1, -0.25}}};
  CHECK(validate_shape(broken).has("conjugate_symmetry"));
  CHECK(validate_shape(PulseShape{"zero", {{0, 0.0}}}).has("nonzero"));
  CHECK(validate_shape(PulseShape{"nan", {{0, std::nan("")}}}).has("finite"));

  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    PulseShape s{"random", {{0, g(rng)}}};
    for (int M = 1; M <= 4; ++M) {
      const std::complex<double> c(g(rng), g(rng));
      s.coefficients[M] = c;
      s.coefficients[-M] = std::conj(c);
    }
    CHECK(validate_shape(s).ok());
    CHECK(s.max_harmonic() == 4);
    CHECK(std::abs(envelope_complex(s, 0.37).imag()) <= 1e-13);
  }
}
