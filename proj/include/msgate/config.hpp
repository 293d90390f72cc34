#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "msgate/params.hpp"
#include "msgate/pulses.hpp"
#include "msgate/trotter.hpp"

namespace msgate {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// How the drive strength of a series is fixed at each point.
struct AmplitudeSpec {
  enum class Kind { Fixed, LD, Omega2, Omega4, PhysicalMHz };
  Kind kind = Kind::Omega2;
  /// Omega*T for Fixed, Omega in MHz (angular, 1e6 rad/s) for PhysicalMHz.
  double value = 0.0;
};

/// Omega*T for the given point. Throws ConfigError when the requested
/// amplitude does not exist (no real Omega_4, missing trap frequency).
double resolve_amplitude(const AmplitudeSpec& spec, const GateParams& p);

struct SeriesSpec {
  std::string name;
  PulseShape pulse;
  AmplitudeSpec amplitude;
};

enum class SweepAxis { Omega, K, Eta, Nbar };
enum class Metric { Average, Bell, Both };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Omega;
  std::vector<double> grid;
  /// Omega axis only: grid values are MHz instead of Omega*T.
  bool grid_in_mhz = false;
  /// Orders 2..5, and 0 for the Trotter propagator.
  std::vector<int> propagators = {2, 3, 4, 0};
  Metric metric = Metric::Average;
};

struct RunConfig {
  GateParams params;
  std::vector<SeriesSpec> series;
  SweepSpec sweep;
  TrotterConfig trotter;
  /// Magnus order used by `propagate`.
  int order = 4;
  /// K axis with physical amplitudes: keep the gate time T fixed (vary the
  /// trap frequency) instead of keeping the trap frequency fixed.
  bool hold_gate_time = false;
};

/// key = value text with '#' comments and optional [series NAME] sections,
/// or JSON when the path ends in .json.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_json(const std::string& text);

std::string axis_name(SweepAxis a);
std::string propagator_name(int order);

}  // namespace msgate
