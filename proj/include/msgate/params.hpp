#pragma once

#include <optional>
#include <string>
#include <vector>

namespace msgate {

/// Dimensionless configuration of a two-ion Molmer-Sorensen gate.
///
/// Time is measured in units of the gate duration T, so K = nu*T/2pi is the
/// trap frequency and L = delta*T/2pi the laser detuning, both as integers.
/// The drive strength enters only as omega_T = Omega*T.
struct GateParams {
  double eta = 0.18;
  int K = 28;
  int L = 25;
  double omega_T = 0.0;
  double nbar = 0.0;
  int n_dim = 8;
  int m_max = 3;
  int k_max = 4;
  /// Trap frequency nu/2pi in Hz; only used to convert physical amplitudes.
  std::optional<double> trap_freq;

  int dim() const { return 4 * n_dim; }
  /// Gate duration in microseconds, T = K / (nu/2pi). Requires trap_freq.
  double gate_time_us() const;
};

struct Violation {
  std::string rule;
  std::string message;
  int j = 0;
  int l = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& rule) const;
  std::string summary() const;
};

/// Checks every structural and resonance-exclusion rule. Never throws; the
/// report lists each failure in a fixed order.
ValidationReport validate(const GateParams& params);

/// Integer beat-note index M + m*K + mu*L.
int beat_note(int M, int m, int mu, const GateParams& params);

}  // namespace msgate
