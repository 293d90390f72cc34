#pragma once

#include "msgate/hilbert.hpp"
#include "msgate/params.hpp"
#include "msgate/pulses.hpp"

namespace msgate {

enum class TrotterSampling { Midpoint, LeftEndpoint };

struct TrotterConfig {
  double safety = 10.0;
  TrotterSampling sampling = TrotterSampling::Midpoint;
  /// Explicit step count; 0 derives it from the bound below.
  int steps = 0;
  /// Allows `steps` below the bound (used by convergence studies).
  bool allow_coarse = false;
};

/// Largest |N| = max_harmonic + m_max*K + L of the truncated Hamiltonian.
int max_beat_note(const GateParams& params, const PulseShape& pulse);

/// ceil(2 pi * safety * max|N|).
int min_trotter_steps(const GateParams& params, const PulseShape& pulse, double safety);

/// Step count actually used for a config; throws std::invalid_argument when an
/// explicit count is below the bound and allow_coarse is not set.
int trotter_steps(const GateParams& params, const PulseShape& pulse, const TrotterConfig& config);

/// U_num = prod_n exp(-i H(tau_n) dtau) over N_t equal steps covering [0, 1],
/// later times to the left, with the same m_max-truncated Hamiltonian the
/// Magnus assembly uses.
OperatorMatrix propagate_numeric(const GateParams& params, const PulseShape& pulse, const TrotterConfig& config = {});

/// Same product, but each step uses the full displacement exponential
/// exp(i eta (a e^{-i2piK tau} + a^dag e^{i2piK tau})) on the Fock cutoff
/// instead of the sideband series truncated at m_max.
OperatorMatrix propagate_numeric_exact_displacement(const GateParams& params, const PulseShape& pulse,
                                                    const TrotterConfig& config = {});

/// T*H(tau)/hbar built from the full displacement operator.
OperatorMatrix exact_displacement_hamiltonian(double tau, const GateParams& params, const PulseShape& pulse);

}  // namespace msgate
