#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "msgate/hilbert.hpp"

namespace msgate {

inline constexpr double kBellTargetPhase = -std::numbers::pi / 2;
inline constexpr double kTargetAngle = std::numbers::pi / 2;

/// Thermal occupation P_n = nbar^n / (nbar+1)^{n+1} for n < n_dim. The tail
/// beyond the cutoff is reported, never folded back in.
struct ThermalWeights {
  double nbar = 0.0;
  std::vector<double> weights;
  double tail_mass = 0.0;

  static ThermalWeights thermal(double nbar, int n_dim);
};

struct FidelityResult {
  double bell = 0.0;
  double average = 0.0;
  double tail_mass = 0.0;
};

/// <psi_t| Tr_motion{U (|00><00| (x) sum_n P_n |n><n|) U^dag} |psi_t>,
/// psi_t = (|00> + e^{i phi}|11>)/sqrt(2).
double bell_fidelity(const OperatorMatrix& U, const ThermalWeights& w, double target_phase = kBellTargetPhase);

/// (1/4) |Tr_qubits sum_n P_n <n| U U_target^dag |n>|, U_target = exp(i phi Jy^2).
double average_fidelity(const OperatorMatrix& U, const ThermalWeights& w, double target_angle = kTargetAngle);

/// 1/2 sum_n P_n (1 - sin(phi) sin(d_x^(n) - d_y^(n))) for Fock-diagonal
/// generators d_x Jx^2 + d_y Jy^2.
double closed_form_bell(std::span<const double> dx_by_n, std::span<const double> dy_by_n, const ThermalWeights& w,
                        double target_phase = kBellTargetPhase);

FidelityResult evaluate_fidelity(const OperatorMatrix& U, const ThermalWeights& w);

}  // namespace msgate
