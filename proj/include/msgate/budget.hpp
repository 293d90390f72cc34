#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msgate/params.hpp"
#include "msgate/pulses.hpp"

namespace msgate {

/// Calibrated drive strengths, all as Omega*T.
struct AmplitudeSet {
  double omega_LD = 0.0;
  double omega_2 = 0.0;
  /// Empty when s^2 < K^2 - L^2 (no real root).
  std::optional<double> omega_4;
  double s = 0.0;
  /// Residual of the fourth-order calibration quadratic at omega_4.
  double quadratic_residual = 0.0;
};

double omega_ld(const GateParams& p);
double omega_2(const GateParams& p);
std::optional<double> omega_4(const GateParams& p);
/// s = sqrt(2K) L eta (1 - eta^2).
double s_parameter(const GateParams& p);
AmplitudeSet amplitudes(const GateParams& p);

/// Jy^2 prefactor from gate + first-sideband Z2 (n = 0) + Z4 Jy^2 terms.
double combined_dy(const GateParams& p, double omega_T);
/// combined_dy + pi/2; zero at the fourth-order amplitude.
double quadratic_residual(const GateParams& p, double omega_T);

enum class BudgetTerm { Gate, Z2_m1, Z2_m2, Z3_m1, Z3_m2, Z4_m1_Jxy, Z4_m1_Jz2, Z4_m1_Jy2 };

struct BudgetRow {
  BudgetTerm term;
  std::string label;
  std::string op;
  double generic = 0.0;
  double at_LD = 0.0;
  /// NaN when omega_4 does not exist.
  double at_O4 = 0.0;
};

const std::vector<BudgetTerm>& all_budget_terms();
std::string budget_label(BudgetTerm t);
std::string budget_operator(BudgetTerm t);

/// Rectangular-pulse coefficient of term `t` at drive strength omega_T for
/// Fock level n.
double budget_generic(BudgetTerm t, const GateParams& p, double omega_T, int n = 0);
/// Closed-form coefficient at omega_LD / omega_4, transcribed as tabulated.
double budget_at_ld(BudgetTerm t, const GateParams& p, int n = 0);
double budget_at_o4(BudgetTerm t, const GateParams& p, int n = 0);

/// All eight rows with generic coefficients at p.omega_T.
std::vector<BudgetRow> table_rows(const GateParams& p, int n = 0);

void render_budget_text(std::ostream& os, const GateParams& p, const std::vector<BudgetRow>& rows,
                        const AmplitudeSet& amps);
void render_budget_csv(std::ostream& os, const std::vector<BudgetRow>& rows);

/// Closed forms for the sin^2 envelope.
struct Sin2Forms {
  double p_y = 0, q_y = 0, p_x = 0, q_x = 0, p_3 = 0, q_3 = 0;
  double omega_LD = 0.0;  ///< Omega_LD*T for sin^2

  /// Jy^2 / Jx^2 coefficients of Z2 at drive omega_T, level n.
  double z2_jy2(const GateParams& p, double omega_T, int n = 0) const;
  double z2_jx2(const GateParams& p, double omega_T, int n = 0) const;
  /// Jy(a + a^dag) coefficient of Z3.
  double z3(const GateParams& p, double omega_T) const;
};

Sin2Forms sin2_forms(const GateParams& p);

struct Calibration {
  double omega_T = 0.0;
  double infidelity = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization of the average infidelity of U_order over
/// omega_T in [lo, hi]. Intended for shaped pulses without closed forms.
Calibration calibrate_amplitude(const GateParams& p, const PulseShape& pulse, double lo, double hi, int order = 4,
                                double tol = 1e-6);

}  // namespace msgate
