#pragma once

#include <array>
#include <optional>
#include <vector>

#include "msgate/hilbert.hpp"
#include "msgate/params.hpp"
#include "msgate/pulses.hpp"

namespace msgate {

inline constexpr int kMaxMagnusOrder = 5;

struct MagnusTerm {
  int order = 0;
  OperatorMatrix matrix;
};

struct TruncatedPropagator {
  int order = 0;
  OperatorMatrix matrix;
};

/// Parameters plus pulse with every beat-note nonzero; otherwise Z_1 does not
/// vanish and the Dyson-to-Magnus relations used here do not apply.
ValidationReport validate(const GateParams& params, const PulseShape& pulse);

/// Dyson terms P_k for k = 1..max_order at unit drive strength. Since P_k is
/// homogeneous of degree k in omega_T, every quantity at another amplitude is
/// a rescaling, so one expansion serves a whole amplitude sweep.
class DysonExpansion {
 public:
  /// Assembles P_1..P_max_order with the grouped, OpenMP-parallel kernel.
  DysonExpansion(const GateParams& params, const PulseShape& pulse, int max_order);

  int max_order() const { return static_cast<int>(unit_.size()); }
  int dim() const { return dim_; }

  /// P_k at the given drive strength.
  OperatorMatrix dyson(int k, double omega_T) const;
  /// Z_k from the Dyson terms (Z_1 = i P_1 is returned for k = 1).
  OperatorMatrix magnus(int k, double omega_T) const;
  std::vector<MagnusTerm> magnus_terms(int up_to, double omega_T) const;
  /// U_n = exp(-i sum_{k=2}^n Z_k).
  TruncatedPropagator propagator(int n, double omega_T) const;

 private:
  int dim_ = 0;
  std::vector<OperatorMatrix> unit_;
};

/// P_k at params.omega_T via the grouped parallel kernel.
OperatorMatrix dyson_term(int k, const GateParams& params, const PulseShape& pulse);

/// Serial reference: enumerates every (M_j, m_j, mu_j) tuple, prunes by
/// is_resonant and multiplies J_m A_m factors one tuple at a time. Kept for
/// cross-checking the grouped kernel.
OperatorMatrix dyson_term_reference(int k, const GateParams& params, const PulseShape& pulse);

/// Unit-strength sum over resonant beat-note tuples of I * H_{N_1}...H_{N_k}
/// (no (-i)^k factor). Exposed for the benchmark; `threads` <= 0 uses the
/// OpenMP default.
OperatorMatrix resonant_operator_sum(const FactoredHamiltonian& H, int k, int threads = 0);

std::vector<MagnusTerm> magnus_terms(const GateParams& params, const PulseShape& pulse, int up_to);
TruncatedPropagator propagator(const GateParams& params, const PulseShape& pulse, int order);

}  // namespace msgate
