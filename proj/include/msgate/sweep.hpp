#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msgate/budget.hpp"
#include "msgate/config.hpp"

namespace msgate {

struct SweepRow {
  std::string series;
  double axis = 0.0;
  double omega_T = 0.0;
  /// Indexed by propagator order (0 = Trotter, 2..5 = Magnus); empty when
  /// not requested or the point was skipped.
  std::optional<double> average[6];
  std::optional<double> bell[6];
  AmplitudeSet amplitudes;
  double tail_mass = 0.0;
  /// "ok" or "skip:<rules>".
  std::string status = "ok";
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
};

/// Parameters at one grid value of the sweep axis. The K axis keeps K - L
/// fixed; the omega axis leaves params untouched (the grid sets omega_T).
GateParams params_at(const RunConfig& cfg, double axis_value);

/// Evaluates every series at every grid point. Points run concurrently on
/// `workers` threads (<= 0: OpenMP default); rows come back in grid order.
SweepResult run_sweep(const RunConfig& cfg, int workers = 0);

/// Fixed-precision CSV (12 significant digits).
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// %.12g formatting used by every CSV writer.
std::string format_number(double v);

}  // namespace msgate
