#include "msgate/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include <omp.h>

#include "msgate/fidelity.hpp"
#include "msgate/magnus.hpp"
#include "msgate/trotter.hpp"

namespace msgate {
namespace {

int max_magnus_order(const SweepSpec& spec) {
  int k = 0;
  for (int p : spec.propagators) k = std::max(k, p);
  return k;
}

bool wants_trotter(const SweepSpec& spec) {
  return std::find(spec.propagators.begin(), spec.propagators.end(), 0) != spec.propagators.end();
}

void record(SweepRow& row, int slot, const OperatorMatrix& U, const ThermalWeights& w, Metric metric) {
  if (metric != Metric::Bell) row.average[slot] = 1.0 - average_fidelity(U, w);
  if (metric != Metric::Average) row.bell[slot] = 1.0 - bell_fidelity(U, w);
}

SweepRow evaluate_point(const RunConfig& cfg, const SeriesSpec& series, double axis_value,
                        const DysonExpansion* shared) {
  const SweepSpec& spec = cfg.sweep;
  SweepRow row;
  row.series = series.name;
  row.axis = axis_value;
  GateParams p = params_at(cfg, axis_value);
  const int order = max_magnus_order(spec);
  p.k_max = std::max(p.k_max, order);

  // Amplitudes and the drive strength are needed even for rows that get skipped.
  ValidationReport report = validate(p, series.pulse);
  if (report.ok() || !report.has("K_gt_L")) row.amplitudes = amplitudes(p);
  try {
    if (spec.axis == SweepAxis::Omega)
      p.omega_T = spec.grid_in_mhz ? resolve_amplitude({AmplitudeSpec::Kind::PhysicalMHz, axis_value}, p) : axis_value;
    else
      p.omega_T = resolve_amplitude(series.amplitude, p);
  } catch (const ConfigError&) {
    report.violations.push_back({"amplitude", "amplitude undefined", 0, 0});
  }
  row.omega_T = p.omega_T;
  if (!report.ok()) {
    row.status = "skip:";
    for (std::size_t i = 0; i < report.violations.size(); ++i)
      row.status += (i ? "|" : "") + report.violations[i].rule;
    return row;
  }

  const ThermalWeights w = ThermalWeights::thermal(p.nbar, p.n_dim);
  row.tail_mass = w.tail_mass;
  if (order >= 2) {
    std::unique_ptr<DysonExpansion> local;
    if (!shared) local = std::make_unique<DysonExpansion>(p, series.pulse, order);
    const DysonExpansion& dyson = shared ? *shared : *local;
    for (int k : spec.propagators)
      if (k >= 2) record(row, k, dyson.propagator(k, p.omega_T).matrix, w, spec.metric);
  }
  if (wants_trotter(spec)) record(row, 0, propagate_numeric(p, series.pulse, cfg.trotter), w, spec.metric);
  return row;
}

void write_cell(std::ostream& os, const std::optional<double>& v) {
  os << ',';
  if (v) os << format_number(*v);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

GateParams params_at(const RunConfig& cfg, double v) {
  GateParams p = cfg.params;
  switch (cfg.sweep.axis) {
    case SweepAxis::Omega: break;
    case SweepAxis::K: {
      const int gap = cfg.params.K - cfg.params.L;
      p.K = static_cast<int>(std::lround(v));
      p.L = p.K - gap;
      if (cfg.hold_gate_time && p.trap_freq) *p.trap_freq = *cfg.params.trap_freq * p.K / cfg.params.K;
      break;
    }
    case SweepAxis::Eta: p.eta = v; break;
    case SweepAxis::Nbar: p.nbar = v; break;
  }
  return p;
}

SweepResult run_sweep(const RunConfig& cfg, int workers) {
  SweepResult result{cfg.sweep, {}};
  const auto& grid = cfg.sweep.grid;
  const int n = static_cast<int>(grid.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const int order = max_magnus_order(cfg.sweep);

  for (const auto& series : cfg.series) {
    // Along the omega axis every point shares one expansion, rescaled per point.
    std::unique_ptr<DysonExpansion> shared;
    if (cfg.sweep.axis == SweepAxis::Omega && order >= 2) {
      GateParams p = cfg.params;
      p.k_max = std::max(p.k_max, order);
      if (validate(p, series.pulse).ok()) shared = std::make_unique<DysonExpansion>(p, series.pulse, order);
    }
    std::vector<SweepRow> rows(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < n; ++i) {
      try {
        rows[i] = evaluate_point(cfg, series, grid[i], shared.get());
      } catch (const std::exception&) {
        rows[i].series = series.name;
        rows[i].axis = grid[i];
        rows[i].status = "skip:error";
      }
    }
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  static constexpr int kOrder[] = {2, 3, 4, 5, 0};
  const bool both = result.spec.metric == Metric::Both;
  os << "series,axis,omega_T";
  for (int k : kOrder) os << ",infid_" << propagator_name(k);
  if (both)
    for (int k : kOrder) os << ",bell_infid_" << propagator_name(k);
  os << ",omega_LD,omega_2,omega_4,tail_mass,status\n";
  for (const auto& r : result.rows) {
    os << r.series << ',' << format_number(r.axis) << ',' << format_number(r.omega_T);
    for (int k : kOrder) write_cell(os, result.spec.metric == Metric::Bell ? r.bell[k] : r.average[k]);
    if (both)
      for (int k : kOrder) write_cell(os, r.bell[k]);
    const bool have_amps = r.amplitudes.omega_LD != 0.0;
    write_cell(os, have_amps ? std::optional<double>(r.amplitudes.omega_LD) : std::nullopt);
    write_cell(os, have_amps ? std::optional<double>(r.amplitudes.omega_2) : std::nullopt);
    write_cell(os, r.amplitudes.omega_4);
    os << ',' << format_number(r.tail_mass) << ',' << r.status << '\n';
  }
}

}  // namespace msgate
