// msgate: sweeps, error budget, validity checks and propagator dumps.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "msgate/budget.hpp"
#include "msgate/config.hpp"
#include "msgate/magnus.hpp"
#include "msgate/sweep.hpp"
#include "msgate/trotter.hpp"

using namespace msgate;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;

struct Options {
  std::string config;
  std::string out;
  int workers = 0;
  int ndim = 0;
  int mmax = 0;
  int order = 0;
};

// Writes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.ndim > 0) cfg.params.n_dim = o.ndim;
  if (o.mmax > 0) cfg.params.m_max = o.mmax;
  if (o.order > 0) {
    if (o.order < 2 || o.order > kMaxMagnusOrder) throw ConfigError("--order must be in [2, 5]");
    cfg.order = o.order;
    std::erase_if(cfg.sweep.propagators, [&](int k) { return k > o.order; });
  }
  return cfg;
}

// Parameters with the drive strength of the first series resolved.
GateParams point_params(const RunConfig& cfg, const SeriesSpec& series) {
  GateParams p = cfg.params;
  p.omega_T = resolve_amplitude(series.amplitude, p);
  return p;
}

int run_check(const Options& o) {
  const RunConfig cfg = load(o);
  static const char* kRules[] = {"eta_range",   "L_positive",  "K_gt_L",          "K=2L",
                                 "omega_T_range", "nbar_range", "m_max_range",     "k_max_range",
                                 "n_dim_range", "trap_freq_range", "jK=lL",        "conjugate_symmetry",
                                 "finite",      "nonzero",     "zero_beat_note"};
  Sink sink(o.out);
  std::ostream& os = sink.stream();
  bool all_ok = true;
  for (const auto& series : cfg.series) {
    GateParams p = cfg.params;
    try {
      p.omega_T = resolve_amplitude(series.amplitude, p);
    } catch (const ConfigError&) {
      // The amplitude is not part of the exclusion rules; leave it at zero.
    }
    const ValidationReport report = validate(p, series.pulse);
    os << "series " << series.name << " (eta=" << p.eta << ", K=" << p.K << ", L=" << p.L << ")\n";
    for (const char* rule : kRules) {
      os << "  " << (report.has(rule) ? "FAIL" : "pass") << "  " << rule;
      for (const auto& v : report.violations)
        if (v.rule == rule) os << "  [" << v.message << "]";
      os << '\n';
    }
    all_ok = all_ok && report.ok();
  }
  os << (all_ok ? "valid\n" : "invalid\n");
  return all_ok ? kOk : kValidationFailure;
}

int run_budget(const Options& o, bool csv) {
  const RunConfig cfg = load(o);
  const SeriesSpec& series = cfg.series.front();
  const GateParams p = point_params(cfg, series);
  const ValidationReport report = validate(p);
  if (!report.ok()) {
    std::cerr << "invalid parameters: " << report.summary() << '\n';
    return kValidationFailure;
  }
  Sink sink(o.out);
  const auto rows = table_rows(p);
  if (csv) {
    render_budget_csv(sink.stream(), rows);
  } else {
    render_budget_text(sink.stream(), p, rows, amplitudes(p));
    if (series.pulse.name == "sin2") {
      const Sin2Forms f = sin2_forms(p);
      sink.stream() << "\nsin2: Omega_LD*T=" << f.omega_LD << " Z2[Jy^2]=" << f.z2_jy2(p, p.omega_T)
                    << " Z2[Jx^2]=" << f.z2_jx2(p, p.omega_T) << " Z3=" << f.z3(p, p.omega_T) << '\n';
    }
  }
  return kOk;
}

int run_sweep_cmd(const Options& o) {
  RunConfig cfg = load(o);
  if (cfg.sweep.grid.empty()) throw ConfigError("sweep needs a grid");
  if (cfg.sweep.propagators.empty()) throw ConfigError("no propagators left after --order");
  const SweepResult result = run_sweep(cfg, o.workers);
  Sink sink(o.out);
  write_sweep_csv(sink.stream(), result);
  for (const auto& r : result.rows)
    if (r.status != "ok") return kValidationFailure;
  return kOk;
}

int run_propagate(const Options& o) {
  const RunConfig cfg = load(o);
  const SeriesSpec& series = cfg.series.front();
  GateParams p = point_params(cfg, series);
  p.k_max = std::max(p.k_max, cfg.order);
  const ValidationReport report = validate(p, series.pulse);
  if (!report.ok()) {
    std::cerr << "invalid parameters: " << report.summary() << '\n';
    return kValidationFailure;
  }
  const DysonExpansion dyson(p, series.pulse, cfg.order);
  Sink sink(o.out);
  std::ostream& os = sink.stream();
  os << "propagator,row,col,re,im\n";
  auto dump = [&](const std::string& name, const OperatorMatrix& U) {
    for (int r = 0; r < U.rows(); ++r)
      for (int c = 0; c < U.cols(); ++c)
        os << name << ',' << r << ',' << c << ',' << format_number(U(r, c).real()) << ','
           << format_number(U(r, c).imag()) << '\n';
  };
  for (int k = 2; k <= cfg.order; ++k) dump(propagator_name(k), dyson.propagator(k, p.omega_T).matrix);
  dump("Unum", propagate_numeric(p, series.pulse, cfg.trotter));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Molmer-Sorensen gate Magnus-expansion toolkit"};
  app.require_subcommand(1);
  Options o;
  bool csv = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", o.config, "Config file (key = value or .json)")->required();
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--workers", o.workers, "Worker threads (default: OpenMP)")->check(CLI::NonNegativeNumber);
    sub->add_option("--ndim", o.ndim, "Fock truncation override")->check(CLI::PositiveNumber);
    sub->add_option("--mmax", o.mmax, "Sideband truncation override")->check(CLI::PositiveNumber);
    sub->add_option("--order", o.order, "Highest Magnus order")->check(CLI::Range(2, 5));
  };
  auto* sweep = app.add_subcommand("sweep", "Infidelity sweep to CSV");
  auto* budget = app.add_subcommand("budget", "Analytic error budget");
  auto* check = app.add_subcommand("check", "Resonance-exclusion checks");
  auto* propagate = app.add_subcommand("propagate", "Dump U_2..U_order and U_num as CSV");
  for (auto* sub : {sweep, budget, check, propagate}) add_common(sub);
  budget->add_flag("--csv", csv, "CSV instead of a text table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sweep) return run_sweep_cmd(o);
    if (*budget) return run_budget(o, csv);
    if (*check) return run_check(o);
    if (*propagate) return run_propagate(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
