#include "msgate/budget.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "msgate/fidelity.hpp"
#include "msgate/magnus.hpp"

namespace msgate {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Shorthand {
  double K, L, eta, D, D4, KL4;
  explicit Shorthand(const GateParams& p)
      : K(p.K), L(p.L), eta(p.eta), D(K * K - L * L), D4(4 * K * K - L * L), KL4(K * K - 4 * L * L) {}
};

// s - sqrt(s^2 - D), or NaN without a real root.
double s_minus_r(const GateParams& p) {
  const double s = s_parameter(p);
  const double D = double(p.K) * p.K - double(p.L) * p.L;
  if (s * s < D) return nan;
  return s - std::sqrt(s * s - D);
}

}  // namespace

double s_parameter(const GateParams& p) { return std::sqrt(2.0 * p.K) * p.L * p.eta * (1.0 - p.eta * p.eta); }

double omega_ld(const GateParams& p) {
  const Shorthand c(p);
  return pi * std::sqrt(c.D) / (c.eta * std::sqrt(2.0 * c.K));
}

double omega_2(const GateParams& p) {
  const Shorthand c(p);
  const double den = 2.0 * c.K * (c.eta * c.eta * (2 * c.L * c.L - 5 * c.K * c.K) + c.D4);
  return pi / c.eta * std::sqrt(c.D * c.D4 / den);
}

std::optional<double> omega_4(const GateParams& p) {
  const double sr = s_minus_r(p);
  if (std::isnan(sr)) return std::nullopt;
  const double x = std::sqrt(2.0) * pi * pi * p.L * sr / (std::sqrt(double(p.K)) * p.eta);
  if (!(x > 0)) return std::nullopt;
  return std::sqrt(x);
}

AmplitudeSet amplitudes(const GateParams& p) {
  AmplitudeSet a;
  a.omega_LD = omega_ld(p);
  a.omega_2 = omega_2(p);
  a.omega_4 = omega_4(p);
  a.s = s_parameter(p);
  a.quadratic_residual = a.omega_4 ? quadratic_residual(p, *a.omega_4) : nan;
  return a;
}

double combined_dy(const GateParams& p, double omega_T) {
  const Shorthand c(p);
  const double x = omega_T * omega_T;
  const double e2 = c.eta * c.eta;
  return -x * c.K * e2 * (1 - e2) / (pi * c.D) + x * x * c.K * e2 / (4 * pi * pi * pi * c.L * c.L * c.D);
}

double quadratic_residual(const GateParams& p, double omega_T) { return combined_dy(p, omega_T) + pi / 2; }

const std::vector<BudgetTerm>& all_budget_terms() {
  static const std::vector<BudgetTerm> terms = {BudgetTerm::Gate,      BudgetTerm::Z2_m1,     BudgetTerm::Z2_m2,
                                                BudgetTerm::Z3_m1,     BudgetTerm::Z3_m2,     BudgetTerm::Z4_m1_Jxy,
                                                BudgetTerm::Z4_m1_Jz2, BudgetTerm::Z4_m1_Jy2};
  return terms;
}

std::string budget_label(BudgetTerm t) {
  switch (t) {
    case BudgetTerm::Gate: return "Gate";
    case BudgetTerm::Z2_m1: return "Z2_m1";
    case BudgetTerm::Z2_m2: return "Z2_m2";
    case BudgetTerm::Z3_m1: return "Z3_m1";
    case BudgetTerm::Z3_m2: return "Z3_m2";
    case BudgetTerm::Z4_m1_Jxy: return "Z4_m1_Jxy";
    case BudgetTerm::Z4_m1_Jz2: return "Z4_m1_Jz2";
    case BudgetTerm::Z4_m1_Jy2: return "Z4_m1_Jy2";
  }
  return "?";
}

std::string budget_operator(BudgetTerm t) {
  switch (t) {
    case BudgetTerm::Gate:
    case BudgetTerm::Z2_m1:
    case BudgetTerm::Z4_m1_Jy2: return "Jy^2";
    case BudgetTerm::Z2_m2: return "Jx^2";
    case BudgetTerm::Z3_m1: return "Jy(a+a^dag)";
    case BudgetTerm::Z3_m2: return "Jx(1-Jy^2)(a^2-a^dag^2)";
    case BudgetTerm::Z4_m1_Jxy: return "Jxy(a+a^dag)";
    case BudgetTerm::Z4_m1_Jz2: return "Jz^2";
  }
  return "?";
}

double budget_generic(BudgetTerm t, const GateParams& p, double omega_T, int n) {
  const Shorthand c(p);
  const double x = omega_T * omega_T;
  const double e = c.eta, K = c.K, L = c.L, D = c.D;
  const double nn = 2.0 * n + 1;
  switch (t) {
    case BudgetTerm::Gate: return -K * x * e * e / (pi * D);
    case BudgetTerm::Z2_m1: return K * x * std::pow(e, 4) * nn / (pi * D);
    case BudgetTerm::Z2_m2: return -K * x * std::pow(e, 4) * nn / (pi * c.D4);
    case BudgetTerm::Z3_m1: return -2 * K * K * x * omega_T * std::pow(e, 5) / (pi * pi * D * D);
    case BudgetTerm::Z3_m2: return K * K * x * omega_T * std::pow(e, 4) / (pi * pi * c.D4 * D);
    case BudgetTerm::Z4_m1_Jxy: return K * x * x * std::pow(e, 3) / (std::pow(pi, 3) * c.KL4 * D);
    case BudgetTerm::Z4_m1_Jz2: return -K * x * x * e * e / (4 * std::pow(pi, 3) * L * L * c.KL4);
    case BudgetTerm::Z4_m1_Jy2: return K * x * x * e * e / (4 * std::pow(pi, 3) * L * L * D);
  }
  return nan;
}

double budget_at_ld(BudgetTerm t, const GateParams& p, int n) {
  const Shorthand c(p);
  const double e = c.eta, K = c.K, L = c.L, D = c.D;
  const double nn = 2.0 * n + 1;
  switch (t) {
    case BudgetTerm::Gate: return -pi / 2;
    case BudgetTerm::Z2_m1: return pi * e * e * nn / 2;
    case BudgetTerm::Z2_m2: return -pi * e * e * D * nn / (2 * c.D4);
    case BudgetTerm::Z3_m1: return -pi * e * e * std::sqrt(K / (2 * D));
    // Tabulated with eta^1, which does not follow from the generic column.
    case BudgetTerm::Z3_m2: return pi * e / 2 * std::sqrt(K / (2 * D * c.D4));
    case BudgetTerm::Z4_m1_Jxy: return pi * D / (4 * K * e * c.KL4);
    case BudgetTerm::Z4_m1_Jz2: return -pi * D * D / (16 * K * L * L * e * e * c.KL4);
    case BudgetTerm::Z4_m1_Jy2: return pi * D / (16 * K * L * L * e * e);
  }
  return nan;
}

double budget_at_o4(BudgetTerm t, const GateParams& p, int n) {
  const Shorthand c(p);
  const double e = c.eta, K = c.K, L = c.L, D = c.D;
  const double nn = 2.0 * n + 1;
  const double s = s_parameter(p);
  const double sr = s_minus_r(p);
  if (std::isnan(sr)) return nan;
  const double r = s - sr;
  switch (t) {
    case BudgetTerm::Gate: return -std::sqrt(2 * K) * pi * L * e * sr / D;
    case BudgetTerm::Z2_m1: return std::sqrt(2 * K) * pi * L * std::pow(e, 3) * nn * sr / D;
    case BudgetTerm::Z2_m2: return -std::sqrt(2 * K) * pi * L * std::pow(e, 3) * nn * sr / c.D4;
    case BudgetTerm::Z3_m1:
      return -std::pow(2.0, 1.75) * pi * std::pow(K, 1.25) * std::pow(L, 1.5) * std::pow(e, 3.5) * std::pow(sr, 1.5) /
             (D * D);
    case BudgetTerm::Z3_m2:
      return -std::pow(2.0, 0.75) * pi * std::pow(K, 1.25) * std::pow(L, 1.5) * std::pow(e, 2.5) * std::pow(sr, 1.5) /
             (c.D4 * D);
    // Denominator carries L^4 as tabulated.
    case BudgetTerm::Z4_m1_Jxy: return 2 * pi * L * L * e * sr * sr / (D * (K * K - 4 * std::pow(L, 4)));
    case BudgetTerm::Z4_m1_Jz2: return pi * (D - 2 * s * s + 2 * s * r) / (2 * c.KL4);
    case BudgetTerm::Z4_m1_Jy2: return -pi / 2 + pi * s * sr / D;
  }
  return nan;
}

std::vector<BudgetRow> table_rows(const GateParams& p, int n) {
  std::vector<BudgetRow> rows;
  for (BudgetTerm t : all_budget_terms())
    rows.push_back({t, budget_label(t), budget_operator(t), budget_generic(t, p, p.omega_T, n), budget_at_ld(t, p, n),
                    budget_at_o4(t, p, n)});
  return rows;
}

void render_budget_text(std::ostream& os, const GateParams& p, const std::vector<BudgetRow>& rows,
                        const AmplitudeSet& amps) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "eta=" << p.eta << " K=" << p.K << " L=" << p.L << " Omega*T=" << p.omega_T << "\n";
  out << "Omega_LD*T=" << amps.omega_LD << " Omega_2*T=" << amps.omega_2 << " Omega_4*T=";
  if (amps.omega_4)
    out << *amps.omega_4;
  else
    out << "n/a";
  out << " s=" << amps.s << "\n\n";
  out << std::left << std::setw(11) << "term" << std::setw(26) << "operator" << std::right << std::setw(15)
      << "generic" << std::setw(15) << "at_LD" << std::setw(15) << "at_O4" << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(11) << r.label << std::setw(26) << r.op << std::right << std::setw(15) << r.generic
        << std::setw(15) << r.at_LD << std::setw(15) << r.at_O4 << "\n";
  }
  os << out.str();
}

void render_budget_csv(std::ostream& os, const std::vector<BudgetRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "label,operator,generic,at_LD,at_O4\n";
  for (const auto& r : rows)
    out << r.label << ',' << r.op << ',' << r.generic << ',' << r.at_LD << ',' << r.at_O4 << '\n';
  os << out.str();
}

double Sin2Forms::z2_jy2(const GateParams& p, double omega_T, int n) const {
  const double e2 = p.eta * p.eta;
  return p.K * omega_T * omega_T * e2 / pi * (p_y / q_y) * (1 - (2.0 * n + 1) * e2);
}

double Sin2Forms::z2_jx2(const GateParams& p, double omega_T, int n) const {
  const double e2 = p.eta * p.eta;
  return p.K * omega_T * omega_T * e2 / pi * (p_x / q_x) * (2.0 * n + 1) * e2;
}

double Sin2Forms::z3(const GateParams& p, double omega_T) const {
  return double(p.K) * p.K * std::pow(omega_T, 3) * std::pow(p.eta, 5) / (pi * pi) * (p_3 / q_3);
}

Sin2Forms sin2_forms(const GateParams& p) {
  const double K = p.K, L = p.L;
  const double K2 = K * K, L2 = L * L, D = K2 - L2;
  Sin2Forms f;
  f.p_y = 3 * D * D - 4 * (5 * K2 + 3 * L2 - 8);
  f.q_y = 8 * D * ((K - L) * (K - L) - 4) * ((K + L) * (K + L) - 4);
  f.p_x = 8 * (6 * K2 * K2 - 3 * K2 * L2 - 10 * K2 + 4) + 3 * (L2 * L2 - 4 * L2);
  // First factor is 4K^2 - L (not L^2) as tabulated.
  f.q_x = 8 * (4 * K2 - L) * ((2 * K - L) * (2 * K - L) - 4) * ((2 * K + L) * (2 * K + L) - 4);
  f.p_3 = (K2 + 3 * L2 - 4) * f.p_y;
  f.q_3 = 8 * D * D * std::pow((K - L) * (K - L) - 4, 2) * std::pow((K + L) * (K + L) - 4, 2);
  f.omega_LD = pi / (p.eta * std::sqrt(2 * K)) * std::sqrt(f.q_y / f.p_y);
  return f;
}

Calibration calibrate_amplitude(const GateParams& p, const PulseShape& pulse, double lo, double hi, int order,
                                double tol) {
  if (!(lo > 0 && hi > lo)) throw std::invalid_argument("calibrate_amplitude: need 0 < lo < hi");
  const DysonExpansion dyson(p, pulse, order);
  const ThermalWeights w = ThermalWeights::thermal(p.nbar, p.n_dim);
  Calibration cal;
  auto infid = [&](double om) {
    ++cal.evaluations;
    return 1.0 - average_fidelity(dyson.propagator(order, om).matrix, w);
  };
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = infid(c), fd = infid(d);
  while (b - a > tol * (std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = infid(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = infid(d);
    }
  }
  cal.omega_T = 0.5 * (a + b);
  cal.infidelity = infid(cal.omega_T);
  return cal;
}

}  // namespace msgate
