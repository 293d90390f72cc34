#include "msgate/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace msgate {

double GateParams::gate_time_us() const {
  if (!trap_freq || *trap_freq <= 0.0)
    throw std::invalid_argument("trap_freq is required for physical units");
  return static_cast<double>(K) / *trap_freq * 1e6;
}

bool ValidationReport::has(const std::string& rule) const {
  for (const auto& v : violations)
    if (v.rule == rule) return true;
  return false;
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].rule << ": " << violations[i].message;
  }
  return out.str();
}

ValidationReport validate(const GateParams& p) {
  ValidationReport report;
  auto fail = [&](std::string rule, std::string msg, int j = 0, int l = 0) {
    report.violations.push_back({std::move(rule), std::move(msg), j, l});
  };

  if (!(p.eta > 0.0 && p.eta < 1.0) || !std::isfinite(p.eta))
    fail("eta_range", "eta must lie in (0, 1)");
  if (p.L < 1) fail("L_positive", "L must be >= 1");
  if (p.K <= p.L) fail("K_gt_L", "K must exceed L");
  if (p.K == 2 * p.L) fail("K=2L", "K = 2L makes mixed-detuning pairs resonant");
  if (!(p.omega_T >= 0.0) || !std::isfinite(p.omega_T))
    fail("omega_T_range", "omega_T must be finite and >= 0");
  if (!(p.nbar >= 0.0) || !std::isfinite(p.nbar))
    fail("nbar_range", "nbar must be finite and >= 0");
  if (p.m_max < 1) fail("m_max_range", "m_max must be >= 1");
  if (p.k_max < 2 || p.k_max > 5) fail("k_max_range", "k_max must be in [2, 5]");
  if (p.n_dim < p.m_max + 2)
    fail("n_dim_range", "n_dim must be >= m_max + 2");
  if (p.trap_freq && !(*p.trap_freq > 0.0))
    fail("trap_freq_range", "trap_freq must be > 0 when given");

  // j*K = l*L with j <= k_max*m_max, 1 <= |l| <= k_max. Negative l can never
  // match since K, L > 0, so only l > 0 is enumerated.
  if (p.K > 0 && p.L > 0 && p.m_max >= 1 && p.k_max >= 1) {
    const int jmax = p.k_max * p.m_max;
    for (int j = 1; j <= jmax; ++j) {
      for (int l = 1; l <= p.k_max; ++l) {
        if (static_cast<long long>(j) * p.K == static_cast<long long>(l) * p.L) {
          std::ostringstream msg;
          msg << j << "*K = " << l << "*L";
          fail("jK=lL", msg.str(), j, l);
        }
      }
    }
  }
  return report;
}

int beat_note(int M, int m, int mu, const GateParams& p) {
  return M + m * p.K + mu * p.L;
}

}  // namespace msgate
