#include "msgate/fidelity.hpp"

#include <cmath>
#include <stdexcept>

namespace msgate {
namespace {

int fock_dim(const OperatorMatrix& U) {
  if (U.rows() != U.cols() || U.rows() % 4 != 0) throw std::invalid_argument("fidelity: operator is not 4*n_dim square");
  return static_cast<int>(U.rows() / 4);
}

}  // namespace

ThermalWeights ThermalWeights::thermal(double nbar, int n_dim) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("ThermalWeights: nbar must be >= 0");
  ThermalWeights w;
  w.nbar = nbar;
  w.weights.resize(n_dim);
  const double ratio = nbar / (nbar + 1.0);
  double p = 1.0 / (nbar + 1.0);
  for (int n = 0; n < n_dim; ++n) {
    w.weights[n] = p;
    p *= ratio;
  }
  // Tail is geometric: sum_{n >= n_dim} P_n = ratio^n_dim.
  w.tail_mass = std::pow(ratio, n_dim);
  return w;
}

double bell_fidelity(const OperatorMatrix& U, const ThermalWeights& w, double target_phase) {
  const int nd = fock_dim(U);
  const cplx psi00 = 1.0 / std::sqrt(2.0);
  const cplx psi11 = std::polar(1.0 / std::sqrt(2.0), target_phase);
  double f = 0.0;
  for (int n = 0; n < nd && n < static_cast<int>(w.weights.size()); ++n) {
    if (w.weights[n] == 0.0) continue;
    // Column |00, n> of U is the evolved state; project onto psi_t per final phonon level.
    double overlap = 0.0;
    for (int k = 0; k < nd; ++k) {
      const cplx amp = std::conj(psi00) * U(0 * nd + k, n) + std::conj(psi11) * U(3 * nd + k, n);
      overlap += std::norm(amp);
    }
    f += w.weights[n] * overlap;
  }
  return f;
}

double average_fidelity(const OperatorMatrix& U, const ThermalWeights& w, double target_angle) {
  const int nd = fock_dim(U);
  const SpinMatrix target = matrix_exp(cplx(0.0, target_angle) * OperatorMatrix(collective_spins().Jy2),
                                       MatrixKind::AntiHermitian);
  const SpinMatrix target_dag = target.adjoint();
  cplx trace = 0.0;
  for (int n = 0; n < nd && n < static_cast<int>(w.weights.size()); ++n) {
    if (w.weights[n] == 0.0) continue;
    // sum_q <q, n| U (T^dag (x) 1) |q, n> = sum_{q, q'} U(q n, q' n) T^dag(q', q)
    cplx block = 0.0;
    for (int q = 0; q < 4; ++q)
      for (int qp = 0; qp < 4; ++qp) block += U(q * nd + n, qp * nd + n) * target_dag(qp, q);
    trace += w.weights[n] * block;
  }
  return 0.25 * std::abs(trace);
}

double closed_form_bell(std::span<const double> dx_by_n, std::span<const double> dy_by_n, const ThermalWeights& w,
                        double target_phase) {
  if (dx_by_n.size() != dy_by_n.size()) throw std::invalid_argument("closed_form_bell: size mismatch");
  double sum = 0.0;
  for (std::size_t n = 0; n < dx_by_n.size() && n < w.weights.size(); ++n)
    sum += w.weights[n] * (1.0 - std::sin(target_phase) * std::sin(dx_by_n[n] - dy_by_n[n]));
  return 0.5 * sum;
}

FidelityResult evaluate_fidelity(const OperatorMatrix& U, const ThermalWeights& w) {
  return {bell_fidelity(U, w), average_fidelity(U, w), w.tail_mass};
}

}  // namespace msgate
