#include "msgate/trotter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace msgate {
namespace {

double sample_time(int n, int steps, TrotterSampling sampling) {
  const double offset = sampling == TrotterSampling::Midpoint ? 0.5 : 0.0;
  return (n + offset) / steps;
}

// exp(i eta (a + a^dag)) on the truncated Fock space.
OperatorMatrix displacement_at_zero(double eta, int n_dim) {
  const OperatorMatrix a = annihilation(n_dim);
  const OperatorMatrix x = a + a.adjoint();
  return matrix_exp(cplx(0.0, eta) * x, MatrixKind::AntiHermitian);
}

class ExactDisplacementModel {
 public:
  ExactDisplacementModel(const GateParams& params, const PulseShape& pulse)
      : params_(params), pulse_(pulse), d0_(displacement_at_zero(params.eta, params.n_dim)) {}

  void at_into(double tau, OperatorMatrix& out) const {
    const int nd = params_.n_dim;
    // D(tau) = R D(0) R^dag with R = diag(e^{i n theta}), theta = 2 pi K tau.
    const double theta = 2.0 * std::numbers::pi * params_.K * tau;
    Eigen::VectorXcd r(nd);
    for (int n = 0; n < nd; ++n) r(n) = std::polar(1.0, n * theta);
    const OperatorMatrix d = r.asDiagonal() * d0_ * r.conjugate().asDiagonal();
    const double drive = params_.omega_T * envelope_at(pulse_, tau) *
                         std::cos(2.0 * std::numbers::pi * params_.L * tau);
    const auto& s = collective_spins();
    out = drive * (kron(s.Jplus, d) + kron(s.Jminus, d.adjoint()));
  }

 private:
  GateParams params_;
  PulseShape pulse_;
  OperatorMatrix d0_;
};

template <class Model>
OperatorMatrix trotter_product(const Model& model, int dim, int steps, TrotterSampling sampling) {
  const double dtau = 1.0 / steps;
  OperatorMatrix U = OperatorMatrix::Identity(dim, dim);
  OperatorMatrix H(dim, dim), next(dim, dim);
  for (int n = 0; n < steps; ++n) {
    model.at_into(sample_time(n, steps, sampling), H);
    next.noalias() = unitary_step(H, dtau) * U;
    U.swap(next);
  }
  return U;
}

struct TruncatedModel {
  const FactoredHamiltonian& H;
  double omega_T;
  void at_into(double tau, OperatorMatrix& out) const { H.at_into(tau, omega_T, out); }
};

}  // namespace

int max_beat_note(const GateParams& params, const PulseShape& pulse) {
  return pulse.max_harmonic() + params.m_max * params.K + params.L;
}

int min_trotter_steps(const GateParams& params, const PulseShape& pulse, double safety) {
  return static_cast<int>(std::ceil(2.0 * std::numbers::pi * safety * max_beat_note(params, pulse)));
}

int trotter_steps(const GateParams& params, const PulseShape& pulse, const TrotterConfig& config) {
  if (!(config.safety >= 1.0)) throw std::invalid_argument("TrotterConfig: safety must be >= 1");
  const int bound = min_trotter_steps(params, pulse, config.safety);
  if (config.steps <= 0) return bound;
  if (config.steps < bound && !config.allow_coarse)
    throw std::invalid_argument("TrotterConfig: step count below 2*pi*safety*max|N|");
  return config.steps;
}

OperatorMatrix propagate_numeric(const GateParams& params, const PulseShape& pulse, const TrotterConfig& config) {
  const int steps = trotter_steps(params, pulse, config);
  const FactoredHamiltonian H(params, pulse);
  if (params.omega_T == 0.0) return OperatorMatrix::Identity(params.dim(), params.dim());
  return trotter_product(TruncatedModel{H, params.omega_T}, params.dim(), steps, config.sampling);
}

OperatorMatrix propagate_numeric_exact_displacement(const GateParams& params, const PulseShape& pulse,
                                                    const TrotterConfig& config) {
  const int steps = trotter_steps(params, pulse, config);
  if (params.omega_T == 0.0) return OperatorMatrix::Identity(params.dim(), params.dim());
  return trotter_product(ExactDisplacementModel(params, pulse), params.dim(), steps, config.sampling);
}

OperatorMatrix exact_displacement_hamiltonian(double tau, const GateParams& params, const PulseShape& pulse) {
  OperatorMatrix out;
  ExactDisplacementModel(params, pulse).at_into(tau, out);
  return out;
}

}  // namespace msgate
