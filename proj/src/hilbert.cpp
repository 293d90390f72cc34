#include "msgate/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace msgate {
namespace {

const cplx I(0.0, 1.0);

Eigen::Matrix2cd pauli(char which) {
  Eigen::Matrix2cd s;
  switch (which) {
    case 'x': s << 0, 1, 1, 0; break;
    case 'y': s << 0, -I, I, 0; break;
    case 'z': s << 1, 0, 0, -1; break;
    default: s.setIdentity();
  }
  return s;
}

SpinMatrix collective(char which) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd s = pauli(which);
  return 0.5 * (kron(id, s) + kron(s, id));
}

// <n_out| (a^dag)^p a^q |n_in>, n_out = n_in - q + p
double normal_ordered_element(int p, int q, int n_in) {
  // sqrt(n_in! / (n_in-q)!) * sqrt(n_out! / (n_in-q)!)
  const int mid = n_in - q;
  const int n_out = mid + p;
  return std::exp(0.5 * (std::lgamma(n_in + 1.0) - std::lgamma(mid + 1.0)) +
                  0.5 * (std::lgamma(n_out + 1.0) - std::lgamma(mid + 1.0)));
}

bool all_finite(const OperatorMatrix& A) {
  return A.real().allFinite() && A.imag().allFinite();
}

}  // namespace

const CollectiveSpinSet& collective_spins() {
  static const CollectiveSpinSet set = [] {
    CollectiveSpinSet s;
    s.Jx = collective('x');
    s.Jy = collective('y');
    s.Jz = collective('z');
    s.Jplus = s.Jx + I * s.Jy;
    s.Jminus = s.Jx - I * s.Jy;
    const Eigen::Matrix2cd sx = pauli('x'), sy = pauli('y');
    s.Jxy = 0.5 * (kron(sx, sy) + kron(sy, sx));
    s.Jx2 = s.Jx * s.Jx;
    s.Jy2 = s.Jy * s.Jy;
    s.Jz2 = s.Jz * s.Jz;
    return s;
  }();
  return set;
}

SpinMatrix collective_spin(int m) {
  const auto& s = collective_spins();
  if (m % 2 == 0) return s.Jx;
  return I * s.Jy;
}

double laguerre(int a, int b, double x) {
  if (a < 0 || b < 0) throw std::invalid_argument("laguerre: a, b must be >= 0");
  double prev = 1.0;
  if (a == 0) return prev;
  double cur = 1.0 + b - x;
  for (int k = 1; k < a; ++k) {
    const double next = ((2.0 * k + 1.0 + b - x) * cur - (k + b) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

OperatorMatrix annihilation(int n_dim) {
  OperatorMatrix a = OperatorMatrix::Zero(n_dim, n_dim);
  for (int n = 1; n < n_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorMatrix sideband_operator(int m, double eta, int n_dim) {
  if (n_dim < 1) throw std::invalid_argument("sideband_operator: n_dim must be >= 1");
  if (std::abs(m) > n_dim) throw std::invalid_argument("sideband_operator: |m| exceeds n_dim");
  OperatorMatrix A = OperatorMatrix::Zero(n_dim, n_dim);
  const double prefactor = std::exp(-0.5 * eta * eta);
  // e^{-eta^2/2} sum_k (i eta)^{2k+m} / ((m+k)! k!) (a^dag)^{k+m} a^k
  for (int k = std::max(0, -m); k < n_dim; ++k) {
    const int p = k + m;
    if (p >= n_dim) break;
    const int order = 2 * k + m;
    const cplx ipow = std::pow(I, order);
    const cplx c = prefactor * std::pow(eta, order) * ipow /
                   std::exp(std::lgamma(p + 1.0) + std::lgamma(k + 1.0));
    for (int n = k; n < n_dim; ++n) {
      const int n_out = n - k + p;
      if (n_out >= n_dim) continue;
      A(n_out, n) += c * normal_ordered_element(p, k, n);
    }
  }
  return A;
}

OperatorMatrix kron(const Eigen::Ref<const Eigen::MatrixXcd>& a, const Eigen::Ref<const Eigen::MatrixXcd>& b) {
  OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix matrix_exp(const OperatorMatrix& A, MatrixKind kind) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix_exp: matrix must be square");
  if (!all_finite(A)) throw std::invalid_argument("matrix_exp: non-finite entries");
  switch (kind) {
    case MatrixKind::Hermitian: {
      const OperatorMatrix H = 0.5 * (A + A.adjoint());
      Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(H);
      const Eigen::VectorXd ev = es.eigenvalues().array().exp();
      return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }
    case MatrixKind::AntiHermitian: {
      const OperatorMatrix H = -I * 0.5 * (A - A.adjoint());
      Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(H);
      const Eigen::VectorXcd phases = (I * es.eigenvalues().cast<cplx>()).array().exp();
      return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    case MatrixKind::General:
      break;
  }
  return A.exp();
}

OperatorMatrix unitary_step(const OperatorMatrix& H, double dt) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(H);
  const Eigen::VectorXcd phases = (-I * dt * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

SpinMatrix partial_trace_motion(const OperatorMatrix& rho, int n_dim) {
  SpinMatrix out = SpinMatrix::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int n = 0; n < n_dim; ++n) out(a, b) += rho(a * n_dim + n, b * n_dim + n);
  return out;
}

std::vector<int> guarded_indices(int n_dim, int guard) {
  std::vector<int> idx;
  for (int q = 0; q < 4; ++q)
    for (int n = 0; n < n_dim - guard; ++n) idx.push_back(q * n_dim + n);
  return idx;
}

OperatorMatrix restrict_to(const OperatorMatrix& A, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  OperatorMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = A(idx[i], idx[j]);
  return out;
}

double max_abs_entry(const OperatorMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_residual(const OperatorMatrix& A) { return max_abs_entry(A - A.adjoint()); }

double unitarity_residual(const OperatorMatrix& U) {
  return max_abs_entry(U.adjoint() * U - OperatorMatrix::Identity(U.rows(), U.cols()));
}

FactoredHamiltonian::FactoredHamiltonian(const GateParams& params, const PulseShape& pulse)
    : dim_(params.dim()) {
  std::vector<OperatorMatrix> sidebands;
  for (int m = -params.m_max; m <= params.m_max; ++m)
    sidebands.push_back(kron(collective_spin(m), sideband_operator(m, params.eta, params.n_dim)));

  std::map<int, OperatorMatrix> by_note;
  for (const auto& [M, c] : pulse.coefficients) {
    if (c == 0.0) continue;
    for (int m = -params.m_max; m <= params.m_max; ++m) {
      for (int mu : {-1, 1}) {
        const int N = beat_note(M, m, mu, params);
        auto [it, inserted] = by_note.try_emplace(N, OperatorMatrix::Zero(dim_, dim_));
        it->second += c * sidebands[m + params.m_max];
      }
    }
  }
  for (auto& [N, op] : by_note) terms_.push_back({N, std::move(op)});
}

std::vector<int> FactoredHamiltonian::notes() const {
  std::vector<int> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.N);
  return out;
}

int FactoredHamiltonian::max_abs_note() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.N));
  return m;
}

void FactoredHamiltonian::at_into(double tau, double omega_T, OperatorMatrix& out) const {
  out.setZero(dim_, dim_);
  for (const auto& t : terms_) out += std::polar(omega_T, 2.0 * std::numbers::pi * t.N * tau) * t.op;
}

OperatorMatrix FactoredHamiltonian::at(double tau, double omega_T) const {
  OperatorMatrix out;
  at_into(tau, omega_T, out);
  return out;
}

OperatorMatrix hamiltonian_at(double tau, const GateParams& params, const PulseShape& pulse) {
  return FactoredHamiltonian(params, pulse).at(tau, params.omega_T);
}

}  // namespace msgate
