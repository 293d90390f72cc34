#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "msgate/params.hpp"
#include "msgate/pulses.hpp"

namespace msgate {

using cplx = std::complex<double>;

/// Dense operator on qubit-pair (x) Fock space. Basis index = q * n_dim + n,
/// q in {00, 01, 10, 11}, n the phonon number.
using OperatorMatrix = Eigen::MatrixXcd;
using SpinMatrix = Eigen::Matrix4cd;

struct CollectiveSpinSet {
  SpinMatrix Jx, Jy, Jz, Jplus, Jminus, Jxy, Jx2, Jy2, Jz2;
};

const CollectiveSpinSet& collective_spins();

/// J_m = (J+ + (-1)^m J-)/2: Jx for even m, i*Jy for odd m.
SpinMatrix collective_spin(int m);

/// Associated Laguerre polynomial L_a^{(b)}(x) by the three-term recurrence.
double laguerre(int a, int b, double x);

OperatorMatrix annihilation(int n_dim);

/// m-th sideband operator A_m on the truncated Fock space, summed from its
/// normal-ordered Taylor series. Equals the Fock projection of the exact
/// operator. Throws std::invalid_argument if |m| > n_dim.
OperatorMatrix sideband_operator(int m, double eta, int n_dim);

OperatorMatrix kron(const Eigen::Ref<const Eigen::MatrixXcd>& a, const Eigen::Ref<const Eigen::MatrixXcd>& b);

enum class MatrixKind { General, Hermitian, AntiHermitian };

/// e^A. Hermitian and anti-Hermitian inputs go through a self-adjoint
/// eigendecomposition; everything else through Pade scaling and squaring.
/// Throws std::invalid_argument on non-finite entries.
OperatorMatrix matrix_exp(const OperatorMatrix& A, MatrixKind kind = MatrixKind::General);

/// exp(-i H dt) for Hermitian H.
OperatorMatrix unitary_step(const OperatorMatrix& H, double dt);

/// Reduces a composite-space density matrix to the 4x4 qubit block.
SpinMatrix partial_trace_motion(const OperatorMatrix& rho, int n_dim);

/// Basis indices with Fock level below n_dim - guard, across all qubit blocks.
std::vector<int> guarded_indices(int n_dim, int guard);
OperatorMatrix restrict_to(const OperatorMatrix& A, const std::vector<int>& idx);

double max_abs_entry(const OperatorMatrix& A);
/// max |A - A^dagger| over entries.
double hermiticity_residual(const OperatorMatrix& A);
/// max |U^dagger U - 1| over entries.
double unitarity_residual(const OperatorMatrix& U);

/// One distinct beat-note frequency N and the operator that oscillates with
/// it: sum over (M, m, mu) with M + mK + muL = N of c_M J_m (x) A_m.
struct BeatNoteTerm {
  int N = 0;
  OperatorMatrix op;
};

/// T*H(tau)/hbar = omega_T * sum_N e^{i 2pi N tau} H_N, with unit omega_T
/// stored so the drive strength can be rescaled without rebuilding.
class FactoredHamiltonian {
 public:
  FactoredHamiltonian(const GateParams& params, const PulseShape& pulse);

  const std::vector<BeatNoteTerm>& terms() const { return terms_; }
  std::vector<int> notes() const;
  int dim() const { return dim_; }
  int max_abs_note() const;

  /// Evaluates at tau for the given drive strength.
  OperatorMatrix at(double tau, double omega_T) const;
  void at_into(double tau, double omega_T, OperatorMatrix& out) const;

 private:
  int dim_ = 0;
  std::vector<BeatNoteTerm> terms_;
};

OperatorMatrix hamiltonian_at(double tau, const GateParams& params, const PulseShape& pulse);

}  // namespace msgate
