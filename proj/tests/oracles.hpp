#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's own closed forms.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "msgate/params.hpp"
#include "msgate/pulses.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// L_a^{(b)}(x) from the explicit finite sum.
inline double laguerre_series(int a, int b, double x) {
  double sum = 0.0;
  for (int j = 0; j <= a; ++j) {
    const double binom = std::exp(std::lgamma(a + b + 1.0) - std::lgamma(a - j + 1.0) - std::lgamma(b + j + 1.0));
    sum += (j % 2 ? -1.0 : 1.0) * binom * std::pow(x, j) / std::tgamma(j + 1.0);
  }
  return sum;
}

/// <n+m| A_m |n> = e^{-eta^2/2} (i eta)^m sqrt(n!/(n+m)!) L_n^{(m)}(eta^2) for m >= 0.
inline cplx sideband_element(int m, int n, double eta) {
  const double mag = std::exp(-eta * eta / 2 + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + m + 1.0))) *
                     std::pow(eta, m) * laguerre_series(n, m, eta * eta);
  return mag * std::pow(cplx(0, 1), m);
}

/// |<n|A_m|n-m>|^2 for any sign of m (zero when n - m < 0).
inline double sideband_weight(int m, int n, double eta) {
  const int lo = std::min(n, n - m), hi = std::max(n, n - m);
  if (lo < 0) return 0.0;
  return std::norm(sideband_element(hi - lo, lo, eta));
}

/// Taylor series e^A with enough terms for ||A|| of order 10.
inline Eigen::MatrixXcd taylor_exp(const Eigen::MatrixXcd& A) {
  // Scale down, sum, square up.
  int squarings = 0;
  double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  const Eigen::MatrixXcd B = A / std::pow(2.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * B / double(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Nested integral int_0^1 dt_1 e^{i2pi N_1 t_1} int_0^{t_1} dt_2 ... by
/// Chebyshev spectral cumulative integration on n + 1 Lobatto points, with
/// n doubled until the result settles.
class ChebyshevNested {
 public:
  cplx operator()(std::span<const int> Ns) const {
    cplx prev = eval(Ns, 32);
    for (int n = 64; n <= 2048; n *= 2) {
      const cplx cur = eval(Ns, n);
      if (std::abs(cur - prev) <= 5e-14 * std::max(1.0, std::abs(cur))) return cur;
      prev = cur;
    }
    return prev;
  }

 private:
  // Lobatto nodes x_j = cos(pi j / n), t = (1 + x)/2 so j = n is t = 0.
  static cplx eval(std::span<const int> Ns, int n) {
    std::vector<double> t(n + 1);
    for (int j = 0; j <= n; ++j) t[j] = 0.5 * (1.0 + std::cos(pi * j / n));
    std::vector<cplx> g(n + 1, 1.0);
    for (int idx = static_cast<int>(Ns.size()) - 1; idx >= 0; --idx) {
      std::vector<cplx> f(n + 1);
      for (int j = 0; j <= n; ++j) f[j] = std::polar(1.0, 2 * pi * Ns[idx] * t[j]) * g[j];
      g = cumulative(f, n);
    }
    return g[0];  // t = 1
  }

  // Values of int_0^t f at the nodes.
  static std::vector<cplx> cumulative(const std::vector<cplx>& f, int n) {
    // cos(pi m / n) for m in [0, 2n), indexed by (j k) mod 2n.
    std::vector<double> c(2 * n);
    for (int m = 0; m < 2 * n; ++m) c[m] = std::cos(pi * m / n);
    auto cosine = [&](long j, long k) { return c[(j * k) % (2 * n)]; };
    std::vector<cplx> a(n + 1);
    for (int k = 0; k <= n; ++k) {
      cplx s = 0.5 * (f[0] + (k % 2 ? -1.0 : 1.0) * f[n]);
      for (int j = 1; j < n; ++j) s += f[j] * cosine(j, k);
      a[k] = s * (2.0 / n);
    }
    a[0] *= 0.5;
    a[n] *= 0.5;
    // int T_k dx = T_{k+1}/(2(k+1)) - T_{k-1}/(2(k-1)); dt = dx / 2.
    std::vector<cplx> b(n + 2, 0.0);
    for (int k = 1; k <= n + 1; ++k) {
      const cplx prev = a[k - 1] * (k - 1 == 0 ? 2.0 : 1.0);
      const cplx next = k + 1 <= n ? a[k + 1] : 0.0;
      b[k] = 0.25 * (prev - next) / double(k);
    }
    // Fix the constant so the integral vanishes at x = -1 (t = 0).
    cplx at_minus_one = 0.0;
    for (int k = 1; k <= n + 1; ++k) at_minus_one += b[k] * (k % 2 ? -1.0 : 1.0);
    b[0] = -at_minus_one;
    std::vector<cplx> out(n + 1);
    for (int j = 0; j <= n; ++j) {
      cplx s = b[0];
      for (int k = 1; k <= n + 1; ++k) s += b[k] * cosine(j, k);
      out[j] = s;
    }
    return out;
  }
};

/// Second-order per-level coefficients (d_x, d_y) of Jx^2 and Jy^2 from the
/// Laguerre matrix elements: for every (M, m, mu) the pair H_N H_{-N}
/// contributes |c_M|^2 / N times J_m J_{-m} (x) A_m A_{-m}. Valid for levels
/// n < n_dim - m_max.
inline std::pair<double, double> form_factors(const msgate::GateParams& p, const msgate::PulseShape& pulse, int n) {
  double dx = 0, dy = 0;
  for (const auto& [M, c] : pulse.coefficients)
    for (int m = -p.m_max; m <= p.m_max; ++m)
      for (int mu : {-1, 1}) {
        const int N = M + m * p.K + mu * p.L;
        const double w = std::norm(c) * sideband_weight(m, n, p.eta) / N;
        // J_m J_{-m} = Jx^2 (m even) or -Jy^2 (m odd); A_m A_{-m} carries (-1)^m.
        if (m % 2 == 0) dx += w;
        else dy += w;
      }
  const double pref = p.omega_T * p.omega_T / (2 * pi);
  return {pref * dx, pref * dy};
}

}  // namespace oracle
