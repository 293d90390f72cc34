#include "msgate/magnus.hpp"

#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "msgate/resint.hpp"

namespace msgate {
namespace {

const cplx I(0.0, 1.0);

cplx minus_i_pow(int k) {
  static constexpr cplx kPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return kPowers[k % 4];
}

void check_order(int k) {
  if (k < 1 || k > kMaxMagnusOrder) throw std::invalid_argument("Dyson/Magnus order must be in [1, 5]");
}

// Pairwise products H_i H_j, row-major in (i, j).
std::vector<OperatorMatrix> pair_products(const FactoredHamiltonian& H) {
  const auto& t = H.terms();
  const int n = static_cast<int>(t.size());
  std::vector<OperatorMatrix> pairs(static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(static)
  for (int ij = 0; ij < n * n; ++ij) pairs[ij].noalias() = t[ij / n].op * t[ij % n].op;
  return pairs;
}

}  // namespace

ValidationReport validate(const GateParams& params, const PulseShape& pulse) {
  ValidationReport report = validate(params);
  for (auto& v : validate_shape(pulse).violations) report.violations.push_back(v);
  for (const auto& [M, c] : pulse.coefficients) {
    if (c == 0.0) continue;
    for (int m = -params.m_max; m <= params.m_max; ++m) {
      for (int mu : {-1, 1}) {
        if (beat_note(M, m, mu, params) == 0) {
          std::ostringstream msg;
          msg << "beat-note N(M=" << M << ", m=" << m << ", mu=" << mu << ") = 0";
          report.violations.push_back({"zero_beat_note", msg.str(), m, mu});
        }
      }
    }
  }
  return report;
}

OperatorMatrix resonant_operator_sum(const FactoredHamiltonian& H, int k, int threads) {
  check_order(k);
  const auto& terms = H.terms();
  const int n = static_cast<int>(terms.size());
  const int dim = H.dim();
  const std::vector<int> notes = H.notes();
  const std::vector<OperatorMatrix> pairs = k >= 3 ? pair_products(H) : std::vector<OperatorMatrix>{};
  auto pair = [&](int i, int j) -> const OperatorMatrix& { return pairs[static_cast<std::size_t>(i) * n + j]; };

  // One partial result per innermost index, reduced in index order so the
  // sum does not depend on thread scheduling.
  std::vector<OperatorMatrix> partial(n, OperatorMatrix::Zero(dim, dim));
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel num_threads(n_threads)
  {
    // Scratch accumulators keyed by the middle indices (between the outer
    // pair and the innermost index): none for k <= 3, i3 for k = 4 and
    // (i3, i4) for k = 5.
    const int slots = k == 4 ? n : (k == 5 ? n * n : 1);
    std::vector<OperatorMatrix> acc(slots);
    std::vector<char> touched(slots, 0);

#pragma omp for schedule(dynamic)
    for (int c = 0; c < n; ++c) {
      std::fill(touched.begin(), touched.end(), 0);
      auto slot = [&](int s) -> OperatorMatrix& {
        if (!touched[s]) {
          acc[s].setZero(dim, dim);
          touched[s] = 1;
        }
        return acc[s];
      };
      for_each_resonant(
          notes, k,
          [&](std::span<const int> idx, const ExactValue& value) {
            const cplx w = value.to_complex();
            switch (k) {
              case 1: slot(0) += w * terms[idx[0]].op; break;
              case 2: slot(0) += w * terms[idx[0]].op; break;
              case 3: slot(0) += w * pair(idx[0], idx[1]); break;
              case 4: slot(idx[2]) += w * pair(idx[0], idx[1]); break;
              case 5: slot(idx[2] * n + idx[3]) += w * pair(idx[0], idx[1]); break;
            }
          },
          c);

      OperatorMatrix& out = partial[c];
      switch (k) {
        case 1:
          if (touched[0]) out = acc[0];
          break;
        case 2:
        case 3:
          if (touched[0]) out.noalias() = acc[0] * terms[c].op;
          break;
        case 4:
          for (int s = 0; s < n; ++s)
            if (touched[s]) out.noalias() += acc[s] * pair(s, c);
          break;
        case 5: {
          OperatorMatrix left = OperatorMatrix::Zero(dim, dim);
          bool any = false;
          for (int s = 0; s < n * n; ++s) {
            if (!touched[s]) continue;
            left.noalias() += acc[s] * pair(s / n, s % n);
            any = true;
          }
          if (any) out.noalias() = left * terms[c].op;
          break;
        }
      }
    }
  }

  OperatorMatrix total = OperatorMatrix::Zero(dim, dim);
  for (const auto& p : partial) total += p;
  return total;
}

DysonExpansion::DysonExpansion(const GateParams& params, const PulseShape& pulse, int max_order)
    : dim_(params.dim()) {
  check_order(max_order);
  const FactoredHamiltonian H(params, pulse);
  unit_.reserve(max_order);
  for (int k = 1; k <= max_order; ++k) unit_.push_back(minus_i_pow(k) * resonant_operator_sum(H, k));
}

OperatorMatrix DysonExpansion::dyson(int k, double omega_T) const {
  check_order(k);
  if (k > max_order()) throw std::out_of_range("DysonExpansion: order not assembled");
  return std::pow(omega_T, k) * unit_[k - 1];
}

OperatorMatrix DysonExpansion::magnus(int k, double omega_T) const {
  check_order(k);
  switch (k) {
    case 1:
    case 2:
    case 3:
      return I * dyson(k, omega_T);
    case 4: {
      const OperatorMatrix P2 = dyson(2, omega_T);
      return I * (dyson(4, omega_T) - 0.5 * P2 * P2);
    }
    default: {
      const OperatorMatrix P2 = dyson(2, omega_T);
      const OperatorMatrix P3 = dyson(3, omega_T);
      return I * (dyson(5, omega_T) - 0.5 * (P2 * P3 + P3 * P2));
    }
  }
}

std::vector<MagnusTerm> DysonExpansion::magnus_terms(int up_to, double omega_T) const {
  std::vector<MagnusTerm> out;
  for (int k = 2; k <= up_to; ++k) out.push_back({k, magnus(k, omega_T)});
  return out;
}

TruncatedPropagator DysonExpansion::propagator(int n, double omega_T) const {
  if (n < 2 || n > kMaxMagnusOrder) throw std::invalid_argument("propagator order must be in [2, 5]");
  OperatorMatrix generator = OperatorMatrix::Zero(dim_, dim_);
  for (int k = 2; k <= n; ++k) generator += magnus(k, omega_T);
  return {n, matrix_exp(-I * generator, MatrixKind::AntiHermitian)};
}

OperatorMatrix dyson_term(int k, const GateParams& params, const PulseShape& pulse) {
  check_order(k);
  const FactoredHamiltonian H(params, pulse);
  return minus_i_pow(k) * std::pow(params.omega_T, k) * resonant_operator_sum(H, k);
}

OperatorMatrix dyson_term_reference(int k, const GateParams& params, const PulseShape& pulse) {
  check_order(k);
  struct Factor {
    int N;
    cplx c;
    OperatorMatrix op;
  };
  std::vector<Factor> factors;
  for (const auto& [M, c] : pulse.coefficients) {
    if (c == 0.0) continue;
    for (int m = -params.m_max; m <= params.m_max; ++m) {
      const OperatorMatrix op = kron(collective_spin(m), sideband_operator(m, params.eta, params.n_dim));
      for (int mu : {-1, 1}) factors.push_back({beat_note(M, m, mu, params), c, op});
    }
  }
  const int nf = static_cast<int>(factors.size());
  const int dim = params.dim();
  OperatorMatrix total = OperatorMatrix::Zero(dim, dim);
  std::vector<int> idx(k, 0), Ns(k);
  while (true) {
    for (int j = 0; j < k; ++j) Ns[j] = factors[idx[j]].N;
    if (is_resonant(Ns)) {
      cplx weight = resonance_integral_cached(Ns).to_complex();
      OperatorMatrix product = OperatorMatrix::Identity(dim, dim);
      for (int j = 0; j < k; ++j) {
        weight *= factors[idx[j]].c;
        product = product * factors[idx[j]].op;
      }
      total += weight * product;
    }
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == nf) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return minus_i_pow(k) * std::pow(params.omega_T, k) * total;
}

std::vector<MagnusTerm> magnus_terms(const GateParams& params, const PulseShape& pulse, int up_to) {
  if (up_to < 2) return {};
  return DysonExpansion(params, pulse, up_to).magnus_terms(up_to, params.omega_T);
}

TruncatedPropagator propagator(const GateParams& params, const PulseShape& pulse, int order) {
  if (order < 2 || order > kMaxMagnusOrder) throw std::invalid_argument("propagator order must be in [2, 5]");
  return DysonExpansion(params, pulse, order).propagator(order, params.omega_T);
}

}  // namespace msgate
