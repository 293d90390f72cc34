#pragma once

// Exact nested resonance integrals
//
//   I_{N_1..N_k} = int_0^1 dt_1 e^{i2pi N_1 t_1} int_0^{t_1} dt_2 e^{i2pi N_2 t_2}
//                  ... int_0^{t_{k-1}} dt_k e^{i2pi N_k t_k}
//
// for integer beat-notes, with N_1 on the outermost time variable (the
// Dyson-term ordering in which H(t_1) is the leftmost factor). Every
// intermediate antiderivative is a finite sum of c * tau^p * e^{i2pi F tau}
// with c a rational multiple of (i 2 pi)^{-q}, so the whole computation is
// exact; floating point appears only in ExactValue::to_complex().

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "msgate/rational.hpp"

namespace msgate {

inline constexpr int kMaxResonanceOrder = 5;

/// coeff * tau^power * e^{i 2 pi freq tau} / (i 2 pi)^pi_power
struct OscTerm {
  Rational coeff;
  int power = 0;
  int freq = 0;
  int pi_power = 0;
};

/// Canonical sum of OscTerms: sorted by (freq, power, pi_power), like terms
/// merged, zero coefficients dropped.
class OscSum {
 public:
  OscSum() = default;
  static OscSum one();
  static OscSum from_terms(std::vector<OscTerm> terms);

  const std::vector<OscTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  std::complex<double> evaluate(double tau) const;
  friend bool operator==(const OscSum&, const OscSum&);

 private:
  std::vector<OscTerm> terms_;
};

/// Exact value sum_q r_q / (i 2 pi)^q for q = 0..kMaxResonanceOrder.
struct ExactValue {
  std::array<Rational, kMaxResonanceOrder + 1> by_pi_power{};

  bool is_zero() const;
  std::complex<double> to_complex() const;
  std::string str() const;
  friend bool operator==(const ExactValue&, const ExactValue&) = default;
};

/// G(tau) = int_0^tau e^{i2pi N s} f(s) ds, exactly.
OscSum integrate_step(const OscSum& f, int N);

/// OscSum evaluated exactly at tau = 1, where every exponential equals one.
ExactValue value_at_one(const OscSum& f);

/// int_0^1 e^{i2pi N s} f(s) ds without materialising the antiderivative.
ExactValue final_step_value(const OscSum& f, int N);

/// Cheap necessary condition for a nonzero integral: some contiguous block
/// N_i + ... + N_j (i <= j) sums to zero. Without it every antiderivative is a
/// pure trigonometric polynomial and vanishes at tau = 1.
bool has_vanishing_block(std::span<const int> Ns);

/// Exact I_{N_1..N_k}; k = Ns.size() in [0, kMaxResonanceOrder].
ExactValue resonance_integral(std::span<const int> Ns);

/// True iff the exact integral is nonzero.
bool is_resonant(std::span<const int> Ns);

/// Thread-safe memo of resonance_integral keyed on the integer tuple.
class ResonanceCache {
 public:
  ExactValue get(std::span<const int> Ns);
  std::size_t size() const;
  void clear();

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::vector<int>, ExactValue, Hash> table_;
};

/// Process-wide cache used by the convenience overload below.
ResonanceCache& global_resonance_cache();
ExactValue resonance_integral_cached(std::span<const int> Ns);

/// Visits every k-tuple over `notes` (indices into the list) whose integral is
/// nonzero. Antiderivatives are shared between tuples with the same inner
/// suffix, and the final integration is evaluated only at tau = 1. When
/// `innermost` is nonnegative only tuples whose innermost (last) index equals
/// it are visited; the subtrees are disjoint, so callers can split work on it.
using ResonantVisitor = std::function<void(std::span<const int> idx, const ExactValue& value)>;
void for_each_resonant(std::span<const int> notes, int k, const ResonantVisitor& visit,
                       int innermost = -1);

}  // namespace msgate
