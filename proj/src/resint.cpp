#include "msgate/resint.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace msgate {
namespace {

bool term_less(const OscTerm& a, const OscTerm& b) {
  return std::tie(a.freq, a.power, a.pi_power) < std::tie(b.freq, b.power, b.pi_power);
}

bool same_key(const OscTerm& a, const OscTerm& b) {
  return a.freq == b.freq && a.power == b.power && a.pi_power == b.pi_power;
}

std::vector<OscTerm> canonicalize(std::vector<OscTerm> terms) {
  std::sort(terms.begin(), terms.end(), term_less);
  std::vector<OscTerm> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && same_key(out.back(), t))
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const OscTerm& t) { return t.coeff.is_zero(); });
  return out;
}

// p! / (p - j)!
long long falling_factorial(int p, int j) {
  long long r = 1;
  for (int i = 0; i < j; ++i) r *= p - i;
  return r;
}

void add_to(ExactValue& v, int pi_power, const Rational& r) {
  if (pi_power < 0 || pi_power > kMaxResonanceOrder)
    throw std::out_of_range("resonance integral order exceeds kMaxResonanceOrder");
  v.by_pi_power[pi_power] += r;
}

}  // namespace

OscSum OscSum::one() {
  OscSum s;
  s.terms_.push_back({Rational(1), 0, 0, 0});
  return s;
}

OscSum OscSum::from_terms(std::vector<OscTerm> terms) {
  OscSum s;
  s.terms_ = canonicalize(std::move(terms));
  return s;
}

std::complex<double> OscSum::evaluate(double tau) const {
  std::complex<double> sum = 0.0;
  const std::complex<double> i2pi(0.0, 2.0 * std::numbers::pi);
  for (const auto& t : terms_) {
    sum += t.coeff.to_double() * std::pow(tau, t.power) *
           std::polar(1.0, 2.0 * std::numbers::pi * t.freq * tau) / std::pow(i2pi, t.pi_power);
  }
  return sum;
}

bool operator==(const OscSum& a, const OscSum& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!same_key(a.terms_[i], b.terms_[i]) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
  }
  return true;
}

bool ExactValue::is_zero() const {
  return std::all_of(by_pi_power.begin(), by_pi_power.end(), [](const Rational& r) { return r.is_zero(); });
}

std::complex<double> ExactValue::to_complex() const {
  // 1/(i 2pi)^q = (-i)^q / (2pi)^q
  static constexpr std::complex<double> kMinusIPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  std::complex<double> sum = 0.0;
  for (int q = 0; q <= kMaxResonanceOrder; ++q) {
    if (by_pi_power[q].is_zero()) continue;
    sum += by_pi_power[q].to_double() * kMinusIPowers[q % 4] / std::pow(2.0 * std::numbers::pi, q);
  }
  return sum;
}

std::string ExactValue::str() const {
  std::ostringstream out;
  bool first = true;
  for (int q = 0; q <= kMaxResonanceOrder; ++q) {
    if (by_pi_power[q].is_zero()) continue;
    if (!first) out << " + ";
    out << "(" << by_pi_power[q].str() << ")";
    if (q) out << "/(i2pi)^" << q;
    first = false;
  }
  return first ? "0" : out.str();
}

OscSum integrate_step(const OscSum& f, int N) {
  std::vector<OscTerm> out;
  out.reserve(f.terms().size() * 3 + 1);
  for (const auto& t : f.terms()) {
    const int G = t.freq + N;
    const int p = t.power;
    if (G == 0) {
      out.push_back({t.coeff / Rational(p + 1), p + 1, 0, t.pi_power});
      continue;
    }
    // int_0^tau s^p e^{iaGs} ds = e^{iaG tau} sum_j (-1)^j p!/(p-j)! tau^{p-j} / (iaG)^{j+1}
    //                            - (-1)^p p! / (iaG)^{p+1},        a = 2 pi
    Rational Gpow(1);
    for (int j = 0; j <= p; ++j) {
      Gpow *= Rational(G);
      Rational c = t.coeff * Rational(falling_factorial(p, j)) / Gpow;
      if (j % 2) c = -c;
      out.push_back({c, p - j, G, t.pi_power + j + 1});
    }
    Rational boundary = t.coeff * Rational(falling_factorial(p, p)) / Gpow;
    if (p % 2 == 0) boundary = -boundary;
    out.push_back({boundary, 0, 0, t.pi_power + p + 1});
  }
  return OscSum::from_terms(std::move(out));
}

ExactValue value_at_one(const OscSum& f) {
  ExactValue v;
  for (const auto& t : f.terms()) add_to(v, t.pi_power, t.coeff);
  return v;
}

ExactValue final_step_value(const OscSum& f, int N) {
  ExactValue v;
  for (const auto& t : f.terms()) {
    const int G = t.freq + N;
    const int p = t.power;
    if (G == 0) {
      add_to(v, t.pi_power, t.coeff / Rational(p + 1));
      continue;
    }
    // At tau = 1 the j = p term of the antiderivative cancels the boundary
    // constant, leaving j = 0 .. p-1.
    Rational Gpow(1);
    for (int j = 0; j < p; ++j) {
      Gpow *= Rational(G);
      Rational c = t.coeff * Rational(falling_factorial(p, j)) / Gpow;
      if (j % 2) c = -c;
      add_to(v, t.pi_power + j + 1, c);
    }
  }
  return v;
}

bool has_vanishing_block(std::span<const int> Ns) {
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    long long s = 0;
    for (std::size_t j = i; j < Ns.size(); ++j) {
      s += Ns[j];
      if (s == 0) return true;
    }
  }
  return false;
}

ExactValue resonance_integral(std::span<const int> Ns) {
  if (Ns.size() > static_cast<std::size_t>(kMaxResonanceOrder))
    throw std::invalid_argument("resonance_integral: order above 5");
  if (Ns.empty()) {
    ExactValue v;
    v.by_pi_power[0] = Rational(1);
    return v;
  }
  OscSum f = OscSum::one();
  for (std::size_t j = Ns.size() - 1; j > 0; --j) f = integrate_step(f, Ns[j]);
  return final_step_value(f, Ns[0]);
}

bool is_resonant(std::span<const int> Ns) {
  if (!Ns.empty() && !has_vanishing_block(Ns)) return false;
  return !resonance_integral(Ns).is_zero();
}

std::size_t ResonanceCache::Hash::operator()(const std::vector<int>& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : v) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(x)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

ExactValue ResonanceCache::get(std::span<const int> Ns) {
  std::vector<int> key(Ns.begin(), Ns.end());
  {
    std::shared_lock lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return it->second;
  }
  ExactValue v = resonance_integral(Ns);
  std::unique_lock lock(mutex_);
  table_.emplace(std::move(key), v);
  return v;
}

std::size_t ResonanceCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

void ResonanceCache::clear() {
  std::unique_lock lock(mutex_);
  table_.clear();
}

ResonanceCache& global_resonance_cache() {
  static ResonanceCache cache;
  return cache;
}

ExactValue resonance_integral_cached(std::span<const int> Ns) { return global_resonance_cache().get(Ns); }

namespace {

struct Enumerator {
  std::span<const int> notes;
  int k;
  const ResonantVisitor& visit;
  std::vector<int> idx;
  std::vector<int> Ns;

  // Does a block starting at `pos` (within pos..k-1) sum to zero?
  bool block_from(int pos) const {
    long long s = 0;
    for (int j = pos; j < k; ++j) {
      s += Ns[j];
      if (s == 0) return true;
    }
    return false;
  }

  void leaf(const OscSum& inner, bool inner_block) {
    const int n = static_cast<int>(notes.size());
    for (int i = 0; i < n; ++i) {
      idx[0] = i;
      Ns[0] = notes[i];
      if (!inner_block && !block_from(0)) continue;
      ExactValue v = final_step_value(inner, Ns[0]);
      if (!v.is_zero()) visit(idx, v);
    }
  }

  void descend(int pos, const OscSum& inner, bool inner_block) {
    if (pos == 0) {
      leaf(inner, inner_block);
      return;
    }
    const int n = static_cast<int>(notes.size());
    for (int i = 0; i < n; ++i) place(pos, i, inner, inner_block);
  }

  void place(int pos, int i, const OscSum& inner, bool inner_block) {
    idx[pos] = i;
    Ns[pos] = notes[i];
    const bool block = inner_block || block_from(pos);
    descend(pos - 1, integrate_step(inner, Ns[pos]), block);
  }
};

}  // namespace

void for_each_resonant(std::span<const int> notes, int k, const ResonantVisitor& visit, int innermost) {
  if (k < 1 || k > kMaxResonanceOrder) throw std::invalid_argument("for_each_resonant: k must be in [1, 5]");
  if (notes.empty()) return;
  Enumerator e{notes, k, visit, std::vector<int>(k), std::vector<int>(k)};
  const OscSum one = OscSum::one();
  if (k == 1) {
    // The single index is also the innermost one.
    const int n = static_cast<int>(notes.size());
    for (int i = 0; i < n; ++i) {
      if (innermost >= 0 && i != innermost) continue;
      e.idx[0] = i;
      e.Ns[0] = notes[i];
      ExactValue v = final_step_value(one, notes[i]);
      if (!v.is_zero()) visit(e.idx, v);
    }
    return;
  }
  if (innermost >= 0) {
    e.place(k - 1, innermost, one, false);
    return;
  }
  e.descend(k - 1, one, false);
}

}  // namespace msgate
