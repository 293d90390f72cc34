#include "msgate/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace msgate {
namespace {

int128 abs128(int128 x) { return x < 0 ? -x : x; }

int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: multiplication overflow");
  return r;
}

int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: addition overflow");
  return r;
}

}  // namespace

Rational::Rational(int128 num, int128 den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int128 g = gcd128(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

double Rational::to_double() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rational::str() const {
  auto to_str = [](int128 v) {
    if (v == 0) return std::string("0");
    const bool neg = v < 0;
    std::string s;
    while (v != 0) {
      int digit = static_cast<int>(v % 10);
      s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
      v /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
  };
  if (den_ == 1) return to_str(num_);
  return to_str(num_) + "/" + to_str(den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (o.num_ == 0) return *this;
  if (num_ == 0) return *this = o;
  if (den_ == o.den_) return *this = Rational(checked_add(num_, o.num_), den_);
  const int128 g = gcd128(den_, o.den_);
  const int128 lhs = checked_mul(num_, o.den_ / g);
  const int128 rhs = checked_mul(o.num_, den_ / g);
  return *this = Rational(checked_add(lhs, rhs), checked_mul(den_, o.den_ / g));
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (num_ == 0 || o.num_ == 0) return *this = Rational();
  const int128 g1 = gcd128(num_, o.den_);
  const int128 g2 = gcd128(o.num_, den_);
  Rational r;
  r.num_ = checked_mul(num_ / g1, o.num_ / g2);
  r.den_ = checked_mul(den_ / g2, o.den_ / g1);
  return *this = r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
  Rational inv;
  inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
  inv.den_ = abs128(o.num_);
  return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const int128 lhs = checked_mul(a.num_, b.den_);
  const int128 rhs = checked_mul(b.num_, a.den_);
  return lhs <=> rhs;
}

}  // namespace msgate
