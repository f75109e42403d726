#include "polyfold/rational.hpp"

#include <limits>
#include <ostream>

namespace polyfold {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational overflow");
  return std::int64_t(v);
}

}  // namespace

Rational Rational::make(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = narrow(n);
  r.den_ = narrow(d);
  return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rational Rational::parse(const std::string& s) {
  auto pos = s.find('/');
  try {
    if (pos == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, pos)), std::stoll(s.substr(pos + 1)));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("rational: cannot parse '" + s + "'");
  }
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-__int128(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& r) {
  *this = make(__int128(num_) * r.den_ + __int128(r.num_) * den_,
               __int128(den_) * r.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& r) {
  *this = make(__int128(num_) * r.den_ - __int128(r.num_) * den_,
               __int128(den_) * r.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& r) {
  *this = make(__int128(num_) * r.num_, __int128(den_) * r.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& r) {
  if (r.num_ == 0) throw std::domain_error("rational: division by zero");
  *this = make(__int128(num_) * r.den_, __int128(den_) * r.num_);
  return *this;
}

bool operator<(const Rational& a, const Rational& b) {
  return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_;
}

Rational Rational::pow(unsigned e) const {
  Rational acc(1);
  Rational base = *this;
  while (e) {
    if (e & 1) acc *= base;
    base = (e >>= 1) ? base * base : base;
  }
  return acc;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace polyfold
