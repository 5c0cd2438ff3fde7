#include "cusp/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "cusp/error.hpp"

namespace cusp {

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

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rational Rational::normalized(__int128 n, __int128 d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < -kMax || d > kMax) throw RangeError("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) { *this = normalized(n, d); }

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  // Continued-fraction convergents until the value round-trips exactly.
  __int128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  long double rem = x;
  for (int it = 0; it < 64; ++it) {
    long double a = std::floor(rem);
    if (std::fabs(a) > 9.2e18L) break;
    __int128 ai = static_cast<__int128>(a);
    __int128 h2 = ai * h1 + h0;
    __int128 k2 = ai * k1 + k0;
    if (h2 > kMax || h2 < -kMax || k2 > kMax) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) return normalized(h1, k1);
    long double frac = rem - a;
    if (frac == 0) break;
    rem = 1.0L / frac;
  }
  throw RangeError("value has no exact rational form with 64-bit terms");
}

Rational Rational::parse(std::string_view s) {
  std::string str(s);
  if (str.empty()) throw ParameterError("empty rational literal");
  auto slash = str.find('/');
  if (slash != std::string::npos) {
    Rational a = parse(str.substr(0, slash));
    Rational b = parse(str.substr(slash + 1));
    if (b.is_zero()) throw ParameterError("zero denominator in '" + str + "'");
    return a / b;
  }
  std::size_t pos = 0;
  bool neg = false;
  if (str[pos] == '+' || str[pos] == '-') neg = str[pos++] == '-';
  __int128 mant = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; pos < str.size(); ++pos) {
    char c = str[pos];
    if (c >= '0' && c <= '9') {
      mant = mant * 10 + (c - '0');
      if (mant > kMax) throw RangeError("literal too long: '" + str + "'");
      if (dot) --scale;
      digits = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw ParameterError("malformed number '" + str + "'");
  if (pos < str.size()) {
    if (str[pos] != 'e' && str[pos] != 'E') throw ParameterError("malformed number '" + str + "'");
    char* end = nullptr;
    long e = std::strtol(str.c_str() + pos + 1, &end, 10);
    if (end == str.c_str() + pos + 1 || *end != '\0') throw ParameterError("malformed number '" + str + "'");
    if (e > 30 || e < -30) throw RangeError("exponent too large in '" + str + "'");
    scale += static_cast<int>(e);
  }
  __int128 n = neg ? -mant : mant;
  __int128 d = 1;
  for (; scale > 0; --scale) {
    n *= 10;
    if (n > kMax || n < -kMax) throw RangeError("literal too large: '" + str + "'");
  }
  for (; scale < 0; ++scale) {
    d *= 10;
    if (d > kMax) throw RangeError("literal too precise: '" + str + "'");
  }
  return normalized(n, d);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return normalized(-static_cast<__int128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::normalized(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::normalized(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational division by zero");
  return Rational::normalized(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l <=> r;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Exponent Exponent::finite(const Rational& p) {
  if (p < Rational(1)) throw ParameterError("exponent must be >= 1, got " + p.str());
  return Exponent(Rational(1) / p);
}

Exponent Exponent::infinity() { return Exponent(Rational(0)); }

Exponent Exponent::from_double(double p) {
  if (std::isinf(p) && p > 0) return infinity();
  if (!(p >= 1.0)) throw ParameterError("exponent must be >= 1");
  return finite(Rational::from_double(p));
}

Exponent Exponent::parse(std::string_view s) {
  if (s == "inf" || s == "infinity" || s == "Inf" || s == "oo") return infinity();
  return finite(Rational::parse(s));
}

Rational Exponent::value() const {
  if (is_infinite()) throw DomainError("infinite exponent has no finite value");
  return Rational(1) / inv_;
}

double Exponent::to_double() const {
  return is_infinite() ? std::numeric_limits<double>::infinity() : value().to_double();
}

Exponent Exponent::conjugate() const { return Exponent(Rational(1) - inv_); }

std::string Exponent::str() const { return is_infinite() ? "inf" : value().str(); }

}  // namespace cusp
