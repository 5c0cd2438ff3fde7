#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cusp {

// Exact rational with int64 storage; every operation checks for overflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  // Smallest-denominator rational that converts back to exactly x.
  static Rational from_double(double x);
  // Accepts "a", "a/b" and finite decimals such as "1.25" or "-0.5e-1".
  static Rational parse(std::string_view s);

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  bool is_zero() const { return num_ == 0; }
  bool positive() const { return num_ > 0; }

 private:
  static Rational normalized(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Lebesgue exponent in [1, inf], stored through its reciprocal so inf is exact.
class Exponent {
 public:
  Exponent() : inv_(1) {}
  static Exponent finite(const Rational& p);
  static Exponent infinity();
  static Exponent from_double(double p);
  static Exponent parse(std::string_view s);

  bool is_infinite() const { return inv_.is_zero(); }
  const Rational& inv() const { return inv_; }
  Rational value() const;  // throws for inf
  double to_double() const;
  // Hoelder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const;
  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.inv_ == b.inv_; }

 private:
  explicit Exponent(const Rational& inv) : inv_(inv) {}
  Rational inv_;
};

}  // namespace cusp
