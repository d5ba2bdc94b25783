#pragma once

// Exact rationals over int64 with overflow detection.

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dks {

class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const noexcept { return num_ == 0; }

  // Exact for dyadic values with small exponents (e.g. 2.5, 0.375); other
  // values go through a bounded continued fraction.
  static Rational from_double(double x, std::int64_t max_den = 1'000'000) {
    if (!std::isfinite(x)) throw std::invalid_argument("Rational: non-finite value");
    for (std::int64_t den = 1; den <= (std::int64_t{1} << 20); den *= 2) {
      const double scaled = x * static_cast<double>(den);
      if (std::abs(scaled) > 9e15) break;
      if (scaled == std::floor(scaled)) return Rational(static_cast<std::int64_t>(scaled), den);
    }
    // Continued fraction convergents.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int i = 0; i < 64; ++i) {
      const double a = std::floor(r);
      if (std::abs(a) > 9e15) break;
      const auto ai = static_cast<std::int64_t>(a);
      const __int128 p2 = static_cast<__int128>(ai) * p1 + p0;
      const __int128 q2 = static_cast<__int128>(ai) * q1 + q0;
      if (q2 > max_den || p2 > INT64_MAX || p2 < INT64_MIN) break;
      p0 = p1;
      q0 = q1;
      p1 = static_cast<std::int64_t>(p2);
      q1 = static_cast<std::int64_t>(q2);
      const double frac = r - a;
      if (frac < 1e-15) break;
      r = 1.0 / frac;
    }
    return Rational(p1, q1);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(static_cast<__int128>(a.num_) + b.num_, 1);
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const {
    if (num_ == INT64_MIN) throw std::overflow_error("Rational: overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    *this = from_wide(num, den);
  }

  static Rational from_wide(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (den != 1) {
      __int128 a = num < 0 ? -num : num, b = den;
      while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
      }
      if (a > 1) {
        num /= a;
        den /= a;
      }
    }
    if (num > INT64_MAX || num < -INT64_MAX || den > INT64_MAX) {
      throw std::overflow_error("Rational: overflow");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    if (r.num_ == 0) r.den_ = 1;
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace dks
