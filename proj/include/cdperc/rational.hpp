#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cdperc/errors.hpp"

namespace cdperc {

/// Exact non-negative rational, always reduced. Arithmetic is checked: any
/// intermediate that leaves 64 bits after reduction throws.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::uint64_t num, std::uint64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  constexpr std::uint64_t num() const noexcept { return num_; }
  constexpr std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::uint64_t g = std::gcd(a.den_, b.den_);
    const unsigned __int128 den = static_cast<unsigned __int128>(a.den_ / g) * b.den_;
    const unsigned __int128 num =
        static_cast<unsigned __int128>(a.num_) * (b.den_ / g) + static_cast<unsigned __int128>(b.num_) * (a.den_ / g);
    return from_wide(num, den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const std::uint64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
    // denominators are never zero, so both gcds are >= 1
    const unsigned __int128 num = static_cast<unsigned __int128>(a.num_ / g1) * (b.num_ / g2);
    const unsigned __int128 den = static_cast<unsigned __int128>(a.den_ / g2) * (b.den_ / g1);
    return from_wide(num, den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num_) * b.den_ < static_cast<unsigned __int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_wide(unsigned __int128 num, unsigned __int128 den) {
    unsigned __int128 a = num, b = den;
    while (b != 0) {
      const unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr auto kMax = static_cast<unsigned __int128>(UINT64_MAX);
    if (num > kMax || den > kMax) throw InvariantError("Rational: overflow");
    return Rational(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den));
  }

  constexpr void normalize() {
    const std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// A probability: a Rational constrained to [0, 1].
class RationalProb {
 public:
  RationalProb() = default;
  explicit RationalProb(Rational r) : value_(r) {
    if (r.num() > r.den()) throw std::invalid_argument("RationalProb: value exceeds 1");
  }
  RationalProb(std::uint64_t num, std::uint64_t den) : RationalProb(Rational(num, den)) {}

  const Rational& value() const noexcept { return value_; }
  std::uint64_t num() const noexcept { return value_.num(); }
  std::uint64_t den() const noexcept { return value_.den(); }
  double to_double() const noexcept { return value_.to_double(); }
  std::string str() const { return value_.str(); }

  friend bool operator==(const RationalProb&, const RationalProb&) = default;
  friend std::ostream& operator<<(std::ostream& os, const RationalProb& p) { return os << p.value_; }

 private:
  Rational value_;
};

}  // namespace cdperc
