#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bcb {

// Exact rational on int64 with __int128 intermediates. Budgets, costs and
// context probabilities live here so that threshold comparisons (q_j vs b/tau)
// and the hard budget constraint never see float drift. Results that do not
// fit int64 after reduction throw; callers with inexact needs catch and fall
// back to double.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d) { assign(n, d); }

  static Rat from_int128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational: value does not fit int64");
    Rat r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  // Snap a decimal-style double to an exact rational with denominator 1e6.
  // Config files carry plain decimals; this recovers them exactly.
  static Rat from_decimal(double x) {
    long double scaled = static_cast<long double>(x) * 1000000.0L;
    long double rounded = scaled < 0 ? scaled - 0.5L : scaled + 0.5L;
    auto n = static_cast<std::int64_t>(rounded);
    Rat r(n, 1000000);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  // floor(num/den) for any sign
  std::int64_t floor() const {
    std::int64_t q = num_ / den_, r = num_ % den_;
    return (r != 0 && num_ < 0) ? q - 1 : q;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from_int128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from_int128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from_int128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational: division by zero");
    return from_int128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
  Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
  Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }
  Rat operator-() const { Rat r; r.num_ = -num_; r.den_ = den_; return r; }

  // comparisons are exact: cross-multiplication in __int128 cannot overflow
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void assign(std::int64_t n, std::int64_t d) {
    *this = from_int128(n, d);
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  std::int64_t num_, den_;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// Exact quotient when it fits, nearest small-denominator value otherwise.
// Quotients feed probability comparisons, so a rounded result only shifts
// a decision threshold by a negligible amount; it never breaks invariants.
inline Rat div_approx_on_overflow(const Rat& a, const Rat& b) {
  try {
    return a / b;
  } catch (const std::overflow_error&) {
    return Rat::from_decimal(a.to_double() / b.to_double());
  }
}

}  // namespace bcb
