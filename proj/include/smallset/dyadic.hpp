#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <regex>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "smallset/error.hpp"

namespace smallset {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational m / 2^e with arbitrary-precision m and e >= 0.
///
/// Values are kept canonical (m odd, or m == 0 with e == 0), so structural
/// equality coincides with numeric equality and the textual form is unique.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long long value) : mantissa_(value) {}  // NOLINT(google-explicit-constructor)
  Dyadic(BigInt mantissa, std::uint64_t exponent)
      : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
  }

  /// 2^k for any integer k.
  static Dyadic pow2(std::int64_t k) {
    if (k >= 0) return Dyadic(BigInt(1) << static_cast<unsigned>(k), 0);
    return Dyadic(BigInt(1), static_cast<std::uint64_t>(-k));
  }

  /// count / 2^bits, the relative size of a subset of 2^bits.
  static Dyadic ratio(std::uint64_t count, std::uint64_t bits) { return Dyadic(BigInt(count), bits); }

  const BigInt& mantissa() const noexcept { return mantissa_; }
  std::uint64_t exponent() const noexcept { return exponent_; }

  bool is_zero() const noexcept { return mantissa_ == 0; }
  int sign() const noexcept { return mantissa_.sign(); }

  /// Multiply by 2^k exactly.
  Dyadic scaled(std::int64_t k) const {
    if (k >= 0) {
      const auto uk = static_cast<std::uint64_t>(k);
      if (uk <= exponent_) return Dyadic(mantissa_, exponent_ - uk);
      return Dyadic(mantissa_ << static_cast<unsigned>(uk - exponent_), 0);
    }
    return Dyadic(mantissa_, exponent_ + static_cast<std::uint64_t>(-k));
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const auto e = std::max(a.exponent_, b.exponent_);
    return Dyadic(a.lifted(e) + b.lifted(e), e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    const auto e = std::max(a.exponent_, b.exponent_);
    return Dyadic(a.lifted(e) - b.lifted(e), e);
  }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
  }
  Dyadic operator-() const { return Dyadic(-mantissa_, exponent_); }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const auto e = std::max(a.exponent_, b.exponent_);
    const BigInt x = a.lifted(e);
    const BigInt y = b.lifted(e);
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "m" when the exponent is zero, "m/2^e" otherwise.
  std::string str() const {
    if (exponent_ == 0) return mantissa_.str();
    return mantissa_.str() + "/2^" + std::to_string(exponent_);
  }

  double to_double() const {
    return mantissa_.convert_to<double>() / std::pow(2.0, static_cast<double>(exponent_));
  }

  /// Accepts "m", "m/2^e", "p/q" with q a power of two, and "2^k" / "2^-k".
  static Dyadic parse(const std::string& text) {
    static const std::regex integer(R"(\s*(-?\d+)\s*)");
    static const std::regex frac_pow(R"(\s*(-?\d+)\s*/\s*2\^(\d+)\s*)");
    static const std::regex frac(R"(\s*(-?\d+)\s*/\s*(\d+)\s*)");
    static const std::regex power(R"(\s*2\^\(?(-?\d+)\)?\s*)");
    std::smatch m;
    if (std::regex_match(text, m, integer)) return Dyadic(BigInt(m[1].str()), 0);
    if (std::regex_match(text, m, frac_pow)) {
      return Dyadic(BigInt(m[1].str()), std::stoull(m[2].str()));
    }
    if (std::regex_match(text, m, frac)) {
      const BigInt den(m[2].str());
      if (den <= 0 || (den & (den - 1)) != 0) {
        throw Error(ErrorKind::InvalidInput, "denominator is not a power of two: " + text);
      }
      return Dyadic(BigInt(m[1].str()), boost::multiprecision::msb(den));
    }
    if (std::regex_match(text, m, power)) return pow2(std::stoll(m[1].str()));
    throw Error(ErrorKind::InvalidInput, "not a dyadic rational: '" + text + "'");
  }

 private:
  BigInt lifted(std::uint64_t e) const { return mantissa_ << static_cast<unsigned>(e - exponent_); }

  void normalize() {
    if (mantissa_ == 0) {
      exponent_ = 0;
      return;
    }
    const auto zeros = static_cast<std::uint64_t>(boost::multiprecision::lsb(abs(mantissa_)));
    const auto shift = std::min(zeros, exponent_);
    mantissa_ >>= static_cast<unsigned>(shift);
    exponent_ -= shift;
  }

  BigInt mantissa_{0};
  std::uint64_t exponent_ = 0;
};

}  // namespace smallset
