#pragma once

// Indicator-gated binomial and multinomial coefficients in two arithmetics:
// exact rationals (GMP) and signed log-magnitude doubles.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include <gmpxx.h>

namespace netbreak {

using ExactScalar = mpq_class;

/// Signed value stored as (sign, ln|value|). sign == 0 is an exact zero and
/// logmag is meaningless in that case.
struct LogScalar {
  int sign = 0;
  double logmag = 0.0;

  static constexpr LogScalar zero() { return {}; }
  static constexpr LogScalar one() { return {1, 0.0}; }
  static constexpr LogScalar from_log(double logmag) { return {1, logmag}; }
  static LogScalar from_double(double v);

  bool is_zero() const { return sign == 0; }
  /// exp(logmag) with sign; under/overflows like std::exp.
  double value() const;

  LogScalar& operator*=(const LogScalar& rhs);
  LogScalar& operator/=(const LogScalar& rhs);
  LogScalar& operator+=(const LogScalar& rhs);

  friend LogScalar operator*(LogScalar a, const LogScalar& b) { return a *= b; }
  friend LogScalar operator/(LogScalar a, const LogScalar& b) { return a /= b; }
  friend LogScalar operator+(LogScalar a, const LogScalar& b) { return a += b; }
  friend LogScalar operator-(LogScalar a) {
    a.sign = -a.sign;
    return a;
  }
};

/// k/2 for integer k, held as the doubled integer so parity tests are exact.
struct HalfInt {
  std::int64_t doubled = 0;

  static constexpr HalfInt of(std::int64_t k) { return {2 * k}; }
  /// The value twice/2.
  static constexpr HalfInt halves(std::int64_t twice) { return {twice}; }

  constexpr bool is_integer() const { return doubled % 2 == 0; }
  constexpr bool is_natural() const { return is_integer() && doubled >= 0; }
  /// Only meaningful when is_integer().
  constexpr std::int64_t integer() const { return doubled / 2; }

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return {a.doubled + b.doubled}; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return {a.doubled - b.doubled}; }
  friend constexpr bool operator==(HalfInt, HalfInt) = default;
};

enum class Mode { exact, log };

/// k!, memoized process-wide. The reference stays valid for the process
/// lifetime. Safe to call concurrently.
const mpz_class& factorial(std::uint64_t k);

/// ln(k!) from a table filled by cumulative summation of ln k.
double ln_factorial(std::uint64_t k);

/// Arithmetic adaptor so the same formula can be written once for both modes.
template <class Scalar>
struct ScalarOps;

template <>
struct ScalarOps<ExactScalar> {
  static ExactScalar zero() { return ExactScalar(0); }
  static ExactScalar one() { return ExactScalar(1); }
  static ExactScalar integer(const mpz_class& v) { return ExactScalar(v); }
  static ExactScalar integer(std::int64_t v);
  static ExactScalar pow2(std::uint64_t i);
  static ExactScalar fact(std::uint64_t k) { return ExactScalar(factorial(k)); }
  static bool is_zero(const ExactScalar& v) { return sgn(v) == 0; }
};

template <>
struct ScalarOps<LogScalar> {
  static LogScalar zero() { return LogScalar::zero(); }
  static LogScalar one() { return LogScalar::one(); }
  static LogScalar integer(std::int64_t v) { return LogScalar::from_double(static_cast<double>(v)); }
  static LogScalar pow2(std::uint64_t i);
  static LogScalar fact(std::uint64_t k) { return LogScalar::from_log(ln_factorial(k)); }
  static bool is_zero(const LogScalar& v) { return v.is_zero(); }
};

/// n!/(k!(n-k)!) when k and n-k are non-negative integers, zero otherwise.
template <class Scalar>
Scalar gen_binomial(std::int64_t n, HalfInt k);

/// (sum parts)!/prod(parts!) when every part is a non-negative integer and
/// the parts add up to total; zero otherwise.
template <class Scalar>
Scalar gen_multinomial(HalfInt total, std::span<const HalfInt> parts);

template <class Scalar>
Scalar gen_multinomial(HalfInt total, std::initializer_list<HalfInt> parts) {
  return gen_multinomial<Scalar>(total, std::span<const HalfInt>(parts.begin(), parts.size()));
}

/// sum_{i=0}^{min(a,b)} M((a+b)/2; (a-i)/2, (b-i)/2, i) * 2^i, evaluated term
/// by term. Equals C(a+b, a) for even a+b and 0 for odd a+b.
template <class Scalar>
Scalar two_power_sum(std::int64_t a, std::int64_t b);

template <>
ExactScalar gen_binomial<ExactScalar>(std::int64_t n, HalfInt k);
template <>
LogScalar gen_binomial<LogScalar>(std::int64_t n, HalfInt k);
template <>
ExactScalar gen_multinomial<ExactScalar>(HalfInt total, std::span<const HalfInt> parts);
template <>
LogScalar gen_multinomial<LogScalar>(HalfInt total, std::span<const HalfInt> parts);
extern template ExactScalar two_power_sum<ExactScalar>(std::int64_t, std::int64_t);
extern template LogScalar two_power_sum<LogScalar>(std::int64_t, std::int64_t);

/// Correctly rounded (nearest, ties to even).
double to_double(const ExactScalar& v);
/// ln|v|; -inf for zero.
double log_abs(const ExactScalar& v);
LogScalar to_log(const ExactScalar& v);

/// Relative error |approx/exact - 1| evaluated in log space. Returns 0 when
/// both are zero and +inf when exactly one is.
double relative_error(const LogScalar& approx, const ExactScalar& exact);

/// "p/q" (or "p" for integers).
std::string to_string(const ExactScalar& v);

}  // namespace netbreak
