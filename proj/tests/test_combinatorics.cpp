#include "netbreak/combinatorics.hpp"

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"

using namespace netbreak;

namespace {

ExactScalar exact_binom(std::int64_t n, std::int64_t k) {
  return gen_binomial<ExactScalar>(n, HalfInt::of(k));
}

}  // namespace

TEST_CASE("HalfInt parity and arithmetic") {
  CHECK(HalfInt::of(3).is_integer());
  CHECK(HalfInt::of(3).integer() == 3);
  CHECK_FALSE(HalfInt::halves(5).is_integer());
  CHECK(HalfInt::halves(-4).is_integer());
  CHECK_FALSE(HalfInt::halves(-4).is_natural());
  CHECK(HalfInt::halves(3) + HalfInt::halves(1) == HalfInt::of(2));
  CHECK(HalfInt::of(1) - HalfInt::halves(1) == HalfInt::halves(1));
}

TEST_CASE("gen_binomial examples") {
  CHECK(exact_binom(5, 2) == 10);
  CHECK(gen_binomial<ExactScalar>(5, HalfInt::halves(5)) == 0);
  CHECK(exact_binom(4, -1) == 0);
  CHECK(exact_binom(4, 5) == 0);
  CHECK(exact_binom(0, 0) == 1);
  CHECK(gen_binomial<LogScalar>(5, HalfInt::halves(5)).is_zero());
  CHECK(gen_binomial<LogScalar>(4, HalfInt::of(-1)).is_zero());
  CHECK(gen_binomial<LogScalar>(5, HalfInt::of(2)).value() == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("gen_multinomial examples") {
  using H = HalfInt;
  CHECK(gen_multinomial<ExactScalar>(H::of(2), {H::of(1), H::of(1), H::of(0)}) == 2);
  CHECK(gen_multinomial<ExactScalar>(H::of(2), {H::halves(1), H::halves(1), H::of(1)}) == 0);
  CHECK(gen_multinomial<ExactScalar>(H::of(3), {H::of(1), H::of(1), H::of(1)}) == 6);
  // total must match the sum of the parts
  CHECK(gen_multinomial<ExactScalar>(H::of(4), {H::of(1), H::of(1), H::of(1)}) == 0);
  CHECK(gen_multinomial<LogScalar>(H::of(2), {H::halves(1), H::halves(1), H::of(1)}).is_zero());
  CHECK_THROWS_AS(gen_multinomial<ExactScalar>(H::of(0), std::span<const HalfInt>{}),
                  std::invalid_argument);
}

TEST_CASE("gen_multinomial with two parts is gen_binomial") {
  for (std::int64_t n = 0; n <= 30; ++n) {
    for (std::int64_t k = -2; k <= n + 2; ++k) {
      const auto m = gen_multinomial<ExactScalar>(HalfInt::of(n), {HalfInt::of(k), HalfInt::of(n - k)});
      CHECK(m == exact_binom(n, k));
    }
  }
}

TEST_CASE("binomial symmetry") {
  for (std::int64_t n = 0; n <= 60; ++n) {
    for (std::int64_t k = -3; k <= n + 3; ++k) CHECK(exact_binom(n, k) == exact_binom(n, n - k));
  }
}

TEST_CASE("two_power_sum examples") {
  // (2,2): i=0 gives M(2;1,1,0)=2, i=1 has half-integer parts, i=2 gives
  // M(2;0,0,2)*4 = 4.
  CHECK(two_power_sum<ExactScalar>(2, 2) == 6);
  CHECK(two_power_sum<ExactScalar>(1, 2) == 0);
  CHECK(two_power_sum<ExactScalar>(0, 0) == 1);
  CHECK(two_power_sum<LogScalar>(1, 2).is_zero());
}

TEST_CASE("two_power_sum collapses to C(a+b, a) for even a+b") {
  for (std::int64_t a = 0; a <= 24; ++a) {
    for (std::int64_t b = 0; b <= 24; ++b) {
      const ExactScalar expect = (a + b) % 2 == 0 ? exact_binom(a + b, a) : ExactScalar(0);
      CHECK(two_power_sum<ExactScalar>(a, b) == expect);
    }
  }
}

TEST_CASE("ln_factorial matches lgamma") {
  for (std::uint64_t k : {0ull, 1ull, 2ull, 10ull, 170ull, 4095ull, 4096ull, 4097ull, 5000ull, 12000ull}) {
    const double expect = std::lgamma(static_cast<double>(k) + 1.0);
    CHECK(ln_factorial(k) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("factorial memo is consistent across threads") {
  std::vector<std::thread> pool;
  std::vector<bool> ok(4, true);
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([t, &ok] {
      for (std::uint64_t k = 1000 * t; k > 0; k -= 7) {
        mpz_class expect;
        mpz_fac_ui(expect.get_mpz_t(), k);
        if (factorial(k) != expect) ok[t] = false;
        if (k < 7) break;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const bool b : ok) CHECK(b);
  CHECK(factorial(0) == 1);
}

TEST_CASE("log mode agrees with exact mode") {
  std::mt19937_64 rng(12345);
  auto check = [](const LogScalar& approx, const ExactScalar& exact) {
    if (sgn(exact) == 0) {
      CHECK(approx.is_zero());
    } else {
      CHECK(approx.sign == sgn(exact));
      CHECK(std::fabs(approx.logmag - log_abs(exact)) <= 1e-10);
    }
  };
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t n = static_cast<std::int64_t>(rng() % 501);
    const HalfInt k = HalfInt::halves(static_cast<std::int64_t>(rng() % (2 * n + 3)) - 1);
    check(gen_binomial<LogScalar>(n, k), gen_binomial<ExactScalar>(n, k));

    const std::int64_t a = static_cast<std::int64_t>(rng() % 200);
    const std::int64_t b = static_cast<std::int64_t>(rng() % 200);
    const std::int64_t c = static_cast<std::int64_t>(rng() % 100);
    const HalfInt total = HalfInt::halves(a + b + 2 * c);
    const HalfInt parts[] = {HalfInt::halves(a), HalfInt::halves(b), HalfInt::of(c)};
    check(gen_multinomial<LogScalar>(total, parts), gen_multinomial<ExactScalar>(total, parts));
  }
  for (std::int64_t a = 0; a <= 60; a += 3) {
    for (std::int64_t b = 0; b <= 60; b += 5) {
      check(two_power_sum<LogScalar>(a, b), two_power_sum<ExactScalar>(a, b));
    }
  }
}

TEST_CASE("LogScalar arithmetic") {
  const LogScalar two = LogScalar::from_double(2.0);
  const LogScalar three = LogScalar::from_double(3.0);
  CHECK((two + three).value() == doctest::Approx(5.0));
  CHECK((two * three).value() == doctest::Approx(6.0));
  CHECK((three / two).value() == doctest::Approx(1.5));
  CHECK((two + -three).value() == doctest::Approx(-1.0));
  CHECK((two + -two).is_zero());
  CHECK((LogScalar::zero() + two).value() == doctest::Approx(2.0));
  CHECK((LogScalar::zero() * two).is_zero());
  CHECK_THROWS_AS(two / LogScalar::zero(), std::domain_error);

  // Far beyond double range.
  const LogScalar huge = LogScalar::from_log(1e5);
  CHECK((huge + huge).logmag == doctest::Approx(1e5 + std::log(2.0)));
}

TEST_CASE("relative_error and conversions") {
  CHECK(relative_error(LogScalar::zero(), ExactScalar(0)) == 0.0);
  CHECK(std::isinf(relative_error(LogScalar::one(), ExactScalar(0))));
  CHECK(relative_error(LogScalar::from_double(0.5), ExactScalar(1, 2)) < 1e-15);
  CHECK(log_abs(ExactScalar(mpz_class(1) << 5000, 3)) ==
        doctest::Approx(5000 * std::log(2.0) - std::log(3.0)));
  CHECK(to_double(ExactScalar(1, 4)) == 0.25);
  // Nearest double, not the truncated one.
  CHECK(to_double(ExactScalar(65, 63)) == 65.0 / 63.0);
  CHECK(to_double(ExactScalar(-65, 63)) == -65.0 / 63.0);
  CHECK(to_double(ExactScalar(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(ExactScalar(2, 3)) == 2.0 / 3.0);
  for (int k = 1; k < 200; ++k) CHECK(to_double(ExactScalar(k, 97)) == static_cast<double>(k) / 97.0);
  CHECK(to_string(ExactScalar(6, 4)) == "3/2");
}
