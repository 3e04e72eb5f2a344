#include "netbreak/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace netbreak {

namespace {

// Append-only table published as immutable chunks. Readers keep a
// thread-local snapshot and only take the lock when they need a longer one;
// chunks are never freed, so references into them stay valid.
template <class T, std::size_t ChunkSize>
class ChunkedTable {
 public:
  using Chunk = std::vector<T>;
  using Snapshot = std::vector<std::shared_ptr<const Chunk>>;

  static constexpr std::size_t kChunkSize = ChunkSize;

  template <class Extend>
  std::shared_ptr<const Snapshot> covering(std::size_t k, Extend&& extend) {
    std::lock_guard lock(mutex_);
    if (!published_) published_ = std::make_shared<const Snapshot>();
    while (published_->size() * kChunkSize <= k) {
      auto next = std::make_shared<Snapshot>(*published_);
      next->push_back(std::make_shared<const Chunk>(extend(*published_)));
      published_ = std::move(next);
    }
    return published_;
  }

 private:
  std::mutex mutex_;
  std::shared_ptr<const Snapshot> published_;
};

using FactorialTable = ChunkedTable<mpz_class, 256>;
using LnFactorialTable = ChunkedTable<double, 4096>;

FactorialTable& factorial_table() {
  static FactorialTable table;
  return table;
}

struct LnFactorialState {
  LnFactorialTable table;
  // Running sum carried in extended precision across chunk boundaries.
  long double running = 0.0L;
};

LnFactorialState& ln_factorial_state() {
  static LnFactorialState state;
  return state;
}

}  // namespace

const mpz_class& factorial(std::uint64_t k) {
  constexpr std::size_t chunk = FactorialTable::kChunkSize;
  thread_local std::shared_ptr<const FactorialTable::Snapshot> snapshot;
  if (!snapshot || k >= snapshot->size() * chunk) {
    auto& table = factorial_table();
    snapshot = table.covering(k, [](const FactorialTable::Snapshot& existing) {
      FactorialTable::Chunk out(chunk);
      const std::size_t first = existing.size() * chunk;
      mpz_class acc = existing.empty() ? mpz_class(1) : existing.back()->back();
      for (std::size_t i = 0; i < chunk; ++i) {
        const std::size_t m = first + i;
        if (m > 0) acc *= static_cast<unsigned long>(m);
        out[i] = acc;
      }
      return out;
    });
  }
  return (*(*snapshot)[k / chunk])[k % chunk];
}

double ln_factorial(std::uint64_t k) {
  constexpr std::size_t chunk = LnFactorialTable::kChunkSize;
  thread_local std::shared_ptr<const LnFactorialTable::Snapshot> snapshot;
  if (!snapshot || k >= snapshot->size() * chunk) {
    auto& state = ln_factorial_state();
    snapshot = state.table.covering(k, [&](const LnFactorialTable::Snapshot& existing) {
      LnFactorialTable::Chunk out(chunk);
      const std::size_t first = existing.size() * chunk;
      for (std::size_t i = 0; i < chunk; ++i) {
        const std::size_t m = first + i;
        if (m > 1) state.running += std::log(static_cast<long double>(m));
        out[i] = static_cast<double>(state.running);
      }
      return out;
    });
  }
  return (*(*snapshot)[k / chunk])[k % chunk];
}

// ---------------------------------------------------------------- LogScalar

LogScalar LogScalar::from_double(double v) {
  if (v == 0.0) return zero();
  return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
}

double LogScalar::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(logmag);
}

LogScalar& LogScalar::operator*=(const LogScalar& rhs) {
  sign *= rhs.sign;
  logmag = sign == 0 ? 0.0 : logmag + rhs.logmag;
  return *this;
}

LogScalar& LogScalar::operator/=(const LogScalar& rhs) {
  if (rhs.sign == 0) throw std::domain_error("LogScalar division by zero");
  sign *= rhs.sign;
  logmag = sign == 0 ? 0.0 : logmag - rhs.logmag;
  return *this;
}

LogScalar& LogScalar::operator+=(const LogScalar& rhs) {
  if (rhs.sign == 0) return *this;
  if (sign == 0) return *this = rhs;
  const double hi = std::max(logmag, rhs.logmag);
  const double lo = std::min(logmag, rhs.logmag);
  if (sign == rhs.sign) {
    logmag = hi + std::log1p(std::exp(lo - hi));
    return *this;
  }
  if (hi == lo) return *this = zero();
  sign = logmag > rhs.logmag ? sign : rhs.sign;
  logmag = hi + std::log1p(-std::exp(lo - hi));
  return *this;
}

// ---------------------------------------------------------------- ScalarOps

ExactScalar ScalarOps<ExactScalar>::integer(std::int64_t v) {
  mpz_class z;
  mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
  return ExactScalar(z);
}

ExactScalar ScalarOps<ExactScalar>::pow2(std::uint64_t i) {
  mpz_class z;
  mpz_setbit(z.get_mpz_t(), i);
  return ExactScalar(z);
}

LogScalar ScalarOps<LogScalar>::pow2(std::uint64_t i) {
  return LogScalar::from_log(static_cast<double>(i) * std::numbers::ln2);
}

// ---------------------------------------------------------- coefficients

template <>
ExactScalar gen_binomial<ExactScalar>(std::int64_t n, HalfInt k) {
  const HalfInt rest = HalfInt::of(n) - k;
  if (!k.is_natural() || !rest.is_natural()) return ExactScalar(0);
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k.integer()));
  return ExactScalar(out);
}

template <>
LogScalar gen_binomial<LogScalar>(std::int64_t n, HalfInt k) {
  const HalfInt rest = HalfInt::of(n) - k;
  if (!k.is_natural() || !rest.is_natural()) return LogScalar::zero();
  return LogScalar::from_log(ln_factorial(n) - ln_factorial(k.integer()) -
                             ln_factorial(rest.integer()));
}

namespace {

bool multinomial_gate(HalfInt total, std::span<const HalfInt> parts) {
  if (parts.empty()) throw std::invalid_argument("gen_multinomial: empty part list");
  HalfInt sum{};
  for (const HalfInt p : parts) {
    if (!p.is_natural()) return false;
    sum = sum + p;
  }
  return sum == total;
}

}  // namespace

template <>
ExactScalar gen_multinomial<ExactScalar>(HalfInt total, std::span<const HalfInt> parts) {
  if (!multinomial_gate(total, parts)) return ExactScalar(0);
  mpz_class denom = 1;
  for (const HalfInt p : parts) denom *= factorial(p.integer());
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), factorial(total.integer()).get_mpz_t(), denom.get_mpz_t());
  return ExactScalar(out);
}

template <>
LogScalar gen_multinomial<LogScalar>(HalfInt total, std::span<const HalfInt> parts) {
  if (!multinomial_gate(total, parts)) return LogScalar::zero();
  double lm = ln_factorial(total.integer());
  for (const HalfInt p : parts) lm -= ln_factorial(p.integer());
  return LogScalar::from_log(lm);
}

template <class Scalar>
Scalar two_power_sum(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) throw std::invalid_argument("two_power_sum: negative argument");
  using Ops = ScalarOps<Scalar>;
  Scalar sum = Ops::zero();
  const HalfInt total = HalfInt::halves(a + b);
  for (std::int64_t i = 0; i <= std::min(a, b); ++i) {
    const Scalar m = gen_multinomial<Scalar>(
        total, {HalfInt::halves(a - i), HalfInt::halves(b - i), HalfInt::of(i)});
    if (Ops::is_zero(m)) continue;
    sum += m * Ops::pow2(static_cast<std::uint64_t>(i));
  }
  return sum;
}

template ExactScalar two_power_sum<ExactScalar>(std::int64_t, std::int64_t);
template LogScalar two_power_sum<LogScalar>(std::int64_t, std::int64_t);

// ------------------------------------------------------------ conversions

double to_double(const ExactScalar& v) {
  // get_d truncates toward zero; the nearest double is d or its successor
  // away from zero.
  const double d = v.get_d();
  if (!std::isfinite(d) || ExactScalar(d) == v) return d;
  const double e = std::nextafter(d, sgn(v) > 0 ? std::numeric_limits<double>::infinity()
                                                 : -std::numeric_limits<double>::infinity());
  if (!std::isfinite(e)) return d;
  const ExactScalar below = abs(v - ExactScalar(d));
  const ExactScalar above = abs(ExactScalar(e) - v);
  if (below != above) return below < above ? d : e;
  std::int64_t bits = 0;
  std::memcpy(&bits, &d, sizeof bits);
  return (bits & 1) == 0 ? d : e;
}

double log_abs(const ExactScalar& v) {
  if (sgn(v) == 0) return -std::numeric_limits<double>::infinity();
  long num_exp = 0;
  long den_exp = 0;
  const double num = std::fabs(mpz_get_d_2exp(&num_exp, v.get_num_mpz_t()));
  const double den = mpz_get_d_2exp(&den_exp, v.get_den_mpz_t());
  return std::log(num) - std::log(den) +
         static_cast<double>(num_exp - den_exp) * std::numbers::ln2;
}

LogScalar to_log(const ExactScalar& v) {
  if (sgn(v) == 0) return LogScalar::zero();
  return {sgn(v) > 0 ? 1 : -1, log_abs(v)};
}

double relative_error(const LogScalar& approx, const ExactScalar& exact) {
  const int exact_sign = sgn(exact);
  if (approx.sign == 0 && exact_sign == 0) return 0.0;
  if (approx.sign == 0 || exact_sign == 0) return std::numeric_limits<double>::infinity();
  const double diff = approx.logmag - log_abs(exact);
  if (approx.sign == (exact_sign > 0 ? 1 : -1)) return std::fabs(std::expm1(diff));
  return 1.0 + std::exp(diff);
}

std::string to_string(const ExactScalar& v) {
  ExactScalar c = v;
  c.canonicalize();
  return c.get_str();
}

}  // namespace netbreak
