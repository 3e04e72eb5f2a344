#include "netbreak/bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace netbreak {

void EnsembleParams::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2, got " + std::to_string(n));
  if (lambda < 2) {
    throw std::invalid_argument("lambda must be at least 2, got " + std::to_string(lambda));
  }
  if (sockets() % 2 != 0) {
    throw std::invalid_argument("lambda*n must be even (n=" + std::to_string(n) +
                                ", lambda=" + std::to_string(lambda) + ")");
  }
}

namespace {

void check_index(const EnsembleParams& params, int j) {
  if (j < 0 || j > params.n) {
    throw std::out_of_range("j=" + std::to_string(j) + " outside [0, " +
                            std::to_string(params.n) + "]");
  }
}

void check_probability(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::out_of_range("epsilon must lie in [0, 1], got " + std::to_string(eps));
  }
}

}  // namespace

// ------------------------------------------------------- ConfigurationShape

std::optional<ConfigurationShape> ConfigurationShape::from_free(const EnsembleParams& params,
                                                                std::int64_t n0, std::int64_t n1,
                                                                std::int64_t i1, std::int64_t i2) {
  const std::int64_t L = params.lambda;
  const std::int64_t n2 = params.n - n0 - n1;
  const HalfInt c0 = HalfInt::halves(L * n0 - i1 - i2);
  const HalfInt c1 = HalfInt::halves(L * n1 - i1);
  const HalfInt c2 = HalfInt::halves(L * n2 - i2);
  if (n0 < 0 || n1 < 0 || n2 < 0 || i1 < 0 || i2 < 0) return std::nullopt;
  if (!c0.is_natural() || !c1.is_natural() || !c2.is_natural()) return std::nullopt;
  return ConfigurationShape{n0, n1, n2, c0.integer(), c1.integer(), c2.integer(), i1, i2};
}

bool ConfigurationShape::is_consistent(const EnsembleParams& params) const {
  const std::int64_t L = params.lambda;
  const bool non_negative =
      n0 >= 0 && n1 >= 0 && n2 >= 0 && c0 >= 0 && c1 >= 0 && c2 >= 0 && i1 >= 0 && i2 >= 0;
  return non_negative && n0 + n1 + n2 == params.n && L * n0 == 2 * c0 + i1 + i2 &&
         L * n1 == 2 * c1 + i1 && L * n2 == 2 * c2 + i2 &&
         i1 + i2 + c0 + c1 + c2 == params.checks();
}

// ------------------------------------------------------------------ Q^(U)

template <>
ExactScalar q_upper<ExactScalar>(const EnsembleParams& params, int j) {
  params.validate();
  check_index(params, j);
  const std::int64_t n = params.n;
  const std::int64_t L = params.lambda;
  if (j >= n - 1) return ExactScalar(0);

  // Q = (Lj)! T / (2 (Ln)!) with
  //   T = sum_{n1} C(n-j, n1) (L n1)! (L n2)! S(n1)
  //   S(n1) = sum_{i1} 2^i1 M(Ln/2; i1, p, q) C(2q, L n2),
  // p = (L n1 - i1)/2, q = (L(n-n1) - i1)/2, n2 = n - j - n1.
  // Only i1 with L n1 - i1 even contribute; consecutive surviving terms
  // differ by the ratio 2 p s (s-1) / ((i1+1)(i1+2)(2q-1)) with s = Lj - i1.
  const unsigned long half_sockets = static_cast<unsigned long>(L * n / 2);
  mpz_class total = 0;
  mpz_class inner, term, factor;
  for (std::int64_t n1 = 1; n1 <= n - j - 1; ++n1) {
    const std::int64_t n2 = n - j - n1;
    const std::int64_t i1_max = L * std::min<std::int64_t>(n1, j);
    std::int64_t i1 = (L * n1) % 2;
    if (i1 > i1_max) continue;

    std::int64_t p = (L * n1 - i1) / 2;
    std::int64_t q = (L * (n - n1) - i1) / 2;
    std::int64_t s = L * j - i1;

    mpz_bin_uiui(term.get_mpz_t(), half_sockets, static_cast<unsigned long>(i1));
    mpz_bin_uiui(factor.get_mpz_t(), half_sockets - static_cast<unsigned long>(i1),
                 static_cast<unsigned long>(p));
    term *= factor;
    mpz_bin_uiui(factor.get_mpz_t(), static_cast<unsigned long>(2 * q),
                 static_cast<unsigned long>(L * n2));
    term *= factor;
    term <<= static_cast<mp_bitcnt_t>(i1);

    inner = 0;
    while (true) {
      inner += term;
      if (i1 + 2 > i1_max) break;
      mpz_mul_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(2 * p * s * (s - 1)));
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(),
                      static_cast<unsigned long>((i1 + 1) * (i1 + 2) * (2 * q - 1)));
      i1 += 2;
      p -= 1;
      q -= 1;
      s -= 2;
    }

    mpz_bin_uiui(factor.get_mpz_t(), static_cast<unsigned long>(n - j),
                 static_cast<unsigned long>(n1));
    factor *= factorial(static_cast<std::uint64_t>(L * n1));
    factor *= factorial(static_cast<std::uint64_t>(L * n2));
    total += factor * inner;
  }
  ExactScalar out(total * factorial(static_cast<std::uint64_t>(L * j)),
                  2 * factorial(static_cast<std::uint64_t>(L * n)));
  out.canonicalize();
  return out;
}

template <class Scalar>
Scalar q_upper_termwise(const EnsembleParams& params, int j) {
  params.validate();
  check_index(params, j);
  using Ops = ScalarOps<Scalar>;
  const std::int64_t n = params.n;
  const std::int64_t L = params.lambda;
  const HalfInt half_sockets = HalfInt::halves(L * n);

  Scalar sum = Ops::zero();
  for (std::int64_t n1 = 1; n1 <= n - j - 1; ++n1) {
    Scalar inner = Ops::zero();
    const std::int64_t i1_max = L * std::min<std::int64_t>(n1, j);
    for (std::int64_t i1 = 0; i1 <= i1_max; ++i1) {
      if ((L * n1 - i1) % 2 != 0) continue;
      const Scalar m = gen_multinomial<Scalar>(
          half_sockets,
          {HalfInt::of(i1), HalfInt::halves(L * n1 - i1), HalfInt::halves(L * (n - n1) - i1)});
      const Scalar b = gen_binomial<Scalar>(L * (n - n1) - i1, HalfInt::of(L * (n - n1 - j)));
      inner += Ops::pow2(static_cast<std::uint64_t>(i1)) * m * b;
    }
    if (Ops::is_zero(inner)) continue;
    sum += gen_binomial<Scalar>(n - j, HalfInt::of(n1)) /
           gen_binomial<Scalar>(L * (n - j), HalfInt::of(L * n1)) * inner;
  }
  if (Ops::is_zero(sum)) return sum;
  return sum / (Ops::integer(2) * gen_binomial<Scalar>(L * n, HalfInt::of(L * j)));
}

template ExactScalar q_upper_termwise<ExactScalar>(const EnsembleParams&, int);
template LogScalar q_upper_termwise<LogScalar>(const EnsembleParams&, int);

template <>
LogScalar q_upper<LogScalar>(const EnsembleParams& params, int j) {
  return q_upper_termwise<LogScalar>(params, j);
}

template <class Scalar>
QVector<Scalar> q_vector(const EnsembleParams& params, Variant variant, unsigned threads) {
  params.validate();
  QVector<Scalar> out{params, variant, std::vector<Scalar>(static_cast<std::size_t>(params.n) + 1)};
  // j = n-1 and j = n are zero by the empty n1 range.
  const std::size_t nontrivial = static_cast<std::size_t>(params.n - 1);
  detail::parallel_for(nontrivial, threads, [&](std::size_t j) {
    out.entries[j] = q_upper<Scalar>(params, static_cast<int>(j));
  });
  out.entries[params.n - 1] = ScalarOps<Scalar>::zero();
  out.entries[params.n] = variant == Variant::all_broken_is_breakdown ? ScalarOps<Scalar>::one()
                                                                      : ScalarOps<Scalar>::zero();
  return out;
}

template QVector<ExactScalar> q_vector<ExactScalar>(const EnsembleParams&, Variant, unsigned);
template QVector<LogScalar> q_vector<LogScalar>(const EnsembleParams&, Variant, unsigned);

// ------------------------------------------------------------------ P^(U)

ExactScalar p_upper_exact(const QVector<ExactScalar>& q, const ExactScalar& epsilon) {
  if (epsilon < 0 || epsilon > 1) throw std::out_of_range("epsilon must lie in [0, 1]");
  const int n = q.params.n;
  const ExactScalar survive = 1 - epsilon;
  // survive_pow[k] = (1 - eps)^k
  std::vector<ExactScalar> survive_pow(static_cast<std::size_t>(n) + 1);
  survive_pow[0] = 1;
  for (int k = 1; k <= n; ++k) survive_pow[k] = survive_pow[k - 1] * survive;

  ExactScalar sum = 0;
  ExactScalar eps_pow = 1;
  mpz_class binom;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) eps_pow *= epsilon;
    const ExactScalar& qj = q.entries[j];
    if (sgn(qj) == 0) continue;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(j));
    sum += ExactScalar(binom) * qj * eps_pow * survive_pow[n - j];
  }
  return sum;
}

double p_upper(const QVector<ExactScalar>& q, double epsilon) {
  check_probability(epsilon);
  return to_double(p_upper_exact(q, ExactScalar(epsilon)));
}

double p_upper(const QVector<LogScalar>& q, double epsilon) {
  check_probability(epsilon);
  const int n = q.params.n;
  const double log_eps = std::log(epsilon);
  const double log_survive = std::log1p(-epsilon);
  LogScalar sum = LogScalar::zero();
  for (int j = 0; j <= n; ++j) {
    const LogScalar& qj = q.entries[j];
    if (qj.is_zero()) continue;
    if (epsilon == 0.0 && j > 0) continue;
    if (epsilon == 1.0 && j < n) continue;
    double lm = ln_factorial(n) - ln_factorial(j) - ln_factorial(n - j) + qj.logmag;
    if (j > 0) lm += j * log_eps;
    if (j < n) lm += (n - j) * log_survive;
    sum += LogScalar{qj.sign, lm};
  }
  return sum.value();
}

template <class Scalar>
BoundCurve p_upper_curve(const EnsembleParams& params, std::span<const double> epsilons,
                         Variant variant, unsigned threads) {
  params.validate();
  for (const double eps : epsilons) check_probability(eps);
  if (epsilons.empty()) return BoundCurve{params, variant, {}};
  return curve_from(q_vector<Scalar>(params, variant, threads), epsilons);
}

template BoundCurve p_upper_curve<ExactScalar>(const EnsembleParams&, std::span<const double>,
                                               Variant, unsigned);
template BoundCurve p_upper_curve<LogScalar>(const EnsembleParams&, std::span<const double>,
                                             Variant, unsigned);

// ------------------------------------------------- configuration counting

ExactScalar config_count(const EnsembleParams& params, std::int64_t n0, std::int64_t n1,
                         std::int64_t i1, std::int64_t i2) {
  params.validate();
  const std::int64_t n = params.n;
  const std::int64_t L = params.lambda;
  const std::int64_t n2 = n - n0 - n1;
  const HalfInt c0 = HalfInt::halves(L * n0 - i1 - i2);
  const HalfInt c1 = HalfInt::halves(L * n1 - i1);
  const HalfInt c2 = HalfInt::halves(L * n2 - i2);

  const ExactScalar nodes =
      gen_multinomial<ExactScalar>(HalfInt::of(n), {HalfInt::of(n0), HalfInt::of(n1), HalfInt::of(n2)});
  if (sgn(nodes) == 0) return ExactScalar(0);
  const ExactScalar checks = gen_multinomial<ExactScalar>(
      HalfInt::halves(L * n), {HalfInt::of(i1), HalfInt::of(i2), c0, c1, c2});
  if (sgn(checks) == 0) return ExactScalar(0);
  const ExactScalar sockets = gen_multinomial<ExactScalar>(
      HalfInt::of(L * n), {HalfInt::of(L * n0), HalfInt::of(L * n1), HalfInt::of(L * n2)});

  ExactScalar out = ExactScalar(factorial(static_cast<std::uint64_t>(L * n))) * nodes * checks /
                    sockets * ScalarOps<ExactScalar>::pow2(static_cast<std::uint64_t>(i1 + i2));
  if (out.get_den() != 1) throw std::logic_error("configuration count is not an integer");
  return out;
}

ExactScalar config_count(const EnsembleParams& params, const ConfigurationShape& shape) {
  if (!shape.is_consistent(params)) return ExactScalar(0);
  return config_count(params, shape.n0, shape.n1, shape.i1, shape.i2);
}

ExactScalar k_of_j(const EnsembleParams& params, int j) {
  params.validate();
  check_index(params, j);
  const std::int64_t n = params.n;
  const std::int64_t L = params.lambda;
  ExactScalar sum = 0;
  for (std::int64_t n1 = 1; n1 <= n - j - 1; ++n1) {
    const std::int64_t n2 = n - j - n1;
    for (std::int64_t i1 = 0; i1 <= L * std::min<std::int64_t>(j, n1); ++i1) {
      for (std::int64_t i2 = 0; i2 <= std::min(L * n2, L * j - i1); ++i2) {
        sum += config_count(params, j, n1, i1, i2);
      }
    }
  }
  return sum / gen_binomial<ExactScalar>(n, HalfInt::of(j));
}

bool verify_collapse(const EnsembleParams& params, int j) {
  const ExactScalar lhs =
      k_of_j(params, j) / (2 * ExactScalar(factorial(static_cast<std::uint64_t>(params.sockets()))));
  return lhs == q_upper<ExactScalar>(params, j);
}

}  // namespace netbreak
