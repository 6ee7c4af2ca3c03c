#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "delq/graded_ring.hpp"

using namespace delq;
using Catch::Matchers::Message;

// ---------------------------------------------------------------------------
// Test-local oracle: dense univariate truncated series over Rational,
// independent of GradedClass.
// ---------------------------------------------------------------------------
namespace {

using Series = std::vector<Rational>;  // coeffs[k] of x^k, size cutoff+1

Series series_mul(const Series& a, const Series& b) {
  Series r(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Series series_exp_minus_one(int cutoff) {
  Series r(cutoff + 1, Rational(0));
  for (int k = 1; k <= cutoff; ++k) r[k] = Rational(1, factorial(k));
  return r;
}

Series series_invert(const Series& s) {
  Series t(s.size(), Rational(0));
  t[0] = 1 / s[0];
  for (std::size_t n = 1; n < s.size(); ++n) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= n; ++j) acc += s[j] * t[n - j];
    t[n] = -acc / s[0];
  }
  return t;
}

GradedClass uni(const std::vector<Rational>& coeffs, int cutoff) {
  return series_in_generator({"x"}, cutoff, 0, coeffs);
}

GradedClass x_power(int k, int cutoff) {
  std::vector<Rational> c(k + 1, Rational(0));
  c[k] = 1;
  return uni(c, cutoff);
}

std::mt19937_64 rng(20240811);

GradedClass random_class(const std::vector<std::string>& vars, int cutoff, bool zero_const = false) {
  GradedClass acc(vars, cutoff);
  const int terms = 1 + static_cast<int>(rng() % 5);
  for (int t = 0; t < terms; ++t) {
    const long long num = static_cast<long long>(rng() % 11) - 5;
    const long long den = 1 + static_cast<long long>(rng() % 4);
    GradedClass mono = GradedClass::constant(vars, cutoff, Rational(num, den));
    int deg = static_cast<int>(rng() % (cutoff + 1));
    if (zero_const && deg == 0) deg = 1;
    for (int d = 0; d < deg; ++d)
      mono = mul(mono, GradedClass::generator(vars, cutoff, rng() % vars.size()));
    acc = add(acc, mono);
  }
  if (zero_const) {
    GradedClass::Expo zero(vars.size(), 0);
    acc = acc - GradedClass::constant(vars, cutoff, acc.coefficient(zero));
  }
  return acc;
}

}  // namespace

TEST_CASE("addition examples") {
  const int c = 3;
  auto one = GradedClass::constant({"x"}, c, 1);
  auto x = GradedClass::generator({"x"}, c, 0);
  CHECK(add(one + x, scale(one, Rational(-1)) + x) == scale(x, Rational(2)));

  auto a = random_class({"x", "y"}, 4);
  CHECK(add(a, GradedClass({"x", "y"}, 4)) == a);

  auto x2 = x_power(2, c);
  CHECK(add(x2, scale(x2, Rational(-1))).is_zero());
  CHECK(add(x2, scale(x2, Rational(-1))).terms().empty());
}

TEST_CASE("multiplication truncates above the cutoff") {
  auto one = GradedClass::constant({"x"}, 3, 1);
  auto x = GradedClass::generator({"x"}, 3, 0);
  CHECK(mul(one + x, one - x) == one - x_power(2, 3));

  CHECK(mul(x_power(2, 3), x_power(2, 3)).is_zero());
}

TEST_CASE("(e^x - 1)^2 against the series oracle") {
  const int cutoff = 4;
  const Series em1 = series_exp_minus_one(cutoff);
  const Series expect = series_mul(em1, em1);
  // frozen values computed by the oracle
  CHECK(expect[2] == 1);
  CHECK(expect[3] == 1);
  CHECK(expect[4] == Rational(7, 12));

  auto em1_class = exp_class(GradedClass::generator({"x"}, cutoff, 0)) -
                   GradedClass::constant({"x"}, cutoff, 1);
  CHECK(mul(em1_class, em1_class) == uni(expect, cutoff));
}

TEST_CASE("exp_class") {
  const int cutoff = 4;
  auto x = GradedClass::generator({"x"}, cutoff, 0);

  CHECK(exp_class(GradedClass({"x"}, cutoff)) == GradedClass::constant({"x"}, cutoff, 1));

  auto e = exp_class(x);
  for (int k = 0; k <= cutoff; ++k) {
    GradedClass::Expo ex = {k};
    CHECK(e.coefficient(ex) == Rational(1, factorial(k)));
  }

  auto xy = GradedClass::generator({"x", "y"}, 3, 0);
  auto yy = GradedClass::generator({"x", "y"}, 3, 1);
  CHECK(exp_class(xy + yy) == mul(exp_class(xy), exp_class(yy)));

  CHECK_THROWS_AS(exp_class(GradedClass::constant({"x"}, 3, 1)), std::domain_error);
}

TEST_CASE("todd series against the inversion oracle") {
  CHECK(todd_series("x", 0) == GradedClass::constant({"x"}, 0, 1));

  // independent inversion of (1 - e^{-x})/x
  const int cutoff = 6;
  Series s(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k)
    s[k] = Rational(BigInt(k % 2 == 0 ? 1 : -1), factorial(k + 1));
  const Series t = series_invert(s);

  CHECK(t[0] == 1);
  CHECK(t[1] == Rational(1, 2));
  CHECK(t[2] == Rational(1, 12));
  CHECK(t[3] == 0);
  CHECK(t[4] == Rational(-1, 720));

  auto td = todd_series("x", 4);
  CHECK(td == uni({t[0], t[1], t[2], t[3], t[4]}, 4));
  CHECK(td.coefficient({3}) == 0);
}

TEST_CASE("degree_part") {
  const int cutoff = 4;
  auto one = GradedClass::constant({"x"}, cutoff, 1);
  auto x = GradedClass::generator({"x"}, cutoff, 0);
  auto p = one + x + mul(x, x);
  CHECK(degree_part(p, 1) == x);
  CHECK(degree_part(exp_class(x), 0) == one);

  auto em1 = exp_class(x) - one;
  CHECK(degree_part(mul(em1, em1), 2) == x_power(2, cutoff));

  CHECK_THROWS_AS(degree_part(p, -1), std::domain_error);
  CHECK_THROWS_AS(degree_part(p, cutoff + 1), std::domain_error);
}

TEST_CASE("structural errors on mismatched rings") {
  auto a = GradedClass::constant({"x"}, 3, 1);
  auto b = GradedClass::constant({"y"}, 3, 1);
  auto c = GradedClass::constant({"x"}, 4, 1);
  CHECK_THROWS_AS(add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(mul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(add(a, c), std::invalid_argument);
}

TEST_CASE("ring axioms hold exactly on random inputs") {
  const std::vector<std::string> vars = {"x", "y", "z"};
  const int cutoff = 5;
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_class(vars, cutoff);
    auto b = random_class(vars, cutoff);
    auto c = random_class(vars, cutoff);
    CHECK(mul(a, b) == mul(b, a));
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
  }
}

TEST_CASE("truncation coherence") {
  const std::vector<std::string> vars = {"x", "y"};
  const int cutoff = 5;
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_class(vars, cutoff);
    auto b = random_class(vars, cutoff);
    for (int d = 0; d <= cutoff; ++d) {
      CHECK(degree_part(mul(a, b), d) == degree_part(mul(truncate_to(a, d), truncate_to(b, d)), d));
    }
  }
}

TEST_CASE("degree parts sum back to the class") {
  const std::vector<std::string> vars = {"x", "y"};
  const int cutoff = 4;
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_class(vars, cutoff);
    GradedClass acc(vars, cutoff);
    for (int d = 0; d <= cutoff; ++d) acc = add(acc, degree_part(a, d));
    CHECK(acc == a);
  }
}

TEST_CASE("exp is a homomorphism on nilpotents") {
  const std::vector<std::string> vars = {"x", "y"};
  const int cutoff = 5;
  for (int trial = 0; trial < 15; ++trial) {
    auto a = random_class(vars, cutoff, /*zero_const=*/true);
    auto b = random_class(vars, cutoff, /*zero_const=*/true);
    CHECK(exp_class(add(a, b)) == mul(exp_class(a), exp_class(b)));
  }
}
