#include "catch_amalgamated.hpp"

#include <cfloat>
#include <cmath>

#include "levyma/errors.hpp"
#include "levyma/kernels.hpp"
#include "support.hpp"

using namespace levyma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Straight sum in long double; no expansion, no shared code with the library.
long double h_oracle(int k, long double alpha, long double x, bool two_sided) {
  long double sum = 0.0L, binom = 1.0L;
  for (int j = 0; j <= k; ++j) {
    const long double d = x - j;
    long double term = 0.0L;
    if (two_sided) {
      term = std::pow(std::fabs(d), alpha);
    } else if (d > 0.0L) {
      term = std::pow(d, alpha);
    }
    sum += ((j % 2 == 0) ? 1.0L : -1.0L) * binom * term;
    binom = binom * (k - j) / (j + 1);
  }
  return sum;
}

}  // namespace

TEST_CASE("eval_g on the built-in kernels", "[kernels]") {
  CHECK(eval_g(indicator_kernel(), 0.5) == 1.0);
  CHECK(eval_g(indicator_kernel(), 0.0) == 1.0);
  CHECK(eval_g(indicator_kernel(), 1.0) == 1.0);
  CHECK(eval_g(indicator_kernel(), 1.0000001) == 0.0);
  CHECK_THAT(eval_g(lfsm_kernel(0.3), 2.0), WithinRel(1.2311444133449162845, 1e-15));

  const auto ms = multising_kernel({{0.0, 0.3, 1.0}, {0.7, 0.6, -2.0}});
  for (const auto& k : {indicator_kernel(), lfsm_kernel(0.3), ms}) {
    CHECK(eval_g(k, -1.0) == 0.0);
    CHECK(eval_g(k, -1e-300) == 0.0);
  }
}

TEST_CASE("bump kernel equals its local power law near each point", "[kernels]") {
  const auto k = multising_kernel({{0.0, 0.3, 1.0}, {0.8, 0.6, -2.0}});
  const double delta = k.bump_radius();
  CHECK_THAT(delta, WithinAbs(0.2, 1e-15));
  testgen::Gen g(11);
  for (int s = 0; s < 200; ++s) {
    const double u = g.uniform(0.0, delta);
    CHECK_THAT(eval_g(k, u), WithinRel(std::pow(u, 0.3), 1e-14));
    const double v = 0.8 + g.uniform(-delta, delta);
    CHECK_THAT(eval_g(k, v), WithinRel(-2.0 * std::pow(std::abs(v - 0.8), 0.6), 1e-14));
  }
  // Between the pieces the bumps have cut off.
  CHECK(eval_g(k, 0.4) == 0.0);
  // The last flank decays but never vanishes.
  CHECK(eval_g(k, 3.0) < 0.0);
  CHECK(std::abs(eval_g(k, 10.0)) < std::abs(eval_g(k, 3.0)));
}

TEST_CASE("bump flanks are continuous", "[kernels]") {
  const auto k = multising_kernel({{0.0, 0.5, 1.0}, {1.0, 0.5, 1.0}});
  const double delta = k.bump_radius();
  for (double edge : {delta, 2 * delta, 1.0 - 2 * delta, 1.0 - delta, 1.0 + delta, 1.0 + 2 * delta}) {
    const double h = 1e-9;
    CHECK_THAT(eval_g(k, edge + h) - eval_g(k, edge - h), WithinAbs(0.0, 1e-7));
  }
}

TEST_CASE("kernel validation", "[kernels]") {
  auto bad_w = lfsm_kernel(0.3);
  bad_w.w = 0.0;
  CHECK_THROWS_AS(bad_w.validate(), PreconditionError);

  auto bad_k = lfsm_kernel(0.3);
  bad_k.k_max = 0;
  CHECK_THROWS_AS(bad_k.validate(), PreconditionError);

  auto two_points = lfsm_kernel(0.3);
  two_points.singularities.push_back({0.5, 0.3, 1.0});
  CHECK_THROWS_AS(two_points.validate(), PreconditionError);

  auto wide = multising_kernel({{0.0, 0.3, 1.0}, {0.4, 0.3, 1.0}});
  wide.delta = 0.2;
  CHECK_THROWS_AS(wide.validate(), PreconditionError);
  wide.delta = 0.1;
  CHECK_NOTHROW(wide.validate());
}

TEST_CASE("filter weights", "[kernels]") {
  CHECK(filter_weights(1) == std::vector<std::int64_t>{1, -1});
  CHECK(filter_weights(2) == std::vector<std::int64_t>{1, -2, 1});
  CHECK(filter_weights(3) == std::vector<std::int64_t>{1, -3, 3, -1});
  CHECK_THROWS_AS(filter_weights(0), PreconditionError);

  for (int k = 1; k <= 30; ++k) {
    const auto w = filter_weights(k);
    REQUIRE(w.size() == static_cast<std::size_t>(k) + 1);
    std::int64_t sum = 0, abs_sum = 0;
    for (auto v : w) {
      sum += v;
      abs_sum += std::abs(v);
    }
    CHECK(sum == 0);
    CHECK(abs_sum == (std::int64_t{1} << k));
  }
}

TEST_CASE("filter annihilates polynomials of degree below k", "[kernels][property]") {
  testgen::Gen g(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = g.integer(1, 7);
    const int deg = g.integer(0, k - 1);
    std::vector<double> coef(static_cast<std::size_t>(deg) + 1);
    for (auto& c : coef) c = g.uniform(-2.0, 2.0);
    const double x0 = g.uniform(-3.0, 3.0), step = g.uniform(1e-4, 0.5);
    const auto w = filter_weights(k);
    double sum = 0.0, scale = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double x = x0 - j * step;
      double v = 0.0;
      for (std::size_t d = coef.size(); d-- > 0;) v = v * x + coef[d];
      sum += static_cast<double>(w[static_cast<std::size_t>(j)]) * v;
      scale += std::abs(static_cast<double>(w[static_cast<std::size_t>(j)]) * v);
    }
    CHECK(std::abs(sum) <= 1e-12 * scale + 1e-300);
  }
}

TEST_CASE("eval_g_filtered", "[kernels]") {
  const auto ind = indicator_kernel();
  CHECK(eval_g_filtered(ind, 5, 10, 1, 0.42) == 1.0);
  CHECK(eval_g_filtered(ind, 5, 10, 1, 0.51) == 0.0);
  CHECK_THAT(eval_g_filtered(lfsm_kernel(0.3), 4, 4, 2, 0.0),
             WithinRel(-0.022377112928567859036, 1e-13));
  CHECK_THROWS_AS(eval_g_filtered(ind, 0, 10, 1, 0.0), PreconditionError);

  testgen::Gen g(13);
  const auto ms = multising_kernel({{0.0, 0.3, 1.0}, {0.5, 0.4, 1.0}});
  for (int s = 0; s < 100; ++s) {
    const std::int64_t n = g.integer(4, 1000);
    const std::int64_t i = g.integer(3, static_cast<int>(n));
    const double x = static_cast<double>(i) / static_cast<double>(n) + g.uniform(1e-9, 3.0);
    CHECK(eval_g_filtered(ms, i, n, 3, x) == 0.0);
  }
}

TEST_CASE("h_k and h_{k,z} reference values", "[kernels]") {
  CHECK_THAT(eval_h0(1, 0.5, 0.5), WithinRel(std::sqrt(0.5), 1e-15));
  CHECK(eval_h0(2, 0.5, -3.0) == 0.0);
  CHECK(eval_hz(1, 1.0, 0.5) == 0.0);
  CHECK_THAT(eval_hz(1, 1.0, 2.0), WithinRel(1.0, 1e-15));
  CHECK(std::abs(eval_hz(2, 0.5, -100.0)) <= std::pow(98.0, -1.5));

  // 40-digit values of the defining finite sums.
  CHECK_THAT(eval_h0(2, 0.5, 100.0), WithinRel(-0.00025380552073375307778, 1e-12));
  CHECK_THAT(eval_h0(1, 0.3, 1000.0), WithinRel(0.0023838192217638627304, 1e-12));
  CHECK_THAT(eval_h0(3, 1.2, 50.0), WithinRel(-0.00017745263354743533716, 1e-12));
  CHECK_THAT(eval_h0(4, 0.4, 200.0), WithinRel(-5.3869192217866932271e-9, 1e-10));
  CHECK_THAT(eval_hz(2, 0.3, -40.0), WithinRel(-0.000380702371249718787, 1e-12));
  CHECK_THAT(eval_hz(2, 0.5, -100.0), WithinRel(-0.00024630387970258707514, 1e-12));
  CHECK_THAT(eval_hz(3, 0.7, 2.5), WithinRel(-0.8543148241541515179, 1e-14));
  CHECK_THAT(eval_hz(2, 1.5, 37.25), WithinRel(0.12457414586279758556, 1e-12));
}

TEST_CASE("h agrees with a long-double finite sum on both branches", "[kernels][property]") {
  testgen::Gen g(14);
  for (int s = 0; s < 2000; ++s) {
    const int k = g.integer(1, 3);
    double alpha = g.uniform(0.05, k - 0.05);
    if (std::abs(alpha - std::round(alpha)) < 0.05) alpha += 0.1;
    const bool two = g.coin();
    const double mag = k * std::pow(10.0, g.uniform(0.0, 3.0));
    const double x = (two && g.coin()) ? -mag : mag;
    const long double ref = h_oracle(k, alpha, x, two);
    const double got = two ? eval_hz(k, alpha, x) : eval_h0(k, alpha, x);
    // The oracle itself loses 2^k |x|^alpha ulps of long double to cancellation.
    const double scale = std::ldexp(std::pow(mag + k, alpha), k);
    const double oracle_err = 64.0 * LDBL_EPSILON * scale;
    // Below the switch point the library sums in double and has the same problem.
    const bool direct = mag < LimitFunction(k, alpha, two).switch_point();
    const double direct_err = direct ? 16.0 * DBL_EPSILON * scale : 0.0;
    INFO("k=" << k << " alpha=" << alpha << " x=" << x << " two_sided=" << two);
    CHECK(std::abs(got - static_cast<double>(ref)) <=
          1e-12 * std::abs(static_cast<double>(ref)) + oracle_err + direct_err);
  }
}

TEST_CASE("h_k ratio to q x^(alpha-k) follows the first-order correction", "[kernels]") {
  // h_k(x) = q x^(alpha-k) (1 + k (k - alpha) / (2x) + O(x^-2)).
  for (int k : {1, 2, 3}) {
    for (double alpha : {0.3, 0.5, 1.2}) {
      if (!(alpha < k)) continue;
      for (double x : {100.0, 300.0, 1000.0}) {
        const double ratio = eval_h0(k, alpha, x) * std::pow(x, k - alpha) / q_const(k, alpha);
        const double first = k * (k - alpha) / (2.0 * x);
        CHECK(std::abs(ratio - 1.0 - first) < 0.1 * first);
      }
      const double far = eval_h0(k, alpha, 1e5) * std::pow(1e5, k - alpha) / q_const(k, alpha);
      CHECK_THAT(far, WithinAbs(1.0, 1e-3));
    }
  }
}

TEST_CASE("two-sided h is dominated by |x -+ k|^(alpha-k)", "[kernels][property]") {
  testgen::Gen g(15);
  for (int s = 0; s < 1000; ++s) {
    const int k = g.integer(1, 4);
    const double alpha = g.uniform(0.05, std::min(1.0, k - 0.05));
    const double mag = (k + 1.0) * std::pow(10.0, g.uniform(0.0, 4.0));
    INFO("k=" << k << " alpha=" << alpha << " |x|=" << mag);
    CHECK(std::abs(eval_hz(k, alpha, mag)) <= std::pow(mag - k, alpha - k));
    CHECK(std::abs(eval_hz(k, alpha, -mag)) <= std::pow(mag - k, alpha - k));
  }
}

TEST_CASE("q constant", "[kernels]") {
  CHECK_THAT(q_const(1, 0.7), WithinRel(0.7, 1e-15));
  CHECK_THAT(q_const(2, 0.5), WithinRel(-0.25, 1e-15));
  CHECK(q_const(3, 2.0) == 0.0);
}

TEST_CASE("minimal exponent set", "[kernels]") {
  const auto a = min_alpha_set(multising_kernel({{0.0, 0.3, 1.0}, {0.5, 0.7, 1.0}}));
  CHECK(a.alpha_min == 0.3);
  CHECK(a.indices == std::vector<std::size_t>{0});
  const auto b = min_alpha_set(multising_kernel({{0.0, 0.3, 1.0}, {0.5, 0.3, 1.0}}));
  CHECK(b.indices == std::vector<std::size_t>{0, 1});
  const auto c = min_alpha_set(lfsm_kernel(0.5));
  CHECK(c.alpha_min == 0.5);
  CHECK(c.indices == std::vector<std::size_t>{0});
}

TEST_CASE("kernel ids are stable and distinguish parameters", "[kernels]") {
  const auto a = multising_kernel({{0.0, 0.3, 1.0}, {0.5, 0.3, 1.0}});
  const auto b = multising_kernel({{0.0, 0.3, 1.0}, {0.5, 0.4, 1.0}});
  CHECK(a.id() == a.id());
  CHECK(a.id() != b.id());
  CHECK(lfsm_kernel(0.2).id() != lfsm_kernel(0.3).id());
}
