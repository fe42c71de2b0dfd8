#include "catch_amalgamated.hpp"

#include <cfloat>
#include <cmath>

#include "levyma/errors.hpp"
#include "levyma/kernels.hpp"
#include "levyma/levy.hpp"
#include "levyma/limits.hpp"
#include "levyma/rng.hpp"
#include "levyma/simulate.hpp"
#include "levyma/stats.hpp"
#include "levyma/subseq.hpp"
#include "support.hpp"

using namespace levyma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

long double h_ld(int k, long double alpha, long double x, bool two_sided) {
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

// One-sided series in the form sum_{l=0}^{R} |h_k(l + V)|^p with V = 1 - shift.
double one_sided_oracle(int k, double alpha, double p, double shift, std::int64_t R) {
  const long double v = 1.0L - shift;
  long double acc = 0.0L;
  for (std::int64_t l = 0; l <= R; ++l) acc += std::pow(std::fabs(h_ld(k, alpha, l + v, false)), (long double)p);
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("series value and truncation", "[limits]") {
  SECTION("the r = 0 term of the one-sided k = 1 series at shift 0 is h_1(1)^p = 1") {
    const auto v = series_Vmz(1, 0.5, true, 4.0, 0.0, 50);
    CHECK_THAT(v.value - 1.0, WithinRel(one_sided_oracle(1, 0.5, 4.0, 0.0, 50) - 1.0, 1e-12));
    CHECK(v.R == 50);
  }
  SECTION("doubling R never decreases the value nor increases the bound") {
    for (bool one : {true, false}) {
      double prev_v = 0.0, prev_b = INFINITY;
      for (std::int64_t R = 8; R <= 8192; R *= 2) {
        const auto v = series_Vmz(2, 0.3, one, 2.0, 0.37, R);
        CHECK(v.value >= prev_v);
        CHECK(v.tail_bound <= prev_b);
        prev_v = v.value;
        prev_b = v.tail_bound;
      }
    }
  }
  SECTION("R and 10R agree within the reported bound") {
    const auto a = series_Vmz(2, 0.3, false, 2.0, 0.25, 10000);
    const auto b = series_Vmz(2, 0.3, false, 2.0, 0.25, 100000);
    CHECK(std::abs(b.value - a.value) <= a.tail_bound);
    CHECK(b.value >= a.value);
  }
  SECTION("default truncation meets its relative target or stops at the cap") {
    const auto fast = series_Vmz(2, 0.3, true, 2.0, 0.4);
    CHECK(fast.tail_bound < 1e-8 * fast.value);
    CHECK(fast.R == default_truncation(2, 0.3, true, 2.0, 0.4));
    // p (k - alpha) = 1.44: the tail decays like R^-0.44 and the cap is reached.
    const auto slow = series_Vmz(1, 0.2, true, 1.8, 0.4);
    CHECK(slow.R == 1000000);
    CHECK(slow.tail_bound > 1e-8 * slow.value);
    CHECK(slow.tail_bound < 1e-2 * slow.value);
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(series_Vmz(1, 0.5, true, 2.0, 0.0, 100), PreconditionError);
    CHECK_THROWS_AS(series_Vmz(2, 0.5, true, 2.0, 0.0, 5), PreconditionError);
    CHECK_NOTHROW(series_Vmz(2, 0.5, true, 2.0, 0.0, 6));
  }
}

TEST_CASE("series matches a long-double sum", "[limits][property]") {
  testgen::Gen g(51);
  for (int s = 0; s < 60; ++s) {
    const int k = g.integer(1, 3);
    const double p = g.uniform(1.2, 4.0);
    const double alpha = g.uniform(0.05, k - 1.0 / p - 0.05);
    const double shift = g.uniform(0.0, 1.0);
    const std::int64_t R = g.integer(2 * k + 2, 200);
    const auto v = series_Vmz(k, alpha, true, p, shift, R);
    INFO("k=" << k << " alpha=" << alpha << " p=" << p << " shift=" << shift << " R=" << R);
    CHECK_THAT(v.value, WithinRel(one_sided_oracle(k, alpha, p, shift, R), 1e-11));
  }
}

TEST_CASE("two-sided series is periodic in the shift", "[limits]") {
  for (int k : {1, 2}) {
    const double alpha = 0.3, p = 2.0;
    const std::int64_t R = 4000;
    const auto at0 = series_Vmz(k, alpha, false, p, 0.0, R);
    // Shifting by one full unit re-indexes the sum. Near the integers each term
    // has a |x - j|^alpha cusp, so 1 - d differs from 0 by O(d^alpha).
    for (double d : {0x1p-53, 1e-12, 1e-9, 1e-6}) {
      const auto near1 = series_Vmz(k, alpha, false, p, 1.0 - d, R);
      const auto near0 = series_Vmz(k, alpha, false, p, d, R);
      INFO("k=" << k << " d=" << d);
      CHECK(std::abs(near1.value - at0.value) <= 2.0 * at0.tail_bound + 10.0 * std::pow(d, alpha) * at0.value);
      CHECK(std::abs(near1.value - near0.value) > 0.0);
    }
    CHECK(frac(std::nextafter(1.0, 0.0)) < 1.0);
    CHECK(series_Vmz(k, alpha, false, p, 1.25, R).value == series_Vmz(k, alpha, false, p, 0.25, R).value);
    CHECK(series_Vmz(k, alpha, false, p, -0.75, R).value == series_Vmz(k, alpha, false, p, 0.25, R).value);
  }
}

TEST_CASE("cached table agrees with direct summation", "[limits]") {
  testgen::Gen g(52);
  for (bool one : {true, false}) {
    const SeriesTable table(2, 0.4, one, 2.0, 20000);
    CHECK(table.interpolation_error() < 1e-9);
    for (int s = 0; s < 25; ++s) {
      const double shift = g.uniform(0.0, 1.0);
      const auto t = table(shift);
      const auto d = series_Vmz(2, 0.4, one, 2.0, shift, 20000);
      CHECK(std::abs(t.value - d.value) <= t.tail_bound - d.tail_bound + 1e-12 * d.value);
    }
  }
  CHECK(series_table(1, 0.3, true, 2.0).get() == series_table(1, 0.3, true, 2.0).get());
}

TEST_CASE("tail bound needs the |q|^p factor when |q| > 1", "[limits]") {
  // k = 2, alpha = 1.9: q = 1.71. The bare integral bound without the factor
  // is beaten by the actual tail; the reported bound is not.
  const int k = 2;
  const double alpha = 1.9, p = 12.0;
  const std::int64_t R = 100;
  const auto a = series_Vmz(k, alpha, true, p, 0.5, R);
  const auto b = series_Vmz(k, alpha, true, p, 0.5, 10 * R);
  const double ex = p * (k - alpha);
  const double bare = std::pow(static_cast<double>(R - k), 1.0 - ex) / (ex - 1.0);
  CHECK(b.value - a.value > bare);
  CHECK(b.value - a.value <= a.tail_bound);
  CHECK_THAT(a.tail_bound, WithinRel(std::pow(1.71, p) * (std::pow(R - k, -ex) + bare), 1e-12));
}

TEST_CASE("regime 1 with independent uniforms", "[limits]") {
  const auto lfsm = lfsm_kernel(0.2);
  SECTION("empty record") {
    auto u = make_stream(1, 0, StreamDomain::limit_uniforms);
    CHECK(limit_regime1(lfsm, JumpRecord({-1.0, 1.0}, {}, {}), {0.0}, 2.0, 1, u).value == 0.0);
  }
  SECTION("single jump reduces to the one-sided series at the drawn uniform") {
    const JumpRecord r({-1.0, 1.0}, {0.5}, {-1.7});
    auto u = make_stream(3, 4, StreamDomain::limit_uniforms);
    LimitOptions opt;
    opt.R = 400;
    opt.direct = true;
    const auto got = limit_regime1(lfsm, r, {}, 2.0, 1, u, opt);
    auto replay = make_stream(3, 4, StreamDomain::limit_uniforms);
    const double U = uniform_open(replay);
    REQUIRE(got.u_draws.has_value());
    CHECK((*got.u_draws)[0] == U);
    const double expect = std::pow(1.7, 2.0) * one_sided_oracle(1, 0.2, 2.0, U, 400);
    CHECK_THAT(got.value, WithinRel(expect, 1e-12));
  }
  SECTION("independent oracle over random records") {
    const auto k2 = multising_kernel({{0.0, 0.3, 1.5}, {0.45, 0.3, -0.5}, {0.8, 0.9, 1.0}});
    testgen::Gen g(53);
    for (int s = 0; s < 20; ++s) {
      const auto r = g.record({-1.0, 1.0}, 8);
      const double eta = g.uniform(0.0, 1.0);
      auto u = make_stream(9, static_cast<std::uint64_t>(s), StreamDomain::limit_uniforms);
      LimitOptions opt;
      opt.R = 300;
      opt.direct = true;
      const auto got = limit_regime1(k2, r, {eta}, 2.0, 2, u, opt);
      long double expect = 0.0L;
      for (std::size_t m = 0; m < r.size(); ++m) {
        const double T = r.times()[m], J = std::abs(r.sizes()[m]);
        const double U = (*got.u_draws)[m];
        if (T > 0.0 && T <= 1.0) expect += 1.5 * 1.5 * J * J * one_sided_oracle(2, 0.3, 2.0, U, 300);
        if (T > -0.45 && T <= 0.55) {
          const long double v = 1.0L - frac(U + eta);
          long double acc = 0.0L;
          for (std::int64_t l = -300; l <= 300; ++l) {
            acc += std::pow(h_ld(2, 0.3, l + v, true), 2.0L);
          }
          expect += 0.25L * J * J * acc;
        }
      }
      CHECK_THAT(got.value, WithinRel(static_cast<double>(expect), 1e-12) || WithinAbs(0.0, 1e-300));
    }
  }
  SECTION("a jump inside both windows contributes for both singularities") {
    const auto k2 = multising_kernel({{0.0, 0.3, 1.0}, {0.3, 0.3, 1.0}});
    const JumpRecord r({-1.0, 1.0}, {0.5}, {1.0});
    auto u = make_stream(2, 0, StreamDomain::limit_uniforms);
    LimitOptions opt;
    opt.verbose = true;
    const auto got = limit_regime1(k2, r, {0.1}, 2.0, 2, u, opt);
    REQUIRE(got.contributions.size() == 2);
    CHECK(got.contributions[0].z == 0);
    CHECK(got.contributions[1].z == 1);
    CHECK(got.etas == std::vector<double>{0.0, 0.1});
  }
  SECTION("preconditions") {
    auto u = make_stream(1, 0, StreamDomain::limit_uniforms);
    const JumpRecord r({-1.0, 1.0}, {0.5}, {1.0});
    CHECK_THROWS_AS(limit_regime1(lfsm_kernel(0.6), r, {0.0}, 2.0, 1, u), PreconditionError);
    const auto k2 = multising_kernel({{0.0, 0.3, 1.0}, {0.3, 0.3, 1.0}, {0.6, 0.3, 1.0}});
    CHECK_THROWS_AS(limit_regime1(k2, r, {0.1}, 2.0, 2, u), PreconditionError);
  }
}

TEST_CASE("coupled regime 1 uses {nT + n theta}", "[limits]") {
  LimitOptions opt;
  opt.verbose = true;
  const auto one = limit_regime1_coupled(lfsm_kernel(0.2), JumpRecord({-1.0, 1.0}, {0.35}, {1.0}), 10, 2.0, 1, opt);
  REQUIRE(one.contributions.size() == 1);
  CHECK_THAT(one.contributions[0].shift, WithinAbs(0.5, 1e-14));

  const auto k2 = multising_kernel({{0.0, 0.3, 1.0}, {1.0 / std::sqrt(2.0), 0.3, 1.0}});
  CHECK_THAT(frac(100 * 0.35 + 100 / std::sqrt(2.0)), WithinAbs(0.71067811865475244008, 1e-12));
  // 0.35 lies outside (-theta_1, 1 - theta_1]; 0.25 is inside both windows.
  const auto miss = limit_regime1_coupled(k2, JumpRecord({-1.0, 1.0}, {0.35}, {1.0}), 100, 2.0, 2, opt);
  CHECK(miss.contributions.size() == 1);
  const auto two = limit_regime1_coupled(k2, JumpRecord({-1.0, 1.0}, {0.25}, {1.0}), 100, 2.0, 2, opt);
  REQUIRE(two.contributions.size() == 2);
  CHECK_THAT(two.contributions[0].shift, WithinAbs(0.0, 1e-13));
  CHECK_THAT(two.contributions[1].shift, WithinAbs(0.71067811865475244008, 1e-12));
  CHECK_THAT(two.etas[1], WithinAbs(frac(100 / std::sqrt(2.0)), 1e-15));
}

TEST_CASE("coupled limit is approached on a separated record", "[limits]") {
  const auto k2 = multising_kernel({{0.0, 0.3, 1.0}, {1.0 / std::sqrt(2.0), 0.3, 1.0}});
  const auto levy = testgen::gaussian_cp(3.0, 61);
  const std::int64_t n = 1 << 14;
  std::vector<double> errs;
  for (std::uint64_t s = 0; errs.size() < 9; ++s) {
    const auto rec = simulate_jumps(levy, {-k2.default_past_window(), 1.0}, s);
    if (!check_omega_eps(rec, {0.0, 1.0 / std::sqrt(2.0)}, 0.01)) continue;
    const auto stat = power_variation(simulate_path(k2, rec, n), 2.0, 2, 0.3).scaled_r1;
    const auto lim = limit_regime1_coupled(k2, rec, n, 2.0, 2).value;
    if (lim == 0.0) continue;
    errs.push_back(std::abs(stat - lim) / lim);
  }
  std::sort(errs.begin(), errs.end());
  CHECK(errs[4] < 0.05);
}

TEST_CASE("regime 2", "[limits]") {
  const auto k2 = multising_kernel({{0.0, 1.5, 1.0}, {0.4, 1.5, 1.0}});
  const JumpRecord r({-1.0, 1.0}, {0.5}, {1.3});
  CHECK_THAT(limit_regime2(k2, r, 2.0, 2).value, WithinRel(0.75 * 0.75 * 3.0 * 1.3 * 1.3, 1e-14));
  CHECK(limit_regime2(k2, JumpRecord({-1.0, 1.0}, {}, {}), 2.0, 2).value == 0.0);

  const auto single = multising_kernel({{0.0, 1.5, -2.0}});
  const JumpRecord r2({-1.0, 1.0}, {-0.5, 0.2, 0.9}, {1.0, -0.5, 2.0});
  CHECK_THAT(limit_regime2(single, r2, 2.0, 2).value,
             WithinRel(std::pow(2.0 * 0.75, 2.0) * (0.25 + 4.0), 1e-14));

  CHECK_THROWS_AS(limit_regime2(multising_kernel({{0.0, 1.4, 1.0}}), r, 2.0, 2), PreconditionError);
  CHECK_THROWS_AS(limit_regime2(multising_kernel({{0.0, 1.5, 1.0}, {0.4, 1.2, 1.0}}), r, 2.0, 2),
                  PreconditionError);
}

TEST_CASE("indicator limit", "[limits]") {
  CHECK(limit_toy(JumpRecord({-1.0, 1.0}, {-0.4, 0.3}, {1.0, 2.0}), 2.0) == 5.0);
  CHECK(limit_toy(JumpRecord(), 2.0) == 0.0);
  CHECK(limit_toy(JumpRecord({-1.0, 1.0}, {0.0}, {3.0}), 1.0) == 3.0);
  CHECK(limit_toy(JumpRecord({-2.0, 1.0}, {-1.5, -1.0}, {3.0, 4.0}), 1.0) == 0.0);
}

TEST_CASE("indicator kernel statistic equals the limit on separated records", "[limits]") {
  const auto levy = testgen::gaussian_cp(5.0, 71);
  const std::int64_t n = 1 << 12;
  int used = 0;
  for (std::uint64_t s = 0; used < 20; ++s) {
    const auto rec = simulate_jumps(levy, {-2.0, 1.0}, s);
    if (!check_toy_separation(rec, 1.0 / static_cast<double>(n))) continue;
    ++used;
    for (double p : {0.7, 1.0, 2.5}) {
      const double V = power_variation(simulate_path(indicator_kernel(), rec, n), p, 1, 0.0).V;
      CHECK_THAT(V, WithinRel(limit_toy(rec, p), 1e-10) || WithinAbs(0.0, 0.0));
    }
  }
}
