#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scmxxz/error.hpp"
#include "scmxxz/noise.hpp"
#include "support/oracles.hpp"

using namespace scmxxz;
using doctest::Approx;

TEST_CASE("inverse CDF") {
  CHECK(weibull_quantile({1.0, 2.0}, std::exp(-1.0)) == Approx(2.0).epsilon(1e-15));
  CHECK(weibull_quantile({2.0, 1.0}, std::exp(-4.0)) == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("collision rate") {
  CHECK(collision_rate({1.0, 2.0}) == Approx(0.5).epsilon(1e-15));
  CHECK(collision_rate({2.0, 1.0}) == Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  const WeibullParams p = params_for_rate(100.0, 10.0);
  CHECK(p.scale == Approx(1.0 / (10.0 * std::tgamma(1.01))).epsilon(1e-15));
  CHECK(std::abs(collision_rate(p) - 10.0) < 1e-12);
}

TEST_CASE("params_for_rate") {
  CHECK(params_for_rate(1.0, 0.5).scale == Approx(2.0).epsilon(1e-15));
  CHECK(params_for_rate(1.0, 100.0).scale == Approx(0.01).epsilon(1e-15));
  CHECK(params_for_rate(0.5, 1.0).scale == Approx(0.5).epsilon(1e-14));
  for (double shape : {0.3, 0.5, 1.0, 5.0, 100.0}) {
    for (double rate : {0.5, 1.0, 10.0, 100.0}) {
      CHECK(std::abs(collision_rate(params_for_rate(shape, rate)) / rate - 1.0) < 1e-13);
    }
  }
  CHECK_THROWS_AS(params_for_rate(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(params_for_rate(-1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(params_for_rate(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(params_for_rate(1.0, -2.0), InvalidArgument);
  CHECK_THROWS_AS((WeibullParams{1.0, 0.0}.validate()), InvalidArgument);
}

TEST_CASE("uniform draws stay strictly inside (0, 1)") {
  Rng rng({1, 2});
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("sample mean for shape 0.5") {
  const WeibullParams p{0.5, 1.0};
  Rng rng({42, 0});
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_interval(p, rng);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 2.0) < 3 * se);
}

TEST_CASE("exponential special case passes KS against exp(rate)") {
  const WeibullParams p = params_for_rate(1.0, 3.0);
  Rng rng({7, 7});
  std::vector<double> xs(20000);
  for (double& x : xs) x = sample_interval(p, rng);
  const double d = oracle::ks_statistic(xs, [](double t) { return 1.0 - std::exp(-3.0 * t); });
  CHECK(d < oracle::ks_critical_1pct(xs.size()));
}

TEST_CASE("disabled noise never fires") {
  CollisionSchedule s = init_schedule(NoiseConfig::disabled(5), 5, {1, 0});
  for (double t : s.next_times()) CHECK(t == CollisionSchedule::kNever);
  CHECK(s.peek().site == -1);
  CHECK(s.pop_next().time == CollisionSchedule::kNever);
}

TEST_CASE("schedules are reproducible") {
  const NoiseConfig c = NoiseConfig::uniform(41, params_for_rate(0.5, 1.0));
  CollisionSchedule a = init_schedule(c, 41, {99, 3});
  CollisionSchedule b = init_schedule(c, 41, {99, 3});
  CHECK(a.next_times() == b.next_times());
  for (int i = 0; i < 1000; ++i) {
    const CollisionEvent ea = a.pop_next();
    const CollisionEvent eb = b.pop_next();
    REQUIRE(ea.site == eb.site);
    REQUIRE(ea.time == eb.time);
  }
  CollisionSchedule other = init_schedule(c, 41, {99, 4});
  CHECK(other.next_times() != init_schedule(c, 41, {99, 3}).next_times());
}

TEST_CASE("first draws have the renewal mean") {
  const NoiseConfig c = NoiseConfig::uniform(41, params_for_rate(1.0, 0.5));
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const CollisionSchedule sched = init_schedule(c, 41, {5, s});
    for (double t : sched.next_times()) {
      sum += t;
      sum2 += t * t;
      ++n;
    }
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 2.0) < 3 * se);
}

TEST_CASE("pop_next takes the earliest site and renews it") {
  const NoiseConfig c = NoiseConfig::uniform(3, {1.0, 1.0});
  CollisionSchedule s(c, 3, {0, 0});
  s.set_next_times({3.0, 1.5, 2.2});
  const CollisionEvent ev = s.pop_next();
  CHECK(ev.site == 1);
  CHECK(ev.time == 1.5);
  CHECK(s.next_times()[1] > 1.5);
  CHECK(s.next_times()[0] == 3.0);
  CHECK(s.next_times()[2] == 2.2);

  s.set_next_times({2.0, 5.0, 2.0});
  CHECK(s.pop_next().site == 0);
  CHECK(s.pop_next().site == 2);
  CHECK_THROWS_AS(s.set_next_times({1.0}), DimensionMismatch);
}

TEST_CASE("per-site event times strictly increase and gaps are regular at large shape") {
  const NoiseConfig c = NoiseConfig::uniform(1, params_for_rate(100.0, 10.0));
  CollisionSchedule s(c, 1, {11, 0});
  double last = s.pop_next().time;
  double sum = 0.0, sum2 = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double t = s.pop_next().time;
    REQUIRE(t > last);
    const double gap = t - last;
    CHECK(std::abs(gap - 0.1) < 0.01);
    sum += gap;
    sum2 += gap * gap;
    last = t;
  }
  const double mean = sum / n;
  CHECK(std::sqrt(sum2 / n - mean * mean) / mean < 0.02);
}

TEST_CASE("noise config validation") {
  NoiseConfig c = NoiseConfig::uniform(4, {1.0, 1.0});
  CHECK_NOTHROW(c.validate(4));
  CHECK_THROWS_AS(c.validate(5), InvalidArgument);
  c.per_site[2].shape = 0.0;
  CHECK_THROWS_AS(c.validate(4), InvalidArgument);
  CHECK_NOTHROW(NoiseConfig::disabled(4).validate(4));
}
