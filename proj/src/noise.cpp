#include "scmxxz/noise.hpp"

#include <cmath>
#include <string>

#include "scmxxz/error.hpp"

namespace scmxxz {

namespace {

std::mt19937_64 seeded_engine(StreamSeed seed) {
  const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
  const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed.master), hi(seed.master), lo(seed.stream), hi(seed.stream)};
  return std::mt19937_64(seq);
}

}  // namespace

void WeibullParams::validate() const {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw InvalidArgument("Weibull shape must be finite and > 0, got " + std::to_string(shape));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("Weibull scale must be finite and > 0, got " + std::to_string(scale));
  }
}

Rng::Rng(StreamSeed seed) : engine_(seeded_engine(seed)) {}

double Rng::uniform_open() {
  // (k + 0.5) / 2^53 for k in [0, 2^53): strictly inside (0, 1).
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double weibull_quantile(const WeibullParams& params, double u) {
  return params.scale * std::pow(-std::log(u), 1.0 / params.shape);
}

double sample_interval(const WeibullParams& params, Rng& rng) {
  return weibull_quantile(params, rng.uniform_open());
}

double collision_rate(const WeibullParams& params) {
  params.validate();
  return 1.0 / (params.scale * std::tgamma(1.0 + 1.0 / params.shape));
}

WeibullParams params_for_rate(double shape, double target_rate) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw InvalidArgument("shape must be finite and > 0, got " + std::to_string(shape));
  }
  if (!(target_rate > 0.0) || !std::isfinite(target_rate)) {
    throw InvalidArgument("collision rate must be finite and > 0, got " +
                          std::to_string(target_rate));
  }
  WeibullParams p{shape, 1.0 / (target_rate * std::tgamma(1.0 + 1.0 / shape))};
  p.validate();
  return p;
}

NoiseConfig NoiseConfig::disabled(int n_sites) {
  NoiseConfig c;
  c.per_site.assign(static_cast<std::size_t>(std::max(n_sites, 0)), WeibullParams{});
  c.enabled = false;
  return c;
}

NoiseConfig NoiseConfig::uniform(int n_sites, const WeibullParams& params) {
  params.validate();
  NoiseConfig c;
  c.per_site.assign(static_cast<std::size_t>(std::max(n_sites, 0)), params);
  c.enabled = true;
  return c;
}

void NoiseConfig::validate(int n_sites) const {
  if (!enabled) return;
  if (per_site.size() != static_cast<std::size_t>(n_sites)) {
    throw InvalidArgument("noise config lists " + std::to_string(per_site.size()) +
                          " sites but the chain has " + std::to_string(n_sites));
  }
  for (std::size_t i = 0; i < per_site.size(); ++i) {
    try {
      per_site[i].validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("site " + std::to_string(i) + ": " + e.what());
    }
  }
}

CollisionSchedule::CollisionSchedule(const NoiseConfig& config, int n_sites, StreamSeed seed)
    : params_(config.enabled ? config.per_site : std::vector<WeibullParams>{}),
      enabled_(config.enabled),
      next_time_(static_cast<std::size_t>(n_sites), kNever),
      rng_(seed) {
  config.validate(n_sites);
  if (!enabled_) return;
  for (std::size_t i = 0; i < next_time_.size(); ++i) {
    next_time_[i] = sample_interval(params_[i], rng_);
  }
}

CollisionEvent CollisionSchedule::peek() const {
  CollisionEvent ev{-1, kNever};
  if (!enabled_) return ev;
  for (std::size_t i = 0; i < next_time_.size(); ++i) {
    if (next_time_[i] < ev.time) ev = {static_cast<int>(i), next_time_[i]};
  }
  return ev;
}

CollisionEvent CollisionSchedule::pop_next() {
  const CollisionEvent ev = peek();
  if (ev.site < 0) return ev;
  const auto i = static_cast<std::size_t>(ev.site);
  double next = ev.time + sample_interval(params_[i], rng_);
  // A waiting time below the spacing of doubles at ev.time would not advance the clock.
  if (!(next > ev.time)) next = std::nextafter(ev.time, kNever);
  next_time_[i] = next;
  return ev;
}

void CollisionSchedule::set_next_times(std::vector<double> times) {
  if (times.size() != next_time_.size()) {
    throw DimensionMismatch("schedule has " + std::to_string(next_time_.size()) + " sites");
  }
  next_time_ = std::move(times);
}

CollisionSchedule init_schedule(const NoiseConfig& config, int n_sites, StreamSeed seed) {
  return CollisionSchedule(config, n_sites, seed);
}

}  // namespace scmxxz
