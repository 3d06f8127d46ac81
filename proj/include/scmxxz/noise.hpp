#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace scmxxz {

/// Weibull inter-collision distribution
///   p(t) = (shape/scale) (t/scale)^(shape-1) exp(-(t/scale)^shape).
/// Both parameters must be strictly positive.
struct WeibullParams {
  double shape = 1.0;
  double scale = 1.0;

  void validate() const;
  friend bool operator==(const WeibullParams&, const WeibullParams&) = default;
};

/// Identifies one reproducible random stream: a master seed plus a stream
/// (trajectory) index. Streams with distinct indices are independent and do
/// not depend on the order in which they are consumed.
struct StreamSeed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;
};

/// mt19937_64 seeded through std::seed_seq from a StreamSeed. Both the engine
/// and seed_seq are fully specified by the standard, so streams are
/// reproducible across platforms and compilers.
class Rng {
 public:
  explicit Rng(StreamSeed seed);

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform_open();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF map: scale * (-ln u)^(1/shape) for u in (0, 1].
double weibull_quantile(const WeibullParams& params, double u);

/// One Weibull waiting time; always > 0 because u < 1.
double sample_interval(const WeibullParams& params, Rng& rng);

/// Mean collision rate 1 / (scale * Gamma(1 + 1/shape)).
double collision_rate(const WeibullParams& params);

/// Solves the collision rate relation for the scale at fixed shape.
/// Throws InvalidArgument for non-positive inputs.
WeibullParams params_for_rate(double shape, double target_rate);

/// Per-site collision statistics. When `enabled` is false no collision ever
/// fires and `per_site` may be empty.
struct NoiseConfig {
  std::vector<WeibullParams> per_site;
  bool enabled = true;

  static NoiseConfig disabled(int n_sites);
  static NoiseConfig uniform(int n_sites, const WeibullParams& params);

  /// Checks per_site length and parameter validity against the chain length.
  void validate(int n_sites) const;
  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct CollisionEvent {
  int site = -1;
  double time = 0.0;
};

/// Live renewal queue: the absolute time of the next collision for every site.
class CollisionSchedule {
 public:
  static constexpr double kNever = std::numeric_limits<double>::infinity();

  CollisionSchedule(const NoiseConfig& config, int n_sites, StreamSeed seed);

  int n_sites() const { return static_cast<int>(next_time_.size()); }

  const std::vector<double>& next_times() const { return next_time_; }

  /// Earliest pending event (lowest site index on ties). Site is -1 and time
  /// is kNever when noise is disabled.
  CollisionEvent peek() const;

  /// Removes the earliest event and redraws that site's next collision as
  /// event.time + fresh waiting time.
  CollisionEvent pop_next();

  /// Replaces the pending times; used to exercise queue ordering directly.
  void set_next_times(std::vector<double> times);

 private:
  std::vector<WeibullParams> params_;
  bool enabled_;
  std::vector<double> next_time_;
  Rng rng_;
};

/// First collision time of each site, drawn at t = 0 from the stream `seed`.
CollisionSchedule init_schedule(const NoiseConfig& config, int n_sites, StreamSeed seed);

}  // namespace scmxxz
