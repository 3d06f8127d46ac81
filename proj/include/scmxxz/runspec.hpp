#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scmxxz/dynamics.hpp"
#include "scmxxz/ensemble.hpp"
#include "scmxxz/error.hpp"
#include "scmxxz/model.hpp"
#include "scmxxz/noise.hpp"
#include "scmxxz/observables.hpp"

namespace scmxxz {

/// One noise setting of a run. Either a (shape, rate) pair, converted to
/// Weibull parameters on every site, an explicit per-site list, or no noise.
struct NoisePoint {
  enum class Kind { Rate, PerSite, Off };

  Kind kind = Kind::Off;
  double shape = 0.0;  // Kind::Rate
  double rate = 0.0;   // Kind::Rate
  std::vector<WeibullParams> per_site;  // Kind::PerSite

  static NoisePoint off() { return {}; }
  static NoisePoint from_rate(double shape, double rate);

  /// File-name friendly label, e.g. "nu100_rc10" or "off".
  std::string label(std::size_t index) const;
  NoiseConfig to_config(int n_sites) const;

  friend bool operator==(const NoisePoint&, const NoisePoint&) = default;
};

/// Cartesian (shape x rate) grid.
struct SweepGrid {
  std::vector<double> shapes;
  std::vector<double> rates;
  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

/// Fixed-time readout of one observable across all noise points.
struct SummaryRequest {
  std::string observable = "ipr";
  double time = 4.5;
  friend bool operator==(const SummaryRequest&, const SummaryRequest&) = default;
};

/// Spectra of (shape_a minus shape_b) differences at each common rate.
struct FftRequest {
  std::string observable;  // empty: central-site magnetization
  double shape_a = 100.0;
  double shape_b = 1.0;
  FrequencyAxis axis = FrequencyAxis::Angular;
  Window window = Window::Rectangular;
  friend bool operator==(const FftRequest&, const FftRequest&) = default;
};

struct OutputSpec {
  bool plots = true;
  bool average_final_density = false;
  std::optional<SummaryRequest> summary;
  std::optional<FftRequest> fft;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunSpec {
  int n_sites = 0;
  int n_excitations = 0;
  ModelParams model;
  std::vector<int> initial_sites;
  /// Explicit points, followed by the expansion of `sweep` if present.
  std::vector<NoisePoint> points;
  std::optional<SweepGrid> sweep;
  TrajectoryConfig trajectory;
  EnsembleConfig ensemble;
  OutputSpec outputs;

  /// Every noise point to run, in execution order.
  std::vector<NoisePoint> expanded_points() const;
  /// Cross-field validation (q vs initial sites, per-site list lengths, ...).
  /// Throws InvalidArgument with a field path.
  void validate() const;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

/// Parse error carrying the offending field path, e.g. "model.n_sites".
class SpecError : public InvalidArgument {
 public:
  SpecError(const std::string& path, const std::string& message)
      : InvalidArgument(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

RunSpec parse_run_spec(const nlohmann::json& doc);
RunSpec parse_run_spec_text(const std::string& text);
RunSpec parse_run_spec_file(const std::string& path);

nlohmann::json emit_run_spec(const RunSpec& spec);

/// Default master seed and trajectory counts when the spec leaves them out.
inline constexpr std::uint64_t kDefaultMasterSeed = 20240501;
std::size_t default_trajectories(int n_excitations);

/// Sites excited at t = 0 when the spec does not list them: the q central sites.
std::vector<int> central_sites(int n_sites, int n_excitations);

}  // namespace scmxxz
