#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scmxxz/dynamics.hpp"
#include "scmxxz/model.hpp"
#include "scmxxz/noise.hpp"
#include "scmxxz/observables.hpp"

namespace scmxxz {

struct EnsembleConfig {
  std::size_t n_trajectories = 500;
  std::uint64_t master_seed = 0;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Also accumulate the trajectory-averaged density matrix at t_final.
  bool average_final_density = false;

  void validate() const;
  friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

/// Echo of everything that determined an ensemble run.
struct EnsembleMetadata {
  int n_sites = 0;
  int n_excitations = 0;
  std::size_t sector_dimension = 0;
  NoiseConfig noise;
  TrajectoryConfig trajectory;
  EnsembleConfig ensemble;
};

/// Worst case over all trajectories.
struct EnsembleDiagnostics {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_magnetization_drift = 0.0;
  double max_bound_excess = 0.0;
  std::size_t total_collisions = 0;
};

struct EnsembleSeries {
  std::vector<double> times;
  ObservableRecord mean;
  /// Sample standard deviation / sqrt(M); zero when M = 1.
  ObservableRecord std_error;
  std::vector<double> stop_times;
  /// Minimum per-trajectory boundary stop time.
  double effective_t_final = 0.0;
  EnsembleDiagnostics diagnostics;
  EnsembleMetadata metadata;
  /// Set when EnsembleConfig::average_final_density was requested.
  std::optional<Eigen::MatrixXcd> final_density;

  /// Grid index of the last time <= effective_t_final.
  std::size_t effective_last_index() const;
};

/// Runs M trajectories with streams (master_seed, 0..M-1) and reduces them in
/// trajectory order, so the result is bit-identical for any worker count.
/// A failing trajectory aborts the run with its seed in the message.
EnsembleSeries run_ensemble(const SpectralHamiltonian& H, const NoiseConfig& noise,
                            const TrajectoryConfig& trajectory, const EnsembleConfig& ensemble);

enum class ObservableKind { Magnetization, Ipr, Ier, Width };

struct ObservableId {
  ObservableKind kind = ObservableKind::Ipr;
  int site = 0;  // only for Magnetization

  std::string name() const;
  static ObservableId parse(const std::string& s);
};

/// Mean and standard-error series of one observable.
std::vector<double> observable_series(const ObservableRecord& record, const ObservableId& id);

struct Comparison {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double difference = 0.0;      // mean_a - mean_b
  double combined_se = 0.0;     // sqrt(se_a^2 + se_b^2)
  double threshold_sigmas = 3.0;
  bool significant = false;     // |difference| > threshold_sigmas * combined_se
  double time = 0.0;            // grid time actually compared
};

/// Compares two runs at the grid point nearest `time`. Throws
/// DimensionMismatch if the grids differ, InvalidArgument if the observable
/// is unavailable.
Comparison compare_runs(const EnsembleSeries& a, const EnsembleSeries& b, const ObservableId& id,
                        double time, double threshold_sigmas = 3.0);

/// Index of the grid point nearest `time`.
std::size_t nearest_index(const std::vector<double>& times, double time);

}  // namespace scmxxz
