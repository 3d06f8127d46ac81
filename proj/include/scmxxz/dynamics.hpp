#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scmxxz/model.hpp"
#include "scmxxz/noise.hpp"
#include "scmxxz/observables.hpp"
#include "scmxxz/state.hpp"

namespace scmxxz {

enum class Representation {
  // State vector whenever the initial state is pure (always, for
  // initial_state); identical records to the density path at O(d^2) per event.
  Auto,
  DensityMatrix,
  StateVector,
};

std::string to_string(Representation r);
Representation representation_from_string(const std::string& s);

struct TrajectoryConfig {
  double sample_dt = 0.02;
  double t_final = 1.0;
  /// Boundary magnetization may drift this far from its t = 0 value before
  /// the trajectory is considered to have reached the edge.
  double boundary_epsilon = 1e-3;
  /// Excited sites at t = 0; length must equal the sector's q.
  std::vector<int> initial_sites;
  Representation representation = Representation::Auto;
  /// Grid points between Hermiticity / positivity spot checks.
  int check_interval = 50;

  /// Number of grid intervals; the grid is k * sample_dt for k = 0..n_steps().
  std::size_t n_steps() const;
  void validate(const SectorBasis& basis) const;
  friend bool operator==(const TrajectoryConfig&, const TrajectoryConfig&) = default;
};

/// Worst-case numerical health of a trajectory.
struct TrajectoryDiagnostics {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_magnetization_drift = 0.0;
  /// Largest excursion of |m|, IPR or IER outside their analytic bounds (0 if none).
  double max_bound_excess = 0.0;
  std::size_t n_collisions = 0;
};

struct TrajectoryResult {
  ObservableRecord record;
  double stop_time = 0.0;
  TrajectoryDiagnostics diagnostics;
  /// State at the last grid point, only when requested.
  std::optional<DensityMatrix> final_state;
};

/// Sector index of the configuration with exactly `sites` excited. Throws
/// InvalidArgument if the list has repeats, is out of range, or has the wrong
/// length for the sector.
std::size_t configuration_index(const SectorBasis& basis, const std::vector<int>& sites);

DensityMatrix initial_state(BasisPtr basis, const std::vector<int>& sites);
StateVector initial_state_vector(BasisPtr basis, const std::vector<int>& sites);

/// Dephasing collision on `site`: rho -> Z rho Z with Z = sigma^z_site. This
/// is the exact reduced action of the ancilla unitary exp(-i pi/2 sx (x) sz_i).
DensityMatrix apply_collision(const DensityMatrix& rho, int site);
StateVector apply_collision(const StateVector& psi, int site);
void apply_collision_in_place(const SectorBasis& basis, Eigen::VectorXcd& psi, int site);

/// Evolves one stochastic realization from initial_state on the sample grid.
/// Between collisions the state is propagated exactly; a collision landing on
/// a grid point is applied before that point is recorded. Throws
/// InvariantViolation if the trace drifts by more than 1e-8.
TrajectoryResult run_trajectory(const SpectralHamiltonian& H, const NoiseConfig& noise,
                                const TrajectoryConfig& config, StreamSeed seed,
                                bool keep_final_state = false);

/// First grid time at which either edge magnetization differs from its t = 0
/// value by more than `epsilon`; the last grid time if that never happens.
double boundary_stop_time(const ObservableRecord& record, double epsilon);

}  // namespace scmxxz
