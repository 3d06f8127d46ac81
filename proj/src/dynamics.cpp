#include "scmxxz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scmxxz/error.hpp"

namespace scmxxz {

namespace {

constexpr double kTraceAbort = 1e-8;

// Uniform interface over the two state representations for the event loop.
struct VectorEvolver {
  const SpectralHamiltonian& H;
  StateVector state;

  void propagate(double dt) { propagate_in_place(H, state.amplitudes(), dt); }
  void collide(int site) { apply_collision_in_place(state.basis(), state.amplitudes(), site); }
  Eigen::VectorXd populations() const { return state.populations(); }
  DensityMatrix density() const { return state.to_density(); }
};

struct DensityEvolver {
  const SpectralHamiltonian& H;
  DensityMatrix state;

  void propagate(double dt) { state = scmxxz::propagate(H, state, dt); }
  void collide(int site) { state = apply_collision(state, site); }
  Eigen::VectorXd populations() const { return state.populations(); }
  const DensityMatrix& density() const { return state; }
};

template <class Evolver>
TrajectoryResult evolve(Evolver evolver, const NoiseConfig& noise, const TrajectoryConfig& config,
                        StreamSeed seed, bool keep_final_state) {
  const SectorBasis& basis = evolver.H.basis();
  const int n = basis.n_sites();
  const int q = basis.n_excitations();
  const std::size_t steps = config.n_steps();
  const std::size_t n_times = steps + 1;
  const double expected_total = static_cast<double>(2 * q - n);

  TrajectoryResult result;
  ObservableRecord& rec = result.record;
  rec.times.resize(n_times);
  rec.magnetization.resize(static_cast<Eigen::Index>(n_times), n);
  rec.ier.resize(n_times);
  rec.width.resize(n_times);
  if (q == 1) rec.ipr.resize(n_times);

  TrajectoryDiagnostics& diag = result.diagnostics;
  diag.min_eigenvalue = 0.0;
  bool eig_checked = false;

  auto record = [&](std::size_t k, double t) {
    const Eigen::VectorXd p = evolver.populations();
    const Eigen::VectorXd m = magnetization_from_populations(basis, p);
    rec.times[k] = t;
    rec.magnetization.row(static_cast<Eigen::Index>(k)) = m.transpose();
    rec.ier[k] = ier_from_populations(p);
    if (q == 1) rec.ipr[k] = ipr_from_populations(basis, p);
    rec.width[k] = q > 0 ? spread_width(std::span<const double>(m.data(), m.size())) : 0.0;

    const double trace_err = std::abs(p.sum() - 1.0);
    diag.max_trace_error = std::max(diag.max_trace_error, trace_err);
    diag.max_magnetization_drift =
        std::max(diag.max_magnetization_drift, std::abs(m.sum() - expected_total));
    const double d = static_cast<double>(basis.dimension());
    double excess = std::max({m.cwiseAbs().maxCoeff() - 1.0, 1.0 / d - rec.ier[k], rec.ier[k] - 1.0});
    if (q == 1) excess = std::max({excess, 1.0 / n - rec.ipr[k], rec.ipr[k] - 1.0});
    diag.max_bound_excess = std::max(diag.max_bound_excess, excess);
    if (trace_err > kTraceAbort) {
      std::ostringstream os;
      os << "trace drifted by " << trace_err << " at t = " << t << " (seed " << seed.master
         << "/" << seed.stream << ", " << diag.n_collisions << " collisions)";
      throw InvariantViolation(os.str());
    }
    if (config.check_interval > 0 && k % static_cast<std::size_t>(config.check_interval) == 0) {
      const DensityMatrix rho = evolver.density();
      diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, rho.hermiticity_error());
      const double lo = rho.min_eigenvalue();
      diag.min_eigenvalue = eig_checked ? std::min(diag.min_eigenvalue, lo) : lo;
      eig_checked = true;
    }
  };

  CollisionSchedule schedule = init_schedule(noise, n, seed);
  double t = 0.0;
  record(0, 0.0);
  for (std::size_t k = 1; k < n_times; ++k) {
    const double target = static_cast<double>(k) * config.sample_dt;
    for (CollisionEvent ev = schedule.peek(); ev.time <= target; ev = schedule.peek()) {
      evolver.propagate(ev.time - t);
      t = ev.time;
      evolver.collide(ev.site);
      schedule.pop_next();
      ++diag.n_collisions;
    }
    evolver.propagate(target - t);
    t = target;
    record(k, t);
  }

  result.stop_time = boundary_stop_time(rec, config.boundary_epsilon);
  if (keep_final_state) result.final_state = evolver.density();
  return result;
}

}  // namespace

std::string to_string(Representation r) {
  switch (r) {
    case Representation::Auto: return "auto";
    case Representation::DensityMatrix: return "density";
    case Representation::StateVector: return "state_vector";
  }
  return "auto";
}

Representation representation_from_string(const std::string& s) {
  if (s == "auto") return Representation::Auto;
  if (s == "density") return Representation::DensityMatrix;
  if (s == "state_vector") return Representation::StateVector;
  throw InvalidArgument("unknown representation '" + s +
                        "' (expected auto, density or state_vector)");
}

std::size_t TrajectoryConfig::n_steps() const {
  return static_cast<std::size_t>(std::floor(t_final / sample_dt + 1e-9));
}

void TrajectoryConfig::validate(const SectorBasis& basis) const {
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) {
    throw InvalidArgument("sample_dt must be finite and > 0");
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw InvalidArgument("t_final must be finite and > 0");
  }
  if (t_final / sample_dt > 1e8) throw InvalidArgument("sample grid has more than 1e8 points");
  if (!(boundary_epsilon > 0.0)) throw InvalidArgument("boundary_epsilon must be > 0");
  configuration_index(basis, initial_sites);
}

std::size_t configuration_index(const SectorBasis& basis, const std::vector<int>& sites) {
  if (static_cast<int>(sites.size()) != basis.n_excitations()) {
    throw InvalidArgument("initial_sites lists " + std::to_string(sites.size()) +
                          " sites but the sector has q = " +
                          std::to_string(basis.n_excitations()));
  }
  Mask mask = 0;
  for (int s : sites) {
    if (s < 0 || s >= basis.n_sites()) {
      throw InvalidArgument("initial site " + std::to_string(s) + " outside chain of " +
                            std::to_string(basis.n_sites()));
    }
    const Mask bit = Mask{1} << s;
    if (mask & bit) throw InvalidArgument("initial site " + std::to_string(s) + " repeated");
    mask |= bit;
  }
  return *basis.index_of(mask);
}

DensityMatrix initial_state(BasisPtr basis, const std::vector<int>& sites) {
  const std::size_t k = configuration_index(*basis, sites);
  return DensityMatrix::basis_projector(std::move(basis), k);
}

StateVector initial_state_vector(BasisPtr basis, const std::vector<int>& sites) {
  const std::size_t k = configuration_index(*basis, sites);
  return StateVector::basis_state(std::move(basis), k);
}

DensityMatrix apply_collision(const DensityMatrix& rho, int site) {
  const Eigen::VectorXd z = sigma_z_diagonal(rho.basis(), site);
  Eigen::MatrixXcd out = rho.elements();
  // (Z rho Z)_kl = z_k z_l rho_kl
  out.array().colwise() *= z.array().cast<Complex>();
  out.array().rowwise() *= z.transpose().array().cast<Complex>();
  return {rho.basis_ptr(), std::move(out)};
}

void apply_collision_in_place(const SectorBasis& basis, Eigen::VectorXcd& psi, int site) {
  if (site < 0 || site >= basis.n_sites()) {
    throw IndexOutOfRange("collision site " + std::to_string(site) + " outside chain");
  }
  if (psi.size() != static_cast<Eigen::Index>(basis.dimension())) {
    throw DimensionMismatch("state vector dimension mismatch");
  }
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    if (!basis.occupied(k, site)) psi[static_cast<Eigen::Index>(k)] = -psi[static_cast<Eigen::Index>(k)];
  }
}

StateVector apply_collision(const StateVector& psi, int site) {
  StateVector out = psi;
  apply_collision_in_place(out.basis(), out.amplitudes(), site);
  return out;
}

TrajectoryResult run_trajectory(const SpectralHamiltonian& H, const NoiseConfig& noise,
                                const TrajectoryConfig& config, StreamSeed seed,
                                bool keep_final_state) {
  const BasisPtr& basis = H.basis_ptr();
  config.validate(*basis);
  noise.validate(basis->n_sites());
  if (config.representation == Representation::DensityMatrix) {
    return evolve(DensityEvolver{H, initial_state(basis, config.initial_sites)}, noise, config,
                  seed, keep_final_state);
  }
  return evolve(VectorEvolver{H, initial_state_vector(basis, config.initial_sites)}, noise,
                config, seed, keep_final_state);
}

double boundary_stop_time(const ObservableRecord& record, double epsilon) {
  if (record.times.empty()) throw InvalidArgument("empty record");
  const Eigen::Index last_site = record.magnetization.cols() - 1;
  const double left0 = record.magnetization(0, 0);
  const double right0 = record.magnetization(0, last_site);
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    if (std::abs(record.magnetization(r, 0) - left0) > epsilon ||
        std::abs(record.magnetization(r, last_site) - right0) > epsilon) {
      return record.times[k];
    }
  }
  return record.times.back();
}

}  // namespace scmxxz
