#include "scmxxz/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "scmxxz/error.hpp"

namespace scmxxz {

namespace {

// Welford accumulation over one flattened observable block. Fed strictly in
// trajectory order so the floating-point result does not depend on threading.
struct RunningMoments {
  Eigen::ArrayXd mean;
  Eigen::ArrayXd m2;
  std::size_t count = 0;

  void add(const Eigen::Ref<const Eigen::ArrayXd>& x) {
    if (count == 0) {
      mean = Eigen::ArrayXd::Zero(x.size());
      m2 = Eigen::ArrayXd::Zero(x.size());
    }
    ++count;
    const Eigen::ArrayXd delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  Eigen::ArrayXd std_error() const {
    if (count < 2) return Eigen::ArrayXd::Zero(mean.size());
    const double c = static_cast<double>(count);
    return (m2.max(0.0) / (c - 1.0)).sqrt() / std::sqrt(c);
  }
};

// Layout of a record flattened into one array: magnetization (column-major),
// then ipr, ier, width.
Eigen::ArrayXd flatten(const ObservableRecord& r) {
  const Eigen::Index t = static_cast<Eigen::Index>(r.times.size());
  const Eigen::Index mag = r.magnetization.size();
  const Eigen::Index n_ipr = static_cast<Eigen::Index>(r.ipr.size());
  Eigen::ArrayXd out(mag + n_ipr + 2 * t);
  out.head(mag) = Eigen::Map<const Eigen::ArrayXd>(r.magnetization.data(), mag);
  Eigen::Index off = mag;
  out.segment(off, n_ipr) = Eigen::Map<const Eigen::ArrayXd>(r.ipr.data(), n_ipr);
  off += n_ipr;
  out.segment(off, t) = Eigen::Map<const Eigen::ArrayXd>(r.ier.data(), t);
  off += t;
  out.segment(off, t) = Eigen::Map<const Eigen::ArrayXd>(r.width.data(), t);
  return out;
}

ObservableRecord unflatten(const Eigen::ArrayXd& a, const ObservableRecord& shape) {
  ObservableRecord r;
  r.times = shape.times;
  const Eigen::Index t = static_cast<Eigen::Index>(shape.times.size());
  const Eigen::Index n = shape.magnetization.cols();
  r.magnetization = Eigen::Map<const Eigen::MatrixXd>(a.data(), t, n);
  Eigen::Index off = t * n;
  const auto take = [&](Eigen::Index len) {
    std::vector<double> v(a.data() + off, a.data() + off + len);
    off += len;
    return v;
  };
  r.ipr = take(static_cast<Eigen::Index>(shape.ipr.size()));
  r.ier = take(t);
  r.width = take(t);
  return r;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (n_trajectories < 1) throw InvalidArgument("n_trajectories must be >= 1");
}

std::size_t EnsembleSeries::effective_last_index() const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] <= effective_t_final + 1e-12) idx = k;
  }
  return idx;
}

EnsembleSeries run_ensemble(const SpectralHamiltonian& H, const NoiseConfig& noise,
                            const TrajectoryConfig& trajectory, const EnsembleConfig& ensemble) {
  ensemble.validate();
  trajectory.validate(H.basis());
  noise.validate(H.basis().n_sites());

  const std::size_t m = ensemble.n_trajectories;
  unsigned workers = ensemble.workers != 0 ? ensemble.workers
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, m));

  EnsembleSeries out;
  out.stop_times.assign(m, 0.0);
  RunningMoments moments;
  ObservableRecord shape;
  Eigen::MatrixXcd density_sum;
  EnsembleDiagnostics diag;
  bool first_diag = true;

  // Results arriving out of order wait here until their turn to be reduced.
  std::mutex mutex;
  std::map<std::size_t, TrajectoryResult> pending;
  std::size_t next_to_reduce = 0;
  std::atomic<std::size_t> next_index{0};
  std::atomic<bool> abort{false};
  std::size_t failed_index = m;
  std::exception_ptr failure;

  auto reduce = [&](std::size_t idx, TrajectoryResult& r) {
    if (idx == 0) shape = r.record;
    moments.add(flatten(r.record));
    out.stop_times[idx] = r.stop_time;
    const auto& d = r.diagnostics;
    diag.max_trace_error = std::max(diag.max_trace_error, d.max_trace_error);
    diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, d.max_hermiticity_error);
    diag.min_eigenvalue = first_diag ? d.min_eigenvalue : std::min(diag.min_eigenvalue, d.min_eigenvalue);
    diag.max_magnetization_drift = std::max(diag.max_magnetization_drift, d.max_magnetization_drift);
    diag.max_bound_excess = std::max(diag.max_bound_excess, d.max_bound_excess);
    diag.total_collisions += d.n_collisions;
    first_diag = false;
    if (r.final_state) {
      if (idx == 0) {
        density_sum = r.final_state->elements();
      } else {
        density_sum += r.final_state->elements();
      }
    }
  };

  auto work = [&]() {
    for (;;) {
      if (abort.load()) return;
      const std::size_t idx = next_index.fetch_add(1);
      if (idx >= m) return;
      try {
        TrajectoryResult r = run_trajectory(H, noise, trajectory,
                                            StreamSeed{ensemble.master_seed, idx},
                                            ensemble.average_final_density);
        std::lock_guard lock(mutex);
        pending.emplace(idx, std::move(r));
        for (auto it = pending.find(next_to_reduce); it != pending.end();
             it = pending.find(next_to_reduce)) {
          reduce(next_to_reduce, it->second);
          pending.erase(it);
          ++next_to_reduce;
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (idx < failed_index) {
          failed_index = idx;
          failure = std::current_exception();
        }
        abort.store(true);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      throw InvariantViolation("trajectory " + std::to_string(failed_index) + " (master seed " +
                               std::to_string(ensemble.master_seed) + ") failed: " + e.what());
    }
  }

  out.times = shape.times;
  out.mean = unflatten(moments.mean, shape);
  out.std_error = unflatten(moments.std_error(), shape);
  out.effective_t_final = *std::min_element(out.stop_times.begin(), out.stop_times.end());
  out.diagnostics = diag;
  out.metadata = EnsembleMetadata{H.basis().n_sites(), H.basis().n_excitations(),
                                  H.dimension(), noise, trajectory, ensemble};
  if (ensemble.average_final_density) {
    out.final_density = density_sum / static_cast<double>(m);
  }
  return out;
}

std::string ObservableId::name() const {
  switch (kind) {
    case ObservableKind::Magnetization: return "mz_" + std::to_string(site);
    case ObservableKind::Ipr: return "ipr";
    case ObservableKind::Ier: return "ier";
    case ObservableKind::Width: return "width";
  }
  return "";
}

ObservableId ObservableId::parse(const std::string& s) {
  if (s == "ipr") return {ObservableKind::Ipr, 0};
  if (s == "ier") return {ObservableKind::Ier, 0};
  if (s == "width") return {ObservableKind::Width, 0};
  if (s.rfind("mz_", 0) == 0) {
    try {
      std::size_t used = 0;
      const int site = std::stoi(s.substr(3), &used);
      if (used == s.size() - 3 && site >= 0) return {ObservableKind::Magnetization, site};
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument("unknown observable '" + s + "' (expected ipr, ier, width or mz_<site>)");
}

std::vector<double> observable_series(const ObservableRecord& record, const ObservableId& id) {
  switch (id.kind) {
    case ObservableKind::Magnetization: {
      if (id.site < 0 || id.site >= record.n_sites()) {
        throw InvalidArgument("observable " + id.name() + " outside chain");
      }
      const Eigen::VectorXd col = record.magnetization.col(id.site);
      return {col.data(), col.data() + col.size()};
    }
    case ObservableKind::Ipr:
      if (!record.has_ipr()) throw InvalidArgument("IPR is only recorded for q = 1");
      return record.ipr;
    case ObservableKind::Ier: return record.ier;
    case ObservableKind::Width: return record.width;
  }
  return {};
}

std::size_t nearest_index(const std::vector<double>& times, double time) {
  if (times.empty()) throw InvalidArgument("empty time grid");
  std::size_t best = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(times[k] - time) < std::abs(times[best] - time)) best = k;
  }
  return best;
}

Comparison compare_runs(const EnsembleSeries& a, const EnsembleSeries& b, const ObservableId& id,
                        double time, double threshold_sigmas) {
  if (a.times != b.times) throw DimensionMismatch("runs have different time grids");
  const std::size_t k = nearest_index(a.times, time);
  Comparison c;
  c.time = a.times[k];
  c.mean_a = observable_series(a.mean, id)[k];
  c.mean_b = observable_series(b.mean, id)[k];
  const double se_a = observable_series(a.std_error, id)[k];
  const double se_b = observable_series(b.std_error, id)[k];
  c.difference = c.mean_a - c.mean_b;
  c.combined_se = std::sqrt(se_a * se_a + se_b * se_b);
  c.threshold_sigmas = threshold_sigmas;
  c.significant = std::abs(c.difference) > threshold_sigmas * c.combined_se;
  return c;
}

}  // namespace scmxxz
