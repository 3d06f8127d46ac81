#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scmxxz/basis.hpp"
#include "scmxxz/dynamics.hpp"
#include "scmxxz/ensemble.hpp"
#include "scmxxz/error.hpp"
#include "scmxxz/execute.hpp"
#include "scmxxz/model.hpp"
#include "scmxxz/noise.hpp"
#include "scmxxz/observables.hpp"
#include "scmxxz/runspec.hpp"

namespace py = pybind11;
using namespace scmxxz;

namespace {

NoiseConfig make_noise(int n_sites, std::optional<double> shape, std::optional<double> rate) {
  if (!shape && !rate) return NoiseConfig::disabled(n_sites);
  if (!shape || !rate) throw InvalidArgument("give both shape and rate, or neither");
  return NoiseConfig::uniform(n_sites, params_for_rate(*shape, *rate));
}

Representation parse_repr(const std::string& s) { return representation_from_string(s); }

TrajectoryConfig make_traj(std::vector<int> sites, double t_final, double sample_dt,
                           const std::string& representation, double boundary_epsilon) {
  TrajectoryConfig c;
  c.initial_sites = std::move(sites);
  c.t_final = t_final;
  c.sample_dt = sample_dt;
  c.representation = parse_repr(representation);
  c.boundary_epsilon = boundary_epsilon;
  return c;
}

py::dict record_dict(const ObservableRecord& r) {
  py::dict d;
  d["times"] = r.times;
  d["magnetization"] = r.magnetization;
  d["ipr"] = r.ipr;
  d["ier"] = r.ier;
  d["width"] = r.width;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Collision-model dynamics of the open XXZ chain";
  m.attr("__version__") = SCMXXZ_VERSION;

  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<SectorBasis, std::shared_ptr<SectorBasis>>(m, "SectorBasis")
      .def_property_readonly("n_sites", &SectorBasis::n_sites)
      .def_property_readonly("n_excitations", &SectorBasis::n_excitations)
      .def_property_readonly("dimension", &SectorBasis::dimension)
      .def_property_readonly("states", &SectorBasis::states)
      .def("index_of", &SectorBasis::index_of)
      .def("__len__", &SectorBasis::dimension);

  m.def("build_sector", [](int n, int q) { return std::const_pointer_cast<SectorBasis>(build_sector(n, q)); },
        py::arg("n_sites"), py::arg("n_excitations"));
  m.def("sigma_z_diagonal", [](const SectorBasis& b, int site) { return sigma_z_diagonal(b, site); });

  py::class_<SpectralHamiltonian>(m, "Hamiltonian")
      .def_property_readonly("matrix", &SpectralHamiltonian::matrix)
      .def_property_readonly("eigenvalues", &SpectralHamiltonian::eigenvalues)
      .def_property_readonly("eigenvectors", &SpectralHamiltonian::eigenvectors)
      .def_property_readonly("dimension", &SpectralHamiltonian::dimension)
      .def_property_readonly("reconstruction_error", &SpectralHamiltonian::reconstruction_error);

  m.def(
      "build_hamiltonian",
      [](const std::shared_ptr<SectorBasis>& b, double J, double Delta, double h) {
        return build_hamiltonian(b, ModelParams{J, Delta, h});
      },
      py::arg("basis"), py::arg("J") = 1.0, py::arg("Delta") = 0.0, py::arg("h") = 0.0);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init([](const std::shared_ptr<SectorBasis>& b, const Eigen::MatrixXcd& rho) {
        return DensityMatrix(b, rho);
      }))
      .def_property_readonly("elements", [](const DensityMatrix& r) { return r.elements(); })
      .def_property_readonly("populations", &DensityMatrix::populations)
      .def("trace", &DensityMatrix::trace)
      .def("hermiticity_error", &DensityMatrix::hermiticity_error)
      .def("min_eigenvalue", &DensityMatrix::min_eigenvalue);

  m.def(
      "initial_state",
      [](const std::shared_ptr<SectorBasis>& b, const std::vector<int>& sites) {
        return initial_state(b, sites);
      },
      py::arg("basis"), py::arg("sites"));
  m.def("propagate", py::overload_cast<const SpectralHamiltonian&, const DensityMatrix&, double>(&propagate),
        py::arg("H"), py::arg("rho"), py::arg("duration"));
  m.def("apply_collision", py::overload_cast<const DensityMatrix&, int>(&apply_collision),
        py::arg("rho"), py::arg("site"));
  m.def("local_magnetization", py::overload_cast<const DensityMatrix&>(&local_magnetization));
  m.def("ipr", py::overload_cast<const DensityMatrix&>(&ipr));
  m.def("ier", py::overload_cast<const DensityMatrix&>(&ier));

  py::class_<WeibullParams>(m, "WeibullParams")
      .def(py::init<double, double>(), py::arg("shape"), py::arg("scale"))
      .def_readwrite("shape", &WeibullParams::shape)
      .def_readwrite("scale", &WeibullParams::scale)
      .def("__repr__", [](const WeibullParams& p) {
        return "WeibullParams(shape=" + std::to_string(p.shape) + ", scale=" + std::to_string(p.scale) + ")";
      });
  m.def("weibull_quantile", &weibull_quantile, py::arg("params"), py::arg("u"));
  m.def("collision_rate", &collision_rate, py::arg("params"));
  m.def("params_for_rate", &params_for_rate, py::arg("shape"), py::arg("rate"));

  py::class_<NoiseConfig>(m, "NoiseConfig")
      .def(py::init(&make_noise), py::arg("n_sites"), py::arg("shape") = py::none(),
           py::arg("rate") = py::none())
      .def_readwrite("per_site", &NoiseConfig::per_site)
      .def_readwrite("enabled", &NoiseConfig::enabled);

  py::class_<TrajectoryConfig>(m, "TrajectoryConfig")
      .def(py::init(&make_traj), py::arg("initial_sites"), py::arg("t_final") = 1.0,
           py::arg("sample_dt") = 0.02, py::arg("representation") = "auto",
           py::arg("boundary_epsilon") = 1e-3)
      .def_readwrite("initial_sites", &TrajectoryConfig::initial_sites)
      .def_readwrite("t_final", &TrajectoryConfig::t_final)
      .def_readwrite("sample_dt", &TrajectoryConfig::sample_dt)
      .def_readwrite("boundary_epsilon", &TrajectoryConfig::boundary_epsilon);

  py::class_<ObservableRecord>(m, "ObservableRecord")
      .def_readonly("times", &ObservableRecord::times)
      .def_readonly("magnetization", &ObservableRecord::magnetization)
      .def_readonly("ipr", &ObservableRecord::ipr)
      .def_readonly("ier", &ObservableRecord::ier)
      .def_readonly("width", &ObservableRecord::width)
      .def("as_dict", &record_dict);

  py::class_<TrajectoryResult>(m, "TrajectoryResult")
      .def_readonly("record", &TrajectoryResult::record)
      .def_readonly("stop_time", &TrajectoryResult::stop_time)
      .def_property_readonly("n_collisions",
                             [](const TrajectoryResult& r) { return r.diagnostics.n_collisions; })
      .def_property_readonly("final_state", [](const TrajectoryResult& r) -> std::optional<Eigen::MatrixXcd> {
        if (!r.final_state) return std::nullopt;
        return r.final_state->elements();
      });

  m.def(
      "run_trajectory",
      [](const SpectralHamiltonian& H, const NoiseConfig& noise, const TrajectoryConfig& c,
         std::uint64_t master, std::uint64_t stream, bool keep) {
        py::gil_scoped_release release;
        return run_trajectory(H, noise, c, {master, stream}, keep);
      },
      py::arg("H"), py::arg("noise"), py::arg("config"), py::arg("seed") = 0, py::arg("stream") = 0,
      py::arg("keep_final_state") = false);

  py::class_<EnsembleConfig>(m, "EnsembleConfig")
      .def(py::init([](std::size_t m_traj, std::uint64_t seed, unsigned workers, bool final_density) {
             EnsembleConfig e;
             e.n_trajectories = m_traj;
             e.master_seed = seed;
             e.workers = workers;
             e.average_final_density = final_density;
             return e;
           }),
           py::arg("n_trajectories") = 500, py::arg("master_seed") = kDefaultMasterSeed,
           py::arg("workers") = 0, py::arg("average_final_density") = false)
      .def_readwrite("n_trajectories", &EnsembleConfig::n_trajectories)
      .def_readwrite("master_seed", &EnsembleConfig::master_seed)
      .def_readwrite("workers", &EnsembleConfig::workers);

  py::class_<EnsembleSeries>(m, "EnsembleSeries")
      .def_readonly("times", &EnsembleSeries::times)
      .def_readonly("mean", &EnsembleSeries::mean)
      .def_readonly("std_error", &EnsembleSeries::std_error)
      .def_readonly("stop_times", &EnsembleSeries::stop_times)
      .def_readonly("effective_t_final", &EnsembleSeries::effective_t_final)
      .def_readonly("final_density", &EnsembleSeries::final_density)
      .def("series", [](const EnsembleSeries& s, const std::string& name) {
        const ObservableId id = ObservableId::parse(name);
        return py::make_tuple(observable_series(s.mean, id), observable_series(s.std_error, id));
      }, py::arg("observable"), "Mean and standard error of one observable, e.g. 'ipr' or 'mz_20'.");

  m.def(
      "run_ensemble",
      [](const SpectralHamiltonian& H, const NoiseConfig& noise, const TrajectoryConfig& c,
         const EnsembleConfig& e) {
        py::gil_scoped_release release;
        return run_ensemble(H, noise, c, e);
      },
      py::arg("H"), py::arg("noise"), py::arg("config"), py::arg("ensemble"));

  m.def(
      "compare_runs",
      [](const EnsembleSeries& a, const EnsembleSeries& b, const std::string& obs, double time,
         double threshold) {
        const Comparison c = compare_runs(a, b, ObservableId::parse(obs), time, threshold);
        py::dict d;
        d["mean_a"] = c.mean_a;
        d["mean_b"] = c.mean_b;
        d["difference"] = c.difference;
        d["combined_se"] = c.combined_se;
        d["significant"] = c.significant;
        d["time"] = c.time;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("observable"), py::arg("time"), py::arg("threshold") = 3.0);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("frequencies", &Spectrum::frequencies)
      .def_readonly("amplitudes", &Spectrum::amplitudes)
      .def_property_readonly("peak_frequency",
                             [](const Spectrum& s) { return s.frequencies[s.peak_index()]; })
      .def_property_readonly("bin_width", &Spectrum::bin_width);

  m.def(
      "fft_difference_spectrum",
      [](const std::vector<double>& a, const std::vector<double>& b, double dt,
         const std::string& axis, const std::string& window) {
        return fft_difference_spectrum(a, b, dt,
                                       {frequency_axis_from_string(axis), window_from_string(window)});
      },
      py::arg("a"), py::arg("b"), py::arg("dt"), py::arg("axis") = "angular",
      py::arg("window") = "rectangular");

  m.def(
      "validate_spec",
      [](const std::string& text) {
        const RunSpec s = parse_run_spec_text(text);
        s.validate();
        return emit_run_spec(s).dump();
      },
      py::arg("text"), "Parse and validate a JSON run spec; returns it in canonical form.");

  m.def(
      "execute",
      [](const std::string& text, const std::filesystem::path& out_dir, bool plots,
         std::optional<std::uint64_t> seed, std::optional<unsigned> workers) {
        const RunSpec s = parse_run_spec_text(text);
        ExecuteReport r;
        {
          py::gil_scoped_release release;
          r = execute(s, ExecuteOptions{out_dir, plots, seed, workers});
        }
        std::vector<std::string> files;
        for (const auto& f : r.files) files.push_back(f.string());
        return files;
      },
      py::arg("spec_text"), py::arg("out_dir"), py::arg("plots") = true, py::arg("seed") = py::none(),
      py::arg("workers") = py::none(), "Run a JSON spec and return the list of written files.");
}
