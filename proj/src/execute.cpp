#include "scmxxz/execute.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <map>
#include <set>

#include "scmxxz/error.hpp"
#include "scmxxz/model.hpp"
#include "scmxxz/svg.hpp"

namespace scmxxz {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tracks written files so a failed run leaves nothing half-finished behind.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
  }

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    files_.push_back(p);
    write_text(p, content);
    return p;
  }

  void commit() { committed_ = true; }
  const std::vector<fs::path>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool committed_ = false;
};

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

std::string unique_label(const std::string& base, std::set<std::string>& used, std::size_t index) {
  std::string label = base;
  if (used.count(label)) label += "_" + std::to_string(index);
  used.insert(label);
  return label;
}

std::string point_title(const NoisePoint& p) {
  switch (p.kind) {
    case NoisePoint::Kind::Off: return "no collisions";
    case NoisePoint::Kind::Rate: {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "nu=%g, r_c=%g", p.shape, p.rate);
      return buf;
    }
    case NoisePoint::Kind::PerSite: return "per-site noise";
  }
  return "";
}

svg::LineSeries series_line(const PointResult& r, const ObservableId& id, double scale = 1.0) {
  svg::LineSeries line;
  line.label = point_title(r.point);
  line.x = r.series.times;
  line.y = observable_series(r.series.mean, id);
  line.err = observable_series(r.series.std_error, id);
  for (auto& v : line.y) v *= scale;
  for (auto& v : line.err) v *= std::abs(scale);
  return line;
}

}  // namespace

std::string central_magnetization(int n_sites) { return "mz_" + std::to_string(n_sites / 2); }

Spectrum spectrum_from_csvs(const CsvTable& a, const CsvTable& b, const std::string& observable,
                            const SpectrumOptions& options) {
  const std::string column = observable + "_mean";
  const std::vector<double> ta = a.column("time");
  const std::vector<double> tb = b.column("time");
  if (ta.size() != tb.size()) throw DimensionMismatch("runs have different numbers of samples");
  for (std::size_t k = 0; k < ta.size(); ++k) {
    if (std::abs(ta[k] - tb[k]) > 1e-9) throw DimensionMismatch("runs use different time grids");
  }
  if (ta.size() < 2) throw InvalidArgument("need at least two samples");
  const double dt = ta[1] - ta[0];
  const std::vector<double> ya = a.column(column);
  const std::vector<double> yb = b.column(column);
  return fft_difference_spectrum(ya, yb, dt, options);
}

ExecuteReport execute(const RunSpec& spec_in, const ExecuteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunSpec spec = spec_in;
  if (options.seed) spec.ensemble.master_seed = *options.seed;
  if (options.workers) spec.ensemble.workers = *options.workers;
  spec.validate();

  fs::create_directories(options.out_dir);
  OutputSet out(options.out_dir);
  ExecuteReport report;

  const BasisPtr basis = build_sector(spec.n_sites, spec.n_excitations);
  const SpectralHamiltonian H = build_hamiltonian(basis, spec.model);
  TrajectoryConfig traj = spec.trajectory;
  traj.initial_sites = spec.initial_sites;

  const std::vector<NoisePoint> points = spec.expanded_points();
  std::set<std::string> used;
  json point_meta = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    PointResult r;
    r.point = points[i];
    r.label = unique_label(points[i].label(i), used, i);
    r.master_seed = spec.ensemble.master_seed + i;
    EnsembleConfig ens = spec.ensemble;
    ens.master_seed = r.master_seed;
    ens.average_final_density = spec.outputs.average_final_density;
    r.series = run_ensemble(H, points[i].to_config(spec.n_sites), traj, ens);

    out.write(r.label + ".csv", series_csv(r.series));
    json meta = series_metadata(r.series);
    meta["label"] = r.label;
    meta["csv"] = r.label + ".csv";
    switch (r.point.kind) {
      case NoisePoint::Kind::Rate: meta["point"] = {{"shape", r.point.shape}, {"rate", r.point.rate}}; break;
      case NoisePoint::Kind::Off: meta["point"] = {{"off", true}}; break;
      case NoisePoint::Kind::PerSite: meta["point"] = {{"per_site", true}}; break;
    }
    if (r.series.final_density) {
      const Eigen::MatrixXcd& rho = *r.series.final_density;
      json re = json::array(), im = json::array();
      for (Eigen::Index k = 0; k < rho.rows(); ++k) {
        json rr = json::array(), ii = json::array();
        for (Eigen::Index l = 0; l < rho.cols(); ++l) {
          rr.push_back(rho(k, l).real());
          ii.push_back(rho(k, l).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
      }
      out.write(r.label + "_final_density.json", json{{"real", re}, {"imag", im}}.dump());
    }
    point_meta.push_back(meta);

    if (options.plots && spec.outputs.plots) {
      svg::PlotOptions hopt;
      hopt.title = "<sigma^z_i>(t), " + point_title(r.point);
      hopt.xlabel = "t J";
      hopt.ylabel = "site";
      out.write(r.label + "_heatmap.svg",
                svg::heatmap(r.series.times, r.series.mean.magnetization, -1.0, 1.0, hopt));
    }
    report.points.push_back(std::move(r));
  }

  // Overlays across noise points: central magnetization (as s^z = sigma^z / 2)
  // and IPR or IER.
  if (options.plots && spec.outputs.plots) {
    const int centre = spec.n_sites / 2;
    std::vector<svg::LineSeries> mz, loc;
    const ObservableId loc_id{spec.n_excitations == 1 ? ObservableKind::Ipr : ObservableKind::Ier, 0};
    for (const auto& r : report.points) {
      mz.push_back(series_line(r, ObservableId{ObservableKind::Magnetization, centre}, 0.5));
      loc.push_back(series_line(r, loc_id));
    }
    svg::PlotOptions mopt{"central site s^z = sigma^z/2", "t J", "<s^z_" + std::to_string(centre) + ">"};
    out.write("magnetization_central.svg", svg::line_plot(mz, mopt));
    svg::PlotOptions lopt{loc_id.name() + " vs time", "t J", loc_id.name()};
    out.write(loc_id.name() + ".svg", svg::line_plot(loc, lopt));
  }

  json summary_meta;
  if (spec.outputs.summary) {
    const ObservableId id = ObservableId::parse(spec.outputs.summary->observable);
    std::string csv = "shape,rate,time," + id.name() + "_mean," + id.name() + "_se\n";
    std::map<double, svg::LineSeries> by_rate;
    for (const auto& r : report.points) {
      const std::size_t k = nearest_index(r.series.times, spec.outputs.summary->time);
      const double mean = observable_series(r.series.mean, id)[k];
      const double se = observable_series(r.series.std_error, id)[k];
      const double shape = r.point.kind == NoisePoint::Kind::Rate ? r.point.shape : 0.0;
      const double rate = r.point.kind == NoisePoint::Kind::Rate ? r.point.rate : 0.0;
      csv += format_double(shape) + ',' + format_double(rate) + ',' +
             format_double(r.series.times[k]) + ',' + format_double(mean) + ',' +
             format_double(se) + '\n';
      if (r.point.kind == NoisePoint::Kind::Rate) {
        auto& line = by_rate[rate];
        char buf[48];
        std::snprintf(buf, sizeof(buf), "r_c=%g", rate);
        line.label = buf;
        line.x.push_back(shape);
        line.y.push_back(mean);
        line.err.push_back(se);
      }
    }
    out.write("summary.csv", csv);
    summary_meta = {{"observable", id.name()}, {"time", spec.outputs.summary->time}, {"csv", "summary.csv"}};
    if (options.plots && spec.outputs.plots && !by_rate.empty()) {
      std::vector<svg::LineSeries> lines;
      for (auto& [rate, line] : by_rate) lines.push_back(line);
      svg::PlotOptions sopt{id.name() + " at t J = " + fmt_g(spec.outputs.summary->time),
                            "shape nu", id.name(), true, true};
      out.write("summary.svg", svg::line_plot(lines, sopt));
    }
  }

  json fft_meta = json::array();
  if (spec.outputs.fft) {
    const FftRequest& req = *spec.outputs.fft;
    const ObservableId id = req.observable.empty()
                                ? ObservableId{ObservableKind::Magnetization, spec.n_sites / 2}
                                : ObservableId::parse(req.observable);
    std::map<double, const PointResult*> with_a, with_b;
    for (const auto& r : report.points) {
      if (r.point.kind != NoisePoint::Kind::Rate) continue;
      if (r.point.shape == req.shape_a) with_a[r.point.rate] = &r;
      if (r.point.shape == req.shape_b) with_b[r.point.rate] = &r;
    }
    for (const auto& [rate, a] : with_a) {
      auto it = with_b.find(rate);
      if (it == with_b.end()) continue;
      const PointResult* b = it->second;
      SpectrumResult sr;
      sr.rate = rate;
      sr.label = "fft_" + a->label + "_minus_" + b->label;
      sr.spectrum = fft_difference_spectrum(observable_series(a->series.mean, id),
                                            observable_series(b->series.mean, id),
                                            spec.trajectory.sample_dt, {req.axis, req.window});
      out.write(sr.label + ".csv", spectrum_csv(sr.spectrum, req.axis));
      const std::size_t peak = sr.spectrum.peak_index();
      fft_meta.push_back({{"rate", rate},
                          {"observable", id.name()},
                          {"csv", sr.label + ".csv"},
                          {"axis", to_string(req.axis)},
                          {"peak_frequency", sr.spectrum.frequencies[peak]},
                          {"bin_width", sr.spectrum.bin_width()}});
      if (options.plots && spec.outputs.plots) {
        svg::LineSeries line{"r_c=" + fmt_g(rate), sr.spectrum.frequencies,
                             sr.spectrum.amplitudes, {}};
        svg::PlotOptions fopt{"spectrum of " + id.name() + " difference",
                              req.axis == FrequencyAxis::Angular ? "omega" : "frequency",
                              "amplitude"};
        out.write(sr.label + ".svg", svg::line_plot({line}, fopt));
      }
      report.spectra.push_back(std::move(sr));
    }
  }

  const auto stop = std::chrono::steady_clock::now();
  report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  json run = {{"spec", emit_run_spec(spec)},
              {"master_seed", spec.ensemble.master_seed},
              {"code_version", SCMXXZ_VERSION},
              {"points", point_meta},
              {"wall_seconds", report.wall_seconds}};
  if (!summary_meta.is_null()) run["summary"] = summary_meta;
  if (!fft_meta.empty()) run["fft"] = fft_meta;
  out.write("run.json", run.dump(2));

  out.commit();
  report.files = out.files();
  return report;
}

}  // namespace scmxxz
