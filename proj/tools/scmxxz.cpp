// Command-line front end: run, sweep, fft, validate.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "scmxxz/error.hpp"
#include "scmxxz/execute.hpp"
#include "scmxxz/output.hpp"
#include "scmxxz/runspec.hpp"
#include "scmxxz/svg.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailed = 2;

struct RunArgs {
  std::string spec;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  bool no_plots = false;
};

std::optional<unsigned> workers_from_env() {
  const char* v = std::getenv("SCMXXZ_WORKERS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) {
    throw scmxxz::InvalidArgument("SCMXXZ_WORKERS must be a non-negative integer");
  }
  return static_cast<unsigned>(n);
}

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("spec", args.spec, "run specification (JSON)")->required();
  cmd->add_option("--out-dir,-o", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--workers", args.workers, "worker threads (0 = all cores)");
  cmd->add_flag("--no-plots", args.no_plots, "skip SVG output");
}

int do_run(const RunArgs& args, bool require_sweep) {
  scmxxz::RunSpec spec;
  try {
    spec = scmxxz::parse_run_spec_file(args.spec);
    if (require_sweep && !spec.sweep) throw scmxxz::SpecError("noise.sweep", "sweep requires a grid");
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kInvalid;
  }
  scmxxz::ExecuteOptions opts;
  opts.out_dir = args.out_dir;
  opts.plots = !args.no_plots;
  opts.seed = args.seed;
  try {
    opts.workers = args.workers ? args.workers : workers_from_env();
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  }
  try {
    const scmxxz::ExecuteReport report = scmxxz::execute(spec, opts);
    for (const auto& p : report.points) {
      std::printf("%-24s M=%zu effective_t_final=%g\n", p.label.c_str(),
                  p.series.metadata.ensemble.n_trajectories, p.series.effective_t_final);
    }
    for (const auto& s : report.spectra) {
      std::printf("%-40s peak=%g\n", s.label.c_str(),
                  s.spectrum.frequencies[s.spectrum.peak_index()]);
    }
    std::printf("wrote %zu files to %s in %.1f s\n", report.files.size(), args.out_dir.c_str(),
                report.wall_seconds);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic collision model for XXZ spin chains"};
  app.set_version_flag("--version", SCMXXZ_VERSION);
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run every noise point of a spec");
  add_run_options(run, run_args);

  RunArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "run a (shape, rate) grid and write the summary");
  add_run_options(sweep, sweep_args);

  std::string spec_path;
  auto* validate = app.add_subcommand("validate", "check a spec without running it");
  validate->add_option("spec", spec_path, "run specification (JSON)")->required();

  std::string csv_a, csv_b, observable = "mz_20", axis = "angular", window = "rectangular";
  std::string fft_out;
  bool fft_plot = false;
  auto* fft = app.add_subcommand("fft", "spectrum of the difference of two series CSVs");
  fft->add_option("run_a", csv_a, "series CSV (minuend)")->required()->check(CLI::ExistingFile);
  fft->add_option("run_b", csv_b, "series CSV (subtrahend)")->required()->check(CLI::ExistingFile);
  fft->add_option("--observable", observable, "column stem, e.g. mz_20 or ipr");
  fft->add_option("--axis", axis, "angular or ordinary")
      ->check(CLI::IsMember({"angular", "ordinary"}));
  fft->add_option("--window", window, "rectangular or hann")
      ->check(CLI::IsMember({"rectangular", "hann"}));
  fft->add_option("--out", fft_out, "write the spectrum CSV here instead of stdout");
  fft->add_flag("--svg", fft_plot, "also write <out>.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (*run) return do_run(run_args, false);
  if (*sweep) return do_run(sweep_args, true);

  if (*validate) {
    try {
      const scmxxz::RunSpec spec = scmxxz::parse_run_spec_file(spec_path);
      spec.validate();
      std::printf("ok: %zu noise point(s), N=%d, q=%d\n", spec.expanded_points().size(),
                  spec.n_sites, spec.n_excitations);
      return kOk;
    } catch (const std::exception& e) {
      std::cerr << "invalid spec: " << e.what() << '\n';
      return kInvalid;
    }
  }

  if (*fft) {
    try {
      const scmxxz::SpectrumOptions opts{scmxxz::frequency_axis_from_string(axis),
                                         scmxxz::window_from_string(window)};
      const scmxxz::Spectrum s = scmxxz::spectrum_from_csvs(
          scmxxz::read_csv(csv_a), scmxxz::read_csv(csv_b), observable, opts);
      const std::string csv = scmxxz::spectrum_csv(s, opts.axis);
      if (fft_out.empty()) {
        std::cout << csv;
      } else {
        scmxxz::write_text(fft_out, csv);
        if (fft_plot) {
          scmxxz::svg::LineSeries line{observable, s.frequencies, s.amplitudes, {}};
          scmxxz::svg::PlotOptions po{"spectrum of " + observable + " difference",
                                      axis == "angular" ? "omega" : "frequency", "amplitude"};
          scmxxz::write_text(fft_out + ".svg", scmxxz::svg::line_plot({line}, po));
        }
      }
      std::fprintf(stderr, "peak at %g (bin width %g)\n", s.frequencies[s.peak_index()],
                   s.bin_width());
      return kOk;
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid input: " << e.what() << '\n';
      return kInvalid;
    } catch (const std::exception& e) {
      std::cerr << "fft failed: " << e.what() << '\n';
      return kFailed;
    }
  }
  return kInvalid;
}
