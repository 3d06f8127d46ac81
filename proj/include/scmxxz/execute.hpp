#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scmxxz/ensemble.hpp"
#include "scmxxz/observables.hpp"
#include "scmxxz/output.hpp"
#include "scmxxz/runspec.hpp"

namespace scmxxz {

struct ExecuteOptions {
  std::filesystem::path out_dir = "out";
  bool plots = true;
  std::optional<std::uint64_t> seed;  // overrides ensemble.master_seed
  std::optional<unsigned> workers;    // overrides ensemble.workers
};

struct PointResult {
  NoisePoint point;
  std::string label;
  std::uint64_t master_seed = 0;
  EnsembleSeries series;
};

struct SpectrumResult {
  double rate = 0.0;
  std::string label;
  Spectrum spectrum;
};

struct ExecuteReport {
  std::vector<PointResult> points;
  std::vector<SpectrumResult> spectra;
  std::vector<std::filesystem::path> files;
  double wall_seconds = 0.0;
};

/// Runs an ensemble for every noise point and writes, under out_dir:
///   <label>.csv         time series (means and standard errors)
///   run.json            spec echo, seeds, code version, effective_t_final, wall time
///   summary.csv         when outputs.summary is set
///   fft_<label>.csv     when outputs.fft is set, one per common rate
///   *.svg               unless plots are disabled
/// Point i runs with master seed (master_seed + i). Files written before a
/// failure are removed again.
ExecuteReport execute(const RunSpec& spec, const ExecuteOptions& options);

/// Post-hoc spectrum of two series CSVs (column `<observable>_mean`).
Spectrum spectrum_from_csvs(const CsvTable& a, const CsvTable& b, const std::string& observable,
                            const SpectrumOptions& options);

/// Column name default for spectra: magnetization of site N/2.
std::string central_magnetization(int n_sites);

}  // namespace scmxxz
