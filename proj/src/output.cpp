#include "scmxxz/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "scmxxz/error.hpp"

namespace scmxxz {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string series_csv(const EnsembleSeries& s) {
  const int n = s.mean.n_sites();
  const bool with_ipr = s.mean.has_ipr();
  std::string out = "time";
  for (int i = 0; i < n; ++i) {
    out += ",mz_" + std::to_string(i) + "_mean,mz_" + std::to_string(i) + "_se";
  }
  if (with_ipr) out += ",ipr_mean,ipr_se";
  out += ",ier_mean,ier_se,width_mean,width_se\n";

  for (std::size_t k = 0; k < s.times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    out += format_double(s.times[k]);
    for (int i = 0; i < n; ++i) {
      out += ',' + format_double(s.mean.magnetization(r, i));
      out += ',' + format_double(s.std_error.magnetization(r, i));
    }
    if (with_ipr) {
      out += ',' + format_double(s.mean.ipr[k]) + ',' + format_double(s.std_error.ipr[k]);
    }
    out += ',' + format_double(s.mean.ier[k]) + ',' + format_double(s.std_error.ier[k]);
    out += ',' + format_double(s.mean.width[k]) + ',' + format_double(s.std_error.width[k]);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const Spectrum& spectrum, FrequencyAxis axis) {
  std::string out = axis == FrequencyAxis::Angular ? "omega,amplitude\n" : "frequency,amplitude\n";
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k) {
    out += format_double(spectrum.frequencies[k]) + ',' + format_double(spectrum.amplitudes[k]) +
           '\n';
  }
  return out;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != name) continue;
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& row : rows) v.push_back(row[c]);
    return v;
  }
  throw InvalidArgument("CSV has no column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw InvalidArgument("CSV line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw InvalidArgument("CSV line " + std::to_string(line_no) + ": '" + c +
                              "' is not a number");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw InvalidArgument("CSV is empty");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

json series_metadata(const EnsembleSeries& s) {
  const auto& md = s.metadata;
  json noise;
  noise["enabled"] = md.noise.enabled;
  if (md.noise.enabled) {
    json sites = json::array();
    for (const auto& w : md.noise.per_site) {
      sites.push_back({{"shape", w.shape}, {"scale", w.scale}, {"rate", collision_rate(w)}});
    }
    noise["per_site"] = sites;
  }
  const auto& d = s.diagnostics;
  return json{
      {"n_sites", md.n_sites},
      {"n_excitations", md.n_excitations},
      {"sector_dimension", md.sector_dimension},
      {"noise", noise},
      {"trajectory",
       {{"sample_dt", md.trajectory.sample_dt},
        {"t_final", md.trajectory.t_final},
        {"boundary_epsilon", md.trajectory.boundary_epsilon},
        {"initial_sites", md.trajectory.initial_sites},
        {"representation", to_string(md.trajectory.representation)}}},
      {"ensemble",
       {{"n_trajectories", md.ensemble.n_trajectories},
        {"master_seed", md.ensemble.master_seed}}},
      {"effective_t_final", s.effective_t_final},
      {"diagnostics",
       {{"max_trace_error", d.max_trace_error},
        {"max_hermiticity_error", d.max_hermiticity_error},
        {"min_eigenvalue", d.min_eigenvalue},
        {"max_magnetization_drift", d.max_magnetization_drift},
        {"max_bound_excess", d.max_bound_excess},
        {"total_collisions", d.total_collisions}}},
  };
}

}  // namespace scmxxz
