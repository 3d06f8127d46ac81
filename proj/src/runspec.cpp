#include "scmxxz/runspec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "scmxxz/error.hpp"

namespace scmxxz {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SpecError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(join(path, key), "required field missing");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SpecError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SpecError(path, "must be finite");
  return x;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SpecError(path, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw SpecError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SpecError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw SpecError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], at_index(path, i)));
  return out;
}

template <class T, class F>
T optional_field(const json& obj, const std::string& key, const std::string& path, T fallback,
                 F convert) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return convert(*it, join(path, key));
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw SpecError(join(path, it.key()), "unknown field");
  }
}

// Rethrows library validation errors with the field path prefixed.
template <class F>
void with_path(const std::string& path, F&& f) {
  try {
    f();
  } catch (const SpecError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw SpecError(path, e.what());
  }
}

NoisePoint parse_point(const json& v, const std::string& path) {
  if (!v.is_object()) throw SpecError(path, "expected an object");
  if (v.contains("off")) {
    reject_unknown(v, {"off"}, path);
    if (!as_bool(v["off"], join(path, "off"))) throw SpecError(join(path, "off"), "must be true");
    return NoisePoint::off();
  }
  if (v.contains("per_site")) {
    reject_unknown(v, {"per_site"}, path);
    const std::string p = join(path, "per_site");
    const json& list = v["per_site"];
    if (!list.is_array() || list.empty()) throw SpecError(p, "expected a non-empty array");
    NoisePoint point;
    point.kind = NoisePoint::Kind::PerSite;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ip = at_index(p, i);
      reject_unknown(list[i], {"shape", "scale"}, ip);
      WeibullParams w{as_number(require(list[i], "shape", ip), join(ip, "shape")),
                      as_number(require(list[i], "scale", ip), join(ip, "scale"))};
      with_path(ip, [&] { w.validate(); });
      point.per_site.push_back(w);
    }
    return point;
  }
  reject_unknown(v, {"shape", "rate"}, path);
  const double shape = as_number(require(v, "shape", path), join(path, "shape"));
  const double rate = as_number(require(v, "rate", path), join(path, "rate"));
  if (rate < 0.0) throw SpecError(join(path, "rate"), "must be >= 0");
  if (rate == 0.0) return NoisePoint::off();
  NoisePoint point;
  with_path(path, [&] { point = NoisePoint::from_rate(shape, rate); });
  return point;
}

json emit_point(const NoisePoint& p) {
  switch (p.kind) {
    case NoisePoint::Kind::Off: return json{{"off", true}};
    case NoisePoint::Kind::Rate: return json{{"shape", p.shape}, {"rate", p.rate}};
    case NoisePoint::Kind::PerSite: {
      json list = json::array();
      for (const auto& w : p.per_site) list.push_back(json{{"shape", w.shape}, {"scale", w.scale}});
      return json{{"per_site", list}};
    }
  }
  return {};
}

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  std::string s = os.str();
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '+') c = 'x';
  }
  return s;
}

}  // namespace

NoisePoint NoisePoint::from_rate(double shape, double rate) {
  params_for_rate(shape, rate);  // validates
  NoisePoint p;
  p.kind = Kind::Rate;
  p.shape = shape;
  p.rate = rate;
  return p;
}

std::string NoisePoint::label(std::size_t index) const {
  switch (kind) {
    case Kind::Off: return "off";
    case Kind::Rate: return "nu" + format_number(shape) + "_rc" + format_number(rate);
    case Kind::PerSite: return "point" + std::to_string(index);
  }
  return "point" + std::to_string(index);
}

NoiseConfig NoisePoint::to_config(int n_sites) const {
  switch (kind) {
    case Kind::Off: return NoiseConfig::disabled(n_sites);
    case Kind::Rate: return NoiseConfig::uniform(n_sites, params_for_rate(shape, rate));
    case Kind::PerSite: {
      NoiseConfig c;
      c.per_site = per_site;
      c.enabled = true;
      return c;
    }
  }
  return NoiseConfig::disabled(n_sites);
}

std::size_t default_trajectories(int n_excitations) { return n_excitations >= 2 ? 250 : 500; }

std::vector<int> central_sites(int n_sites, int n_excitations) {
  std::vector<int> sites;
  const int start = (n_sites - n_excitations) / 2;
  for (int i = 0; i < n_excitations; ++i) sites.push_back(start + i);
  return sites;
}

std::vector<NoisePoint> RunSpec::expanded_points() const {
  std::vector<NoisePoint> all = points;
  if (sweep) {
    // A zero rate means no collisions whatever the shape; run it once.
    bool have_off = false;
    for (double shape : sweep->shapes) {
      for (double rate : sweep->rates) {
        if (rate != 0.0) {
          all.push_back(NoisePoint::from_rate(shape, rate));
        } else if (!have_off) {
          all.push_back(NoisePoint::off());
          have_off = true;
        }
      }
    }
  }
  return all;
}

void RunSpec::validate() const {
  BasisPtr basis;
  with_path("model", [&] { basis = build_sector(n_sites, n_excitations); });
  with_path("model", [&] { model.validate(); });
  with_path("model.initial_sites", [&] { configuration_index(*basis, initial_sites); });
  with_path("trajectory", [&] {
    TrajectoryConfig t = trajectory;
    t.initial_sites = initial_sites;
    t.validate(*basis);
  });
  with_path("ensemble", [&] { ensemble.validate(); });
  if (points.empty() && (!sweep || sweep->shapes.empty() || sweep->rates.empty())) {
    throw SpecError("noise", "no noise points given");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    with_path(at_index("noise.points", i), [&] { points[i].to_config(n_sites).validate(n_sites); });
  }
  if (sweep) {
    for (std::size_t i = 0; i < sweep->shapes.size(); ++i) {
      if (!(sweep->shapes[i] > 0.0)) throw SpecError(at_index("noise.sweep.shapes", i), "must be > 0");
    }
    for (std::size_t i = 0; i < sweep->rates.size(); ++i) {
      if (sweep->rates[i] < 0.0) throw SpecError(at_index("noise.sweep.rates", i), "must be >= 0");
    }
  }
  if (outputs.summary) {
    with_path("outputs.summary.observable", [&] {
      const ObservableId id = ObservableId::parse(outputs.summary->observable);
      if (id.kind == ObservableKind::Ipr && n_excitations != 1) {
        throw InvalidArgument("ipr requires n_excitations = 1");
      }
      if (id.kind == ObservableKind::Magnetization && id.site >= n_sites) {
        throw InvalidArgument("site outside chain");
      }
    });
  }
  if (outputs.fft && !outputs.fft->observable.empty()) {
    with_path("outputs.fft.observable", [&] { ObservableId::parse(outputs.fft->observable); });
  }
}

RunSpec parse_run_spec(const json& doc) {
  if (!doc.is_object()) throw SpecError("", "spec must be a JSON object");
  reject_unknown(doc, {"units", "model", "noise", "trajectory", "ensemble", "outputs"}, "");
  RunSpec spec;

  if (auto it = doc.find("units"); it != doc.end()) {
    const std::string time_unit =
        as_string(require(*it, "time", "units"), "units.time");
    if (time_unit != "1/J") throw SpecError("units.time", "only \"1/J\" is supported");
  }

  const json& model = require(doc, "model", "");
  reject_unknown(model, {"n_sites", "n_excitations", "J", "Delta", "h", "initial_sites"}, "model");
  spec.n_sites = as_int(require(model, "n_sites", "model"), "model.n_sites");
  spec.n_excitations = as_int(require(model, "n_excitations", "model"), "model.n_excitations");
  spec.model.J = optional_field(model, "J", "model", 1.0, as_number);
  spec.model.Delta = optional_field(model, "Delta", "model", 0.0, as_number);
  spec.model.h = optional_field(model, "h", "model", 0.0, as_number);
  if (auto it = model.find("initial_sites"); it != model.end()) {
    if (!it->is_array()) throw SpecError("model.initial_sites", "expected an array of integers");
    for (std::size_t i = 0; i < it->size(); ++i) {
      spec.initial_sites.push_back(as_int((*it)[i], at_index("model.initial_sites", i)));
    }
  } else {
    spec.initial_sites = central_sites(spec.n_sites, spec.n_excitations);
  }

  const json& noise = require(doc, "noise", "");
  reject_unknown(noise, {"points", "sweep"}, "noise");
  if (auto it = noise.find("points"); it != noise.end()) {
    if (!it->is_array()) throw SpecError("noise.points", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      spec.points.push_back(parse_point((*it)[i], at_index("noise.points", i)));
    }
  }
  if (auto it = noise.find("sweep"); it != noise.end()) {
    reject_unknown(*it, {"shapes", "rates"}, "noise.sweep");
    SweepGrid grid;
    grid.shapes = as_number_list(require(*it, "shapes", "noise.sweep"), "noise.sweep.shapes");
    grid.rates = as_number_list(require(*it, "rates", "noise.sweep"), "noise.sweep.rates");
    spec.sweep = grid;
  }
  if (!noise.contains("points") && !noise.contains("sweep")) {
    throw SpecError("noise.points", "required field missing (or give noise.sweep)");
  }

  const json& traj = require(doc, "trajectory", "");
  reject_unknown(traj, {"sample_dt", "t_final", "boundary_epsilon", "representation",
                        "check_interval"},
                 "trajectory");
  spec.trajectory.t_final = as_number(require(traj, "t_final", "trajectory"), "trajectory.t_final");
  spec.trajectory.sample_dt = optional_field(traj, "sample_dt", "trajectory", 0.02, as_number);
  spec.trajectory.boundary_epsilon =
      optional_field(traj, "boundary_epsilon", "trajectory", 1e-3, as_number);
  spec.trajectory.check_interval = optional_field(traj, "check_interval", "trajectory", 50, as_int);
  if (auto it = traj.find("representation"); it != traj.end()) {
    with_path("trajectory.representation", [&] {
      spec.trajectory.representation =
          representation_from_string(as_string(*it, "trajectory.representation"));
    });
  }
  spec.trajectory.initial_sites = spec.initial_sites;

  spec.ensemble.n_trajectories = default_trajectories(spec.n_excitations);
  spec.ensemble.master_seed = kDefaultMasterSeed;
  if (auto it = doc.find("ensemble"); it != doc.end()) {
    reject_unknown(*it, {"n_trajectories", "master_seed", "workers"}, "ensemble");
    if (auto f = it->find("n_trajectories"); f != it->end()) {
      const int m = as_int(*f, "ensemble.n_trajectories");
      if (m < 1) throw SpecError("ensemble.n_trajectories", "must be >= 1");
      spec.ensemble.n_trajectories = static_cast<std::size_t>(m);
    }
    if (auto f = it->find("master_seed"); f != it->end()) {
      if (!f->is_number_unsigned()) {
        throw SpecError("ensemble.master_seed", "expected a non-negative integer");
      }
      spec.ensemble.master_seed = f->get<std::uint64_t>();
    }
    if (auto f = it->find("workers"); f != it->end()) {
      const int w = as_int(*f, "ensemble.workers");
      if (w < 0) throw SpecError("ensemble.workers", "must be >= 0 (0 = automatic)");
      spec.ensemble.workers = static_cast<unsigned>(w);
    }
  }

  if (auto it = doc.find("outputs"); it != doc.end()) {
    reject_unknown(*it, {"plots", "average_final_density", "summary", "fft"}, "outputs");
    spec.outputs.plots = optional_field(*it, "plots", "outputs", true, as_bool);
    spec.outputs.average_final_density =
        optional_field(*it, "average_final_density", "outputs", false, as_bool);
    if (auto s = it->find("summary"); s != it->end()) {
      reject_unknown(*s, {"observable", "time"}, "outputs.summary");
      SummaryRequest req;
      req.observable = optional_field(*s, "observable", "outputs.summary", std::string("ipr"), as_string);
      req.time = as_number(require(*s, "time", "outputs.summary"), "outputs.summary.time");
      spec.outputs.summary = req;
    }
    if (auto f = it->find("fft"); f != it->end()) {
      reject_unknown(*f, {"observable", "shape_a", "shape_b", "axis", "window"}, "outputs.fft");
      FftRequest req;
      req.observable = optional_field(*f, "observable", "outputs.fft", std::string(), as_string);
      req.shape_a = optional_field(*f, "shape_a", "outputs.fft", 100.0, as_number);
      req.shape_b = optional_field(*f, "shape_b", "outputs.fft", 1.0, as_number);
      with_path("outputs.fft", [&] {
        req.axis = frequency_axis_from_string(
            optional_field(*f, "axis", "outputs.fft", std::string("angular"), as_string));
        req.window = window_from_string(
            optional_field(*f, "window", "outputs.fft", std::string("rectangular"), as_string));
      });
      spec.outputs.fft = req;
    }
  }

  spec.validate();
  return spec;
}

RunSpec parse_run_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_run_spec(doc);
}

RunSpec parse_run_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path, "cannot open spec file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_spec_text(buffer.str());
}

json emit_run_spec(const RunSpec& spec) {
  json doc;
  doc["units"] = {{"time", "1/J"}};
  doc["model"] = {{"n_sites", spec.n_sites},
                  {"n_excitations", spec.n_excitations},
                  {"J", spec.model.J},
                  {"Delta", spec.model.Delta},
                  {"h", spec.model.h},
                  {"initial_sites", spec.initial_sites}};
  json noise = json::object();
  if (!spec.points.empty() || !spec.sweep) {
    json pts = json::array();
    for (const auto& p : spec.points) pts.push_back(emit_point(p));
    noise["points"] = pts;
  }
  if (spec.sweep) noise["sweep"] = {{"shapes", spec.sweep->shapes}, {"rates", spec.sweep->rates}};
  doc["noise"] = noise;
  doc["trajectory"] = {{"sample_dt", spec.trajectory.sample_dt},
                       {"t_final", spec.trajectory.t_final},
                       {"boundary_epsilon", spec.trajectory.boundary_epsilon},
                       {"representation", to_string(spec.trajectory.representation)},
                       {"check_interval", spec.trajectory.check_interval}};
  doc["ensemble"] = {{"n_trajectories", spec.ensemble.n_trajectories},
                     {"master_seed", spec.ensemble.master_seed},
                     {"workers", spec.ensemble.workers}};
  json outputs = {{"plots", spec.outputs.plots},
                  {"average_final_density", spec.outputs.average_final_density}};
  if (spec.outputs.summary) {
    outputs["summary"] = {{"observable", spec.outputs.summary->observable},
                          {"time", spec.outputs.summary->time}};
  }
  if (spec.outputs.fft) {
    const auto& f = *spec.outputs.fft;
    outputs["fft"] = {{"observable", f.observable},
                      {"shape_a", f.shape_a},
                      {"shape_b", f.shape_b},
                      {"axis", to_string(f.axis)},
                      {"window", to_string(f.window)}};
  }
  doc["outputs"] = outputs;
  return doc;
}

}  // namespace scmxxz
