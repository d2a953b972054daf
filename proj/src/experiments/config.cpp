#include "selfex/experiments/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "selfex/core/error.hpp"

namespace selfex {

using nlohmann::json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Simulate: return "simulate";
    case Experiment::Pde: return "pde";
    case Experiment::Steady: return "steady";
    case Experiment::Converge: return "converge";
    case Experiment::Coupling: return "coupling";
    case Experiment::Figures: return "figures";
    case Experiment::SlantMean: return "slant-mean";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& name) {
  for (const auto e : {Experiment::Simulate, Experiment::Pde, Experiment::Steady,
                       Experiment::Converge, Experiment::Coupling, Experiment::Figures,
                       Experiment::SlantMean}) {
    if (to_string(e) == name) return e;
  }
  fail(ErrorCode::ConfigError, "unknown experiment '" + name + "'");
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> s(replicas);
  for (std::size_t r = 0; r < replicas; ++r) s[r] = seed + r;
  return s;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = to_string(experiment);
  j["id"] = id.empty() ? to_string(experiment) : id;
  j["params.omega"] = params.omega;
  j["params.alpha"] = params.alpha;
  j["params.sigma"] = params.sigma;
  j["params.lambda"] = params.lambda;
  j["kernel.kind"] = to_string(kernel.kind());
  j["kernel.delta1"] = kernel.kind() == KernelKind::BoundedConfidence ? kernel.delta1() : 0.5;
  j["kernel.delta2"] = kernel.kind() == KernelKind::BoundedConfidence ? kernel.delta2() : 1.0;
  if (initial.kind() == InitialDistribution::Kind::Atoms) {
    j["initial.kind"] = "atoms";
    std::vector<double> loc, w;
    for (const auto& a : initial.atom_list()) {
      loc.push_back(a.location);
      w.push_back(a.weight);
    }
    j["initial.locations"] = loc;
    j["initial.weights"] = w;
    j["initial.lo"] = 0.0;
    j["initial.hi"] = 1.0;
  } else {
    j["initial.kind"] = "uniform";
    j["initial.locations"] = json::array();
    j["initial.weights"] = json::array();
    j["initial.lo"] = initial.lo();
    j["initial.hi"] = initial.hi();
  }
  j["initial.quadrature"] = initial_quadrature;
  j["grid.x_min"] = grid.x_min;
  j["grid.x_max"] = grid.x_max;
  j["grid.nx"] = grid.nx;
  j["pde.t_end"] = pde_t_end;
  j["pde.record_times"] = record_times;
  j["pde.dt_max"] = pde.dt_max;
  j["pde.cfl_safety"] = pde.cfl_safety;
  j["pde.scheme"] = to_string(pde.scheme);
  j["sim.dt"] = sim.dt;
  j["sim.t_end"] = sim.t_end;
  j["sim.record_stride"] = sim.record_stride;
  j["sim.n"] = n;
  j["sim.process"] = to_string(process);
  j["sim.snapshots"] = snapshots;
  j["n_list"] = n_list;
  j["seed"] = seed;
  j["replicas"] = replicas;
  j["steady.form"] = to_string(steady_form);
  j["steady.sigma_zero"] = sigma_zero;
  j["figures.snapshot_times"] = snapshot_times;
  j["figures.fig2_t"] = fig2_t;
  j["figures.fig3_t"] = fig3_t;
  j["slant.t_end"] = slant_t_end;
  j["slant.points"] = slant_points;
  j["slant.rk4_step"] = slant_rk4_step;
  j["check"] = check;
  return j;
}

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  fail(ErrorCode::ConfigError, "config key '" + key + "': " + what);
}

class Reader {
 public:
  explicit Reader(const json& j) : j_(j) {}

  static bool is_count(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  }

  double number(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!v.is_number()) config_error(key, "expected a number");
    return v.get<double>();
  }
  std::uint64_t count(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!is_count(v)) config_error(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  bool boolean(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!v.is_boolean()) config_error(key, "expected true or false");
    return v.get<bool>();
  }
  std::string text(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!v.is_string()) config_error(key, "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!v.is_array()) config_error(key, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) config_error(key, "expected a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<std::size_t> counts(const std::string& key) const {
    const auto& v = j_.at(key);
    if (!v.is_array()) config_error(key, "expected a list of integers");
    std::vector<std::size_t> out;
    for (const auto& e : v) {
      if (!is_count(e)) config_error(key, "expected a list of non-negative integers");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

 private:
  const json& j_;
};

// Runs a validation step, turning any library error into a ConfigError.
template <class Fn>
void validated(const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(ErrorCode::ConfigError, what + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& input) {
  if (!input.is_object()) fail(ErrorCode::ConfigError, "config must be a JSON object");
  json merged = ExperimentConfig{}.to_json();
  static const std::set<std::string> manifest_only{"artifact_version", "outputs"};
  for (const auto& [key, value] : input.items()) {
    if (manifest_only.count(key)) continue;
    if (!merged.contains(key)) config_error(key, "unknown key");
    merged[key] = value;
  }
  // An id left at its default follows the experiment name.
  if (!input.contains("id")) merged["id"] = "";

  const Reader r(merged);
  ExperimentConfig c;
  validated("experiment", [&] { c.experiment = experiment_from_string(r.text("experiment")); });
  c.id = r.text("id");

  c.params = {r.number("params.omega"), r.number("params.alpha"), r.number("params.sigma"),
              r.number("params.lambda")};
  validated("params", [&] { c.params.validate(); });

  validated("kernel", [&] {
    const KernelKind kind = kernel_kind_from_string(r.text("kernel.kind"));
    if (kind == KernelKind::LinearDifference) c.kernel = InteractionKernel::linear_difference();
    else if (kind == KernelKind::NeighborValue) c.kernel = InteractionKernel::neighbor_value();
    else c.kernel = InteractionKernel::bounded_confidence(r.number("kernel.delta1"), r.number("kernel.delta2"));
  });

  validated("initial", [&] {
    const std::string kind = r.text("initial.kind");
    if (kind == "atoms") {
      const auto loc = r.numbers("initial.locations");
      const auto w = r.numbers("initial.weights");
      if (loc.size() != w.size()) config_error("initial.weights", "must match initial.locations");
      std::vector<Atom> atoms;
      for (std::size_t k = 0; k < loc.size(); ++k) atoms.push_back({loc[k], w[k]});
      c.initial = InitialDistribution::atoms(std::move(atoms));
    } else if (kind == "uniform") {
      c.initial = InitialDistribution::uniform(r.number("initial.lo"), r.number("initial.hi"));
    } else {
      config_error("initial.kind", "expected atoms or uniform");
    }
  });
  c.initial_quadrature = r.count("initial.quadrature");
  if (c.initial_quadrature < 1) config_error("initial.quadrature", "must be >= 1");

  c.grid = {r.number("grid.x_min"), r.number("grid.x_max"), r.count("grid.nx")};
  validated("grid", [&] { c.grid.validate(); });

  c.pde_t_end = r.number("pde.t_end");
  c.record_times = r.numbers("pde.record_times");
  c.pde.dt_max = r.number("pde.dt_max");
  c.pde.cfl_safety = r.number("pde.cfl_safety");
  validated("pde", [&] {
    c.pde.scheme = pde_scheme_from_string(r.text("pde.scheme"));
    c.pde.validate();
  });
  if (!(c.pde_t_end >= 0.0)) config_error("pde.t_end", "must be >= 0");

  c.sim.dt = r.number("sim.dt");
  c.sim.t_end = r.number("sim.t_end");
  c.sim.record_stride = r.count("sim.record_stride");
  validated("sim", [&] {
    c.sim.validate(c.params);
    c.process = process_kind_from_string(r.text("sim.process"));
  });
  c.n = r.count("sim.n");
  if (c.n < 1) config_error("sim.n", "must be >= 1");
  c.snapshots = r.boolean("sim.snapshots");

  c.n_list = r.counts("n_list");
  for (const auto n : c.n_list) {
    if (n < 1) config_error("n_list", "entries must be >= 1");
  }
  if (!std::is_sorted(c.n_list.begin(), c.n_list.end())) config_error("n_list", "must be ascending");
  c.seed = r.count("seed");
  c.replicas = r.count("replicas");
  if (c.replicas < 1) config_error("replicas", "must be >= 1");

  validated("steady", [&] { c.steady_form = steady_form_from_string(r.text("steady.form")); });
  c.sigma_zero = r.boolean("steady.sigma_zero");

  c.snapshot_times = r.numbers("figures.snapshot_times");
  for (const double t : c.snapshot_times) {
    if (!(t >= 0.0)) config_error("figures.snapshot_times", "times must be >= 0");
  }
  c.fig2_t = r.number("figures.fig2_t");
  c.fig3_t = r.number("figures.fig3_t");
  if (!(c.fig2_t >= 0.0)) config_error("figures.fig2_t", "must be >= 0");
  if (!(c.fig3_t >= 0.0)) config_error("figures.fig3_t", "must be >= 0");

  c.slant_t_end = r.number("slant.t_end");
  c.slant_points = r.count("slant.points");
  c.slant_rk4_step = r.number("slant.rk4_step");
  if (!(c.slant_t_end > 0.0)) config_error("slant.t_end", "must be > 0");
  if (c.slant_points < 2) config_error("slant.points", "must be >= 2");
  if (!(c.slant_rk4_step > 0.0)) config_error("slant.rk4_step", "must be > 0");

  c.check = r.boolean("check");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json make_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
  json m = cfg.to_json();
  m["artifact_version"] = kArtifactVersion;
  m["outputs"] = outputs;
  return m;
}

}  // namespace selfex
