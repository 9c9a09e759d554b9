#include "cosym_cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace cosym::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> experiments{"verify",  "energy",          "optimize",    "lyapunov",
                                           "betti",   "first_variation", "gap_identity"};
const std::vector<std::string> models{"hyperbolic", "sol", "flat_cokahler", "contact_t3"};
const std::vector<std::string> sweep_quantities{"el_residual",   "torsion_stddev", "energy_error",
                                                "bracket_residual", "mu_error",   "lyapunov_error"};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// Reads typed fields out of one JSON object and records every problem.
class Section {
public:
  Section(const json& j, std::string path, std::vector<std::string>& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(where("") + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.is_number_integer() && v.get<long long>() < 0) throw std::invalid_argument("a non-negative integer");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("a string");
      }
      out = v.get<T>();
    } catch (const std::invalid_argument& e) {
      errors_.push_back(where(key) + " must be " + e.what());
    } catch (const json::exception&) {
      errors_.push_back(where(key) + " has the wrong type");
    }
  }

  void get_matrix(const char* key, IntMat2& out, bool* present = nullptr) {
    seen_.insert(key);
    if (present) *present = false;
    if (!j_.is_object() || !j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 4 ||
        !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); })) {
      errors_.push_back(where(key) + " must be 4 integers in row-major order");
      return;
    }
    for (int k = 0; k < 4; ++k) out[k] = v[k].get<std::int64_t>();
    if (present) *present = true;
  }

  void get_int_list(const char* key, std::vector<int>& out) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() ||
        !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); })) {
      errors_.push_back(where(key) + " must be a list of integers");
      return;
    }
    out = v.get<std::vector<int>>();
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  void reject_unknown() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) errors_.push_back(where(it.key()) + " is not a recognised key");
  }

  std::string where(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

template <class F>
void section(Section& parent, const char* key, std::vector<std::string>& errors, F&& fill) {
  if (const json* c = parent.child(key)) {
    Section s(*c, parent.where(key), errors);
    fill(s);
    s.reject_unknown();
  }
}

void require(bool ok, std::vector<std::string>& errors, const std::string& msg) {
  if (!ok) errors.push_back(msg);
}

json matrix_json(const IntMat2& m) { return json::array({m[0], m[1], m[2], m[3]}); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorCode::invalid_config, join(violations)), violations_(std::move(violations)) {}

GridSpec ExperimentConfig::grid_spec() const { return grid_spec(-1); }

GridSpec ExperimentConfig::grid_spec(int resolution) const {
  const int nt = resolution > 0 ? resolution : grid.n_torus;
  const int nf = resolution > 0 ? resolution : grid.n_fiber;
  if (model.kind == "sol") return GridSpec::box(nt, nf, grid.fiber_start, grid.fiber_end);
  if (model.kind == "hyperbolic") return GridSpec::mapping_torus(nt, nf, model.matrix);
  return GridSpec::mapping_torus(nt, nf, {1, 0, 0, 1});
}

ExperimentConfig parse_config(const json& j) {
  std::vector<std::string> errors;
  ExperimentConfig c;
  Section top(j, "", errors);
  int version = schema_version;
  top.get("schema_version", version);
  top.get("experiment", c.experiment);
  top.get("seed", c.seed);
  top.get("output", c.output);

  std::string kind = c.model.kind;
  top.get("model", kind);
  c.model.kind = kind;
  bool have_matrix = false;
  top.get_matrix("matrix", c.model.matrix, &have_matrix);
  top.get("tau", c.model.tau);
  top.get("V", c.model.V);
  top.get("mu", c.model.mu);
  top.get("winding", c.model.winding);

  section(top, "grid", errors, [&](Section& s) {
    s.get("n_torus", c.grid.n_torus);
    s.get("n_fiber", c.grid.n_fiber);
    IntMat2 m{};
    bool present = false;
    s.get_matrix("monodromy", m, &present);
    if (present) c.grid.monodromy = m;
    s.get("fiber_start", c.grid.fiber_start);
    s.get("fiber_end", c.grid.fiber_end);
  });
  section(top, "tolerances", errors, [&](Section& s) {
    s.get("algebraic", c.tolerances.algebraic);
    s.get("derivative_constant", c.tolerances.derivative_constant);
  });
  section(top, "deformation", errors, [&](Section& s) {
    s.get("seed", c.deformation.seed);
    s.get("amplitude", c.deformation.amplitude);
    s.get("max_mode", c.deformation.max_mode);
    s.get("count", c.deformation.count);
  });
  section(top, "optimizer", errors, [&](Section& s) {
    s.get("steps", c.optimizer.steps);
    s.get("tolerance", c.optimizer.tolerance);
    s.get("snapshot_stride", c.optimizer.snapshot_stride);
    s.get("starts", c.optimizer.starts);
  });
  section(top, "dynamics", errors, [&](Section& s) {
    s.get("horizon", c.dynamics.horizon);
    s.get("seeds", c.dynamics.seeds);
    s.get("invariance_time", c.dynamics.invariance_time);
  });
  section(top, "first_variation", errors, [&](Section& s) {
    s.get("count", c.first_variation.count);
    s.get("step", c.first_variation.step);
    s.get("base_step", c.first_variation.base_step);
    s.get("amplitude", c.first_variation.amplitude);
    s.get("max_mode", c.first_variation.max_mode);
  });
  section(top, "sweep", errors, [&](Section& s) {
    s.get_int_list("resolutions", c.sweep.resolutions);
    s.get("quantity", c.sweep.quantity);
  });
  top.reject_unknown();

  // value checks, all of them before any computation
  require(version == schema_version, errors,
          "schema_version " + std::to_string(version) + " is not supported (expected " +
              std::to_string(schema_version) + ")");
  require(std::count(experiments.begin(), experiments.end(), c.experiment) == 1, errors,
          "experiment must be one of " + join(experiments));
  require(std::count(models.begin(), models.end(), c.model.kind) == 1, errors,
          "model must be one of " + join(models));
  require(c.model.tau > 0, errors, "tau must be positive");
  require(c.model.V > 0, errors, "V must be positive");
  require(c.model.mu != 0, errors, "mu must be nonzero");
  require(c.model.winding != 0, errors, "winding must be nonzero");
  const IntMat2& L = c.model.matrix;
  require(L[0] * L[3] - L[1] * L[2] == 1, errors, "matrix must have determinant 1");
  require(c.grid.n_torus >= 1, errors, "grid.n_torus must be at least 1");
  require(c.grid.n_fiber >= 5, errors, "grid.n_fiber must be at least 5");
  require(c.grid.fiber_end > c.grid.fiber_start, errors, "grid.fiber_end must exceed grid.fiber_start");
  if (c.grid.monodromy) {
    const IntMat2 expected = c.model.kind == "hyperbolic" ? c.model.matrix : IntMat2{1, 0, 0, 1};
    require(*c.grid.monodromy == expected, errors,
            "grid.monodromy does not match the model (" + c.model.kind + ")");
  }
  require(c.tolerances.algebraic > 0, errors, "tolerances.algebraic must be positive");
  require(c.tolerances.derivative_constant > 0, errors, "tolerances.derivative_constant must be positive");
  require(c.deformation.amplitude >= 0, errors, "deformation.amplitude must be non-negative");
  require(c.deformation.max_mode >= 0 && c.deformation.max_mode <= 8, errors,
          "deformation.max_mode must lie in [0, 8]");
  require(c.deformation.count >= 1, errors, "deformation.count must be at least 1");
  require(c.optimizer.steps >= 0, errors, "optimizer.steps must be non-negative");
  require(c.optimizer.tolerance >= 0, errors, "optimizer.tolerance must be non-negative");
  require(c.optimizer.snapshot_stride >= 1, errors, "optimizer.snapshot_stride must be at least 1");
  require(c.optimizer.starts >= 1, errors, "optimizer.starts must be at least 1");
  require(c.dynamics.horizon > 0, errors, "dynamics.horizon must be positive");
  require(c.dynamics.seeds >= 1, errors, "dynamics.seeds must be at least 1");
  require(c.dynamics.invariance_time >= 0, errors, "dynamics.invariance_time must be non-negative");
  require(c.first_variation.count >= 1, errors, "first_variation.count must be at least 1");
  require(c.first_variation.step > 0, errors, "first_variation.step must be positive");
  require(c.first_variation.amplitude >= 0, errors, "first_variation.amplitude must be non-negative");
  require(c.first_variation.max_mode >= 0 && c.first_variation.max_mode <= 8, errors,
          "first_variation.max_mode must lie in [0, 8]");
  require(c.sweep.resolutions.size() >= 3, errors, "sweep.resolutions needs at least 3 entries");
  require(std::all_of(c.sweep.resolutions.begin(), c.sweep.resolutions.end(), [](int r) { return r >= 5; }),
          errors, "sweep.resolutions must all be at least 5");
  require(std::count(sweep_quantities.begin(), sweep_quantities.end(), c.sweep.quantity) == 1, errors,
          "sweep.quantity must be one of " + join(sweep_quantities));

  // experiment and model pairing
  const std::string& e = c.experiment;
  const std::string& m = c.model.kind;
  if (e == "optimize" || e == "gap_identity")
    require(m == "hyperbolic", errors, e + " needs the hyperbolic model");
  if (e == "lyapunov")
    require(m == "hyperbolic" || m == "flat_cokahler", errors, "lyapunov needs a closed suspension model");
  if (e == "first_variation")
    require(m == "hyperbolic" || m == "contact_t3", errors, "first_variation needs hyperbolic or contact_t3");
  if (m == "hyperbolic") {
    const std::int64_t tr = L[0] + L[3];
    require(tr > 2 || tr < -2 || e == "betti", errors, "the hyperbolic model needs |trace| > 2");
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return parse_config(j);
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["experiment"] = c.experiment;
  j["model"] = c.model.kind;
  j["matrix"] = matrix_json(c.model.matrix);
  j["tau"] = c.model.tau;
  j["V"] = c.model.V;
  j["mu"] = c.model.mu;
  j["winding"] = c.model.winding;
  j["seed"] = c.seed;
  j["output"] = c.output;
  const GridSpec g = c.grid_spec();
  j["grid"] = {{"n_torus", c.grid.n_torus},
               {"n_fiber", c.grid.n_fiber},
               {"monodromy", matrix_json(g.monodromy)},
               {"fiber_start", c.grid.fiber_start},
               {"fiber_end", c.grid.fiber_end}};
  j["tolerances"] = {{"algebraic", c.tolerances.algebraic},
                     {"derivative_constant", c.tolerances.derivative_constant}};
  j["deformation"] = {{"seed", c.deformation_seed()},
                      {"amplitude", c.deformation.amplitude},
                      {"max_mode", c.deformation.max_mode},
                      {"count", c.deformation.count}};
  j["optimizer"] = {{"steps", c.optimizer.steps},
                    {"tolerance", c.optimizer.tolerance},
                    {"snapshot_stride", c.optimizer.snapshot_stride},
                    {"starts", c.optimizer.starts}};
  j["dynamics"] = {{"horizon", c.dynamics.horizon},
                   {"seeds", c.dynamics.seeds},
                   {"invariance_time", c.dynamics.invariance_time}};
  j["first_variation"] = {{"count", c.first_variation.count},
                          {"step", c.first_variation.step},
                          {"base_step", c.first_variation.base_step},
                          {"amplitude", c.first_variation.amplitude},
                          {"max_mode", c.first_variation.max_mode}};
  j["sweep"] = {{"resolutions", c.sweep.resolutions}, {"quantity", c.sweep.quantity}};
  return j;
}

}  // namespace cosym::cli
