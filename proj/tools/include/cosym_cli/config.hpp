#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cosym/cosymplectic_core.hpp"
#include "cosym/grid_chart.hpp"

namespace cosym::cli {

inline constexpr int schema_version = 1;

struct ModelConfig {
  std::string kind = "hyperbolic";  // hyperbolic, sol, flat_cokahler, contact_t3
  IntMat2 matrix{2, 1, 1, 1};
  double tau = 1.0;
  double V = 1.0;
  double mu = 1.0;   // Sol parameter
  int winding = 1;   // contact testbed
};

struct GridConfig {
  int n_torus = 32;
  int n_fiber = 32;
  std::optional<IntMat2> monodromy;  // defaults to the model's
  double fiber_start = -0.5;         // Sol box chart
  double fiber_end = 0.5;
};

struct DeformationConfig {
  std::uint64_t seed = 0;  // 0 derives it from the top-level seed
  double amplitude = 0.3;
  int max_mode = 3;
  int count = 20;
};

struct OptimizerConfig {
  int steps = 500;
  double tolerance = 1e-14;
  int snapshot_stride = 50;
  int starts = 2;
};

struct DynamicsConfig {
  double horizon = 50.0;
  int seeds = 10;
  double invariance_time = 10.0;
};

struct FirstVariationConfig {
  int count = 10;
  double step = 1e-3;       // centered difference step along the curve
  double base_step = 1.0;   // moves the base off the critical metric
  double amplitude = 0.3;
  int max_mode = 3;
};

struct SweepConfig {
  std::vector<int> resolutions{16, 32, 64};
  std::string quantity = "el_residual";
};

struct ExperimentConfig {
  std::string experiment = "verify";
  ModelConfig model;
  GridConfig grid;
  std::uint64_t seed = 1;
  std::string output = "out";
  Tolerances tolerances;
  DeformationConfig deformation;
  OptimizerConfig optimizer;
  DynamicsConfig dynamics;
  FirstVariationConfig first_variation;
  SweepConfig sweep;

  GridSpec grid_spec() const;
  GridSpec grid_spec(int resolution) const;
  std::uint64_t deformation_seed() const { return deformation.seed ? deformation.seed : seed; }
};

// Thrown with every violation found, not just the first.
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
// Normalised echo with every default filled in.
nlohmann::ordered_json to_json(const ExperimentConfig& c);

}  // namespace cosym::cli
