#pragma once

#include <vector>

#include "cosym_cli/config.hpp"
#include "cosym_cli/report.hpp"

namespace cosym::cli {

// Dispatches on config.experiment. Criteria that the chosen model cannot
// assert are simply not listed.
Report run(const ExperimentConfig& config);

// Repeats the sweep quantity at each resolution (torus and fiber alike),
// fits the observed order by least squares on log(error) against log(h) and
// asserts order >= 3.5. Errors at the roundoff floor are classified as exact
// instead; a non-monotone sequence above the floor fails.
Report convergence_sweep(const ExperimentConfig& config, const std::vector<int>& resolutions);

struct OrderFit {
  double order = 0.0;
  bool exact = false;      // every error at the roundoff floor
  bool monotone = true;
};
OrderFit fit_order(const std::vector<ConvergenceRow>& rows, double floor);

}  // namespace cosym::cli
