#include "cosym_cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "cosym/dynamics.hpp"
#include "cosym/optimizer.hpp"
#include "cosym/random_fields.hpp"
#include "cosym/topology.hpp"

namespace cosym::cli {

namespace {

using json = nlohmann::ordered_json;

struct Chart {
  GridPtr grid;
  CosymplecticModel model;
  std::optional<HyperbolicModel> hyperbolic;
  std::optional<SolModel> sol;
};

Chart build_chart(const ExperimentConfig& c, int resolution = -1) {
  const GridPtr grid = Grid::make(c.grid_spec(resolution));
  const std::string& k = c.model.kind;
  if (k == "hyperbolic") {
    HyperbolicModel m = build_hyperbolic_model(c.model.matrix, c.model.tau, c.model.V);
    CosymplecticModel cm = critical_metric(m, grid, c.tolerances);
    return {grid, std::move(cm), std::move(m), std::nullopt};
  }
  if (k == "sol") {
    SolModel sm = sol_model(c.model.mu, grid, c.tolerances);
    CosymplecticModel cm = sm.model;
    return {grid, std::move(cm), std::nullopt, std::move(sm)};
  }
  if (k == "flat_cokahler") return {grid, flat_cokahler(grid, c.tolerances), std::nullopt, std::nullopt};
  return {grid, contact_t3_testbed(c.model.winding, grid, c.tolerances), std::nullopt, std::nullopt};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string below(double v, double limit) { return fmt(v) + " < " + fmt(limit); }

void add_certificate(Report& r, const std::string& prefix, const Certificate& cert) {
  for (const auto& res : cert.residuals) r.residual(prefix + res.name, res.value, res.tolerance);
}

json matrix_json(const IntMat2& m) { return json::array({m[0], m[1], m[2], m[3]}); }

double max_abs_diff(const ScalarField& f, double v) {
  double out = 0.0;
  for (double x : f.data()) out = std::max(out, std::abs(x - v));
  return out;
}

BracketReport analytic_brackets(const Chart& ch) {
  const CriticalFrame fr = critical_frame(*ch.hyperbolic, ch.grid);
  return bracket_check(fr.reeb, fr.v_plus, fr.v_minus, fr.mu, ch.model.metric.g(), Differencing::tensor);
}

json bracket_json(const BracketReport& b) {
  return {{"reeb_plus", b.reeb_plus},     {"reeb_minus", b.reeb_minus},
          {"plus_minus", b.plus_minus},   {"reeb_u_plus", b.reeb_u_plus},
          {"reeb_u_minus", b.reeb_u_minus}};
}

// ---------------------------------------------------------------- verify

void verify(const ExperimentConfig& c, Report& r) {
  std::optional<Chart> chart;
  {
    Stopwatch sw(r, "build_and_certify");
    chart = build_chart(c);
  }
  const Chart& ch = *chart;
  const auto& s = ch.model.structure;
  const auto& metric = ch.model.metric;
  const double dtol = c.tolerances.derivative(*ch.grid);
  add_certificate(r, "metric.", metric.certificate());
  r.criterion("certification", metric.certified(),
              metric.certified() ? "all compatibility identities hold"
                                 : "failed identities listed in residuals");

  Stopwatch sw(r, "verify");
  const TorsionReport tr = torsion_report(metric, s);
  const EulerLagrange el = euler_lagrange(metric, s);
  const double el_sup = sup_norm(el.residual);
  const double nrh = nabla_R_h_residual(metric, s);
  const double tmean = mean(tr.torsion_field);
  const double rel_sd = tmean > 0 ? stddev(tr.torsion_field) / tmean : 0.0;
  r.results["flavor"] = to_string(s.flavor);
  r.results["energy"] = tr.energy;
  r.results["torsion_mean"] = tmean;
  r.results["torsion_relative_stddev"] = rel_sd;
  r.results["first_integral_residual"] = tr.first_integral_residual;
  r.results["el_residual"] = el_sup;
  r.results["nabla_R_h_residual"] = nrh;
  r.results["d_alpha_plus_sup"] = el.d_alpha_plus_sup;

  if (ch.hyperbolic) {
    const HyperbolicModel& m = *ch.hyperbolic;
    const double mu = m.mu(), E = m.critical_energy();
    r.residual("euler_lagrange", el_sup, dtol);
    r.residual("nabla_R_h", nrh, dtol);
    const double rel_e = std::abs(tr.energy - E) / E;
    r.results["energy_closed_form"] = E;
    r.criterion("energy_closed_form", rel_e < 1e-6, "relative error " + below(rel_e, 1e-6));
    r.criterion("torsion_constancy", rel_sd < 1e-5, "stddev/mean " + below(rel_sd, 1e-5));
    r.criterion("euler_lagrange", el_sup < 1e-4 * mu * mu, "sup " + below(el_sup, 1e-4 * mu * mu));

    const SymmetricEigen eig = symmetric_eigen(tr.h, metric.g());
    const double e_err = std::max({max_abs_diff(eig.values[0], mu), max_abs_diff(eig.values[1], 0.0),
                                   max_abs_diff(eig.values[2], -mu)});
    const double mu_t = mean(tr.mu_field), mu_e = mean(eig.values[0]);
    const double mu_spread = std::max({mu_t, mu, mu_e}) - std::min({mu_t, mu, mu_e});
    r.results["mu"] = {{"torsion", mu_t}, {"log_lambda_over_tau", mu}, {"h_eigenvalue", mu_e}};
    r.criterion("h_eigenvalues", e_err < 1e-5, "max error " + below(e_err, 1e-5));
    r.criterion("mu_agreement", mu_spread < 1e-6, "spread " + below(mu_spread, 1e-6));

    const BracketReport b = analytic_brackets(ch);
    r.results["brackets"] = bracket_json(b);
    r.criterion("bracket_relations", b.max() < 1e-4 * mu, "max " + below(b.max(), 1e-4 * mu));

    if (m.lambda > 0) {
      const SolEquivalenceReport q = sol_to_mapping_torus(m, ch.grid);
      const double worst = std::max({q.alpha_residual, q.beta_residual, q.metric_residual,
                                     q.inverse_residual, q.gluing_residual});
      r.results["sol_equivalence"] = {{"sol_parameter", q.map.sol_parameter},
                                      {"alpha", q.alpha_residual},
                                      {"beta", q.beta_residual},
                                      {"metric", q.metric_residual},
                                      {"inverse", q.inverse_residual},
                                      {"gluing", q.gluing_residual}};
      r.criterion("sol_equivalence", worst < 1e-8, "max " + below(worst, 1e-8));
    }
  } else if (c.model.kind == "flat_cokahler") {
    r.residual("euler_lagrange", el_sup, 0.0);
    r.criterion("euler_lagrange_exact", el_sup == 0.0, "sup " + fmt(el_sup) + " == 0");
  } else if (ch.sol) {
    const SolBracketReport b = sol_bracket_check(*ch.sol);
    const double worst = std::max({b.y_plus, b.y_minus, b.plus_minus});
    r.results["sol_brackets"] = {{"y_plus", b.y_plus}, {"y_minus", b.y_minus}, {"plus_minus", b.plus_minus}};
    r.criterion("sol_brackets", worst < dtol, "max " + below(worst, dtol));
  }
}

// ---------------------------------------------------------------- energy

void energy_experiment(const ExperimentConfig& c, Report& r) {
  Stopwatch sw(r, "energy");
  const Chart ch = build_chart(c);
  const double E = energy(ch.model.metric.g(), ch.model.structure);
  r.results["energy"] = E;
  r.results["certified"] = ch.model.metric.certified();
  if (ch.hyperbolic) {
    const double exact = ch.hyperbolic->critical_energy();
    const double rel = std::abs(E - exact) / exact;
    r.results["energy_closed_form"] = exact;
    r.results["relative_error"] = rel;
    r.criterion("energy_closed_form", rel < 1e-6, "relative error " + below(rel, 1e-6));
  } else if (c.model.kind == "flat_cokahler") {
    r.criterion("energy_zero", E == 0.0, "energy " + fmt(E) + " == 0");
  } else if (ch.sol) {
    // torsion 8 / mu^2 against the volume mu (t1 - t0)
    const double exact = 8.0 / c.model.mu * (c.grid.fiber_end - c.grid.fiber_start);
    const double rel = std::abs(E - exact) / std::abs(exact);
    r.results["energy_closed_form"] = exact;
    r.results["relative_error"] = rel;
    r.criterion("energy_closed_form", rel < 1e-6, "relative error " + below(rel, 1e-6));
  }
}

// ---------------------------------------------------------------- optimize

void optimize(const ExperimentConfig& c, Report& r) {
  std::optional<Chart> chart;
  {
    Stopwatch sw(r, "build_and_certify");
    chart = build_chart(c);
  }
  const Chart& ch = *chart;
  const auto& s = ch.model.structure;
  const double mu = ch.hyperbolic->mu();
  const CriticalFrame frame = critical_frame(*ch.hyperbolic, ch.grid);
  const double E0 = energy(ch.model.metric.g(), s);
  const double E = ch.hyperbolic->critical_energy();
  Rng rng(c.deformation_seed());
  OptimizerOptions opts;
  opts.steps = c.optimizer.steps;
  opts.tolerance = c.optimizer.tolerance;
  opts.snapshot_stride = c.optimizer.snapshot_stride;

  Series hist{{"start", "iteration", "gap"}, {}};
  json starts = json::array();
  double worst_ratio = std::numeric_limits<double>::infinity();
  double worst_r = 0, worst_ru = 0, min_gap = std::numeric_limits<double>::infinity();
  double worst_div = 0, worst_oracle = 0;
  Stopwatch sw(r, "optimize");
  for (int k = 0; k < c.optimizer.starts; ++k) {
    const Deformation d0 = random_deformation(ch.grid, rng, c.deformation.amplitude, c.deformation.max_mode);
    const CompatibleMetric g0 = deform(ch.model.metric, s, d0, frame, c.tolerances);
    const double oracle = std::abs(energy_gap(d0, mu, s).gap - (energy(g0.g(), s) - E0));
    const OptimizerResult res = minimize_energy(d0, mu, s, opts);
    const double g_first = res.gap_history.front(), g_last = res.gap_history.back();
    const double ratio = g_last > 0 ? g_first / g_last : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < res.gap_history.size(); ++i)
      hist.rows.push_back({double(k), double(i), res.gap_history[i]});
    min_gap = std::min(min_gap, *std::min_element(res.gap_history.begin(), res.gap_history.end()));
    worst_ratio = std::min(worst_ratio, ratio);
    worst_r = std::max(worst_r, res.sup_r);
    worst_ru = std::max(worst_ru, res.sup_Ru);
    worst_div = std::max(worst_div, res.divergence_residual);
    worst_oracle = std::max(worst_oracle, oracle);
    starts.push_back({{"initial_gap", g_first},
                      {"final_gap", g_last},
                      {"reduction", ratio},
                      {"iterations", res.iterations},
                      {"status", to_string(res.status)},
                      {"initial_certified", g0.certified()},
                      {"initial_gap_vs_pipeline", oracle},
                      {"sup_r", res.sup_r},
                      {"sup_R_ln_p", res.sup_Ru},
                      {"divergence_residual", res.divergence_residual}});
  }
  r.results["mu"] = mu;
  r.results["critical_energy"] = E0;
  r.results["starts"] = starts;
  r.series["gap_history"] = std::move(hist);
  r.residual("divergence_integral", worst_div, c.tolerances.algebraic);
  r.criterion("gap_nonnegative", min_gap >= -1e-10, "min gap " + fmt(min_gap) + " >= -1e-10");
  r.criterion("gap_reduction", worst_ratio >= 1e4, "worst reduction " + fmt(worst_ratio) + " >= 1e4");
  r.criterion("final_r", worst_r < 1e-3, "sup |r| " + below(worst_r, 1e-3));
  r.criterion("final_R_ln_p", worst_ru < 1e-3, "sup |R(ln p)| " + below(worst_ru, 1e-3));
  r.results["initial_gap_vs_pipeline_over_E"] = worst_oracle / E;
}

// ---------------------------------------------------------------- lyapunov

void lyapunov(const ExperimentConfig& c, Report& r) {
  const Chart ch = build_chart(c);
  const double mu = ch.hyperbolic ? ch.hyperbolic->mu() : 0.0;
  const Suspension sus = ch.hyperbolic ? Suspension::of(*ch.hyperbolic) : Suspension{};
  const double horizon = c.dynamics.horizon * sus.tau;
  Rng rng(c.seed);
  std::uniform_int_distribution<int> pick(0, ch.grid->n() - 1);
  Series ser{{"i", "j", "lambda_1", "lambda_2", "lambda_3"}, {}};
  double err = 0.0, sum = 0.0;
  {
    Stopwatch sw(r, "lyapunov");
    for (int k = 0; k < c.dynamics.seeds; ++k) {
      const int i = pick(rng), j = pick(rng);
      const auto ex = lyapunov_exponents(sus, ch.model.metric.g(), i, j, horizon);
      ser.rows.push_back({double(i), double(j), ex[0], ex[1], ex[2]});
      err = std::max({err, std::abs(ex[0] - mu), std::abs(ex[1]), std::abs(ex[2] + mu)});
      sum = std::max(sum, std::abs(ex[0] + ex[1] + ex[2]));
    }
  }
  r.series["lyapunov"] = std::move(ser);
  r.results["expected"] = {mu, 0.0, -mu};
  r.results["horizon"] = horizon;
  r.results["max_error"] = err;
  r.results["max_abs_sum"] = sum;
  r.criterion("lyapunov_exponents", err < 1e-9, "max error " + below(err, 1e-9));
  r.criterion("lyapunov_sum", sum < 1e-12, "max |sum| " + below(sum, 1e-12));

  Stopwatch sw(r, "splitting");
  try {
    const SplittingFrame f = anosov_splitting(ch.model.metric, ch.model.structure);
    const SplittingInvariance inv =
        splitting_invariance(f, ch.model.metric.g(), sus, c.dynamics.invariance_time * sus.tau, mu);
    const TensorField& v_contract = f.rate_plus > 0 ? f.e_plus : f.e_minus;
    const TensorField& v_expand = f.rate_plus > 0 ? f.e_minus : f.e_plus;
    const BracketReport b = bracket_check(ch.model.structure.reeb, v_contract, v_expand, mu, ch.model.metric.g());
    const double angle = std::max(inv.max_angle_plus, inv.max_angle_minus);
    const double growth = std::max(inv.growth_defect_plus, inv.growth_defect_minus);
    r.results["splitting"] = {{"mu", f.mu},
                              {"rate_plus", f.rate_plus},
                              {"rate_minus", f.rate_minus},
                              {"min_frame_determinant", f.min_frame_determinant},
                              {"max_angle", angle},
                              {"growth_defect", growth},
                              {"brackets", bracket_json(b)}};
    r.criterion("splitting_invariance", angle < c.tolerances.algebraic && growth < c.tolerances.algebraic,
                "angle " + fmt(angle) + ", growth defect " + fmt(growth) + " < " + fmt(c.tolerances.algebraic));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_hyperbolic_torsion || ch.hyperbolic) throw;
    r.results["splitting"] = to_string(e.code());
  }
}

// ---------------------------------------------------------------- betti

void betti(const ExperimentConfig& c, Report& r) {
  const ObstructionReport o = critical_metric_obstruction(c.model.matrix);
  const auto b = o.betti.as_array();
  r.results["matrix"] = matrix_json(c.model.matrix);
  r.results["trace"] = o.trace;
  r.results["betti"] = b;
  r.results["h1_torsion"] = o.betti.h1_torsion;
  r.results["verdict"] = to_string(o.verdict);
  r.results["explanation"] = o.explanation;
  r.criterion("poincare_duality", b[0] == 1 && b[3] == 1 && b[1] == b[2],
              "b0 = b3 = 1 and b1 = b2");
}

// ---------------------------------------------------------------- first variation

double centered_fd(const CompatibleMetric& g, const AlmostCosymplecticStructure& s, const TensorField& H,
                   double h) {
  return (energy(exponential_metric(g.g(), H, h), s) - energy(exponential_metric(g.g(), H, -h), s)) /
         (2.0 * h);
}

void first_variation_experiment(const ExperimentConfig& c, Report& r) {
  const Chart ch = build_chart(c);
  const auto& s = ch.model.structure;
  const auto& fv = c.first_variation;
  Rng rng(c.deformation_seed());
  std::array<TensorField, 3> coframe =
      ch.hyperbolic ? critical_coframe(s, critical_frame(*ch.hyperbolic, ch.grid)) : coordinate_coframe(ch.grid);
  auto tangent = [&](const CompatibleMetric& at) {
    return tangent_project(random_symmetric_field(ch.grid, coframe, rng, fv.amplitude, fv.max_mode), at, s);
  };

  Stopwatch sw(r, "first_variation");
  const double E_model = energy(ch.model.metric.g(), s);
  if (ch.hyperbolic) {
    // at the critical metric itself the formula must vanish
    double at_crit = 0.0;
    for (int k = 0; k < fv.count; ++k)
      at_crit = std::max(at_crit, std::abs(first_variation(ch.model.metric, s, tangent(ch.model.metric).H)));
    const double lim = 1e-6 * E_model;
    r.results["formula_at_critical"] = at_crit;
    r.criterion("first_variation_at_critical", at_crit < lim, "max |formula| " + below(at_crit, lim));
  }
  // Cosymplectic charts move off the critical metric first; the contact
  // testbed is already non-critical.
  const CompatibleMetric base =
      ch.hyperbolic ? exponential_curve(ch.model.metric, s, tangent(ch.model.metric), fv.base_step, c.tolerances)
                    : ch.model.metric;
  add_certificate(r, "base.", base.certificate());
  Series ser{{"index", "formula", "finite_difference", "relative_error"}, {}};
  double worst = 0.0, defect = 0.0;
  for (int k = 0; k < fv.count; ++k) {
    const TangentDeformation H = tangent(base);
    const TangentDefects td = tangent_defects(H.H, base, s);
    defect = std::max({defect, td.reeb, td.phi});
    const double f = first_variation(base, s, H.H);
    const double d = centered_fd(base, s, H.H, fv.step);
    const double rel = std::abs(f - d) / (std::abs(f) + 1e-300);
    worst = std::max(worst, rel);
    ser.rows.push_back({double(k), f, d, rel});
  }
  r.series["first_variation"] = std::move(ser);
  r.results["base_energy"] = energy(base.g(), s);
  r.results["worst_relative_error"] = worst;
  r.residual("tangent_defect", defect, c.tolerances.algebraic);
  r.criterion("first_variation", worst < 1e-3, "worst relative error " + below(worst, 1e-3));
}

// ---------------------------------------------------------------- gap identity

void gap_identity(const ExperimentConfig& c, Report& r) {
  std::optional<Chart> chart;
  {
    Stopwatch sw(r, "build_and_certify");
    chart = build_chart(c);
  }
  const Chart& ch = *chart;
  const auto& s = ch.model.structure;
  const double mu = ch.hyperbolic->mu(), mu2 = mu * mu;
  const double E = ch.hyperbolic->critical_energy();
  const double E0 = energy(ch.model.metric.g(), s);
  const CriticalFrame frame = critical_frame(*ch.hyperbolic, ch.grid);
  Rng rng(c.deformation_seed());

  Stopwatch sw(r, "gap_identity");
  Series ser{{"index", "gap", "direct", "closed_form_error", "first_expansion_error", "divergence_integral"}, {}};
  int certified = 0;
  double closed = 0, first = 0, gap_err = 0, min_gap = std::numeric_limits<double>::infinity(), div = 0;
  std::optional<DeformedLieEntries> entries;
  for (int k = 0; k < c.deformation.count; ++k) {
    const Deformation d = random_deformation(ch.grid, rng, c.deformation.amplitude, c.deformation.max_mode);
    const CompatibleMetric gt = deform(ch.model.metric, s, d, frame, c.tolerances);
    if (gt.certified()) ++certified;
    const ScalarField tf = torsion_field(gt.g(), s);
    const double ce = sup_norm(tf - torsion_closed_form(d, mu, s));
    const double fe = sup_norm(tf - torsion_first_expansion(d, mu, s));
    const GapReport gap = energy_gap(d, mu, s);
    const double direct = energy(gt.g(), s) - E0;
    closed = std::max(closed, ce);
    first = std::max(first, fe);
    gap_err = std::max(gap_err, std::abs(gap.gap - direct));
    min_gap = std::min(min_gap, gap.gap);
    div = std::max(div, std::abs(gap.divergence_integral));
    if (!entries) entries = deformed_lie_entries(gt.g(), d, s, frame);
    ser.rows.push_back({double(k), gap.gap, direct, ce, fe, gap.divergence_integral});
  }
  r.series["gap_identity"] = std::move(ser);
  const bool q_form = entries->v_plus_v_plus < entries->v_plus_v_plus_alt;
  r.results["mu"] = mu;
  r.results["certified"] = certified;
  r.results["lie_entries"] = {{"reeb_row", entries->reeb_row},
                              {"v_minus_v_minus", entries->v_minus_v_minus},
                              {"mixed", entries->mixed},
                              {"v_plus_v_plus_vs_R_q_minus_2_mu_q", entries->v_plus_v_plus},
                              {"v_plus_v_plus_vs_R_q_minus_2_mu_p", entries->v_plus_v_plus_alt},
                              {"lower_right_matches", q_form ? "R(q) - 2 mu q" : "R(q) - 2 mu p"}};
  r.residual("divergence_integral", div, c.tolerances.algebraic);
  r.criterion("deformed_certification", certified == c.deformation.count,
              std::to_string(certified) + " of " + std::to_string(c.deformation.count) + " certified");
  r.criterion("closed_form_torsion", closed < 1e-4 * mu2, "sup " + below(closed, 1e-4 * mu2));
  r.criterion("first_expansion_torsion", first < 1e-4 * mu2, "sup " + below(first, 1e-4 * mu2));
  r.criterion("gap_nonnegative", min_gap >= -1e-10, "min gap " + fmt(min_gap) + " >= -1e-10");
  r.criterion("gap_vs_direct", gap_err < 1e-6 * E, "max " + below(gap_err, 1e-6 * E));
}

// ---------------------------------------------------------------- sweep

struct SweepPoint {
  double error;
  double floor;
};

SweepPoint sweep_point(const ExperimentConfig& c, const std::string& q, int res) {
  const Chart ch = build_chart(c, res);
  const auto& s = ch.model.structure;
  const auto& metric = ch.model.metric;
  const HyperbolicModel& m = *ch.hyperbolic;
  const double mu = m.mu();
  constexpr double floor = 1e-10;
  if (q == "el_residual") return {sup_norm(euler_lagrange_residual(metric, s)) / (mu * mu), floor};
  if (q == "torsion_stddev") {
    const ScalarField t = torsion_field(metric.g(), s);
    return {stddev(t) / mean(t), floor};
  }
  if (q == "energy_error") {
    const double E = m.critical_energy();
    return {std::abs(energy(metric.g(), s) - E) / E, floor};
  }
  if (q == "bracket_residual") return {analytic_brackets(ch).max() / mu, floor};
  if (q == "mu_error") return {std::abs(mean(torsion_report(metric, s).mu_field) - mu) / mu, floor};
  // lyapunov_error
  const auto ex = lyapunov_exponents(Suspension::of(m), metric.g(), 0, 0, c.dynamics.horizon * m.tau);
  return {std::max({std::abs(ex[0] - mu), std::abs(ex[1]), std::abs(ex[2] + mu)}), floor};
}

}  // namespace

OrderFit fit_order(const std::vector<ConvergenceRow>& rows, double floor) {
  OrderFit fit;
  std::vector<const ConvergenceRow*> above;
  for (const auto& row : rows)
    if (row.error > floor) above.push_back(&row);
  fit.exact = above.empty();
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].error > floor && rows[i].error >= rows[i - 1].error) fit.monotone = false;
  if (above.size() < 2) {
    fit.order = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(above.size());
  for (const auto* row : above) {
    const double x = std::log(row->spacing), y = std::log(row->error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

Report convergence_sweep(const ExperimentConfig& config, const std::vector<int>& resolutions) {
  std::vector<std::string> errors;
  if (config.model.kind != "hyperbolic") errors.push_back("the convergence sweep needs the hyperbolic model");
  if (resolutions.size() < 3) errors.push_back("the convergence sweep needs at least 3 resolutions");
  if (!std::is_sorted(resolutions.begin(), resolutions.end()) ||
      std::adjacent_find(resolutions.begin(), resolutions.end()) != resolutions.end())
    errors.push_back("sweep resolutions must be strictly increasing");
  for (int res : resolutions)
    if (res < 5) errors.push_back("sweep resolution " + std::to_string(res) + " is below 5");
  if (!errors.empty()) throw ConfigError(errors);

  Report r;
  r.echo = to_json(config);
  r.echo["experiment"] = "sweep";
  r.echo["sweep"]["resolutions"] = resolutions;
  const std::string& q = config.sweep.quantity;
  double floor = 0.0;
  Series ser{{"resolution", "spacing", "error"}, {}};
  for (int res : resolutions) {
    Stopwatch sw(r, "resolution_" + std::to_string(res));
    const SweepPoint p = sweep_point(config, q, res);
    floor = p.floor;
    const double h = Grid(config.grid_spec(res)).max_spacing();
    r.convergence.push_back({res, h, p.error});
    ser.rows.push_back({double(res), h, p.error});
  }
  r.series["convergence"] = std::move(ser);
  const OrderFit fit = fit_order(r.convergence, floor);
  constexpr double required = 4.0 - 0.5;
  r.convergence_fit = {{"quantity", q},
                       {"order", std::isnan(fit.order) ? json(nullptr) : json(fit.order)},
                       {"required_order", required},
                       {"roundoff_floor", floor},
                       {"exact", fit.exact},
                       {"monotone", fit.monotone}};
  if (fit.exact) {
    r.criterion("convergence_order", true, q + " at the roundoff floor " + fmt(floor) + " at every resolution");
  } else if (!fit.monotone) {
    r.criterion("convergence_order", false, q + " does not decrease monotonically");
  } else if (std::isnan(fit.order)) {
    r.criterion("convergence_order", true, q + " reaches the roundoff floor after one resolution");
  } else {
    r.criterion("convergence_order", fit.order >= required,
                q + " order " + fmt(fit.order) + " >= " + fmt(required));
  }
  return r;
}

Report run(const ExperimentConfig& config) {
  Report r;
  r.echo = to_json(config);
  {
    Stopwatch total(r, "total");
    const std::string& e = config.experiment;
    if (e == "verify") verify(config, r);
    else if (e == "energy") energy_experiment(config, r);
    else if (e == "optimize") optimize(config, r);
    else if (e == "lyapunov") lyapunov(config, r);
    else if (e == "betti") betti(config, r);
    else if (e == "first_variation") first_variation_experiment(config, r);
    else if (e == "gap_identity") gap_identity(config, r);
    else throw ConfigError({"unknown experiment " + e});
  }
  return r;
}

}  // namespace cosym::cli
