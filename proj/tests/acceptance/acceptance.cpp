// Prints one PASS/FAIL line per acceptance criterion, with the chart used.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cosym/dynamics.hpp"
#include "cosym/optimizer.hpp"
#include "cosym/random_fields.hpp"
#include "cosym/tensor_calculus.hpp"
#include "cosym/topology.hpp"
#include "cosym/variational.hpp"

using namespace cosym;

namespace {

constexpr double roundoff_floor = 1e-10;  // relative level treated as exact

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every metric built below, for the final certification check.
std::vector<std::pair<std::string, Certificate>> certificates;

CompatibleMetric keep(const std::string& name, CompatibleMetric m) {
  certificates.emplace_back(name, m.certificate());
  return m;
}

const HyperbolicModel& cat() {
  static const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
  return m;
}

GridPtr cat_grid(int n, int m) { return Grid::make(GridSpec::mapping_torus(n, m, cat().L)); }

struct Chart {
  GridPtr grid;
  CosymplecticModel model;
};

Chart critical_chart(int n, int m = -1) {
  const GridPtr g = cat_grid(n, m > 0 ? m : n);
  Chart c{g, critical_metric(cat(), g)};
  keep(fmt("critical %dx%dx%d", n, n, g->m()), c.model.metric);
  return c;
}

const Chart& chart32() {
  static const Chart c = critical_chart(32);
  return c;
}

// decreasing by at least 8x, or both values at the roundoff floor
bool fourth_order_or_floor(double coarse, double fine) {
  return coarse >= 8.0 * fine || (coarse < roundoff_floor && fine < roundoff_floor);
}

double centered_fd(const CompatibleMetric& g, const AlmostCosymplecticStructure& s, const TensorField& H) {
  const double h = 1e-3;
  return (energy(exponential_metric(g.g(), H, h), s) - energy(exponential_metric(g.g(), H, -h), s)) / (2 * h);
}

// ---------------------------------------------------------------------------

Outcome energy_of_critical_metric() {
  const Chart& c = chart32();
  const double E = energy(c.model.metric.g(), c.model.structure), exact = cat().critical_energy();
  const double rel = std::abs(E - exact) / exact;
  return {rel < 1e-6, fmt("E = %.12f vs 8 V (ln lambda)^2 / tau = %.12f, relative error %.2e < 1e-6 [32^3]", E,
                         exact, rel)};
}

Outcome torsion_constancy() {
  const double mu2 = cat().mu() * cat().mu();
  auto measure = [&](const Chart& c) {
    const ScalarField t = torsion_field(c.model.metric.g(), c.model.structure);
    return std::pair{stddev(t) / mean(t), std::abs(mean(t) - 8 * mu2) / (8 * mu2)};
  };
  const auto [sd32, m32] = measure(chart32());
  const auto [sd64, m64] = measure(critical_chart(64));
  const bool ok = sd32 < 1e-5 && fourth_order_or_floor(sd32, sd64);
  return {ok, fmt("stddev/mean %.2e (32^3) -> %.2e (64^3), < 1e-5 and decaying or at the %.0e floor; "
                  "|mean - 8 mu^2| decays %.2e -> %.2e (order %.2f)",
                  sd32, sd64, roundoff_floor, m32, m64, std::log2(m32 / m64))};
}

Outcome euler_lagrange_residual_check() {
  const double mu2 = cat().mu() * cat().mu();
  const Chart& c32 = chart32();
  const Chart c64 = critical_chart(64);
  const double e32 = sup_norm(euler_lagrange_residual(c32.model.metric, c32.model.structure));
  const double e64 = sup_norm(euler_lagrange_residual(c64.model.metric, c64.model.structure));
  const CosymplecticModel flat = flat_cokahler(Grid::make(GridSpec::flat(32)));
  keep("flat co-Kahler 32^3", flat.metric);
  const double ef = sup_norm(euler_lagrange_residual(flat.metric, flat.structure));
  const bool ok = e32 < 1e-4 * mu2 && fourth_order_or_floor(e32 / mu2, e64 / mu2) && ef == 0.0;
  return {ok, fmt("sup |nabla_R L_R g| %.2e (32^3) -> %.2e (64^3) < 1e-4 mu^2 = %.2e, decaying or at the "
                  "%.0e mu^2 floor; flat co-Kahler %.1e == 0",
                  e32, e64, 1e-4 * mu2, roundoff_floor, ef)};
}

Outcome h_eigenstructure() {
  const Chart& c = chart32();
  const double mu = cat().mu();
  const TorsionReport tr = torsion_report(c.model.metric, c.model.structure);
  const SymmetricEigen eig = symmetric_eigen(tr.h, c.model.metric.g());
  double err = 0.0;
  for (std::size_t p = 0; p < c.grid->size(); ++p)
    err = std::max({err, std::abs(eig.values[0].value(p) - mu), std::abs(eig.values[1].value(p)),
                    std::abs(eig.values[2].value(p) + mu)});
  const double mu_t = mean(tr.mu_field), mu_e = mean(eig.values[0]);
  const double spread = std::max({mu_t, mu, mu_e}) - std::min({mu_t, mu, mu_e});
  return {err < 1e-5 && spread < 1e-6,
          fmt("eigenvalues within %.2e < 1e-5 of (mu, 0, -mu); mu by torsion %.10f, ln|lambda|/tau %.10f, "
              "eigenvalue %.10f, spread %.2e < 1e-6 [32^3]",
              err, mu_t, mu, mu_e, spread)};
}

Outcome lyapunov() {
  const Chart& c = chart32();
  const double mu = cat().mu();
  const Suspension s = Suspension::of(cat());
  Rng rng(2024);
  std::uniform_int_distribution<int> pick(0, c.grid->n() - 1);
  double err = 0.0, sum = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto ex = lyapunov_exponents(s, c.model.metric.g(), pick(rng), pick(rng), 50.0 * s.tau);
    err = std::max({err, std::abs(ex[0] - mu), std::abs(ex[1]), std::abs(ex[2] + mu)});
    sum = std::max(sum, std::abs(ex[0] + ex[1] + ex[2]));
  }
  return {err < 1e-9 && sum < 1e-12,
          fmt("10 orbits over 50 tau: max error %.2e < 1e-9, max |sum| %.2e < 1e-12 [32^3]", err, sum)};
}

Outcome bracket_relations() {
  const double mu = cat().mu();
  auto analytic = [&](const Chart& c) {
    const CriticalFrame fr = critical_frame(cat(), c.grid);
    return bracket_check(fr.reeb, fr.v_plus, fr.v_minus, mu, c.model.metric.g(), Differencing::tensor).max();
  };
  const double b16 = analytic(critical_chart(16)), b32 = analytic(chart32());
  const Chart& c = chart32();
  const SplittingFrame f = anosov_splitting(c.model.metric, c.model.structure);
  const TensorField& contracting = f.rate_plus > 0 ? f.e_plus : f.e_minus;
  const TensorField& expanding = f.rate_plus > 0 ? f.e_minus : f.e_plus;
  const double bs = bracket_check(c.model.structure.reeb, contracting, expanding, mu, c.model.metric.g()).max();
  const bool ok = b32 < 1e-4 * mu && b16 >= 8.0 * b32 && bs < 1e-4 * mu;
  return {ok, fmt("critical frame %.2e (16^3) -> %.2e (32^3), order %.2f; frame from h %.2e; all < 1e-4 mu = %.2e",
                  b16, b32, std::log2(b16 / b32), bs, 1e-4 * mu)};
}

Outcome first_variation_identity() {
  const Chart cc = critical_chart(32, 128);
  const auto& s = cc.model.structure;
  const auto cof = critical_coframe(s, critical_frame(cat(), cc.grid));
  Rng rng(11);
  auto tangent = [&](const CompatibleMetric& at) {
    return tangent_project(random_symmetric_field(cc.grid, cof, rng, 0.3, 3), at, s).H;
  };
  const double E = cat().critical_energy();
  double at_crit = 0.0;
  for (int k = 0; k < 10; ++k) at_crit = std::max(at_crit, std::abs(first_variation(cc.model.metric, s, tangent(cc.model.metric))));
  const CompatibleMetric base =
      keep("first-variation base 32x32x128",
           exponential_curve(cc.model.metric, s, TangentDeformation{tangent(cc.model.metric)}, 1.0));
  double cosym = 0.0;
  for (int k = 0; k < 10; ++k) {
    const TensorField H = tangent(base);
    const double f = first_variation(base, s, H);
    cosym = std::max(cosym, std::abs(f - centered_fd(base, s, H)) / std::abs(f));
  }
  const GridPtr fg = Grid::make(GridSpec::flat(32));
  const CosymplecticModel ct = contact_t3_testbed(1, fg);
  keep("contact testbed 32^3", ct.metric);
  const auto ccof = coordinate_coframe(fg);
  double contact = 0.0;
  for (int k = 0; k < 10; ++k) {
    const TensorField H = tangent_project(random_symmetric_field(fg, ccof, rng, 0.3, 3), ct.metric, ct.structure).H;
    const double f = first_variation(ct.metric, ct.structure, H);
    contact = std::max(contact, std::abs(f - centered_fd(ct.metric, ct.structure, H)) / std::abs(f));
  }
  const bool ok = cosym < 1e-3 && contact < 1e-3 && at_crit < 1e-6 * E;
  return {ok, fmt("worst relative error %.2e (cosymplectic, 32x32x128) and %.2e (contact_t3, 32^3) < 1e-3; "
                  "at the critical metric |formula| %.2e < 1e-6 E",
                  cosym, contact, at_crit)};
}

// Shared by criteria 8 and 9.
struct GapRun {
  int certified = 0;
  double closed = 0, first = 0, gap_err = 0, min_gap = INFINITY, div = 0;
};

const GapRun& gap_run() {
  static const GapRun run = [] {
    GapRun r;
    const Chart c = critical_chart(32, 256);
    const auto& s = c.model.structure;
    const CriticalFrame frame = critical_frame(cat(), c.grid);
    const double mu = cat().mu(), E0 = energy(c.model.metric.g(), s);
    Rng rng(7);
    for (int k = 0; k < 20; ++k) {
      const Deformation d = random_deformation(c.grid, rng, 0.3, 3);
      const CompatibleMetric gt = keep(fmt("deformation %d, 32x32x256", k), deform(c.model.metric, s, d, frame));
      const ScalarField t = torsion_field(gt.g(), s);
      r.closed = std::max(r.closed, sup_norm(t - torsion_closed_form(d, mu, s)));
      r.first = std::max(r.first, sup_norm(t - torsion_first_expansion(d, mu, s)));
      const GapReport gap = energy_gap(d, mu, s);
      r.gap_err = std::max(r.gap_err, std::abs(gap.gap - (energy(gt.g(), s) - E0)));
      r.min_gap = std::min(r.min_gap, gap.gap);
      r.div = std::max(r.div, std::abs(gap.divergence_integral));
    }
    return r;
  }();
  return run;
}

Outcome closed_form_torsion() {
  const GapRun& r = gap_run();
  const double mu2 = cat().mu() * cat().mu();
  return {r.closed < 1e-4 * mu2 && r.first < 1e-4 * mu2,
          fmt("20 deformations of amplitude 0.3: closed form %.2e, first expansion %.2e, both < 1e-4 mu^2 = %.2e "
              "[32x32x256]",
              r.closed, r.first, 1e-4 * mu2)};
}

Outcome energy_gap_and_minimality() {
  const GapRun& r = gap_run();
  const double E = cat().critical_energy(), mu = cat().mu();
  const Chart& c = chart32();
  Rng rng(3);
  double ratio = INFINITY, sup_r = 0, sup_ru = 0, min_hist = INFINITY;
  for (int k = 0; k < 2; ++k) {
    const OptimizerResult res = minimize_energy(random_deformation(c.grid, rng, 0.3, 3), mu, c.model.structure);
    ratio = std::min(ratio, res.gap_history.front() / res.gap_history.back());
    sup_r = std::max(sup_r, res.sup_r);
    sup_ru = std::max(sup_ru, res.sup_Ru);
    for (double g : res.gap_history) min_hist = std::min(min_hist, g);
    keep(fmt("optimizer result %d, 32^3", k),
         deform(c.model.metric, c.model.structure, res.final, critical_frame(cat(), c.grid)));
  }
  const double min_gap = std::min(r.min_gap, min_hist);
  const bool ok = min_gap >= -1e-10 && r.gap_err < 1e-6 * E && ratio >= 1e4 && sup_r < 1e-3 && sup_ru < 1e-3;
  return {ok, fmt("min gap %.2e >= -1e-10; |gap - direct| %.2e < 1e-6 E [32x32x256]; optimizer (2 starts, 32^3) "
                  "reduction %.1e >= 1e4, sup|r| %.1e, sup|R ln p| %.1e < 1e-3",
                  min_gap, r.gap_err, ratio, sup_r, sup_ru)};
}

Outcome betti() {
  const auto cat_b = betti_numbers_mapping_torus({2, 1, 1, 1}).as_array();
  const auto par_b = betti_numbers_mapping_torus({1, 1, 0, 1}).as_array();
  const bool ok = cat_b == std::array<int, 4>{1, 1, 1, 1} && par_b[1] == 2;
  return {ok, fmt("[[2,1],[1,1]] -> (%d,%d,%d,%d); [[1,1],[0,1]] -> b1 = %d (exact)", cat_b[0], cat_b[1], cat_b[2],
                  cat_b[3], par_b[1])};
}

Outcome sol_equivalence() {
  const double sol_mu = 0.7;
  const double tau = sol_mu * cat().log_abs_lambda();
  const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1}, tau);
  const GridPtr g = cat_grid(32, 32);
  keep("critical tau = 0.7 ln lambda, 32^3", critical_metric(m, g).metric);
  const SolModel sol = sol_model(sol_mu, Grid::make(GridSpec::box(32, 32, -0.5, 0.5)));
  keep("Sol box 32^3", sol.model.metric);
  const SolEquivalenceReport r = sol_to_mapping_torus(m, g);
  const double worst = std::max({r.alpha_residual, r.beta_residual, r.metric_residual, r.inverse_residual,
                                 r.gluing_residual});
  const bool ok = worst < 1e-8 && std::abs(r.map.sol_parameter - sol_mu) < 1e-14;
  return {ok, fmt("pullback residuals of (alpha, beta, g) and gluing max %.2e < 1e-8; Sol parameter %.6f at "
                  "tau = %.6f [32^3]",
                  worst, r.map.sol_parameter, tau)};
}

Outcome certification() {
  // a compatible metric built by polar decomposition from a noisy seed
  const Chart c = critical_chart(16, 128);
  Rng rng(9);
  const TensorField noise =
      random_symmetric_field(c.grid, critical_coframe(c.model.structure, critical_frame(cat(), c.grid)), rng, 0.1);
  keep("polar from noisy seed 16x16x128", polar_compatible_metric(c.model.structure, c.model.metric.g() + noise));
  int failed = 0;
  std::string first;
  for (const auto& [name, cert] : certificates)
    if (!cert.passed()) {
      if (!failed) first = name + " (" + cert.failures().front() + ")";
      ++failed;
    }
  return {failed == 0, fmt("%zu constructed metrics, %d failing%s%s; algebraic tol 1e-8, derivative tol 100 h^4",
                           certificates.size(), failed, failed ? ", first: " : "", first.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"energy of the critical metric", energy_of_critical_metric},
      {"torsion constancy", torsion_constancy},
      {"Euler-Lagrange residual", euler_lagrange_residual_check},
      {"h eigenstructure", h_eigenstructure},
      {"Lyapunov exponents", lyapunov},
      {"bracket relations", bracket_relations},
      {"first-variation identity", first_variation_identity},
      {"closed-form torsion", closed_form_torsion},
      {"energy gap and minimality", energy_gap_and_minimality},
      {"Betti numbers", betti},
      {"Sol and mapping-torus equivalence", sol_equivalence},
      {"compatibility certification", certification},
  };
  int failures = 0, id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const Error& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.passed) ++failures;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
