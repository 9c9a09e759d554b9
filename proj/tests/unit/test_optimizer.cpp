#include "helpers.hpp"

#include "cosym/optimizer.hpp"
#include "cosym/random_fields.hpp"

using namespace cosym;

namespace {

const HyperbolicModel& cat() {
  static const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
  return m;
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("gradient is the derivative of the discrete gap") {
    const GridPtr g = test::cat_grid(8, 32);
    const CosymplecticModel cm = critical_metric(cat(), g);
    const double mu = cat().mu();
    Rng rng(3);
    const Deformation d = random_deformation(g, rng, 0.3);
    const std::vector<double> w = quadrature_weights(cm.structure.volume_form());
    const GapGradient gg = gap_gradient(d, mu, cm.structure, w);
    CHECK(gg.gap == doctest::Approx(energy_gap(d, mu, cm.structure).gap).epsilon(1e-12));
    const ScalarField du = random_smooth_field(g, rng, 1.0), dr = random_smooth_field(g, rng, 1.0);
    double predicted = 0.0;
    for (std::size_t n = 0; n < g->size(); ++n) predicted += gg.d_u[n] * du.value(n) + gg.d_r[n] * dr.value(n);
    const double h = 1e-5;
    const Deformation plus{d.u + h * du, d.r + h * dr}, minus{d.u - h * du, d.r - h * dr};
    const double fd = (energy_gap(plus, mu, cm.structure).gap - energy_gap(minus, mu, cm.structure).gap) / (2 * h);
    CHECK(fd == doctest::Approx(predicted).epsilon(1e-6));
  }

  TEST_CASE("zero start is already optimal") {
    const GridPtr g = test::cat_grid(8);
    const CosymplecticModel cm = critical_metric(cat(), g);
    const OptimizerResult res = minimize_energy(Deformation::zero(g), cat().mu(), cm.structure);
    CHECK(res.status == OptimizerStatus::converged);
    CHECK(res.iterations == 0);
    CHECK(res.gap_history.size() == 1);
    CHECK(res.gap_history.front() == 0.0);
  }

  TEST_CASE("random start descends to the critical metric") {
    const GridPtr g = test::cat_grid(8, 32);
    const CosymplecticModel cm = critical_metric(cat(), g);
    Rng rng(17);
    OptimizerOptions opts;
    opts.steps = 800;
    opts.snapshot_stride = 100;
    const OptimizerResult res = minimize_energy(random_deformation(g, rng, 0.3), cat().mu(), cm.structure, opts);
    CHECK(res.gap_history.front() / res.gap_history.back() > 1e4);
    CHECK(res.sup_r < 1e-3);
    CHECK(res.sup_Ru < 1e-3);
    CHECK(res.divergence_residual < 1e-10);
    for (std::size_t k = 1; k < res.gap_history.size(); ++k) CHECK(res.gap_history[k] <= res.gap_history[k - 1]);
    CHECK(res.trajectory.size() == res.trajectory_steps.size());
    CHECK(res.trajectory_steps.front() == 0);
    CHECK(res.trajectory_steps.back() == res.iterations);
  }

  TEST_CASE("interval fibers are rejected") {
    const SolModel sol = sol_model(1.0, Grid::make(GridSpec::box(8, 8, -0.5, 0.5)));
    test::expect_code([&] { minimize_energy(Deformation::zero(sol.model.metric.grid()), 1.0, sol.model.structure); },
                      ErrorCode::invalid_argument);
  }
}
