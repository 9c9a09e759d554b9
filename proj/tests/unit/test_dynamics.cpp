#include "helpers.hpp"

#include "cosym/dynamics.hpp"

using namespace cosym;

namespace {

const HyperbolicModel& cat() {
  static const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
  return m;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("one period of the suspension is the cat map") {
    const Suspension s = Suspension::of(cat());
    const Vec3 p(0.0, 0.3, 0.45);
    const Vec3 q = reeb_flow(s, p, s.tau);
    CHECK(q[0] == doctest::Approx(0.0));
    CHECK(q[1] == doctest::Approx(std::fmod(2 * 0.3 + 0.45, 1.0)));
    CHECK(q[2] == doctest::Approx(std::fmod(0.3 + 0.45, 1.0)));
  }

  TEST_CASE("transport is a cocycle") {
    const Suspension s = Suspension::of(cat());
    const Vec3 p(0.2, 0.1, 0.7);
    for (double a : {0.3, 1.7})
      for (double b : {0.9, 2.4}) {
        const Mat3 whole = flow_differential(s, p, a + b);
        const Mat3 parts = flow_differential(s, reeb_flow(s, p, a), b) * flow_differential(s, p, a);
        CHECK((whole - parts).cwiseAbs().maxCoeff() == 0.0);
      }
    const FlowCocycle c = flow_cocycle(s, p, {0.0, 1.0, 2.5});
    CHECK(c.steps.size() == 3);
    CHECK((c.steps[0].transport - Mat3::Identity()).norm() == 0.0);
  }

  TEST_CASE("Lyapunov exponents of the critical metric") {
    const GridPtr g = test::cat_grid(16);
    const CosymplecticModel cm = critical_metric(cat(), g);
    const double mu = cat().mu();
    for (auto [i, j] : {std::pair{0, 0}, std::pair{3, 11}, std::pair{15, 7}}) {
      const auto ex = lyapunov_exponents(Suspension::of(cat()), cm.metric.g(), i, j, 50.0);
      CHECK(std::abs(ex[0] - mu) < 1e-9);
      CHECK(std::abs(ex[1]) < 1e-9);
      CHECK(std::abs(ex[2] + mu) < 1e-9);
      CHECK(std::abs(ex[0] + ex[1] + ex[2]) < 1e-12);
    }
  }

  TEST_CASE("flat suspension has zero exponents") {
    const CosymplecticModel flat = flat_cokahler(test::flat_grid(8));
    const auto ex = lyapunov_exponents(Suspension{}, flat.metric.g(), 1, 2, 20.0);
    for (double e : ex) CHECK(e == 0.0);
  }

  TEST_CASE("dynamics errors") {
    const CosymplecticModel cm = critical_metric(cat(), test::cat_grid(8));
    test::expect_code([&] { lyapunov_exponents(Suspension::of(cat()), cm.metric.g(), 0, 0, 0.5); },
                      ErrorCode::horizon_too_short);
    test::expect_code([&] { lyapunov_exponents(Suspension{}, cm.metric.g(), 0, 0, 10.0); },
                      ErrorCode::monodromy_mismatch);
    const CosymplecticModel flat = flat_cokahler(test::flat_grid(8));
    test::expect_code([&] { anosov_splitting(flat.metric, flat.structure); }, ErrorCode::not_hyperbolic_torsion);
  }

  TEST_CASE("Anosov splitting from h") {
    const GridPtr g = test::cat_grid(16);
    const CosymplecticModel cm = critical_metric(cat(), g);
    const double mu = cat().mu();
    const SplittingFrame f = anosov_splitting(cm.metric, cm.structure);
    CHECK(f.mu == doctest::Approx(mu).epsilon(1e-4));
    CHECK(std::abs(f.rate_plus) == doctest::Approx(mu).epsilon(1e-4));
    CHECK(f.rate_plus * f.rate_minus < 0);
    CHECK(f.min_frame_determinant == doctest::Approx(1.0).epsilon(1e-6));
    const SplittingInvariance inv = splitting_invariance(f, cm.metric.g(), Suspension::of(cat()), 10.0, mu);
    CHECK(inv.max_angle_plus < 1e-10);
    CHECK(inv.max_angle_minus < 1e-10);
    CHECK(inv.growth_defect_plus < 1e-10);
    CHECK(inv.growth_defect_minus < 1e-10);
  }

  TEST_CASE("bracket relations converge at fourth order") {
    const double mu = cat().mu();
    auto worst = [&](int n) {
      const GridPtr g = test::cat_grid(n);
      const CosymplecticModel cm = critical_metric(cat(), g);
      const CriticalFrame fr = critical_frame(cat(), g);
      return bracket_check(fr.reeb, fr.v_plus, fr.v_minus, mu, cm.metric.g(), Differencing::tensor).max();
    };
    const double e1 = worst(12), e2 = worst(24);
    CHECK(e2 < 1e-4 * mu);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("perturbed frames show linear residual growth") {
    const GridPtr g = test::cat_grid(16);
    const CosymplecticModel cm = critical_metric(cat(), g);
    const CriticalFrame fr = critical_frame(cat(), g);
    const double mu = cat().mu();
    const double base = bracket_check(fr.reeb, fr.v_plus, fr.v_minus, mu, cm.metric.g()).reeb_plus;
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      const TensorField vp = fr.v_plus + eps * fr.reeb;
      const double r = bracket_check(fr.reeb, vp, fr.v_minus, mu, cm.metric.g()).reeb_plus;
      CHECK(r == doctest::Approx(mu * eps).epsilon(1e-3 + base / (mu * eps)));
    }
  }
}
