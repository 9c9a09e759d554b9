#include "helpers.hpp"

#include "cosym/dynamics.hpp"

using namespace cosym;

TEST_SUITE("model_zoo") {
  TEST_CASE("eigen-data of the cat map") {
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
    Eigen::Matrix2d L;
    L << 2, 1, 1, 1;
    CHECK(m.lambda == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0));
    CHECK((L * m.w_plus - m.lambda * m.w_plus).norm() < 1e-14);
    CHECK((L * m.w_minus - m.w_minus / m.lambda).norm() < 1e-14);
    CHECK(m.theta_plus.dot(m.w_plus) == doctest::Approx(1.0));
    CHECK(std::abs(m.theta_plus.dot(m.w_minus)) < 1e-15);
    CHECK(m.w_plus[0] * m.w_minus[1] - m.w_plus[1] * m.w_minus[0] == doctest::Approx(1.0));
    CHECK(m.mu() == doctest::Approx(std::log(m.lambda)));
  }

  TEST_CASE("non-hyperbolic and non-symplectic matrices are rejected") {
    test::expect_code([] { build_hyperbolic_model({1, 1, 0, 1}); }, ErrorCode::not_hyperbolic);
    test::expect_code([] { build_hyperbolic_model({0, -1, 1, 0}); }, ErrorCode::not_hyperbolic);
    test::expect_code([] { build_hyperbolic_model({2, 1, 1, 2}); }, ErrorCode::not_symplectic);
  }

  TEST_CASE("negative trace gives a negative eigenvalue") {
    const HyperbolicModel m = build_hyperbolic_model({-3, 1, -1, 0});
    CHECK(m.lambda < -1.0);
    const CosymplecticModel cm = critical_metric(m, Grid::make(GridSpec::mapping_torus(16, 16, m.L)));
    CHECK(cm.metric.certified());
  }

  TEST_CASE("metric closed form matches the glued chart") {
    // g(p, t + 1) = F^* g(Lp, t) with F the gluing
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
    Mat3 J = Mat3::Identity();
    J.bottomRightCorner<2, 2>() << 2, 1, 1, 1;
    for (double t : {-0.3, 0.0, 0.4}) {
      const Mat3 lhs = m.metric_at(t + 1.0);
      const Mat3 rhs = J.transpose() * m.metric_at(t) * J;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("rescaling the eigenvectors shifts the fiber coordinate") {
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
    for (double c : {0.5, 2.0, 7.0}) {
      const HyperbolicModel mc = m.rescaled(c);
      const double shift = std::log(c) / m.log_abs_lambda();
      for (double t : {-0.2, 0.3, 0.9})
        CHECK((mc.metric_at(t) - m.metric_at(t - shift)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("critical frame") {
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
    const GridPtr g = test::cat_grid(12);
    const CosymplecticModel cm = critical_metric(m, g);
    const CriticalFrame fr = critical_frame(m, g);
    CHECK(sup_norm(apply(cm.metric.phi(), fr.v_plus) + fr.v_minus) < 1e-12);
    CHECK(sup_norm(norm_squared(fr.v_plus, cm.metric.g()) - TensorField::scalar(g, 1.0)) < 1e-12);
    CHECK(sup_norm(inner(fr.v_plus, fr.v_minus, cm.metric.g())) < 1e-12);
    CHECK(fr.mu == doctest::Approx(m.mu()));
  }

  TEST_CASE("mismatched grids are rejected") {
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
    test::expect_code([&] { critical_metric(m, test::flat_grid(8)); }, ErrorCode::monodromy_mismatch);
    test::expect_code([] { flat_cokahler(test::cat_grid(8)); }, ErrorCode::monodromy_mismatch);
    test::expect_code([] { contact_t3_testbed(1, test::cat_grid(8)); }, ErrorCode::monodromy_mismatch);
  }

  TEST_CASE("Sol model and its frame") {
    const SolModel sol = sol_model(0.7, Grid::make(GridSpec::box(16, 16, -0.5, 0.5)));
    CHECK(sol.model.metric.certified());
    const SolBracketReport b = sol_bracket_check(sol);
    CHECK(std::max({b.y_plus, b.y_minus, b.plus_minus}) < 1e-5);
  }

  TEST_CASE("Sol chart map carries the mapping torus to Sol") {
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1}, 0.8);
    const SolEquivalenceReport r = sol_to_mapping_torus(m, test::cat_grid(16));
    CHECK(r.map.sol_parameter == doctest::Approx(0.8 / m.log_abs_lambda()));
    CHECK(r.map.torsion_rate == doctest::Approx(m.mu()));
    CHECK(std::max({r.alpha_residual, r.beta_residual, r.metric_residual, r.inverse_residual,
                    r.gluing_residual}) < 1e-8);
    const HyperbolicModel neg = build_hyperbolic_model({-3, 1, -1, 0});
    test::expect_code([&] { sol_to_mapping_torus(neg, Grid::make(GridSpec::mapping_torus(8, 8, neg.L))); },
                      ErrorCode::out_of_scope);
  }
}
