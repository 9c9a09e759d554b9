#include "helpers.hpp"

#include "cosym/tensor_algebra.hpp"

using namespace cosym;
using test::two_pi;

namespace {

// sup error of d/dx sin(2 pi x) on an n^3 flat grid
double sine_derivative_error(int n) {
  const GridPtr g = test::flat_grid(n);
  const ScalarField f = make_scalar_field(g, [&](std::size_t p) { return std::sin(two_pi * g->coords(p)[1]); });
  const ScalarField d = partial_derivative(f, axis_x);
  const ScalarField exact =
      make_scalar_field(g, [&](std::size_t p) { return two_pi * std::cos(two_pi * g->coords(p)[1]); });
  return sup_norm(d - exact);
}

}  // namespace

TEST_SUITE("grid_chart") {
  TEST_CASE("index and point are inverse") {
    const GridPtr g = test::cat_grid(5, 7);
    CHECK(g->size() == 5u * 5u * 7u);
    for (std::size_t p = 0; p < g->size(); ++p) CHECK(g->index(g->point(p)) == p);
  }

  TEST_CASE("forward and backward undo each other") {
    const GridPtr g = test::cat_grid(9);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        const auto [a, b] = g->forward(i, j);
        const auto [c, d] = g->backward(a, b);
        CHECK(c == i);
        CHECK(d == j);
      }
  }

  TEST_CASE("invalid specs are rejected") {
    test::expect_code([] { Grid::make(GridSpec::mapping_torus(8, 8, {2, 0, 0, 1})); },
                      ErrorCode::invalid_argument);
    test::expect_code([] { Grid::make(GridSpec::mapping_torus(8, 4, {1, 0, 0, 1})); },
                      ErrorCode::invalid_argument);
    test::expect_code([] { Grid::make(GridSpec::box(8, 8, 1.0, 0.0)); }, ErrorCode::invalid_argument);
  }

  TEST_CASE("fourth order on a periodic axis") {
    const double e16 = sine_derivative_error(16), e32 = sine_derivative_error(32);
    CHECK(e32 < 1e-3);
    CHECK(std::log2(e16 / e32) == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("fourth order with one-sided stencils on an interval chart") {
    auto err = [](int n) {
      const GridPtr g = Grid::make(GridSpec::box(4, n, -0.5, 0.5));
      const ScalarField f = make_scalar_field(g, [&](std::size_t p) { return std::exp(g->coords(p)[0]); });
      return sup_norm(partial_derivative(f, axis_t) - f);
    };
    const double e1 = err(17), e2 = err(33);
    CHECK(e2 < 1e-5);
    CHECK(std::log2(e1 / e2) > 3.5);
  }

  TEST_CASE("fiber derivative across the seam") {
    // v+ = |lambda|^t w- is single valued on the mapping torus and d_t v+ = ln|lambda| v+.
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1});
    auto err = [&](int n) {
      const GridPtr g = test::cat_grid(6, n);
      const CriticalFrame fr = critical_frame(m, g);
      return sup_norm(partial_derivative(fr.v_plus, axis_t) - m.log_abs_lambda() * fr.v_plus);
    };
    const double e1 = err(16), e2 = err(32);
    CHECK(e2 < 1e-5);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("seam transport round trip") {
    const GridPtr g = test::cat_grid(6);
    const Mat3 J = g->seam_jacobian();
    const std::vector<double> t{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<Slot> slots{Slot::up, Slot::down};
    const auto a = seam_transport(t, slots, J, Transport::pushforward);
    const auto b = seam_transport(a, slots, J, Transport::pullback);
    for (int k = 0; k < 9; ++k) CHECK(b[k] == doctest::Approx(t[k]).epsilon(1e-14));
  }

  TEST_CASE("quadrature of the critical volume") {
    const HyperbolicModel m = build_hyperbolic_model({2, 1, 1, 1}, 1.5, 2.0);
    const GridPtr g = test::cat_grid(8);
    const CosymplecticModel cm = critical_metric(m, g);
    const TensorField vol = cm.structure.volume_form();
    CHECK(integrate(TensorField::scalar(g, 1.0), vol) == doctest::Approx(1.5 * 2.0).epsilon(1e-14));
    double sum = 0.0;
    for (double w : quadrature_weights(vol)) sum += w;
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-14));
  }

  TEST_CASE("volume forms that vanish are rejected") {
    const GridPtr g = test::flat_grid(6);
    const TensorField zero(g, {Slot::down, Slot::down, Slot::down});
    test::expect_code([&] { integrate(TensorField::scalar(g, 1.0), zero); }, ErrorCode::degenerate_volume);
  }
}
