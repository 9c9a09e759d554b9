#include "helpers.hpp"

#include "cosym/random_fields.hpp"

using namespace cosym;

TEST_SUITE("random_fields") {
  TEST_CASE("same seed, same field") {
    const GridPtr g = test::flat_grid(8);
    Rng a(42), b(42);
    CHECK(sup_norm(random_smooth_field(g, a, 0.3) - random_smooth_field(g, b, 0.3)) == 0.0);
  }

  TEST_CASE("amplitude is the grid sup") {
    const GridPtr g = test::cat_grid(8);
    Rng rng(1);
    CHECK(sup_norm(random_smooth_field(g, rng, 0.3)) == doctest::Approx(0.3));
    CHECK(sup_norm(random_smooth_field(test::flat_grid(8), rng, 0.7)) == doctest::Approx(0.7));
  }

  TEST_CASE("twisted grids get fiber-only fields") {
    const GridPtr g = test::cat_grid(8);
    Rng rng(2);
    const ScalarField f = random_smooth_field(g, rng, 1.0);
    for (std::size_t p = 0; p < g->size(); ++p) CHECK(f.value(p) == f.value(g->index(0, 0, g->point(p).k)));
  }

  TEST_CASE("orbit-constant fields are L-invariant and fiber constant") {
    const GridPtr g = test::cat_grid(10);
    Rng rng(3);
    const ScalarField f = orbit_constant_field(g, rng, 1.0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const auto [a, b] = g->forward(i, j);
        CHECK(f.value(g->index(i, j, 0)) == f.value(g->index(a, b, 0)));
        CHECK(f.value(g->index(i, j, 0)) == f.value(g->index(i, j, 7)));
      }
  }

  TEST_CASE("seam bumps are smooth across the gluing") {
    // Same seed on two fiber resolutions: fiber derivatives agree at the
    // shared points, including the layers next to the seam.
    auto build = [](int m) {
      const GridPtr g = test::cat_grid(8, m);
      Rng rng(4);
      const ScalarField f = seam_bump_field(g, rng, 1.0, 0.25);
      return std::pair{f, partial_derivative(f, axis_t)};
    };
    const auto [f1, d1] = build(64);
    const auto [f2, d2] = build(128);
    const GridPtr g1 = f1.grid(), g2 = f2.grid();
    // the sup normalisation differs slightly between the grids
    const double c = f2.value(g2->index(1, 2, 6)) / f1.value(g1->index(1, 2, 3));
    double diff = 0.0;
    for (std::size_t p = 0; p < g1->size(); ++p) {
      const GridPoint q = g1->point(p);
      diff = std::max(diff, std::abs(c * d1.value(p) - d2.value(g2->index(q.i, q.j, 2 * q.k))));
    }
    CHECK(diff < 1e-3 * sup_norm(d2));
  }
}
