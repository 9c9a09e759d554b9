#include "cosym/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cosym {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

void normalize_sup(ScalarField& f, double amplitude) {
  const double s = sup_norm(f);
  if (s > 0.0)
    for (double& v : f.data()) v *= amplitude / s;
}

struct Mode {
  int kt, kx, ky;
  double c, d;
};

}  // namespace

ScalarField random_smooth_field(const GridPtr& grid, Rng& rng, double amplitude, int max_mode) {
  if (max_mode < 0) throw Error(ErrorCode::invalid_argument, "max_mode must be non-negative");
  const int mt = max_mode;
  const int mxy = grid->periodic_fiber() && grid->flat() ? max_mode : 0;
  std::vector<Mode> modes;
  for (int kt = 0; kt <= mt; ++kt)
    for (int kx = -mxy; kx <= mxy; ++kx)
      for (int ky = -mxy; ky <= mxy; ++ky) {
        // half-space of wave vectors, each real mode once
        if (kt == 0 && (kx < 0 || (kx == 0 && ky < 0))) continue;
        const double w = 1.0 / (1.0 + kt * kt + kx * kx + ky * ky);
        modes.push_back({kt, kx, ky, w * uniform(rng), w * uniform(rng)});
      }
  ScalarField f = make_scalar_field(grid, [&](std::size_t p) {
    const Vec3 q = grid->coords(p);
    double v = 0.0;
    for (const Mode& m : modes) {
      const double ph = two_pi * (m.kt * q[0] + m.kx * q[1] + m.ky * q[2]);
      v += m.c * std::cos(ph) + m.d * std::sin(ph);
    }
    return v;
  });
  normalize_sup(f, amplitude);
  return f;
}

ScalarField seam_bump_field(const GridPtr& grid, Rng& rng, double amplitude, double width,
                            int torus_mode) {
  if (!grid->periodic_fiber()) throw Error(ErrorCode::invalid_argument, "seam bumps need a periodic fiber");
  if (!(width > 0.0)) throw Error(ErrorCode::invalid_argument, "bump width must be positive");
  std::vector<Mode> modes;
  for (int kx = -torus_mode; kx <= torus_mode; ++kx)
    for (int ky = 0; ky <= torus_mode; ++ky) {
      if (ky == 0 && kx < 0) continue;
      const double w = 1.0 / (1.0 + kx * kx + ky * ky);
      modes.push_back({0, kx, ky, w * uniform(rng), w * uniform(rng)});
    }
  const IntMat2& L = grid->monodromy();
  // L^{-1} = [[d, -b], [-c, a]]
  const Eigen::Matrix2d Li{{static_cast<double>(L[3]), static_cast<double>(-L[1])},
                           {static_cast<double>(-L[2]), static_cast<double>(L[0])}};
  const int reach = static_cast<int>(std::ceil(8.0 * width)) + 1;
  std::vector<Eigen::Matrix2d> powers;  // L^{-n} for n = -reach..reach
  for (int n = -reach; n <= reach; ++n) {
    Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d step = n >= 0 ? Li : Li.inverse();
    for (int s = 0; s < std::abs(n); ++s) P = step * P;
    powers.push_back(P.array().round().matrix());
  }
  ScalarField f = make_scalar_field(grid, [&](std::size_t p) {
    const Vec3 q = grid->coords(p);
    const Eigen::Vector2d x = q.tail<2>();
    double v = 0.0;
    for (int n = -reach; n <= reach; ++n) {
      const double s = q[0] + n;
      const double b = std::exp(-0.5 * s * s / (width * width));
      const Eigen::Vector2d y = powers[n + reach] * x;
      double psi = 0.0;
      for (const Mode& m : modes) {
        const double ph = two_pi * (m.kx * y[0] + m.ky * y[1]);
        psi += m.c * std::cos(ph) + m.d * std::sin(ph);
      }
      v += b * psi;
    }
    return v;
  });
  normalize_sup(f, amplitude);
  return f;
}

ScalarField orbit_constant_field(const GridPtr& grid, Rng& rng, double amplitude) {
  const int n = grid->n();
  std::vector<double> value(static_cast<std::size_t>(n) * n, std::nan(""));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!std::isnan(value[i * n + j])) continue;
      const double v = uniform(rng);
      int a = i, b = j;
      do {
        value[a * n + b] = v;
        std::tie(a, b) = grid->forward(a, b);
      } while (a != i || b != j);
    }
  ScalarField f = make_scalar_field(grid, [&](std::size_t p) {
    const GridPoint q = grid->point(p);
    return value[q.i * n + q.j];
  });
  normalize_sup(f, amplitude);
  return f;
}

TensorField random_symmetric_field(const GridPtr& grid, const std::array<TensorField, 3>& coframe,
                                   Rng& rng, double amplitude, int max_mode) {
  std::array<ScalarField, 6> c;
  for (auto& f : c) f = random_smooth_field(grid, rng, amplitude, max_mode);
  return make_matrix_field(grid, {Slot::down, Slot::down}, [&](std::size_t p) {
    Mat3 E;
    for (int a = 0; a < 3; ++a) E.row(a) = coframe[a].vector(p).transpose();
    Mat3 C;
    C << c[0].value(p), c[1].value(p), c[2].value(p), c[1].value(p), c[3].value(p), c[4].value(p),
        c[2].value(p), c[4].value(p), c[5].value(p);
    return Mat3(E.transpose() * C * E);
  });
}

std::array<TensorField, 3> coordinate_coframe(const GridPtr& grid) {
  std::array<TensorField, 3> out;
  for (int a = 0; a < 3; ++a)
    out[a] = make_vector_field(grid, Slot::down, [a](std::size_t) { return Vec3(Vec3::Unit(a)); });
  return out;
}

std::array<TensorField, 3> critical_coframe(const AlmostCosymplecticStructure& s,
                                            const CriticalFrame& frame) {
  return {s.alpha, frame.v_plus_flat, frame.v_minus_flat};
}

Deformation random_deformation(const GridPtr& grid, Rng& rng, double amplitude, int max_mode) {
  Deformation d;
  d.u = random_smooth_field(grid, rng, amplitude, max_mode);
  d.r = random_smooth_field(grid, rng, amplitude, max_mode);
  return d;
}

}  // namespace cosym
