#include "cosym/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace cosym {

const char* to_string(OptimizerStatus s) {
  switch (s) {
    case OptimizerStatus::converged: return "converged";
    case OptimizerStatus::max_steps: return "max_steps";
  }
  return "unknown";
}

namespace {

// D f = R^k d_k f and its transpose -sum_k d_k(R^k y). The centered periodic
// stencils are antisymmetric, including the twisted seam for scalars.
std::vector<double> apply_D(const std::vector<double>& f, const AlmostCosymplecticStructure& s) {
  ScalarField F = TensorField::scalar(s.grid());
  F.data() = f;
  return directional_derivative(F, s.reeb).data();
}

std::vector<double> apply_Dt(const std::vector<double>& y, const AlmostCosymplecticStructure& s) {
  const std::size_t n = y.size();
  std::vector<double> out(n, 0.0);
  for (int axis = 0; axis < 3; ++axis) {
    ScalarField F = TensorField::scalar(s.grid());
    bool any = false;
    for (std::size_t p = 0; p < n; ++p) {
      F.data()[p] = s.reeb(p, axis) * y[p];
      any = any || F.data()[p] != 0.0;
    }
    if (!any) continue;
    const ScalarField d = partial_derivative(F, axis);
    for (std::size_t p = 0; p < n; ++p) out[p] -= d.value(p);
  }
  return out;
}

double sup(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double gap_only(const Deformation& d, double mu, const AlmostCosymplecticStructure& s,
                const std::vector<double>& w) {
  const std::vector<double> Du = apply_D(d.u.data(), s);
  const std::vector<double> Dr = apply_D(d.r.data(), s);
  double g = 0.0;
  for (std::size_t p = 0; p < w.size(); ++p) {
    const double r = d.r.value(p);
    const double a = 2 * mu * r + r * Du[p] - Dr[p];
    g += w[p] * (2 * a * a + 2 * Du[p] * Du[p]);
  }
  return g;
}

double divergence(const Deformation& d, double mu, const AlmostCosymplecticStructure& s,
                  const std::vector<double>& w) {
  const std::vector<double> Du = apply_D(d.u.data(), s);
  double sum = 0.0;
  for (std::size_t p = 0; p < w.size(); ++p) sum += w[p] * 8 * mu * Du[p];
  return sum;
}

}  // namespace

GapGradient gap_gradient(const Deformation& d, double mu, const AlmostCosymplecticStructure& s,
                         const std::vector<double>& w) {
  const std::size_t n = w.size();
  const std::vector<double> Du = apply_D(d.u.data(), s);
  const std::vector<double> Dr = apply_D(d.r.data(), s);
  GapGradient out;
  out.d_r.resize(n);
  std::vector<double> ya(n), yu(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double r = d.r.value(p);
    const double a = 2 * mu * r + r * Du[p] - Dr[p];
    out.gap += w[p] * (2 * a * a + 2 * Du[p] * Du[p]);
    ya[p] = 4 * w[p] * a;
    yu[p] = 4 * w[p] * (a * r + Du[p]);
    out.d_r[p] = ya[p] * (2 * mu + Du[p]);
  }
  const std::vector<double> Dt_a = apply_Dt(ya, s);
  for (std::size_t p = 0; p < n; ++p) out.d_r[p] -= Dt_a[p];
  out.d_u = apply_Dt(yu, s);
  return out;
}

OptimizerResult minimize_energy(const Deformation& initial, double mu,
                                const AlmostCosymplecticStructure& s,
                                const OptimizerOptions& options) {
  if (!s.grid()->periodic_fiber())
    throw Error(ErrorCode::invalid_argument, "the optimizer needs a closed chart");
  if (options.steps < 0 || options.snapshot_stride < 1)
    throw Error(ErrorCode::invalid_argument, "steps must be >= 0 and the stride >= 1");
  const std::vector<double> w = quadrature_weights(s.volume_form());
  // Work in the L2 inner product of the quadrature so that step sizes do not
  // scale with the number of grid points.
  const std::size_t n = w.size();

  OptimizerResult res;
  Deformation x = initial;
  GapGradient gg = gap_gradient(x, mu, s, w);
  res.gap_history.push_back(gg.gap);
  res.trajectory.push_back(x);
  res.trajectory_steps.push_back(0);
  res.divergence_residual = std::abs(divergence(x, mu, s, w));

  auto precondition = [&](const GapGradient& g) {
    std::vector<double> v(2 * n);
    for (std::size_t p = 0; p < n; ++p) {
      v[p] = g.d_u[p] / w[p];
      v[n + p] = g.d_r[p] / w[p];
    }
    return v;
  };
  auto w_dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) sum += w[p] * (a[p] * b[p] + a[n + p] * b[n + p]);
    return sum;
  };

  std::vector<double> grad = precondition(gg);
  double step = options.initial_step;
  res.status = OptimizerStatus::max_steps;
  if (gg.gap <= options.tolerance) res.status = OptimizerStatus::converged;

  for (int it = 0; it < options.steps && res.status != OptimizerStatus::converged; ++it) {
    const double slope = w_dot(grad, grad);
    if (!(slope > 0.0)) {
      res.status = OptimizerStatus::converged;
      break;
    }
    Deformation trial = x;
    bool accepted = false;
    double new_gap = gg.gap;
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      for (std::size_t p = 0; p < n; ++p) {
        trial.u.data()[p] = x.u.data()[p] - step * grad[p];
        trial.r.data()[p] = x.r.data()[p] - step * grad[n + p];
      }
      new_gap = gap_only(trial, mu, s, w);
      if (std::isfinite(new_gap) && new_gap <= gg.gap - options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.status = OptimizerStatus::converged;
      break;
    }
    const GapGradient ng = gap_gradient(trial, mu, s, w);
    const std::vector<double> ngrad = precondition(ng);
    // Barzilai-Borwein step from the accepted move
    std::vector<double> ds(2 * n), dg(2 * n);
    for (std::size_t p = 0; p < n; ++p) {
      ds[p] = trial.u.data()[p] - x.u.data()[p];
      ds[n + p] = trial.r.data()[p] - x.r.data()[p];
    }
    for (std::size_t c = 0; c < 2 * n; ++c) dg[c] = ngrad[c] - grad[c];
    const double sy = w_dot(ds, dg);
    step = sy > 0.0 ? w_dot(ds, ds) / sy : 2.0 * step;

    x = std::move(trial);
    gg = ng;
    grad = ngrad;
    res.iterations = it + 1;
    res.gap_history.push_back(gg.gap);
    if (res.iterations % options.snapshot_stride == 0) {
      res.trajectory.push_back(x);
      res.trajectory_steps.push_back(res.iterations);
    }
    if (gg.gap <= options.tolerance) res.status = OptimizerStatus::converged;
  }

  if (res.trajectory_steps.back() != res.iterations) {
    res.trajectory.push_back(x);
    res.trajectory_steps.push_back(res.iterations);
  }
  res.divergence_residual = std::max(res.divergence_residual, std::abs(divergence(x, mu, s, w)));
  res.sup_r = sup(x.r.data());
  res.sup_Ru = sup(apply_D(x.u.data(), s));
  res.final = std::move(x);
  return res;
}

}  // namespace cosym
