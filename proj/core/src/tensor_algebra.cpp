#include "cosym/tensor_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace cosym {

namespace {

void require_same_grid(const TensorField& a, const TensorField& b, const char* what) {
  if (a.grid() != b.grid())
    throw Error(ErrorCode::invalid_argument, std::string(what) + ": fields live on different grids");
}

void require_rank(const TensorField& t, int r, const char* what) {
  if (t.rank() != r)
    throw Error(ErrorCode::invalid_argument,
                std::string(what) + ": expected rank " + std::to_string(r) + ", got " +
                    std::to_string(t.rank()));
}

}  // namespace

TensorField make_field(const GridPtr& grid, std::vector<Slot> slots,
                       const std::function<void(std::size_t, double*)>& fill) {
  TensorField f(grid, std::move(slots));
  for (std::size_t p = 0; p < grid->size(); ++p) fill(p, f.at(p));
  return f;
}

TensorField make_matrix_field(const GridPtr& grid, std::vector<Slot> slots,
                              const std::function<Mat3(std::size_t)>& fn) {
  TensorField f(grid, std::move(slots));
  for (std::size_t p = 0; p < grid->size(); ++p) f.set_matrix(p, fn(p));
  return f;
}

TensorField make_vector_field(const GridPtr& grid, Slot slot,
                              const std::function<Vec3(std::size_t)>& fn) {
  TensorField f(grid, {slot});
  for (std::size_t p = 0; p < grid->size(); ++p) f.set_vector(p, fn(p));
  return f;
}

ScalarField make_scalar_field(const GridPtr& grid, const std::function<double(std::size_t)>& fn) {
  ScalarField f = TensorField::scalar(grid);
  for (std::size_t p = 0; p < grid->size(); ++p) f.data()[p] = fn(p);
  return f;
}

TensorField operator+(const TensorField& a, const TensorField& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::invalid_argument, "sum of mismatched fields");
  TensorField out = a;
  for (std::size_t n = 0; n < out.data().size(); ++n) out.data()[n] += b.data()[n];
  return out;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::invalid_argument, "difference of mismatched fields");
  TensorField out = a;
  for (std::size_t n = 0; n < out.data().size(); ++n) out.data()[n] -= b.data()[n];
  return out;
}

TensorField operator*(double c, const TensorField& a) {
  TensorField out = a;
  for (double& v : out.data()) v *= c;
  return out;
}

TensorField operator*(const ScalarField& f, const TensorField& a) {
  require_rank(f, 0, "scalar product");
  require_same_grid(f, a, "scalar product");
  TensorField out = a;
  const int nc = a.n_components();
  for (std::size_t p = 0; p < a.grid()->size(); ++p)
    for (int c = 0; c < nc; ++c) out(p, c) *= f.value(p);
  return out;
}

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  require_same_grid(a, b, "tensor product");
  std::vector<Slot> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  TensorField out(a.grid(), slots);
  const int na = a.n_components(), nb = b.n_components();
  for (std::size_t p = 0; p < a.grid()->size(); ++p) {
    const double* x = a.at(p);
    const double* y = b.at(p);
    double* d = out.at(p);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) d[i * nb + j] = x[i] * y[j];
  }
  return out;
}

TensorField contract(const TensorField& t, int sa, int sb) {
  const int r = t.rank();
  if (sa == sb || sa < 0 || sb < 0 || sa >= r || sb >= r)
    throw Error(ErrorCode::invalid_argument, "contract: bad slot pair");
  if (t.slots()[sa] == t.slots()[sb])
    throw Error(ErrorCode::invalid_argument, "contract: slots must have opposite variance");
  std::vector<Slot> slots;
  for (int s = 0; s < r; ++s)
    if (s != sa && s != sb) slots.push_back(t.slots()[s]);
  TensorField out(t.grid(), slots);
  const int nc = t.n_components();
  std::vector<int> idx(r);
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    const double* src = t.at(p);
    double* d = out.at(p);
    for (int c = 0; c < nc; ++c) {
      int rem = c;
      for (int s = r - 1; s >= 0; --s) {
        idx[s] = rem % 3;
        rem /= 3;
      }
      if (idx[sa] != idx[sb]) continue;
      int oc = 0;
      for (int s = 0; s < r; ++s)
        if (s != sa && s != sb) oc = oc * 3 + idx[s];
      d[oc] += src[c];
    }
  }
  return out;
}

TensorField metric_inverse(const TensorField& g) {
  require_rank(g, 2, "metric_inverse");
  TensorField out(g.grid(), {Slot::up, Slot::up});
  for (std::size_t p = 0; p < g.grid()->size(); ++p) {
    const Mat3 G = g.matrix(p);
    const Mat3 Gi = G.inverse();
    out.set_matrix(p, 0.5 * (Gi + Gi.transpose()));
  }
  return out;
}

namespace {

TensorField change_slot(const TensorField& t, int slot, const TensorField& g, Slot from, Slot to) {
  if (slot < 0 || slot >= t.rank() || t.slots()[slot] != from)
    throw Error(ErrorCode::invalid_argument, "index raise/lower: slot has the wrong variance");
  require_same_grid(t, g, "index raise/lower");
  std::vector<Slot> slots = t.slots();
  slots[slot] = to;
  TensorField out(t.grid(), slots);
  std::copy(t.data().begin(), t.data().end(), out.data().begin());
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    Mat3 G = g.matrix(p);
    if (to == Slot::up) G = G.inverse().eval();
    apply_matrix_to_slot(out.at(p), t.rank(), slot, G);
  }
  return out;
}

}  // namespace

TensorField lower(const TensorField& t, int slot, const TensorField& g) {
  return change_slot(t, slot, g, Slot::up, Slot::down);
}

TensorField raise(const TensorField& t, int slot, const TensorField& g) {
  return change_slot(t, slot, g, Slot::down, Slot::up);
}

ScalarField inner(const TensorField& a, const TensorField& b, const TensorField& g) {
  if (a.slots() != b.slots()) throw Error(ErrorCode::invalid_argument, "inner: slot mismatch");
  require_same_grid(a, g, "inner");
  require_same_grid(b, g, "inner");
  ScalarField out = TensorField::scalar(a.grid());
  const int r = a.rank();
  const int nc = a.n_components();
  std::vector<double> buf(nc);
  for (std::size_t p = 0; p < a.grid()->size(); ++p) {
    const Mat3 G = g.matrix(p);
    const Mat3 Gi = G.inverse();
    std::copy_n(b.at(p), nc, buf.begin());
    for (int s = 0; s < r; ++s)
      apply_matrix_to_slot(buf.data(), r, s, a.slots()[s] == Slot::down ? Gi : G);
    const double* x = a.at(p);
    double acc = 0.0;
    for (int c = 0; c < nc; ++c) acc += x[c] * buf[c];
    out.data()[p] = acc;
  }
  return out;
}

ScalarField norm_squared(const TensorField& a, const TensorField& g) { return inner(a, a, g); }

ScalarField directional_derivative(const ScalarField& f, const TensorField& X) {
  require_rank(f, 0, "directional_derivative");
  if (X.slots() != std::vector<Slot>{Slot::up})
    throw Error(ErrorCode::invalid_argument, "directional_derivative: X must be a vector field");
  ScalarField out = TensorField::scalar(f.grid());
  for (int axis = 0; axis < 3; ++axis) {
    const ScalarField d = partial_derivative(f, axis);
    for (std::size_t p = 0; p < f.grid()->size(); ++p) out.data()[p] += X(p, axis) * d.value(p);
  }
  return out;
}

TensorField transpose(const TensorField& t) {
  require_rank(t, 2, "transpose");
  TensorField out(t.grid(), {t.slots()[1], t.slots()[0]});
  for (std::size_t p = 0; p < t.grid()->size(); ++p) out.set_matrix(p, t.matrix(p).transpose());
  return out;
}

TensorField symmetric_part(const TensorField& t) {
  require_rank(t, 2, "symmetric_part");
  TensorField out(t.grid(), t.slots());
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    const Mat3 m = t.matrix(p);
    out.set_matrix(p, 0.5 * (m + m.transpose()));
  }
  return out;
}

TensorField compose(const TensorField& a, const TensorField& b) {
  require_rank(a, 2, "compose");
  require_rank(b, 2, "compose");
  if (a.slots()[1] == b.slots()[0])
    throw Error(ErrorCode::invalid_argument, "compose: inner slots must be dual");
  TensorField out(a.grid(), {a.slots()[0], b.slots()[1]});
  for (std::size_t p = 0; p < a.grid()->size(); ++p) out.set_matrix(p, a.matrix(p) * b.matrix(p));
  return out;
}

TensorField pull_by(const TensorField& s, const TensorField& a, const TensorField& b) {
  require_rank(s, 2, "pull_by");
  TensorField out(s.grid(), s.slots());
  for (std::size_t p = 0; p < s.grid()->size(); ++p)
    out.set_matrix(p, a.matrix(p).transpose() * s.matrix(p) * b.matrix(p));
  return out;
}

TensorField apply(const TensorField& a, const TensorField& v) {
  require_rank(a, 2, "apply");
  require_rank(v, 1, "apply");
  TensorField out(a.grid(), {a.slots()[0]});
  for (std::size_t p = 0; p < a.grid()->size(); ++p) out.set_vector(p, a.matrix(p) * v.vector(p));
  return out;
}

ScalarField evaluate(const TensorField& omega, const TensorField& v) {
  require_rank(omega, 1, "evaluate");
  require_rank(v, 1, "evaluate");
  ScalarField out = TensorField::scalar(omega.grid());
  for (std::size_t p = 0; p < omega.grid()->size(); ++p)
    out.data()[p] = omega.vector(p).dot(v.vector(p));
  return out;
}

TensorField wedge_1_2(const TensorField& alpha, const TensorField& beta) {
  require_rank(alpha, 1, "wedge");
  require_rank(beta, 2, "wedge");
  TensorField out(alpha.grid(), {Slot::down, Slot::down, Slot::down});
  for (std::size_t p = 0; p < alpha.grid()->size(); ++p) {
    const Vec3 a = alpha.vector(p);
    const Mat3 b = beta.matrix(p);
    double* d = out.at(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          d[9 * i + 3 * j + k] = a[i] * b(j, k) + a[j] * b(k, i) + a[k] * b(i, j);
  }
  return out;
}

double sup_norm(const TensorField& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double metric_sup_norm(const TensorField& t, const TensorField& g) {
  const ScalarField n2 = norm_squared(t, g);
  double m = 0.0;
  for (double v : n2.data()) m = std::max(m, std::sqrt(std::max(v, 0.0)));
  return m;
}

double mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.data()) s += v;
  return s / static_cast<double>(f.data().size());
}

double stddev(const ScalarField& f) {
  const double mu = mean(f);
  double s = 0.0;
  for (double v : f.data()) s += (v - mu) * (v - mu);
  return std::sqrt(s / static_cast<double>(f.data().size()));
}

double antisymmetry_defect(const TensorField& t) {
  const int r = t.rank();
  if (r < 2) return 0.0;
  if (r > 3) throw Error(ErrorCode::invalid_argument, "antisymmetry check supports ranks 2 and 3");
  double m = 0.0;
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    const double* d = t.at(p);
    if (r == 2) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m = std::max(m, std::abs(d[3 * a + b] + d[3 * b + a]));
    } else {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            const double v = d[9 * a + 3 * b + c];
            m = std::max(m, std::abs(v + d[9 * b + 3 * a + c]));
            m = std::max(m, std::abs(v + d[9 * a + 3 * c + b]));
            m = std::max(m, std::abs(v + d[9 * c + 3 * b + a]));
          }
    }
  }
  return m;
}

}  // namespace cosym
