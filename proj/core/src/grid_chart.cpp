#include "cosym/grid_chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosym {

namespace {

int mod(std::int64_t a, int n) {
  std::int64_t r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Dense (3^r x 3^r) matrix acting on a component block, built slot by slot.
Eigen::MatrixXd block_transform(std::span<const Slot> slots, const Mat3& up, const Mat3& down) {
  const int r = static_cast<int>(slots.size());
  const int nc = pow3(r);
  Eigen::MatrixXd T(nc, nc);
  std::vector<double> e(nc);
  for (int c = 0; c < nc; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    for (int s = 0; s < r; ++s)
      apply_matrix_to_slot(e.data(), r, s, slots[s] == Slot::up ? up : down);
    for (int a = 0; a < nc; ++a) T(a, c) = e[a];
  }
  return T;
}

constexpr double kCentered[4] = {1.0, -8.0, 8.0, -1.0};  // offsets -2, -1, +1, +2
constexpr int kOffsets[4] = {-2, -1, 1, 2};

}  // namespace

void GridSpec::validate() const {
  std::ostringstream err;
  if (n_torus < 1) err << "n_torus must be positive; ";
  if (n_fiber < 5) err << "n_fiber must be at least 5 for the five-point stencil; ";
  const std::int64_t det = monodromy[0] * monodromy[3] - monodromy[1] * monodromy[2];
  if (det != 1) err << "monodromy determinant is " << det << ", expected 1; ";
  if (fiber == FiberKind::interval) {
    if (!(fiber_end > fiber_start)) err << "fiber interval is empty; ";
    if (monodromy != IntMat2{1, 0, 0, 1}) err << "interval charts carry no monodromy; ";
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw Error(ErrorCode::invalid_argument, msg.substr(0, msg.size() - 2));
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  const std::size_t n = spec_.n_torus;
  size_ = n * n * static_cast<std::size_t>(spec_.n_fiber);
  h_torus_ = 1.0 / spec_.n_torus;
  h_fiber_ = periodic_fiber() ? 1.0 / spec_.n_fiber
                              : (spec_.fiber_end - spec_.fiber_start) / (spec_.n_fiber - 1);
  const auto& L = spec_.monodromy;
  inverse_ = {L[3], -L[1], -L[2], L[0]};
}

bool Grid::flat() const { return spec_.monodromy == IntMat2{1, 0, 0, 1}; }

Mat3 Grid::seam_jacobian() const {
  const auto& L = spec_.monodromy;
  Mat3 J = Mat3::Zero();
  J(0, 0) = 1.0;
  J(1, 1) = static_cast<double>(L[0]);
  J(1, 2) = static_cast<double>(L[1]);
  J(2, 1) = static_cast<double>(L[2]);
  J(2, 2) = static_cast<double>(L[3]);
  return J;
}

std::pair<int, int> Grid::forward(int i, int j) const {
  const auto& L = spec_.monodromy;
  const int n = spec_.n_torus;
  return {mod(L[0] * i + L[1] * j, n), mod(L[2] * i + L[3] * j, n)};
}

std::pair<int, int> Grid::backward(int i, int j) const {
  const auto& L = inverse_;
  const int n = spec_.n_torus;
  return {mod(L[0] * i + L[1] * j, n), mod(L[2] * i + L[3] * j, n)};
}

double Grid::layer_weight(int k) const {
  const double area = h_torus_ * h_torus_;
  if (periodic_fiber()) return area * h_fiber_;
  const bool end = (k == 0 || k == spec_.n_fiber - 1);
  return area * h_fiber_ * (end ? 0.5 : 1.0);
}

int pow3(int r) {
  int v = 1;
  for (int s = 0; s < r; ++s) v *= 3;
  return v;
}

TensorField::TensorField(GridPtr grid, std::vector<Slot> slots, Frame frame, const Mat3& basis)
    : grid_(std::move(grid)), slots_(std::move(slots)), ncomp_(pow3(rank())), frame_(frame),
      basis_(basis), data_(grid_->size() * ncomp_, 0.0) {}

TensorField TensorField::scalar(GridPtr grid, double value) {
  TensorField f(std::move(grid), {});
  std::fill(f.data_.begin(), f.data_.end(), value);
  return f;
}

void TensorField::set_vector(std::size_t p, const Vec3& v) {
  double* d = at(p);
  d[0] = v[0];
  d[1] = v[1];
  d[2] = v[2];
}

Mat3 TensorField::matrix(std::size_t p) const {
  const double* d = at(p);
  Mat3 m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m(a, b) = d[3 * a + b];
  return m;
}

void TensorField::set_matrix(std::size_t p, const Mat3& m) {
  double* d = at(p);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) d[3 * a + b] = m(a, b);
}

Mat3 TensorField::seam_jacobian() const {
  const Mat3 J = grid_->seam_jacobian();
  if (frame_ == Frame::coordinate) return J;
  return basis_.inverse() * J * basis_;
}

bool TensorField::same_shape(const TensorField& other) const {
  return grid_ == other.grid_ && slots_ == other.slots_ && frame_ == other.frame_;
}

void apply_matrix_to_slot(double* comps, int rank, int slot, const Mat3& M) {
  const int stride = pow3(rank - 1 - slot);
  const int outer = pow3(slot);
  for (int o = 0; o < outer; ++o) {
    for (int in = 0; in < stride; ++in) {
      double* base = comps + o * 3 * stride + in;
      const double v0 = base[0], v1 = base[stride], v2 = base[2 * stride];
      for (int a = 0; a < 3; ++a) base[a * stride] = M(a, 0) * v0 + M(a, 1) * v1 + M(a, 2) * v2;
    }
  }
}

std::vector<double> seam_transport(std::span<const double> components, std::span<const Slot> slots,
                                   const Mat3& J, Transport direction) {
  const int r = static_cast<int>(slots.size());
  std::vector<double> out(components.begin(), components.end());
  const Mat3 Jinv = J.inverse();
  for (int s = 0; s < r; ++s) {
    const bool up = slots[s] == Slot::up;
    const Mat3 M = direction == Transport::pushforward ? (up ? J : Mat3(Jinv.transpose()))
                                                       : (up ? Jinv : Mat3(J.transpose()));
    apply_matrix_to_slot(out.data(), r, s, M);
  }
  return out;
}

TensorField partial_derivative(const TensorField& f, int axis, Differencing mode) {
  if (axis < 0 || axis > 2) throw Error(ErrorCode::invalid_argument, "axis out of range");
  const Grid& g = *f.grid();
  TensorField out(f.grid(), f.slots(), f.frame(), f.basis());
  const int nc = f.n_components();
  const int N = g.n();
  const int M = g.m();
  const double inv12h = 1.0 / (12.0 * g.spacing(axis));
  const bool line = mode == Differencing::line_field;

  const bool seam = axis == axis_t && g.periodic_fiber();
  Eigen::MatrixXd pull, push;
  if (seam) {
    const Mat3 J = f.seam_jacobian();
    const Mat3 Jinv = J.inverse();
    pull = block_transform(f.slots(), Jinv, J.transpose());
    push = block_transform(f.slots(), J, Jinv.transpose());
  }
  Eigen::VectorXd buf(nc);

  for (int k = 0; k < M; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double* center = f.at(g.index(i, j, k));
        double* d = out.at(g.index(i, j, k));
        auto add = [&](const double* src, double w) {
          if (line) {
            double dot = 0.0;
            for (int c = 0; c < nc; ++c) dot += src[c] * center[c];
            if (dot < 0.0) w = -w;
          }
          for (int c = 0; c < nc; ++c) d[c] += w * src[c];
        };

        if (axis != axis_t) {
          for (int s = 0; s < 4; ++s) {
            const int o = kOffsets[s];
            const int ii = axis == axis_x ? ((i + o) % N + N) % N : i;
            const int jj = axis == axis_y ? ((j + o) % N + N) % N : j;
            add(f.at(g.index(ii, jj, k)), kCentered[s]);
          }
        } else if (!g.periodic_fiber()) {
          static constexpr double edge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
          static constexpr double edge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
          if (k < 2) {
            const double* w = k == 0 ? edge0 : edge1;
            for (int s = 0; s < 5; ++s) add(f.at(g.index(i, j, s)), w[s]);
          } else if (k > M - 3) {
            const double* w = k == M - 1 ? edge0 : edge1;
            for (int s = 0; s < 5; ++s) add(f.at(g.index(i, j, M - 1 - s)), -w[s]);
          } else {
            for (int s = 0; s < 4; ++s) add(f.at(g.index(i, j, k + kOffsets[s])), kCentered[s]);
          }
        } else {
          for (int s = 0; s < 4; ++s) {
            const int kk = k + kOffsets[s];
            if (kk >= 0 && kk < M) {
              add(f.at(g.index(i, j, kk)), kCentered[s]);
              continue;
            }
            // Past t = 1 read F^*T at (Lp, t - 1); before t = 0 push forward from (L^{-1}p, t + 1).
            const bool past_end = kk >= M;
            const auto [ii, jj] = past_end ? g.forward(i, j) : g.backward(i, j);
            const double* src = f.at(g.index(ii, jj, past_end ? kk - M : kk + M));
            buf = (past_end ? pull : push) * Eigen::Map<const Eigen::VectorXd>(src, nc);
            add(buf.data(), kCentered[s]);
          }
        }
        for (int c = 0; c < nc; ++c) d[c] *= inv12h;
      }
  return out;
}

TensorField gradient(const TensorField& f, Differencing mode) {
  std::vector<Slot> slots{Slot::down};
  slots.insert(slots.end(), f.slots().begin(), f.slots().end());
  TensorField out(f.grid(), slots, f.frame(), f.basis());
  const int nc = f.n_components();
  for (int axis = 0; axis < 3; ++axis) {
    const TensorField d = partial_derivative(f, axis, mode);
    for (std::size_t p = 0; p < f.grid()->size(); ++p)
      std::copy_n(d.at(p), nc, out.at(p) + axis * nc);
  }
  return out;
}

std::vector<double> quadrature_weights(const TensorField& volume_form) {
  if (volume_form.rank() != 3)
    throw Error(ErrorCode::invalid_argument, "volume form must be a 3-form");
  const Grid& g = *volume_form.grid();
  // component (t, x, y) of the 3-form, index 0*9 + 1*3 + 2
  constexpr int kTXY = 5;
  const double det_basis =
      volume_form.frame() == Frame::eigenframe ? volume_form.basis().inverse().determinant() : 1.0;
  double sign = 0.0;
  std::vector<double> w(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double rho = volume_form(p, kTXY) * det_basis;
    if (rho == 0.0 || !std::isfinite(rho))
      throw Error(ErrorCode::degenerate_volume, "volume density vanishes at grid point " +
                                                    std::to_string(p));
    const double s = rho > 0 ? 1.0 : -1.0;
    if (sign == 0.0) sign = s;
    if (s != sign)
      throw Error(ErrorCode::degenerate_volume,
                  "volume density changes sign at grid point " + std::to_string(p));
    w[p] = std::abs(rho) * g.layer_weight(g.point(p).k);
  }
  return w;
}

double integrate(const ScalarField& f, const TensorField& volume_form) {
  if (f.rank() != 0) throw Error(ErrorCode::invalid_argument, "integrand must be a scalar field");
  if (f.grid() != volume_form.grid())
    throw Error(ErrorCode::invalid_argument, "volume form must live on the same grid");
  const std::vector<double> w = quadrature_weights(volume_form);
  double sum = 0.0;
  for (std::size_t p = 0; p < w.size(); ++p) sum += f.value(p) * w[p];
  return sum;
}

}  // namespace cosym
