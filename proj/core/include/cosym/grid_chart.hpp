#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cosym/errors.hpp"

namespace cosym {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
// 2x2 integer matrix, row-major.
using IntMat2 = std::array<std::int64_t, 4>;

// Coordinate axes. The fiber axis t carries the monodromy; x and y are the
// torus directions.
enum Axis : int { axis_t = 0, axis_x = 1, axis_y = 2 };

enum class FiberKind {
  twisted_periodic,  // t in [0,1) with (p, t+1) ~ (Lp, t)
  interval,          // t in [fiber_start, fiber_end], endpoints included
};

struct GridSpec {
  int n_torus = 32;
  int n_fiber = 32;
  IntMat2 monodromy{1, 0, 0, 1};
  FiberKind fiber = FiberKind::twisted_periodic;
  double fiber_start = 0.0;
  double fiber_end = 1.0;

  void validate() const;

  static GridSpec flat(int n) { return GridSpec{n, n}; }
  static GridSpec mapping_torus(int n_torus, int n_fiber, const IntMat2& L) {
    return GridSpec{n_torus, n_fiber, L};
  }
  static GridSpec box(int n_torus, int n_fiber, double t0, double t1) {
    return GridSpec{n_torus, n_fiber, {1, 0, 0, 1}, FiberKind::interval, t0, t1};
  }
};

struct GridPoint {
  int i = 0;  // x index
  int j = 0;  // y index
  int k = 0;  // t index
};

class Grid {
public:
  explicit Grid(const GridSpec& spec);

  static std::shared_ptr<const Grid> make(const GridSpec& spec) {
    return std::make_shared<const Grid>(spec);
  }

  const GridSpec& spec() const { return spec_; }
  int n() const { return spec_.n_torus; }
  int m() const { return spec_.n_fiber; }
  std::size_t size() const { return size_; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * spec_.n_torus + i) * spec_.n_torus + j;
  }
  std::size_t index(const GridPoint& q) const { return index(q.i, q.j, q.k); }
  GridPoint point(std::size_t p) const {
    const std::size_t n = spec_.n_torus;
    return {static_cast<int>((p / n) % n), static_cast<int>(p % n), static_cast<int>(p / (n * n))};
  }

  double t(int k) const { return spec_.fiber_start + k * h_fiber_; }
  double x(int i) const { return i * h_torus_; }
  double y(int j) const { return j * h_torus_; }
  Vec3 coords(std::size_t p) const {
    const GridPoint q = point(p);
    return {t(q.k), x(q.i), y(q.j)};
  }

  double spacing(int axis) const { return axis == axis_t ? h_fiber_ : h_torus_; }
  double max_spacing() const { return std::max(h_fiber_, h_torus_); }

  bool periodic_fiber() const { return spec_.fiber == FiberKind::twisted_periodic; }
  bool flat() const;
  const IntMat2& monodromy() const { return spec_.monodromy; }

  // Jacobian of the gluing (p, t) -> (Lp, t - 1) in (t, x, y) components.
  Mat3 seam_jacobian() const;

  // Torus index images under L and L^{-1}, reduced mod N.
  std::pair<int, int> forward(int i, int j) const;
  std::pair<int, int> backward(int i, int j) const;

  // Quadrature weight of fiber layer k (coordinate measure, excludes density).
  double layer_weight(int k) const;

private:
  GridSpec spec_;
  std::size_t size_;
  double h_torus_;
  double h_fiber_;
  IntMat2 inverse_;
};

using GridPtr = std::shared_ptr<const Grid>;

enum class Slot : std::uint8_t { up, down };
enum class Frame { coordinate, eigenframe };

// Components of a tensor field sampled at every grid point. Storage is
// point-major; within a point the multi-index (a_0, ..., a_{r-1}) maps to
// sum a_s 3^{r-1-s}. Eigenframe fields carry the constant change-of-basis
// matrix whose columns are the frame vectors in coordinate components.
class TensorField {
public:
  TensorField() = default;
  TensorField(GridPtr grid, std::vector<Slot> slots, Frame frame = Frame::coordinate,
              const Mat3& basis = Mat3::Identity());

  static TensorField scalar(GridPtr grid, double value = 0.0);

  const GridPtr& grid() const { return grid_; }
  const std::vector<Slot>& slots() const { return slots_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  int n_components() const { return ncomp_; }
  Frame frame() const { return frame_; }
  const Mat3& basis() const { return basis_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double* at(std::size_t p) { return data_.data() + p * ncomp_; }
  const double* at(std::size_t p) const { return data_.data() + p * ncomp_; }
  double& operator()(std::size_t p, int c) { return data_[p * ncomp_ + c]; }
  double operator()(std::size_t p, int c) const { return data_[p * ncomp_ + c]; }

  // Rank-specific views.
  double value(std::size_t p) const { return data_[p]; }
  Vec3 vector(std::size_t p) const { return Vec3(at(p)[0], at(p)[1], at(p)[2]); }
  void set_vector(std::size_t p, const Vec3& v);
  // M(a, b) = T_{ab} for any rank-2 slot pattern.
  Mat3 matrix(std::size_t p) const;
  void set_matrix(std::size_t p, const Mat3& m);

  // Seam Jacobian expressed in this field's frame.
  Mat3 seam_jacobian() const;

  bool same_shape(const TensorField& other) const;

private:
  GridPtr grid_;
  std::vector<Slot> slots_;
  int ncomp_ = 1;
  Frame frame_ = Frame::coordinate;
  Mat3 basis_ = Mat3::Identity();
  std::vector<double> data_;
};

using ScalarField = TensorField;

int pow3(int r);

// In-place multiply slot s of a component block by M: T'[..a..] = M(a,b) T[..b..].
void apply_matrix_to_slot(double* comps, int rank, int slot, const Mat3& M);

enum class Transport {
  pushforward,  // vectors by J, covectors by J^{-T}
  pullback,     // vectors by J^{-1}, covectors by J^T
};

// Transforms the components of one tensor across the gluing map with
// Jacobian J. Pullback is what a stencil needs when reading past t = 1:
// T(p, t+1) = F^* T(Lp, t).
std::vector<double> seam_transport(std::span<const double> components, std::span<const Slot> slots,
                                   const Mat3& J, Transport direction);

enum class Differencing {
  tensor,
  // For fields defined only up to sign (line fields): every stencil neighbour
  // is sign-aligned with the centre value before differencing.
  line_field,
};

// Fourth-order finite difference of every component along one axis. Torus
// axes wrap periodically; the t axis wraps through the monodromy, or uses
// one-sided five-point stencils at the ends of an interval chart.
TensorField partial_derivative(const TensorField& f, int axis,
                               Differencing mode = Differencing::tensor);

// d_i T with the derivative index prepended as a covariant slot.
TensorField gradient(const TensorField& f, Differencing mode = Differencing::tensor);

// Integral of f against a top-degree form. The form's sign fixes the
// orientation, so it must not vanish or change sign.
double integrate(const ScalarField& f, const TensorField& volume_form);
// Per-point weights of the same rule: integrate(f) = sum f(p) w(p).
std::vector<double> quadrature_weights(const TensorField& volume_form);

}  // namespace cosym
