#pragma once

#include <functional>

#include "cosym/grid_chart.hpp"

namespace cosym {

// Builds a field by evaluating fill(p, out) at every grid point p.
TensorField make_field(const GridPtr& grid, std::vector<Slot> slots,
                       const std::function<void(std::size_t, double*)>& fill);

// Rank-2 field from a pointwise matrix function.
TensorField make_matrix_field(const GridPtr& grid, std::vector<Slot> slots,
                              const std::function<Mat3(std::size_t)>& fn);
TensorField make_vector_field(const GridPtr& grid, Slot slot,
                              const std::function<Vec3(std::size_t)>& fn);
ScalarField make_scalar_field(const GridPtr& grid, const std::function<double(std::size_t)>& fn);

TensorField operator+(const TensorField& a, const TensorField& b);
TensorField operator-(const TensorField& a, const TensorField& b);
TensorField operator*(double c, const TensorField& a);
// Pointwise product with a scalar field.
TensorField operator*(const ScalarField& f, const TensorField& a);

TensorField tensor_product(const TensorField& a, const TensorField& b);
// Contracts slot sa against slot sb (one must be up, the other down).
TensorField contract(const TensorField& t, int sa, int sb);

// Index gymnastics with a (0,2) metric g.
TensorField lower(const TensorField& t, int slot, const TensorField& g);
TensorField raise(const TensorField& t, int slot, const TensorField& g);
TensorField metric_inverse(const TensorField& g);

// Full contraction <a, b>_g: covariant slots through g^{-1}, contravariant through g.
ScalarField inner(const TensorField& a, const TensorField& b, const TensorField& g);
ScalarField norm_squared(const TensorField& a, const TensorField& g);

// X^k d_k f for a scalar f.
ScalarField directional_derivative(const ScalarField& f, const TensorField& X);

// Rank-2 helpers.
TensorField transpose(const TensorField& t);
TensorField symmetric_part(const TensorField& t);
// (1,1) field composition (A B)^i_j = A^i_k B^k_j.
TensorField compose(const TensorField& a, const TensorField& b);
// (0,2) field evaluated on (1,1) fields: S(A., B.).
TensorField pull_by(const TensorField& s, const TensorField& a, const TensorField& b);
// (1,1) field applied to a vector field.
TensorField apply(const TensorField& a, const TensorField& v);
// 1-form evaluated on a vector field.
ScalarField evaluate(const TensorField& omega, const TensorField& v);
// alpha wedge beta for a 1-form and a 2-form, as a full antisymmetric rank-3 field.
TensorField wedge_1_2(const TensorField& alpha, const TensorField& beta);

// Norms.
double sup_norm(const TensorField& t);
// max over points of sqrt(<t, t>_g).
double metric_sup_norm(const TensorField& t, const TensorField& g);
double mean(const ScalarField& f);
double stddev(const ScalarField& f);

// Largest entry of T + T^T (every transposition for rank 3).
double antisymmetry_defect(const TensorField& t);

}  // namespace cosym
