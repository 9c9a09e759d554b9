#pragma once

#include <array>
#include <memory>

#include "cosym/grid_chart.hpp"
#include "cosym/tensor_algebra.hpp"

namespace cosym {

// Levi-Civita connection of a metric field. christoffel holds G^k_{ij} with
// slots (up, down, down).
struct Connection {
  TensorField christoffel;
  std::shared_ptr<const TensorField> source_metric;
};

// d of a k-form (k = 0, 1, 2) stored as a fully antisymmetric covariant field.
TensorField exterior_derivative(const TensorField& omega, double antisymmetry_tol = 1e-10);

// L_X T = X^k d_k T - (dX) T on upper slots + T (dX) on lower slots.
TensorField lie_derivative(const TensorField& t, const TensorField& X);

// Throws NotPositiveDefinite naming the first bad point and its eigenvalues.
Connection christoffel(const TensorField& g);
void require_positive_definite(const TensorField& g);

// Full covariant derivative with the derivative index prepended.
TensorField covariant_gradient(const TensorField& t, const Connection& conn);
// nabla_X T.
TensorField covariant_derivative(const TensorField& t, const Connection& conn, const TensorField& X);

// Hodge star in three dimensions: 1-forms to 2-forms and 2-forms to 1-forms.
// orientation is +1 or -1 relative to dt ^ dx ^ dy.
TensorField hodge_star(const TensorField& omega, const TensorField& g, int orientation = 1);

// [phi, phi](X, Y) = phi^2[X,Y] + [phi X, phi Y] - phi[phi X, Y] - phi[X, phi Y],
// slots (up, down, down).
TensorField nijenhuis(const TensorField& phi);

// Lie bracket [X, Y] of vector fields.
TensorField lie_bracket(const TensorField& X, const TensorField& Y,
                        Differencing mode = Differencing::tensor);

struct SymmetricEigen {
  // Descending: values[0] >= values[1] >= values[2] at every point.
  std::array<ScalarField, 3> values;
  // g-orthonormal eigenvector fields.
  std::array<TensorField, 3> vectors;
  // False when two eigenvalues collide somewhere, in which case the vector
  // fields are still orthonormal but their signs are not propagated.
  bool aligned = true;
  double min_gap = 0.0;
};

// Eigen-decomposition of a (1,1) field self-adjoint with respect to g. The
// relative self-adjointness defect must stay below tol.
SymmetricEigen symmetric_eigen(const TensorField& A, const TensorField& g, double tol = 1e-6,
                               double collision_tol = 1e-8);

}  // namespace cosym
