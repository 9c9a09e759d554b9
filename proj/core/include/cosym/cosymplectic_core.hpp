#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cosym/tensor_calculus.hpp"

namespace cosym {

enum class Flavor { cosymplectic, contact, general_R_invariant };

const char* to_string(Flavor f);

struct AlmostCosymplecticStructure {
  TensorField alpha;  // 1-form
  TensorField beta;   // 2-form
  TensorField reeb;   // alpha(R) = 1, i_R beta = 0
  Flavor flavor = Flavor::cosymplectic;
  int orientation = 1;  // sign of alpha ^ beta against dt ^ dx ^ dy

  TensorField volume_form() const;
  const GridPtr& grid() const { return alpha.grid(); }
};

// Solves alpha(R) = 1, beta(R, .) = 0 pointwise: R is the kernel of beta
// scaled by the volume density. Throws DegenerateVolume where alpha ^ beta vanishes.
TensorField reeb_field(const TensorField& alpha, const TensorField& beta);

AlmostCosymplecticStructure make_structure(TensorField alpha, TensorField beta, Flavor flavor);

struct Tolerances {
  double algebraic = 1e-8;
  // Derivative identities are accepted below derivative_constant * h^4.
  double derivative_constant = 100.0;

  double derivative(const Grid& grid) const {
    const double h = grid.max_spacing();
    return derivative_constant * h * h * h * h;
  }
};

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool derivative = false;  // discretisation-level rather than exact algebra
  bool passed() const { return value <= tolerance; }
};

struct Certificate {
  std::vector<Residual> residuals;

  bool passed() const;
  std::vector<std::string> failures() const;
  const Residual* find(const std::string& name) const;
  double value(const std::string& name) const;
};

class CompatibleMetric {
public:
  CompatibleMetric(TensorField g, TensorField phi, Certificate certificate);

  const TensorField& g() const { return g_; }
  const TensorField& phi() const { return phi_; }
  const Certificate& certificate() const { return certificate_; }
  bool certified() const { return certificate_.passed(); }
  const GridPtr& grid() const { return g_.grid(); }

  // Built on first use and shared between copies.
  const Connection& connection() const;

private:
  struct Lazy {
    std::once_flag once;
    std::optional<Connection> conn;
  };
  TensorField g_;
  TensorField phi_;
  Certificate certificate_;
  std::shared_ptr<Lazy> lazy_;
};

// Residuals of the structure's own flavor conditions (closedness for
// cosymplectic, beta = d alpha for contact, R-invariance for the general case).
std::vector<Residual> structure_residuals(const AlmostCosymplecticStructure& s,
                                          const Tolerances& tol = {});

// phi is obtained from beta_ij = g_ik phi^k_j, i.e. phi = g^{-1} beta as
// matrices, so that beta(X, Y) = g(X, phi Y). Every compatibility identity is
// evaluated and reported; a failing identity does not throw.
CompatibleMetric certify_compatible(const AlmostCosymplecticStructure& s, const TensorField& g,
                                    const Tolerances& tol = {});

// Builds a compatible metric from an arbitrary metric k by polar
// decomposition of beta on ker alpha.
CompatibleMetric polar_compatible_metric(const AlmostCosymplecticStructure& s, const TensorField& k,
                                         const Tolerances& tol = {});

// Closed-form square root of a symmetric positive definite 2x2 matrix.
Eigen::Matrix2d sqrt_spd_2x2(const Eigen::Matrix2d& S);

// h = 1/2 L_R phi.
TensorField h_tensor(const TensorField& phi, const TensorField& reeb);

}  // namespace cosym
