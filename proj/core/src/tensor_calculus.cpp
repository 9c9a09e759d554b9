#include "cosym/tensor_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosym {

namespace {

// Levi-Civita symbol [ijk].
double levi(int i, int j, int k) {
  return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
}

bool all_down(const TensorField& t) {
  return std::all_of(t.slots().begin(), t.slots().end(), [](Slot s) { return s == Slot::down; });
}

}  // namespace

TensorField exterior_derivative(const TensorField& omega, double antisymmetry_tol) {
  const int k = omega.rank();
  if (k > 2 || !all_down(omega))
    throw Error(ErrorCode::invalid_argument, "exterior_derivative takes a 0-, 1- or 2-form");
  const double defect = antisymmetry_defect(omega);
  if (defect > antisymmetry_tol * std::max(1.0, sup_norm(omega)))
    throw Error(ErrorCode::not_antisymmetric,
                "input form is not antisymmetric (defect " + std::to_string(defect) + ")");

  const TensorField d = gradient(omega);
  const GridPtr& grid = omega.grid();
  if (k == 0) {
    TensorField out(grid, {Slot::down});
    out.data() = d.data();
    return out;
  }
  if (k == 1) {
    TensorField out(grid, {Slot::down, Slot::down});
    for (std::size_t p = 0; p < grid->size(); ++p) {
      const Mat3 m = d.matrix(p);  // m(i, j) = d_i w_j
      out.set_matrix(p, m - m.transpose());
    }
    return out;
  }
  TensorField out(grid, {Slot::down, Slot::down, Slot::down});
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const double* w = d.at(p);  // w[9 l + 3 i + j] = d_l w_ij
    double* o = out.at(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          o[9 * i + 3 * j + l] = w[9 * i + 3 * j + l] + w[9 * j + 3 * l + i] + w[9 * l + 3 * i + j];
  }
  return out;
}

TensorField lie_derivative(const TensorField& t, const TensorField& X) {
  if (X.slots() != std::vector<Slot>{Slot::up})
    throw Error(ErrorCode::invalid_argument, "lie_derivative: X must be a vector field");
  const TensorField dT = gradient(t);
  const TensorField dX = gradient(X);  // dX(k, a) = d_k X^a
  const int r = t.rank();
  const int nc = t.n_components();
  TensorField out(t.grid(), t.slots(), t.frame(), t.basis());
  std::vector<double> buf(nc);
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    const Vec3 x = X.vector(p);
    const Mat3 DX = dX.matrix(p);
    double* o = out.at(p);
    const double* dt = dT.at(p);
    for (int c = 0; c < nc; ++c) o[c] = x[0] * dt[c] + x[1] * dt[nc + c] + x[2] * dt[2 * nc + c];
    for (int s = 0; s < r; ++s) {
      std::copy_n(t.at(p), nc, buf.begin());
      // upper slot: -(d_b X^a) T^b ; lower slot: (d_a X^b) T_b
      const Mat3 M = t.slots()[s] == Slot::up ? Mat3(-DX.transpose()) : DX;
      apply_matrix_to_slot(buf.data(), r, s, M);
      for (int c = 0; c < nc; ++c) o[c] += buf[c];
    }
  }
  return out;
}

void require_positive_definite(const TensorField& g) {
  if (g.rank() != 2) throw Error(ErrorCode::invalid_argument, "metric must be rank 2");
  for (std::size_t p = 0; p < g.grid()->size(); ++p) {
    const Mat3 G = g.matrix(p);
    Eigen::LLT<Mat3> llt(G);
    if (llt.info() != Eigen::Success || !G.allFinite()) {
      const Vec3 ev = Eigen::SelfAdjointEigenSolver<Mat3>(0.5 * (G + G.transpose())).eigenvalues();
      const GridPoint q = g.grid()->point(p);
      std::ostringstream msg;
      msg << "metric not positive definite at (i, j, k) = (" << q.i << ", " << q.j << ", " << q.k
          << "), eigenvalues " << ev[0] << ", " << ev[1] << ", " << ev[2];
      throw Error(ErrorCode::not_positive_definite, msg.str());
    }
  }
}

Connection christoffel(const TensorField& g) {
  require_positive_definite(g);
  const TensorField dg = gradient(g);  // dg[9 l + 3 i + j] = d_l g_ij
  TensorField gamma(g.grid(), {Slot::up, Slot::down, Slot::down});
  for (std::size_t p = 0; p < g.grid()->size(); ++p) {
    const Mat3 Gi = g.matrix(p).inverse();
    const double* d = dg.at(p);
    double first[27];  // [i j l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          first[9 * i + 3 * j + l] =
              0.5 * (d[9 * i + 3 * j + l] + d[9 * j + 3 * i + l] - d[9 * l + 3 * i + j]);
    double* o = gamma.at(p);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double v = 0.0;
          for (int l = 0; l < 3; ++l) v += Gi(k, l) * first[9 * i + 3 * j + l];
          o[9 * k + 3 * i + j] = v;
          o[9 * k + 3 * j + i] = v;
        }
  }
  return Connection{std::move(gamma), std::make_shared<const TensorField>(g)};
}

TensorField covariant_gradient(const TensorField& t, const Connection& conn) {
  const TensorField dT = gradient(t);
  const int r = t.rank();
  const int nc = t.n_components();
  TensorField out(t.grid(), dT.slots());
  std::vector<double> buf(nc);
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    const double* G = conn.christoffel.at(p);
    std::copy_n(dT.at(p), 3 * nc, out.at(p));
    for (int k = 0; k < 3; ++k) {
      Mat3 Gk;  // Gk(a, c) = G^a_{kc}
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) Gk(a, c) = G[9 * a + 3 * k + c];
      double* o = out.at(p) + k * nc;
      for (int s = 0; s < r; ++s) {
        std::copy_n(t.at(p), nc, buf.begin());
        const Mat3 M = t.slots()[s] == Slot::up ? Gk : Mat3(-Gk.transpose());
        apply_matrix_to_slot(buf.data(), r, s, M);
        for (int c = 0; c < nc; ++c) o[c] += buf[c];
      }
    }
  }
  return out;
}

TensorField covariant_derivative(const TensorField& t, const Connection& conn, const TensorField& X) {
  if (X.slots() != std::vector<Slot>{Slot::up})
    throw Error(ErrorCode::invalid_argument, "covariant_derivative: X must be a vector field");
  const TensorField D = covariant_gradient(t, conn);
  const int nc = t.n_components();
  TensorField out(t.grid(), t.slots());
  for (std::size_t p = 0; p < t.grid()->size(); ++p) {
    const Vec3 x = X.vector(p);
    const double* d = D.at(p);
    double* o = out.at(p);
    for (int c = 0; c < nc; ++c) o[c] = x[0] * d[c] + x[1] * d[nc + c] + x[2] * d[2 * nc + c];
  }
  return out;
}

TensorField hodge_star(const TensorField& omega, const TensorField& g, int orientation) {
  if (!all_down(omega) || (omega.rank() != 1 && omega.rank() != 2))
    throw Error(ErrorCode::invalid_argument, "hodge_star takes a 1-form or a 2-form");
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorCode::invalid_argument, "orientation must be +1 or -1");
  const GridPtr& grid = omega.grid();
  if (omega.rank() == 1) {
    TensorField out(grid, {Slot::down, Slot::down});
    for (std::size_t p = 0; p < grid->size(); ++p) {
      const Mat3 G = g.matrix(p);
      const double vol = orientation * std::sqrt(G.determinant());
      const Vec3 up = G.inverse() * omega.vector(p);
      Mat3 m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double v = 0.0;
          for (int k = 0; k < 3; ++k) v += up[k] * levi(k, i, j);
          m(i, j) = vol * v;
        }
      out.set_matrix(p, m);
    }
    return out;
  }
  TensorField out(grid, {Slot::down});
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const Mat3 G = g.matrix(p);
    const Mat3 Gi = G.inverse();
    const double vol = orientation * std::sqrt(G.determinant());
    const Mat3 up = Gi * omega.matrix(p) * Gi;
    Vec3 v = Vec3::Zero();
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[k] += 0.5 * up(i, j) * levi(i, j, k);
    out.set_vector(p, vol * v);
  }
  return out;
}

TensorField nijenhuis(const TensorField& phi) {
  if (phi.slots() != std::vector<Slot>{Slot::up, Slot::down})
    throw Error(ErrorCode::invalid_argument, "nijenhuis takes a (1,1) field");
  const TensorField d = gradient(phi);  // d[9 l + 3 i + k] = d_l phi^i_k
  TensorField out(phi.grid(), {Slot::up, Slot::down, Slot::down});
  for (std::size_t p = 0; p < phi.grid()->size(); ++p) {
    const Mat3 F = phi.matrix(p);
    const double* D = d.at(p);
    double* o = out.at(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double v = 0.0;
          for (int l = 0; l < 3; ++l) {
            v += F(l, j) * D[9 * l + 3 * i + k] - F(l, k) * D[9 * l + 3 * i + j];
            v -= F(i, l) * (D[9 * j + 3 * l + k] - D[9 * k + 3 * l + j]);
          }
          o[9 * i + 3 * j + k] = v;
        }
  }
  return out;
}

TensorField lie_bracket(const TensorField& X, const TensorField& Y, Differencing mode) {
  const std::vector<Slot> vec{Slot::up};
  if (X.slots() != vec || Y.slots() != vec)
    throw Error(ErrorCode::invalid_argument, "lie_bracket takes two vector fields");
  const TensorField dX = gradient(X, mode);
  const TensorField dY = gradient(Y, mode);
  TensorField out(X.grid(), vec);
  for (std::size_t p = 0; p < X.grid()->size(); ++p) {
    // dY.matrix(p)(k, a) = d_k Y^a
    out.set_vector(p, dY.matrix(p).transpose() * X.vector(p) - dX.matrix(p).transpose() * Y.vector(p));
  }
  return out;
}

SymmetricEigen symmetric_eigen(const TensorField& A, const TensorField& g, double tol,
                               double collision_tol) {
  if (A.slots() != std::vector<Slot>{Slot::up, Slot::down})
    throw Error(ErrorCode::invalid_argument, "symmetric_eigen takes a (1,1) field");
  const GridPtr& grid = A.grid();
  const Grid& gr = *grid;
  SymmetricEigen out;
  for (int a = 0; a < 3; ++a) {
    out.values[a] = TensorField::scalar(grid);
    out.vectors[a] = TensorField(grid, {Slot::up});
  }
  out.min_gap = std::numeric_limits<double>::infinity();

  for (std::size_t p = 0; p < gr.size(); ++p) {
    const Mat3 G = g.matrix(p);
    const Mat3 GA = G * A.matrix(p);
    const double defect = (GA - GA.transpose()).cwiseAbs().maxCoeff();
    if (defect > tol * std::max(1.0, GA.cwiseAbs().maxCoeff())) {
      const GridPoint q = gr.point(p);
      std::ostringstream msg;
      msg << "operator not self-adjoint at (" << q.i << ", " << q.j << ", " << q.k
          << "), defect " << defect;
      throw Error(ErrorCode::not_self_adjoint, msg.str());
    }
    Eigen::LLT<Mat3> llt(G);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::not_positive_definite, "metric not positive definite in symmetric_eigen");
    const Mat3 L = llt.matrixL();
    const Mat3 Linv = L.inverse();
    Mat3 S = Linv * GA * Linv.transpose();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> es(S);
    const Vec3 ev = es.eigenvalues();  // ascending
    const Mat3 V = Linv.transpose() * es.eigenvectors();
    for (int a = 0; a < 3; ++a) {
      out.values[a].data()[p] = ev[2 - a];
      out.vectors[a].set_vector(p, V.col(2 - a));
    }
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    out.min_gap = std::min(out.min_gap, std::min(ev[1] - ev[0], ev[2] - ev[1]) / scale);
  }
  out.aligned = out.min_gap > collision_tol;
  if (!out.aligned) return out;

  // Deterministic sweep: each point aligns with its predecessor along j, then i, then k.
  for (std::size_t p = 0; p < gr.size(); ++p) {
    const GridPoint q = gr.point(p);
    std::size_t prev;
    if (q.j > 0) prev = gr.index(q.i, q.j - 1, q.k);
    else if (q.i > 0) prev = gr.index(q.i - 1, 0, q.k);
    else if (q.k > 0) prev = gr.index(0, 0, q.k - 1);
    else continue;
    for (int a = 0; a < 3; ++a) {
      const Vec3 v = out.vectors[a].vector(p);
      if (v.dot(out.vectors[a].vector(prev)) < 0.0) out.vectors[a].set_vector(p, -v);
    }
  }
  return out;
}

}  // namespace cosym
