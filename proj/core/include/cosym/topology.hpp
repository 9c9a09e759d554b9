#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cosym/grid_chart.hpp"

namespace cosym {

// Dense integer matrix with exact arithmetic.
class IntMatrix {
public:
  IntMatrix(int rows, int cols, std::vector<std::int64_t> entries);
  static IntMatrix from(const IntMat2& m) { return IntMatrix(2, 2, {m[0], m[1], m[2], m[3]}); }
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }

  IntMatrix operator-(const IntMatrix& o) const;
  // Fraction-free Gaussian elimination in arbitrary precision.
  int rank() const;
  // Invariant factors of the Smith normal form (nonzero ones only).
  std::vector<std::int64_t> invariant_factors() const;

private:
  int rows_, cols_;
  std::vector<std::int64_t> entries_;
};

struct BettiNumbers {
  int b0 = 1, b1 = 0, b2 = 0, b3 = 1;
  // Torsion of H_1 = Z + coker(L - 1); entries > 1 of the Smith form of 1 - L.
  std::vector<std::int64_t> h1_torsion;

  std::array<int, 4> as_array() const { return {b0, b1, b2, b3}; }
};

// Mapping torus of L on T^2: b1 = 1 + dim ker(1 - L), b2 = b1 by duality.
// Throws NotSymplectic unless det L = 1.
BettiNumbers betti_numbers_mapping_torus(const IntMat2& L);

enum class Obstruction {
  hyperbolic_candidate,      // |trace L| > 2, positive-torsion critical metrics exist
  b1_even_excludes_cokahler, // b1 even, so no co-Kahler structure either
  inconclusive,
};
const char* to_string(Obstruction o);

struct ObstructionReport {
  Obstruction verdict = Obstruction::inconclusive;
  BettiNumbers betti;
  std::int64_t trace = 0;
  std::string explanation;
};
ObstructionReport critical_metric_obstruction(const IntMat2& L);

}  // namespace cosym
