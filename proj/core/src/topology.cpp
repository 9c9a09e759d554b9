#include "cosym/topology.hpp"

#include <numeric>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace cosym {

using boost::multiprecision::cpp_int;

IntMatrix::IntMatrix(int rows, int cols, std::vector<std::int64_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0 || entries_.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorCode::invalid_argument, "entry count does not match the shape");
}

IntMatrix IntMatrix::identity(int n) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1;
  return IntMatrix(n, n, std::move(e));
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::invalid_argument, "shape mismatch");
  std::vector<std::int64_t> e(entries_.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = entries_[k] - o.entries_[k];
  return IntMatrix(rows_, cols_, std::move(e));
}

int IntMatrix::rank() const {
  std::vector<std::vector<cpp_int>> a(rows_, std::vector<cpp_int>(cols_));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) a[r][c] = (*this)(r, c);
  // Bareiss: every division below is exact
  cpp_int prev = 1;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (int r = rank + 1; r < rows_; ++r) {
      for (int k = c + 1; k < cols_; ++k) a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::vector<std::int64_t> IntMatrix::invariant_factors() const {
  std::vector<std::vector<cpp_int>> a(rows_, std::vector<cpp_int>(cols_));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) a[r][c] = (*this)(r, c);
  std::vector<std::int64_t> out;
  const int n = std::min(rows_, cols_);
  for (int t = 0; t < n; ++t) {
    // move the smallest nonzero entry of the remaining block to (t, t) and
    // clear its row and column until it divides everything left
    while (true) {
      int pr = -1, pc = -1;
      for (int r = t; r < rows_; ++r)
        for (int c = t; c < cols_; ++c)
          if (a[r][c] != 0 && (pr < 0 || abs(a[r][c]) < abs(a[pr][pc]))) {
            pr = r;
            pc = c;
          }
      if (pr < 0) return out;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (int r = t + 1; r < rows_; ++r) {
        const cpp_int q = a[r][t] / a[t][t];
        for (int c = t; c < cols_; ++c) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) clean = false;
      }
      for (int c = t + 1; c < cols_; ++c) {
        const cpp_int q = a[t][c] / a[t][t];
        for (int r = t; r < rows_; ++r) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) clean = false;
      }
      if (!clean) continue;
      int br = -1;
      for (int r = t + 1; r < rows_ && br < 0; ++r)
        for (int c = t + 1; c < cols_; ++c)
          if (a[r][c] % a[t][t] != 0) {
            br = r;
            break;
          }
      if (br < 0) break;
      for (int c = t; c < cols_; ++c) a[t][c] += a[br][c];
    }
    out.push_back(static_cast<std::int64_t>(abs(a[t][t])));
  }
  return out;
}

BettiNumbers betti_numbers_mapping_torus(const IntMat2& L) {
  const std::int64_t det = L[0] * L[3] - L[1] * L[2];
  if (det != 1) throw Error(ErrorCode::not_symplectic, "det L = " + std::to_string(det) + ", expected 1");
  const IntMatrix m = IntMatrix::identity(2) - IntMatrix::from(L);
  BettiNumbers b;
  b.b1 = 1 + (2 - m.rank());
  b.b2 = b.b1;
  for (std::int64_t d : m.invariant_factors())
    if (d > 1) b.h1_torsion.push_back(d);
  return b;
}

const char* to_string(Obstruction o) {
  switch (o) {
    case Obstruction::hyperbolic_candidate: return "hyperbolic_candidate";
    case Obstruction::b1_even_excludes_cokahler: return "b1_even_excludes_cokahler";
    case Obstruction::inconclusive: return "inconclusive";
  }
  return "unknown";
}

ObstructionReport critical_metric_obstruction(const IntMat2& L) {
  ObstructionReport r;
  r.betti = betti_numbers_mapping_torus(L);
  r.trace = L[0] + L[3];
  if (r.trace > 2 || r.trace < -2) {
    r.verdict = Obstruction::hyperbolic_candidate;
    r.explanation = "hyperbolic monodromy: the suspension carries a critical metric of positive torsion";
  } else if (r.betti.b1 % 2 == 0) {
    r.verdict = Obstruction::b1_even_excludes_cokahler;
    r.explanation =
        "b1 is even so no co-Kahler structure exists, and the monodromy is not hyperbolic: "
        "neither kind of critical metric is available";
  } else {
    r.verdict = Obstruction::inconclusive;
    r.explanation = "b1 is odd and the monodromy is not hyperbolic: no obstruction from b1";
  }
  return r;
}

}  // namespace cosym
