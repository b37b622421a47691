#pragma once

#include <optional>
#include <vector>

#include "arcdef/rational.hpp"

namespace arcdef {

// Dense exact rational matrix, row-major.
using QMatrix = std::vector<std::vector<Rational>>;

// Row-reduce in place; returns the rank.
inline std::size_t row_reduce(QMatrix& M) {
  if (M.empty()) return 0;
  std::size_t rows = M.size(), cols = M[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && M[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(M[rank], M[pivot]);
    Rational inv = Rational(1) / M[rank][col];
    for (auto& x : M[rank]) x *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || M[r][col] == 0) continue;
      Rational factor = M[r][col];
      for (std::size_t c2 = 0; c2 < cols; ++c2)
        M[r][c2] -= factor * M[rank][c2];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t matrix_rank(QMatrix M) { return row_reduce(M); }

// Solve M x = b exactly; returns any solution, or nullopt if inconsistent.
inline std::optional<std::vector<Rational>> solve_linear(const QMatrix& M,
                                                         const std::vector<Rational>& b) {
  if (M.empty()) {
    for (const auto& x : b)
      if (x != 0) return std::nullopt;
    return std::vector<Rational>{};
  }
  std::size_t rows = M.size(), cols = M[0].size();
  QMatrix aug = M;
  for (std::size_t r = 0; r < rows; ++r) aug[r].push_back(b[r]);
  row_reduce(aug);
  // Inconsistent iff a pivot sits in the augmented column.
  std::vector<Rational> x(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t lead = cols + 1;
    for (std::size_t c2 = 0; c2 <= cols; ++c2)
      if (aug[r][c2] != 0) {
        lead = c2;
        break;
      }
    if (lead == cols + 1) continue;         // zero row
    if (lead == cols) return std::nullopt;  // 0 = nonzero
    x[lead] = aug[r][cols];
  }
  return x;
}

// Does target lie in the row span of the generators?
inline bool in_row_span(const QMatrix& generators,
                        const std::vector<Rational>& target) {
  QMatrix M = generators;
  std::size_t base = matrix_rank(M);
  M.push_back(target);
  return matrix_rank(M) == base;
}

}  // namespace arcdef
