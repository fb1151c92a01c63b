#pragma once

#include <optional>
#include <vector>

#include "opm/field.hpp"

namespace opm::lp {

/// Outcome of a feasibility query {x >= 0 : A x = b}.
template <class T>
struct Feasibility {
  bool feasible = false;
  std::vector<T> x;       // a basic feasible point when feasible
  std::vector<T> farkas;  // y with y^T A <= 0 and y^T b > 0 when infeasible
  long pivots = 0;
};

/// Phase-one simplex with Bland's rule on a dense tableau. With T = Rational
/// the verdict is exact; with T = double signs are read through Field<double>.
template <class T>
Feasibility<T> solve_feasibility(const std::vector<std::vector<T>>& a, const std::vector<T>& b,
                                 long max_pivots = 200000) {
  using F = Field<T>;
  const size_t m = a.size();
  const size_t n = m == 0 ? 0 : a.front().size();
  const size_t cols = n + m;
  // Tableau rows 0..m-1 = constraints, row m = reduced costs; last column = rhs.
  std::vector<std::vector<T>> t(m + 1, std::vector<T>(cols + 1, T(0)));
  std::vector<int> flip(m, 1);
  for (size_t i = 0; i < m; ++i) {
    if (F::sign(b[i]) < 0) flip[i] = -1;
    for (size_t j = 0; j < n; ++j) t[i][j] = flip[i] < 0 ? T(-a[i][j]) : a[i][j];
    t[i][n + i] = T(1);
    t[i][cols] = flip[i] < 0 ? T(-b[i]) : b[i];
  }
  for (size_t j = 0; j < n; ++j) {
    T s = T(0);
    for (size_t i = 0; i < m; ++i) s -= t[i][j];
    t[m][j] = s;
  }
  for (size_t i = 0; i < m; ++i) t[m][n + i] = T(0);
  {
    T s = T(0);
    for (size_t i = 0; i < m; ++i) s -= t[i][cols];
    t[m][cols] = s;
  }
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  Feasibility<T> result;
  while (result.pivots < max_pivots) {
    size_t enter = cols;
    for (size_t j = 0; j < cols; ++j) {
      if (F::sign(t[m][j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    size_t leave = m;
    T best_ratio = T(0);
    for (size_t i = 0; i < m; ++i) {
      if (F::sign(t[i][enter]) <= 0) continue;
      T ratio = t[i][cols] / t[i][enter];
      if (leave == m || F::sign(T(ratio - best_ratio)) < 0 ||
          (F::sign(T(ratio - best_ratio)) == 0 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    T pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave || F::sign(t[i][enter]) == 0) continue;
      T f = t[i][enter];
      for (size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
    ++result.pivots;
  }

  // Objective row rhs holds minus the phase-one objective.
  result.feasible = F::sign(T(-t[m][cols])) == 0;
  if (result.feasible) {
    result.x.assign(n, T(0));
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < n) result.x[basis[i]] = t[i][cols];
    }
  } else {
    // Reduced cost of artificial i is 1 - y'_i.
    result.farkas.assign(m, T(0));
    for (size_t i = 0; i < m; ++i) {
      T y = T(1) - t[m][n + i];
      result.farkas[i] = flip[i] < 0 ? T(-y) : y;
    }
  }
  return result;
}

}  // namespace opm::lp
