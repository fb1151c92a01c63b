#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "opm/field.hpp"

namespace opm::polyhedral {

template <class T>
using Rows = std::vector<std::vector<T>>;

inline void normalize_ray(std::vector<Rational>& r) { r = q_primitive(r); }

inline void normalize_ray(std::vector<double>& r) {
  double m = 0;
  for (double v : r) m = std::max(m, std::fabs(v));
  if (m > 0) {
    for (double& v : r) v /= m;
  }
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = T(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Greedy maximal independent subset of rows, in order.
template <class T>
std::vector<size_t> independent_rows(const Rows<T>& rows) {
  using F = Field<T>;
  std::vector<size_t> chosen;
  Rows<T> echelon;  // reduced rows, each with a leading pivot column
  std::vector<size_t> lead;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<T> r = rows[i];
    if constexpr (!F::exact) normalize_ray(r);
    for (size_t k = 0; k < echelon.size(); ++k) {
      if (F::sign(r[lead[k]]) == 0) continue;
      T f = r[lead[k]] / echelon[k][lead[k]];
      for (size_t j = 0; j < r.size(); ++j) r[j] -= f * echelon[k][j];
    }
    size_t p = r.size();
    for (size_t j = 0; j < r.size(); ++j) {
      if (F::sign(r[j]) != 0) {
        p = j;
        break;
      }
    }
    if (p == r.size()) continue;
    if constexpr (!F::exact) normalize_ray(r);
    echelon.push_back(r);
    lead.push_back(p);
    chosen.push_back(i);
  }
  return chosen;
}

/// Inverse of a square matrix by Gauss-Jordan with partial pivoting.
template <class T>
std::optional<Rows<T>> inverse(const Rows<T>& a) {
  using F = Field<T>;
  const size_t n = a.size();
  Rows<T> aug(n, std::vector<T>(2 * n, T(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = T(1);
  }
  for (size_t c = 0; c < n; ++c) {
    size_t p = n;
    double best = 0;
    for (size_t r = c; r < n; ++r) {
      double mag = std::fabs(F::to_double(aug[r][c]));
      if (F::sign(aug[r][c]) != 0 && (p == n || mag > best)) {
        p = r;
        best = mag;
        if constexpr (F::exact) break;
      }
    }
    if (p == n) return std::nullopt;
    std::swap(aug[p], aug[c]);
    T piv = aug[c][c];
    for (auto& v : aug[c]) v /= piv;
    for (size_t r = 0; r < n; ++r) {
      if (r == c || F::sign(aug[r][c]) == 0) continue;
      T f = aug[r][c];
      for (size_t j = 0; j < 2 * n; ++j) aug[r][j] -= f * aug[c][j];
    }
  }
  Rows<T> inv(n, std::vector<T>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  }
  return inv;
}

/// Extreme rays of the pointed cone {x : h.x >= 0 for every row h} by the
/// double description method. Returns nullopt when the rows do not span R^dim
/// (the cone then has a lineality space and is not pointed).
template <class T>
std::optional<Rows<T>> extreme_rays(const Rows<T>& normals, size_t dim) {
  using F = Field<T>;
  const size_t m = normals.size();
  auto basis_rows = independent_rows(normals);
  if (basis_rows.size() < dim) return std::nullopt;

  Rows<T> h0;
  for (size_t i : basis_rows) h0.push_back(normals[i]);
  auto inv = inverse(h0);
  if (!inv) return std::nullopt;

  struct Ray {
    std::vector<T> v;
    std::vector<char> zero;  // tight constraints among the processed ones
  };
  std::vector<char> processed(m, 0);
  for (size_t i : basis_rows) processed[i] = 1;

  std::vector<Ray> rays;
  for (size_t k = 0; k < dim; ++k) {
    Ray r;
    r.v.resize(dim);
    for (size_t j = 0; j < dim; ++j) r.v[j] = (*inv)[j][k];
    normalize_ray(r.v);
    r.zero.assign(m, 0);
    for (size_t i = 0; i < m; ++i) {
      if (processed[i] && F::sign(dot(normals[i], r.v)) == 0) r.zero[i] = 1;
    }
    rays.push_back(std::move(r));
  }

  for (size_t c = 0; c < m; ++c) {
    if (processed[c]) continue;
    std::vector<T> val(rays.size());
    std::vector<size_t> plus, minus, zero;
    for (size_t k = 0; k < rays.size(); ++k) {
      val[k] = dot(normals[c], rays[k].v);
      int s = F::sign(val[k]);
      (s > 0 ? plus : (s < 0 ? minus : zero)).push_back(k);
    }
    std::vector<Ray> next;
    for (size_t k : plus) next.push_back(rays[k]);
    for (size_t k : zero) {
      Ray r = rays[k];
      r.zero[c] = 1;
      next.push_back(std::move(r));
    }
    for (size_t p : plus) {
      for (size_t q : minus) {
        std::vector<char> common(m, 0);
        size_t count = 0;
        for (size_t i = 0; i < m; ++i) {
          if (rays[p].zero[i] && rays[q].zero[i]) {
            common[i] = 1;
            ++count;
          }
        }
        if (count + 2 < dim) continue;
        bool adjacent = true;
        for (size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool contains = true;
          for (size_t i = 0; i < m; ++i) {
            if (common[i] && !rays[r].zero[i]) {
              contains = false;
              break;
            }
          }
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        Ray r;
        r.v.resize(dim);
        T a = val[p];
        T b = T(-val[q]);
        for (size_t j = 0; j < dim; ++j) r.v[j] = a * rays[q].v[j] + b * rays[p].v[j];
        normalize_ray(r.v);
        r.zero = common;
        r.zero[c] = 1;
        next.push_back(std::move(r));
      }
    }
    processed[c] = 1;
    rays = std::move(next);
  }

  Rows<T> out;
  for (auto& r : rays) {
    bool dup = false;
    for (const auto& o : out) {
      bool same = true;
      for (size_t j = 0; j < dim; ++j) {
        if (F::sign(T(o[j] - r.v[j])) != 0) {
          same = false;
          break;
        }
      }
      if (same) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(r.v);
  }
  return out;
}

}  // namespace opm::polyhedral
