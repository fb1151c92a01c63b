#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opm/types.hpp"

namespace opm {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row-major

/// Best rational approximation by continued fractions. Returns nullopt unless
/// some p/q with q <= max_denominator lies within `tol` of x.
std::optional<Rational> rationalize(double x, long max_denominator = 1000000, double tol = 1e-12);
std::optional<QVec> rationalize(const Vec& v, long max_denominator = 1000000, double tol = 1e-12);
std::optional<QMat> rationalize(const Mat& m, long max_denominator = 1000000, double tol = 1e-12);

/// Parses "3", "-1/3", "0.25" exactly.
Rational parse_rational(const std::string& text);

Vec to_double(const QVec& v);
Mat to_double(const QMat& m);
std::string to_string(const Rational& q);

QMat q_zero(size_t rows, size_t cols);
QMat q_identity(size_t n);
QMat q_transpose(const QMat& a);
QMat q_multiply(const QMat& a, const QMat& b);
QVec q_multiply(const QMat& a, const QVec& x);
Rational q_dot(const QVec& a, const QVec& b);
size_t q_cols(const QMat& a);

/// Row-reduces in place; returns pivot columns in order. Pivot choice is the
/// first non-zero entry in column order (smallest index).
std::vector<size_t> q_row_reduce(QMat& a);
size_t q_rank(QMat a);
/// Rows of `a` (in order) that form a maximal independent set, greedily.
std::vector<size_t> q_independent_rows(const QMat& a);
/// Solves a x = b; nullopt if inconsistent. Free variables are set to zero.
std::optional<QVec> q_solve(const QMat& a, const QVec& b);
std::optional<QMat> q_inverse(const QMat& a);
/// Basis of the right kernel {x : a x = 0}.
std::vector<QVec> q_kernel(const QMat& a);

/// Scales a non-zero vector to the primitive integer vector with the same
/// direction (gcd of entries 1). Used to compare rays exactly.
QVec q_primitive(const QVec& v);
bool q_is_zero(const QVec& v);

}  // namespace opm
