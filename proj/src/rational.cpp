#include "opm/rational.hpp"

#include <cmath>
#include <numeric>

namespace opm {

std::optional<Rational> rationalize(double x, long max_denominator, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h/k of the continued fraction of x.
  long double value = x;
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(value));
  mpz_class k_prev = 0, k = 1;
  long double frac = value - std::floor(value);
  for (int iter = 0; iter < 64; ++iter) {
    Rational candidate(h, k);
    candidate.canonicalize();
    if (std::fabs(candidate.get_d() - x) <= tol) return candidate;
    if (frac < 1e-18L) break;
    long double inv = 1.0L / frac;
    long a = static_cast<long>(std::floor(inv));
    frac = inv - std::floor(inv);
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  Rational last(h, k);
  last.canonicalize();
  if (std::fabs(last.get_d() - x) <= tol) return last;
  return std::nullopt;
}

std::optional<QVec> rationalize(const Vec& v, long max_denominator, double tol) {
  QVec out;
  out.reserve(static_cast<size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    auto q = rationalize(v(i), max_denominator, tol);
    if (!q) return std::nullopt;
    out.push_back(*q);
  }
  return out;
}

std::optional<QMat> rationalize(const Mat& m, long max_denominator, double tol) {
  QMat out(static_cast<size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = rationalize(Vec(m.row(i).transpose()), max_denominator, tol);
    if (!row) return std::nullopt;
    out[static_cast<size_t>(i)] = std::move(*row);
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    bool negative = false;
    size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      pos = 1;
    }
    std::string digits = s.substr(pos);
    mpz_class scale = 1;
    auto exp_pos = digits.find_first_of("eE");
    long exponent = 0;
    if (exp_pos != std::string::npos) {
      exponent = std::stol(digits.substr(exp_pos + 1));
      digits = digits.substr(0, exp_pos);
    }
    auto dot = digits.find('.');
    std::string integral = digits;
    if (dot != std::string::npos) {
      integral = digits.substr(0, dot) + digits.substr(dot + 1);
      exponent -= static_cast<long>(digits.size() - dot - 1);
    }
    if (integral.empty() || integral.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
    }
    Rational q{mpz_class(integral)};
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0) {
      q *= ten_pow;
    } else {
      q /= ten_pow;
    }
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
  }
}

Vec to_double(const QVec& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get_d();
  return out;
}

Mat to_double(const QMat& m) {
  const size_t cols = q_cols(m);
  Mat out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j].get_d();
    }
  }
  return out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

size_t q_cols(const QMat& a) { return a.empty() ? 0 : a.front().size(); }

QMat q_zero(size_t rows, size_t cols) { return QMat(rows, QVec(cols, Rational(0))); }

QMat q_identity(size_t n) {
  QMat out = q_zero(n, n);
  for (size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

QMat q_transpose(const QMat& a) {
  QMat out = q_zero(q_cols(a), a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  }
  return out;
}

QMat q_multiply(const QMat& a, const QMat& b) {
  const size_t inner = q_cols(a);
  const size_t cols = q_cols(b);
  QMat out = q_zero(a.size(), cols);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t k = 0; k < inner; ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

QVec q_multiply(const QMat& a, const QVec& x) {
  QVec out(a.size(), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] = q_dot(a[i], x);
  return out;
}

Rational q_dot(const QVec& a, const QVec& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

std::vector<size_t> q_row_reduce(QMat& a) {
  std::vector<size_t> pivots;
  const size_t rows = a.size();
  const size_t cols = q_cols(a);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t q_rank(QMat a) { return q_row_reduce(a).size(); }

std::vector<size_t> q_independent_rows(const QMat& a) {
  std::vector<size_t> chosen;
  QMat basis;
  for (size_t i = 0; i < a.size(); ++i) {
    QMat trial = basis;
    trial.push_back(a[i]);
    if (q_rank(trial) == trial.size()) {
      basis = std::move(trial);
      chosen.push_back(i);
    }
  }
  return chosen;
}

std::optional<QVec> q_solve(const QMat& a, const QVec& b) {
  const size_t cols = q_cols(a);
  QMat aug = a;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = q_row_reduce(aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  QVec x(cols, Rational(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

std::optional<QMat> q_inverse(const QMat& a) {
  const size_t n = a.size();
  if (q_cols(a) != n) return std::nullopt;
  QMat aug = a;
  for (size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, Rational(0));
    aug[i][n + i] = 1;
  }
  auto pivots = q_row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  QMat inv = q_zero(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  }
  return inv;
}

std::vector<QVec> q_kernel(const QMat& a) {
  const size_t cols = q_cols(a);
  QMat r = a;
  auto pivots = q_row_reduce(r);
  std::vector<bool> is_pivot(cols, false);
  for (size_t p : pivots) is_pivot[p] = true;
  std::vector<QVec> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVec v(cols, Rational(0));
    v[free] = 1;
    for (size_t row = 0; row < pivots.size(); ++row) v[pivots[row]] = -r[row][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

QVec q_primitive(const QVec& v) {
  mpz_class den_lcm = 1;
  for (const auto& q : v) {
    if (sgn(q) != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t());
  }
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& q : v) {
    mpz_class n = q.get_num() * (den_lcm / q.get_den());
    ints.push_back(n);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  QVec out;
  out.reserve(v.size());
  for (auto& n : ints) out.emplace_back(g == 0 ? mpz_class(0) : mpz_class(n / g));
  return out;
}

bool q_is_zero(const QVec& v) {
  for (const auto& q : v) {
    if (sgn(q) != 0) return false;
  }
  return true;
}

}  // namespace opm
