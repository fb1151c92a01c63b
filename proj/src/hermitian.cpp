#include "opm/hermitian.hpp"

#include <cmath>

namespace opm::herm {

HermitianBasis::HermitianBasis(int n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::BadDimension, "Hermitian basis needs n >= 1");
  const Complex i(0, 1);
  CMat id = CMat::Identity(n, n) / std::sqrt(static_cast<double>(n));
  elements_.push_back(id);
  for (int l = 1; l < n; ++l) {
    CMat d = CMat::Zero(n, n);
    for (int j = 0; j < l; ++j) d(j, j) = 1;
    d(l, l) = -static_cast<double>(l);
    elements_.push_back(d / std::sqrt(static_cast<double>(l) * (l + 1)));
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMat s = CMat::Zero(n, n);
      s(j, k) = s(k, j) = 1.0 / std::sqrt(2.0);
      elements_.push_back(s);
      CMat a = CMat::Zero(n, n);
      a(j, k) = -i / std::sqrt(2.0);
      a(k, j) = i / std::sqrt(2.0);
      elements_.push_back(a);
    }
  }
}

Vec HermitianBasis::coords(const CMat& a) const {
  Vec c(dim());
  for (int k = 0; k < dim(); ++k) c(k) = (a * elements_[k]).trace().real();
  return c;
}

CMat HermitianBasis::matrix(const Vec& c) const {
  CMat a = CMat::Zero(n_, n_);
  for (int k = 0; k < dim(); ++k) a += c(k) * elements_[k];
  return a;
}

Mat HermitianBasis::conjugation_action(const CMat& u) const {
  Mat m(dim(), dim());
  for (int l = 0; l < dim(); ++l) m.col(l) = coords(u * elements_[l] * u.adjoint());
  return m;
}

Mat HermitianBasis::transpose_action() const {
  Mat m(dim(), dim());
  for (int l = 0; l < dim(); ++l) m.col(l) = coords(elements_[l].transpose());
  return m;
}

CMat projector(const CVec& v) { return v * v.adjoint() / v.squaredNorm(); }

CMat hermitian_sqrt(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  Vec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

CMat ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat z(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      double re = normal(rng);
      double im = normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return z;
}

}  // namespace

CVec haar_state(int n, std::mt19937_64& rng) {
  CVec v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

CMat haar_unitary(int n, std::mt19937_64& rng) {
  CMat z = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    Complex d = r(k, k);
    double mag = std::abs(d);
    if (mag > 0) q.col(k) *= d / mag;
  }
  return q;
}

Mat haar_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat z(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) z(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    if (r(k, k) < 0) q.col(k) *= -1.0;
  }
  return q;
}

CMat random_density(int n, std::mt19937_64& rng) {
  CMat g = ginibre(n, n, rng);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace opm::herm
