#pragma once

#include <random>
#include <vector>

#include "opm/types.hpp"

namespace opm::herm {

/// Real coordinates on the Hermitian n x n matrices, orthonormal for the
/// trace form Tr(AB). Element 0 is I/sqrt(n); the rest are traceless
/// (generalized Gell-Mann matrices), so the identity direction splits off.
class HermitianBasis {
 public:
  explicit HermitianBasis(int n);

  int n() const { return n_; }
  int dim() const { return n_ * n_; }
  const std::vector<CMat>& elements() const { return elements_; }

  Vec coords(const CMat& a) const;
  CMat matrix(const Vec& c) const;
  /// Matrix of a -> U a U^* in these coordinates (orthogonal).
  Mat conjugation_action(const CMat& u) const;
  /// Matrix of a -> a^T (complex conjugation) in these coordinates.
  Mat transpose_action() const;

 private:
  int n_;
  std::vector<CMat> elements_;
};

CMat projector(const CVec& v);
CMat hermitian_sqrt(const CMat& a);

CVec haar_state(int n, std::mt19937_64& rng);
/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal absorbed into Q.
CMat haar_unitary(int n, std::mt19937_64& rng);
Mat haar_orthogonal(int d, std::mt19937_64& rng);

/// Random density matrix (Ginibre ensemble, full rank almost surely).
CMat random_density(int n, std::mt19937_64& rng);

}  // namespace opm::herm
