#pragma once

#include <string>
#include <vector>

#include "opm/cone.hpp"
#include "opm/model.hpp"

namespace opm::zoo {

Model make_classical(int n);
Model make_square_bit();
/// Tests are the antipodal pairs {x, -x} for the coordinate axes plus
/// `samples` seeded random directions; pure states are the boundary points
/// of the ball at the same directions.
Model make_spin_factor(int d, int samples = 12, std::uint64_t seed = 7);

using Frame = std::vector<CVec>;
/// Outcomes are the frame vectors, identified across frames when their
/// projectors agree. Pure states are the Gleason states of the outcomes.
Model make_quantum(int n, const std::vector<Frame>& frames, std::vector<std::string> names = {},
                   std::uint64_t seed = 11);
Model make_quantum(int n);
/// Computational, Hadamard and circular bases for n = 2; a complete set of
/// mutually unbiased bases for odd prime n; n + 1 seeded random frames
/// otherwise.
std::vector<Frame> default_frames(int n, std::uint64_t seed = 11);

/// Resolves `classical:n`, `quantum:n`, `spin:d` and `square-bit`.
Model by_name(const std::string& name);

/// Returns the model with `frame` added as a test (outcomes reused when the
/// projector already exists) and the outcome index of each frame vector.
std::pair<Model, std::vector<Outcome>> with_frame(const Model& model, const Frame& frame,
                                                  const Tolerances& tol = {});
/// Spin factor analogue: adds the test {w, -w}; returns (index of w, index of -w).
std::pair<Model, std::pair<Outcome, Outcome>> with_direction(const Model& model, const Vec& w,
                                                             const Tolerances& tol = {});

/// The invariant inner products on Hermitian n x n matrices,
/// <s1 + a0, t1 + b0> = st + (lambda/n) Tr(a0 b0).
struct LambdaIP {
  int n = 0;
  double lambda = 0;
  Mat gram;  // in the orthonormal Hermitian coordinates
  bool positive = false;
  bool minimizing = false;
  double unit_norm = 0;           // <1, 1>
  double orthogonal_value = 0;    // <P_x, P_y> for x perpendicular to y
  double parallel_value = 0;      // <P_x, P_x>
  double corroboration_gap = 0;   // closed form vs Gram evaluation

  /// Closed form (1 - lambda)/n^2 + (lambda/n)|<x,y>|^2.
  double projector_pair(const CVec& x, const CVec& y) const;
  Json to_json() const;
};

LambdaIP lambda_inner_product(int n, double lambda);
InnerProduct lambda_ip(int n, double lambda, const Cone& cone, const Tolerances& tol = {});

/// Least-squares fit of a Gram matrix (Hermitian coordinates) to the family.
struct LambdaFit {
  double lambda = 0;
  double residual = 0;
};
LambdaFit fit_lambda(int n, const Mat& gram);

/// Monte-Carlo estimate of the Haar-averaged form E[a(P) b(P)].
struct HaarEstimate {
  int n = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double lambda_hat = 0;
  double standard_error = 0;
  Mat gram;
  double unit_norm = 0;
  LambdaFit fit;
  Json to_json() const;
};
HaarEstimate haar_canonical_ip(int n, long samples, std::uint64_t seed);

/// Rotation-invariant forms on the spin factor, diag(1, kappa, ..., kappa)
/// in (t, x) coordinates. kappa = 1/d is the Haar average; kappa = 1 is the
/// Lorentz form.
InnerProduct spin_ip(int d, double kappa, const Cone& cone, const Tolerances& tol = {});

}  // namespace opm::zoo
