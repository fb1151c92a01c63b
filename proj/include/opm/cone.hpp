#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opm/hermitian.hpp"
#include "opm/model.hpp"
#include "opm/rational.hpp"

namespace opm {

/// A closed convex cone in R^dim. Polyhedral cones keep both generator and
/// facet descriptions (a in C iff h.a >= 0 for every facet normal h), with
/// exact mirrors when the input was rational. Analytic cones are
/// {a : transform * a in K} for K the standard PSD cone (orthonormal
/// Hermitian coordinates) or the standard Lorentz cone {t >= |x|}.
class Cone {
 public:
  enum class Kind { polyhedral, psd, second_order };

  static Cone from_generators(const std::vector<Vec>& generators, std::optional<QMat> exact = {});
  static Cone from_facets(const std::vector<Vec>& facets, std::optional<QMat> exact = {},
                          int dim = -1);
  static Cone psd(int n, Mat transform = {});
  static Cone second_order(int d, Mat transform = {});

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool exact() const { return exact_generators_.has_value(); }
  const std::vector<Vec>& generators() const { return generators_; }
  const std::vector<Vec>& facets() const { return facets_; }
  const std::optional<QMat>& exact_generators() const { return exact_generators_; }
  const std::optional<QMat>& exact_facets() const { return exact_facets_; }
  const Mat& transform() const { return transform_; }
  int matrix_size() const { return n_; }
  std::string describe() const;

  /// Smallest constraint value at a: min_h h.a / |h| for polyhedral cones,
  /// the smallest eigenvalue or t - |x| of transform * a for analytic ones.
  double margin(const Vec& a) const;
  bool contains(const Vec& a, double tol) const;
  /// Exact membership for rational vectors of an exact polyhedral cone.
  bool contains_exact(const QVec& a) const;

  /// Extreme rays used to test cone preservation: all generators of a
  /// polyhedral cone; a fixed, seeded family of rank-one / boundary rays for
  /// analytic cones (pulled back through the transform).
  std::vector<Vec> probe_generators() const;

  /// Standard cone K membership and Euclidean projection (analytic kinds).
  double standard_margin(const Vec& k) const;
  Vec standard_project(const Vec& k) const;

 private:
  Kind kind_ = Kind::polyhedral;
  int dim_ = 0;
  int n_ = 0;
  std::vector<Vec> generators_;
  std::vector<Vec> facets_;  // unit Euclidean norm
  std::optional<QMat> exact_generators_;
  std::optional<QMat> exact_facets_;
  Mat transform_;
  std::shared_ptr<const herm::HermitianBasis> basis_;
};

/// A symmetric bilinear form on V* coordinates.
struct InnerProduct {
  Mat gram;
  std::optional<QMat> exact_gram;
  bool positive_definite = false;
  bool positive_on_cone = false;
  bool invariant = false;
  std::optional<bool> minimizing;
  std::optional<double> lambda;
  std::string origin;

  double operator()(const Vec& a, const Vec& b) const { return a.dot(gram * b); }
  double norm(const Vec& a) const;
  Json to_json() const;
};

/// Builds an InnerProduct from a Gram matrix, checking symmetry and
/// positive-definiteness (Cholesky) and positivity on the given cone.
InnerProduct make_inner_product(const Mat& gram, const Cone& cone, std::string origin,
                                const Tolerances& tol = {}, std::optional<QMat> exact = {});

/// Coordinates for V (cone-base space) and V* (effects), paired by the dot
/// product: alpha(x) = effect_coords[x] . state_coords(alpha).
struct LinearRep {
  int dim = 0;
  ModelKind kind = ModelKind::generic;
  std::vector<int> basis;  // pure-state indices spanning V (polytopic models)
  std::vector<Vec> state_coords;
  std::vector<Vec> effect_coords;
  Vec unit;
  std::optional<std::vector<QVec>> exact_state_coords;
  std::optional<std::vector<QVec>> exact_effect_coords;
  std::optional<QVec> exact_unit;
  Cone cone_V;
  Cone cone_Vstar;
  std::shared_ptr<const herm::HermitianBasis> hermitian;

  bool exact() const { return exact_effect_coords.has_value(); }
  /// dim x |X| matrix whose columns are the outcome effects.
  Mat effect_matrix() const;
  /// V coordinates of the state with the given outcome values. Throws
  /// NotFullDimensional when the effects do not span V*.
  Vec state_coords_of(const StateVec& values) const;
  StateVec values_of(const Vec& state) const;
  Json to_json(const TestSpace& space) const;
};

LinearRep build_linear_rep(const Model& model, const Tolerances& tol = {});

struct ConeEquality {
  bool equal = false;
  bool exact = false;
  Json witness;  // a generator of one cone outside the other
};
ConeEquality compare_cones(const Cone& a, const Cone& b, const Tolerances& tol = {});

/// Dual cone {b : <b, c> >= 0 for all c in cone} under the inner product.
Cone dual_cone(const Cone& cone, const InnerProduct& ip);

struct Projection {
  Vec point;
  double kkt_residual = 0;
  int iterations = 0;
  std::string method;
};

/// Metric projection onto the cone in the ip norm.
Projection cone_project(const Vec& a, const Cone& cone, const InnerProduct& ip,
                        const Tolerances& tol = {});
/// A second solver for the same projection (Dykstra over facets for
/// polyhedral cones, accelerated projected gradient from a perturbed start
/// for analytic ones); used to certify uniqueness.
Projection cone_project_alternate(const Vec& a, const Cone& cone, const InnerProduct& ip,
                                  const Tolerances& tol = {});

struct ConeMap {
  Mat matrix;
  double condition = 0;
  Json certificate;
};

/// Certifies that T maps domain onto codomain as an order isomorphism:
/// T invertible, T g in codomain for every probe generator g of domain and
/// T^{-1} h in domain for every probe generator h of codomain.
ConeMap certify_order_isomorphism(const Mat& t, const Cone& domain, const Cone& codomain,
                                  const Tolerances& tol = {});
ConeMap is_order_automorphism(const Mat& t, const Cone& cone, const Tolerances& tol = {});

}  // namespace opm
