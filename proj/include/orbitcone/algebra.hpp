#ifndef ORBITCONE_ALGEBRA_HPP
#define ORBITCONE_ALGEBRA_HPP

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitcone/parallel.hpp"
#include "orbitcone/rng.hpp"
#include "orbitcone/types.hpp"

namespace orbitcone {

class LieAlgebraSpec;
using SpecPtr = std::shared_ptr<const LieAlgebraSpec>;

/// Optional defining constraint of the matrix group: g^T * form * g = form.
struct GroupConstraint {
  std::string type;  // "symplectic" or "signature"
  Mat form;
};

/// Numerical thresholds for the element taxonomy. The semisimplicity rank
/// tests use the singular-value cutoff sv_rel_tol * |Y|, eigenvalues closer
/// than cluster_rel_tol * |Y| are merged into one multiplicity class, and a
/// clustering whose gaps fall inside the ambiguity band raises
/// UnclassifiableError instead of guessing.
struct ClassifyOptions {
  double sv_rel_tol = 1e-8;
  double cluster_rel_tol = 1e-7;
  double ambiguity_factor = 2.0;
};

/// A real matrix Lie algebra given by an ordered basis of ambient_dim x
/// ambient_dim matrices. Hosts the fixed inner product (the Frobenius product
/// of the realization) and the trace form used to identify i g* with g.
class LieAlgebraSpec : public std::enable_shared_from_this<LieAlgebraSpec> {
 public:
  LieAlgebraSpec(std::string name, int ambient_dim, std::vector<Mat> basis,
                 int rank,
                 std::map<std::string, std::vector<Vec>> cartan_reps = {},
                 std::optional<GroupConstraint> constraint = std::nullopt);

  const std::string& name() const { return name_; }
  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int rank() const { return rank_; }
  const std::vector<Mat>& basis() const { return basis_; }
  const std::map<std::string, std::vector<Vec>>& cartan_reps() const {
    return cartan_reps_;
  }
  const std::optional<GroupConstraint>& constraint() const {
    return constraint_;
  }
  /// Name of the fixed scalar product ("frobenius" for every shipped spec).
  const std::string& inner_product_name() const { return inner_product_; }

  /// Matrix of the element with the given coordinates.
  Mat matrix(const Vec& coords) const;

  /// Coordinates of a matrix known to lie in the span of the basis.
  /// The least-squares residual is written to *residual when given.
  Vec to_coords(const Mat& m, double* residual = nullptr) const;

  /// Gram matrix of the basis under the Frobenius product Tr(A^T B).
  const Mat& gram() const { return gram_; }
  /// Cholesky factor L with gram() = L L^T.
  const Mat& gram_chol() const { return gram_chol_; }
  /// Gram matrix of the basis under the trace form Tr(A B).
  const Mat& trace_gram() const { return trace_gram_; }

  /// Orthonormalizes the given coordinate vectors under the fixed inner
  /// product; returns a dim x k matrix of coordinates.
  Mat orthonormalize(const std::vector<Vec>& vs) const;
  /// Orthonormal basis of the orthogonal complement of the given columns.
  Mat orthogonal_complement(const Mat& onb_columns) const;

  /// Frobenius inner product of two coordinate vectors.
  double ip(const Vec& a, const Vec& b) const;
  double norm(const Vec& a) const;

  /// Matrix of ad_y acting on coordinates.
  Mat ad_matrix(const Vec& y) const;

  /// Checks the type invariants (independent basis, bracket closure, abelian
  /// semisimple cartan_reps of dimension rank); throws AlgebraError.
  void validate() const;

 private:
  std::string name_;
  int ambient_dim_;
  std::vector<Mat> basis_;
  int rank_;
  std::map<std::string, std::vector<Vec>> cartan_reps_;
  std::optional<GroupConstraint> constraint_;
  std::string inner_product_ = "frobenius";

  Mat basis_stacked_;  // ambient^2 x dim, vectorized basis
  Eigen::CompleteOrthogonalDecomposition<Mat> basis_cod_;
  Mat gram_;
  Mat gram_chol_;
  Mat trace_gram_;
};

/// Element of the algebra in basis coordinates.
struct AlgebraElement {
  SpecPtr algebra;
  Vec coords;

  Mat matrix() const { return algebra->matrix(coords); }
  double norm() const { return algebra->norm(coords); }
};

/// Element of i g* identified with g through the trace form: the stored
/// coordinates are those of the representative X with <xi, Y> = Tr(X Y).
struct Covector {
  SpecPtr algebra;
  Vec coords;

  Mat matrix() const { return algebra->matrix(coords); }
  /// Dual norm sup_{|Y|=1} |<xi, Y>| = Frobenius norm of the representative.
  double norm() const { return algebra->norm(coords); }
  /// Coordinates of the element u with (u, Y) = <xi, Y> for the fixed inner
  /// product; this is the representative the projection formulas act on.
  Vec ip_representative() const;
};

struct GroupElement {
  SpecPtr algebra;
  Mat matrix;

  /// det != 0 and, when the spec carries a constraint, g^T M g = M.
  void validate(double tol = 1e-8) const;
};

enum class ElementKind {
  SemisimpleHyperbolic,
  SemisimpleElliptic,
  SemisimpleMixed,
  Nilpotent,
  Mixed,
};

std::string to_string(ElementKind k);

struct ElementClass {
  ElementKind kind;
  bool regular;
  std::vector<Complex> eigen_profile;

  bool semisimple() const {
    return kind == ElementKind::SemisimpleHyperbolic ||
           kind == ElementKind::SemisimpleElliptic ||
           kind == ElementKind::SemisimpleMixed;
  }
};

// -- operations --------------------------------------------------------------

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// Tr(X_xi * Y).
double trace_pairing(const Covector& xi, const AlgebraElement& y);

GroupElement group_exp(const AlgebraElement& y);

/// Principal logarithm; requires |g - I| below the injectivity radius.
AlgebraElement group_log(const GroupElement& g, double injectivity_radius = 1.0);

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& y);

/// Ad*(g) on the trace-form representative; defined by
/// <Ad*(g) xi, Y> = <xi, Ad(g^-1) Y>, which on representatives is conjugation.
Covector coadjoint(const GroupElement& g, const Covector& xi);

ElementClass classify(const AlgebraElement& y, const ClassifyOptions& opt = {});
ElementClass classify_matrix(const LieAlgebraSpec& spec, const Mat& m,
                             const ClassifyOptions& opt = {});

struct CartanConjugation {
  GroupElement g;
  AlgebraElement cartan_element;  // y0 with Ad(g) y0 = y
  std::string cartan_name;
  double norm_ratio;  // |y0| / |y|
};

/// Conjugates a semisimple element into one of the spec's cartan_reps.
/// Built from the eigendecomposition; for specs with a bilinear constraint
/// the conjugator is refined inside the group by descent.
CartanConjugation conjugate_to_cartan(const AlgebraElement& y,
                                      std::uint64_t seed = 7);

/// Throws unless the vectors span an independent, bracket-closed subalgebra.
void check_subalgebra(const SpecPtr& algebra, const std::vector<Vec>& basis,
                      double tol = 1e-8);

/// Fraction of uniformly sampled unit elements that classify semisimple.
double semisimple_density(const SpecPtr& algebra, int n_samples,
                          std::uint64_t seed,
                          ExecPolicy policy = ExecPolicy::Parallel);
double semisimple_density_serial(const SpecPtr& algebra, int n_samples,
                                 std::uint64_t seed);

// -- sampling helpers ---------------------------------------------------------

/// Random unit element (Gaussian coordinates, Frobenius-normalized).
AlgebraElement random_unit_element(const SpecPtr& algebra, Rng& rng);

/// Group sampler: products of at most `factors` exponentials of unit algebra
/// elements with scales drawn from [0, max_scale]. Seeded and splittable.
struct GroupSampler {
  SpecPtr algebra;
  int factors = 3;
  double max_scale = 1.0;

  GroupElement sample(Rng& rng) const;
  GroupElement at(std::uint64_t seed, std::uint64_t index) const;
};

}  // namespace orbitcone

#endif
