#ifndef ORBITCONE_CONES_HPP
#define ORBITCONE_CONES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitcone/algebra.hpp"
#include "orbitcone/parallel.hpp"

namespace orbitcone {

/// Finite unit-norm sample approximation of a closed Ad*-invariant cone.
struct ConeSampleSet {
  SpecPtr algebra;
  std::vector<Vec> samples;  // unit covector coordinates
  struct Provenance {
    std::string description;
    std::uint64_t seed = 0;
    int requested = 0;
    std::vector<std::string> symmetry_tags;  // e.g. "pm"
  } generator;
  int zero_samples = 0;  // draws that produced the zero covector

  bool symmetric_pm() const;
};

/// Exact membership rule for analytically known cones. Rules:
///   "eig-real"            all eigenvalues real (hyperbolic u nilpotent)
///   "eig-elliptic"        semisimple with purely imaginary spectrum, or 0
///   "eig-elliptic-signed" elliptic with sign(lin . coords) = sign
///   "eig-nilpotent"       all eigenvalues ~ 0
///   "quadric"             coords' Q coords >= 0
///   "union"               union of parts
struct ConePredicate {
  SpecPtr algebra;
  std::string rule;
  double tol = 1e-8;
  int sign = +1;
  Vec lin;        // linear functional on coordinates (signed rules)
  Mat quad_form;  // quadric rule
  std::vector<ConePredicate> parts;

  bool contains(const Vec& coords) const;
};

ConePredicate sl2_hyp_nilp_cone(const SpecPtr& sl2);
ConePredicate sl2_elliptic_signed_cone(const SpecPtr& sl2, int sign);
ConePredicate cone_union(std::vector<ConePredicate> parts);

/// Ind_H^G S data: subalgebra h in g plus the base cone S in i h*.
struct InducedConeSpec {
  SpecPtr algebra;
  std::vector<Vec> subalgebra;
  struct BaseCone {
    std::string kind = "zero";  // "zero" | "ray"
    Vec ray_dual;               // dual coordinates on the h basis
  } base;
};

/// Orthonormal basis of the annihilator of h inside i g* (covectors whose
/// trace-form representatives pair to zero with h).
std::vector<Covector> annihilator(const InducedConeSpec& spec);

ConeSampleSet sample_induced_cone(const InducedConeSpec& spec, int n,
                                  std::uint64_t seed,
                                  ExecPolicy policy = ExecPolicy::Parallel,
                                  const GroupSampler* sampler = nullptr);
ConeSampleSet sample_induced_cone_serial(const InducedConeSpec& spec, int n,
                                         std::uint64_t seed,
                                         const GroupSampler* sampler = nullptr);

/// Per-sample detail used by the invariant tests.
struct InducedConeSampleDetail {
  Vec pre_conjugation;  // xi = xi_perp + lift(base point)
  Mat g;                // the conjugating group element
  Vec sample;           // normalized Ad*(g) xi (zero if the draw was zero)
};
std::vector<InducedConeSampleDetail> sample_induced_cone_detailed(
    const InducedConeSpec& spec, int n, std::uint64_t seed,
    const GroupSampler* sampler = nullptr);

/// Angular (chordal) distance of the direction of xi to the cone.
double distance_to_cone(const Covector& xi, const ConeSampleSet& cone);

struct PredicateDistanceOptions {
  int coarse_samples = 4096;
  int refine_rounds = 80;
  int cloud = 48;
  std::uint64_t seed = 2026;
};
double distance_to_cone(const Covector& xi, const ConePredicate& cone,
                        const PredicateDistanceOptions& opt = {});

// -- asymptotic cones ----------------------------------------------------------

/// Unbounded parameter set S: a stream of points of nondecreasing norm.
/// completeness_cap() is the norm below which the stream is exhaustive, which
/// is what certifies emptiness of a cone tail.
class ParamFamily {
 public:
  virtual ~ParamFamily() = default;
  virtual int dim() const = 0;
  virtual void reset() = 0;
  virtual bool next(Vec& out) = 0;
  virtual double completeness_cap() const = 0;
};

class ExplicitFamily : public ParamFamily {
 public:
  ExplicitFamily(std::vector<Vec> points, double cap);
  int dim() const override;
  void reset() override { pos_ = 0; }
  bool next(Vec& out) override;
  double completeness_cap() const override { return cap_; }

 private:
  std::vector<Vec> points_;
  double cap_;
  std::size_t pos_ = 0;
};

/// Lattice {n * step_point : n = 1, 2, ...} up to the cap.
class RayLatticeFamily : public ParamFamily {
 public:
  RayLatticeFamily(Vec direction, double step, double cap);
  int dim() const override { return static_cast<int>(dir_.size()); }
  void reset() override { n_ = 1; }
  bool next(Vec& out) override;
  double completeness_cap() const override { return cap_; }

 private:
  Vec dir_;
  double step_, cap_;
  long n_ = 1;
};

/// Integer pairs (m1, m2) in N^2 filtered by a predicate, enumerated in
/// nondecreasing norm by shells.
class LatticeRule2DFamily : public ParamFamily {
 public:
  LatticeRule2DFamily(std::function<bool(long, long)> predicate, double cap);
  int dim() const override { return 2; }
  void reset() override;
  bool next(Vec& out) override;
  double completeness_cap() const override { return cap_; }

 private:
  void fill_shell();
  std::function<bool(long, long)> pred_;
  double cap_;
  long shell_ = 0;
  std::vector<Vec> buffer_;
  std::size_t pos_ = 0;
  bool done_ = false;
};

enum class AcVerdict { In, Out, Undecided };
std::string to_string(AcVerdict v);

struct AcOptions {
  double ladder_base = 100.0;
  double ladder_factor = 10.0;
  std::size_t max_points = 50'000'000;
};

/// "in" iff the open cone of half-angle cone_width around xi contains family
/// points of norm beyond every ladder rung up to norm_horizon; "out" iff a
/// certified tail is empty; "undecided" when the stream runs out first.
AcVerdict ac_membership(ParamFamily& family, const Vec& xi, double cone_width,
                        double norm_horizon, const AcOptions& opt = {});

// -- comparison ----------------------------------------------------------------

/// A closed cone in dual representation: predicate when analytic, sample
/// cloud otherwise (or both).
struct Cone {
  std::string name;
  SpecPtr algebra;
  std::optional<ConeSampleSet> samples;
  std::optional<ConePredicate> predicate;
};

double distance_to_cone(const Covector& xi, const Cone& cone);

enum class ConeRelation { Equal, StrictSubset, StrictSuperset, Incomparable };
std::string to_string(ConeRelation r);

struct ConeComparison {
  ConeRelation relation;
  std::optional<Vec> witness_in_b;  // in b, far from a
  std::optional<Vec> witness_in_a;  // in a, far from b
  double witness_distance_b = 0.0;
  double witness_distance_a = 0.0;
  double hausdorff_a_to_b = 0.0;  // max over a representatives of d(., b)
  double hausdorff_b_to_a = 0.0;
};

struct CompareOptions {
  double containment_tol = 1e-2;   // used against predicate targets
  double sampling_tol = 0.12;      // used against cloud-only targets
  double witness_threshold = 0.3;  // strictness evidence
  int min_samples = 8;
};

ConeComparison compare_cones(const Cone& a, const Cone& b,
                             const CompareOptions& opt = {});

}  // namespace orbitcone

#endif
