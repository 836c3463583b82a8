#ifndef ORBITCONE_HOMSPACE_HPP
#define ORBITCONE_HOMSPACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "orbitcone/algebra.hpp"
#include "orbitcone/parallel.hpp"

namespace orbitcone {

/// X = G/H given by the ambient algebra and the subalgebra basis. X itself is
/// never materialized; stabilizer data is sampled through group elements g_x.
struct HomogeneousSpaceSpec {
  std::string name;
  SpecPtr algebra;
  std::vector<Vec> subalgebra;  // h basis, coordinates in the ambient basis
  std::vector<Mat> subgroup_generators;  // optional extra H elements

  int sub_dim() const { return static_cast<int>(subalgebra.size()); }
};

/// Sampled point of X: g_x, the conjugated stabilizer algebra
/// g_x-conjugate of h, and its orthogonal complement (both orthonormal in the
/// fixed inner product; columns are coordinate vectors).
struct StabilizerPoint {
  GroupElement g_x;
  Mat gx_basis;    // dim x k
  Mat perp_basis;  // dim x (dim - k)
  std::optional<Vec> y_x;  // unit partial-integration direction, when set

  int sub_dim() const { return static_cast<int>(gx_basis.cols()); }
};

StabilizerPoint stabilizer_point(const HomogeneousSpaceSpec& spec,
                                 const GroupElement& g);

struct DensityReport {
  bool invariant;            // |det Ad(h)| = 1 on g/h for all sampled h
  double max_log_defect;     // max |log det| over the sampled grid
  std::vector<double> generator_exponents;  // tr(ad_W on g/h) per h basis W
};

/// Tests whether G/H carries an invariant density by sampling h = exp(tW)
/// over the subalgebra basis and a t grid. The per-generator modular exponent
/// tr(ad_W on g/h) is reported exactly.
DensityReport has_invariant_density(const HomogeneousSpaceSpec& spec,
                                    int t_points = 7, double t_max = 1.0);

/// |det(Ad(exp y) on the complement model of g/g_x)|^{-alpha}, for y in g_x.
double half_density_character(const HomogeneousSpaceSpec& spec,
                              const StabilizerPoint& pt,
                              const AlgebraElement& y, double alpha);

/// Normalized orthogonal projection of the eta0 representative onto g_x.
/// Throws ConeError when the projection vanishes (eta0 lies in i(g/g_x)*).
AlgebraElement y_x_field(const StabilizerPoint& pt, const Covector& eta0,
                         double rel_tol = 1e-10);

struct PhaseDerivative {
  double value;
  double error_estimate;
};

/// d/ds at s=0 of <xi, log(exp(sY) g)> by central differences with one
/// Richardson level.
PhaseDerivative phase_derivative(const Covector& xi, const AlgebraElement& y,
                                 const GroupElement& g,
                                 double step_scale = 1e-5,
                                 double injectivity_radius = 1.0);

/// |det D(Y,Z) -> log(e^Y e^Z)| at (y, z), y in g_x, z in the complement,
/// in orthonormal coordinates on both sides.
double product_chart_jacobian(const StabilizerPoint& pt,
                              const AlgebraElement& y, const AlgebraElement& z,
                              double chart_radius = 1.0, double fd_step = 1e-5);

struct COmegaResult {
  double value;
  int n_x;
  double omega_radius;
  int worst_x_index;        // attaining the inf
  double worst_projection;  // sup_{|Y|=1, Y in g_x} |<eta0, Y>| at that x
  std::vector<double> per_x_values;
};

/// Grid estimate of inf_x sup_{Y in g_x, |Y|=1} inf_{xi in B_r(eta0)}
/// |<xi, Y>|. The inner inf over the ball is max(|<eta0, Y>| - r, 0); the sup
/// is evaluated on n_dir sampled directions together with the analytic
/// maximizer pr_{g_x}(eta0).
COmegaResult c_omega(const HomogeneousSpaceSpec& spec, const Covector& eta0,
                     double omega_radius, int n_x, int n_dir,
                     std::uint64_t seed,
                     ExecPolicy policy = ExecPolicy::Parallel,
                     const GroupSampler* sampler = nullptr);
COmegaResult c_omega_serial(const HomogeneousSpaceSpec& spec,
                            const Covector& eta0, double omega_radius, int n_x,
                            int n_dir, std::uint64_t seed,
                            const GroupSampler* sampler = nullptr);

}  // namespace orbitcone

#endif
