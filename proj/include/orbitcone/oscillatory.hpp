#ifndef ORBITCONE_OSCILLATORY_HPP
#define ORBITCONE_OSCILLATORY_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "orbitcone/homspace.hpp"
#include "orbitcone/piecewise_poly.hpp"

namespace orbitcone {

/// Nested centered region in a subalgebra: a box with per-axis halfwidths or
/// a ball with one radius.
struct BumpRegion {
  std::string shape = "box";  // "box" | "ball"
  Vec extent;                 // halfwidths (box) or radius in extent[0] (ball)
  int ball_dim = 1;           // domain dimension for the ball shape
};

/// Member of the cutoff sequence: equal to 1 on U1, supported inside U2,
/// built as the indicator of the middle set convolved N+1 times with box
/// kernels of width gap/(2(N+1)). Evaluation is exact piecewise-polynomial;
/// the uniform grid caches values for the finite-difference checks.
struct BumpFunction {
  int order = 0;  // N
  int dim = 1;
  BumpRegion u1, u2;
  std::vector<PiecewisePoly> axis_profile;  // one per axis; ball uses [0]
  struct Construction {
    int convolutions;
    std::vector<double> widths;  // mollifier width per axis
  } construction;
  int grid_resolution = 0;            // nodes per axis
  std::vector<double> grid_values;    // row-major, filled for dim <= 2

  double eval(const Vec& y) const;
  double eval1(double y) const;  // dim == 1 convenience
};

BumpFunction build_bump(int N, const BumpRegion& u1, const BumpRegion& u2,
                        int grid_resolution);

/// Uniform tensor grid sample of a compactly supported function on the
/// centered box with the given halfwidths.
struct GridFunction {
  int dim = 1;
  Vec halfwidths;
  std::vector<int> nodes;  // per axis, odd so that coarsening by 2 nests
  std::vector<Complex> values;

  static GridFunction tabulate(int dim, const Vec& halfwidths,
                               const std::vector<int>& nodes,
                               const std::function<Complex(const Vec&)>& f);
};

struct OscIntegral {
  Complex value;
  double error_estimate;
};

/// Trapezoid quadrature of integral f(Y) exp(i t <xi, Y>) dY with one
/// Richardson level; refuses when the phase advances faster than the grid
/// resolves (Nyquist guard).
OscIntegral oscillatory_integral(const GridFunction& f, const Vec& xi_dual,
                                 double t, double nyquist_guard = 1.0);

// -- representations -----------------------------------------------------------

/// Explicit finite-dimensional unitary representation of a subgroup H given
/// by an evaluator on group matrices and its differential on subalgebra
/// coordinates.
struct UnitaryRepFD {
  std::string name;
  SpecPtr algebra;              // ambient spec
  std::vector<Vec> subalgebra;  // h basis the rep lives on
  int dim = 1;
  std::function<CMat(const Mat&)> evaluator;      // H matrix -> U(dim)
  std::function<CMat(const Vec&)> differential;   // h-basis coords -> skew-herm
};

/// Character n of a circle subgroup exp(theta W).
UnitaryRepFD circle_character(const SpecPtr& algebra, const Vec& generator,
                              int n);
/// Unitary character e^{i s t} of the sl2 Borel on diag(e^t, e^-t).
UnitaryRepFD borel_character(const SpecPtr& sl2, double s);
/// Spin representation of su2 with dimension two_j + 1.
UnitaryRepFD su2_spin(const SpecPtr& su2, int two_j);
UnitaryRepFD trivial_rep(const SpecPtr& algebra, std::vector<Vec> subalgebra);

// -- decay fits ----------------------------------------------------------------

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  bool reliable = false;
};

struct FitOptions {
  double tail_fraction = 0.5;        // fit on the upper half of the ladder
  double residual_threshold = 0.1;   // log10 envelope deviation (upward)
  double noise_floor = 1e-250;
  int min_points = 3;
  double bin_width = 0.5;  // log10 envelope bins; 0 fits the raw points
  double min_span = 0.9;   // decades the used bins must cover
};

/// Least-squares slope of log10 |I| against log10 t on per-octave envelope
/// maxima of the upper part of the ladder.
DecayFit fit_decay(const std::vector<double>& t,
                   const std::vector<double>& abs_values,
                   const FitOptions& opt = {});

struct DecayRow {
  int x_id;
  Vec xi;
  double t;
  double abs_integral;
};

struct DecaySeries {
  int x_id;
  Vec xi;
  DecayFit fit;
  bool excluded = false;  // e.g. inside the frequency exclusion ball
};

struct DecayReport {
  std::vector<DecayRow> rows;
  std::vector<DecaySeries> series;
  double min_slope = 0.0;
  double max_slope = 0.0;
  double target_slope = 0.0;
  bool pass = false;
  double max_quadrature_error = 0.0;

  void write_csv(std::ostream& os) const;
};

// -- condition U ---------------------------------------------------------------

/// One condition-U experiment: stabilizer points, a finite-dimensional rep of
/// H, a bump on g_x, vectors and density scalars, a covector grid, a t
/// ladder, and the density exponent.
struct DecayProbe {
  HomogeneousSpaceSpec space;
  std::vector<StabilizerPoint> points;
  UnitaryRepFD rep;
  BumpFunction bump;
  CVec v1, v2;
  Complex z1{1.0, 0.0}, z2{1.0, 0.0};
  std::vector<Covector> xi_grid;  // ambient covectors; q_x restricts them
  std::vector<double> t_grid;     // strictly increasing
  double alpha = 0.5;
  int quad_nodes = 257;
  double target_slope = 0.0;      // pass iff max reliable slope <= target
  /// Pairs (x, xi) with |q_x(xi)| below this radius sit inside the frequency
  /// ball of the fiber and are excluded from the uniformity claim.
  double exclusion_radius = 0.0;
  FitOptions fit;
};

/// For each (x, xi) integrates the fiber matrix-coefficient transform
///   int_{g_x} <tau_x(e^Y) v1, v2> sigma_x(e^Y)^alpha phi(Y) e^{i t <xi,Y>} dY
/// over the t ladder, fits decay slopes, and aggregates uniformity over x.
DecayReport condition_u_probe(const DecayProbe& probe,
                              ExecPolicy policy = ExecPolicy::Parallel);
DecayReport condition_u_probe_serial(const DecayProbe& probe);

/// Matrix coefficient <tau_x(exp(Y)) v1, v2> at a stabilizer point, with Y
/// given in ambient coordinates inside g_x. route_b evaluates through the
/// conjugated differential instead of the evaluator (used by the conjugation
/// identity test).
Complex tau_x_coefficient(const UnitaryRepFD& rep, const StabilizerPoint& pt,
                          const Vec& y_coords, const CVec& v1, const CVec& v2,
                          bool route_b = false);

// -- uniform non-stationary phase ------------------------------------------------

struct NspConfig {
  BumpFunction bump;
  std::vector<Vec> xi_directions;  // unit dual coords on the g_x frame
  std::vector<double> xi_scales;   // |xi| ladder
  std::vector<double> t_grid;
  double exclusion_eps = 0.15;  // skip xi inside B_{2 eps}(q_x(eta))
  int quad_nodes = 513;
  double target_t_slope = 0.0;
  double target_xi_exponent = 0.0;
  FitOptions fit;
};

struct NspReport {
  DecayReport t_decay;            // per xi direction at the largest scale
  double xi_exponent = 0.0;       // fitted exponent in <xi> at fixed t
  double xi_exponent_residual = 0.0;
  int excluded_directions = 0;
  bool pass = false;
};

/// Decay of int_{g_x} e^{t(<xi,Y> - <eta, log(e^Y e^Z)>)} phi(Y) dY in t and
/// |xi|, for xi in i g_x* away from the ball around q_x(eta).
NspReport nonstationary_phase_check(const HomogeneousSpaceSpec& space,
                                    const StabilizerPoint& pt,
                                    const Covector& eta,
                                    const AlgebraElement& z,
                                    const NspConfig& config);

/// Sweep of the cutoff order N with matched bump order: returns per-N fitted
/// constants gamma_N = (sup_t t^N |I(t)| / (N+1)^N)^{1/(N+1)}, which stay
/// bounded when the decay constants grow no faster than C^{N+1} (N+1)^N.
std::vector<double> ss_constant_sweep(int n_max, double xi_dual,
                                      const std::vector<double>& t_grid,
                                      double u1_halfwidth = 0.3,
                                      double u2_halfwidth = 0.9,
                                      int grid_resolution = 513);

}  // namespace orbitcone

#endif
