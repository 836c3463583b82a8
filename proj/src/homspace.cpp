#include "orbitcone/homspace.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

namespace orbitcone {

StabilizerPoint stabilizer_point(const HomogeneousSpaceSpec& spec,
                                 const GroupElement& g) {
  if (spec.algebra != g.algebra)
    throw AlgebraError("stabilizer_point with mismatched algebras");
  std::vector<Vec> conj;
  conj.reserve(spec.subalgebra.size());
  for (const Vec& w : spec.subalgebra)
    conj.push_back(adjoint(g, {spec.algebra, w}).coords);
  StabilizerPoint pt{g, spec.algebra->orthonormalize(conj), Mat(), std::nullopt};
  pt.perp_basis = spec.algebra->orthogonal_complement(pt.gx_basis);
  return pt;
}

namespace {

// Matrix of Ad(h) acting on the quotient model span(perp): entries
// <p_i, pr_perp(Ad(h) p_j)> in the fixed inner product.
Mat quotient_action(const LieAlgebraSpec& alg, const Mat& perp, const Mat& h) {
  const int q = static_cast<int>(perp.cols());
  Mat K(q, q);
  Mat hinv = h.inverse();
  for (int j = 0; j < q; ++j) {
    Mat conj = h * alg.matrix(perp.col(j)) * hinv;
    Vec c = alg.to_coords(conj);
    K.col(j) = perp.transpose() * (alg.gram() * c);
  }
  return K;
}

}  // namespace

DensityReport has_invariant_density(const HomogeneousSpaceSpec& spec,
                                    int t_points, double t_max) {
  const LieAlgebraSpec& alg = *spec.algebra;
  Mat onb = alg.orthonormalize(spec.subalgebra);
  Mat perp = alg.orthogonal_complement(onb);

  DensityReport rep{true, 0.0, {}};
  if (perp.cols() == 0) return rep;  // zero-dimensional fiber complement

  // Exact per-generator modular exponent: d/dt log det Ad(exp tW)|_{g/h}
  // equals tr(ad_W on the quotient).
  for (const Vec& w : spec.subalgebra) {
    Mat ad = alg.ad_matrix(w);
    Mat block = perp.transpose() * alg.gram() * ad * perp;
    rep.generator_exponents.push_back(block.trace());
  }

  auto account = [&](const Mat& h) {
    double ld = std::log(std::abs(quotient_action(alg, perp, h).determinant()));
    rep.max_log_defect = std::max(rep.max_log_defect, std::abs(ld));
  };
  for (const Vec& w : spec.subalgebra)
    for (int i = 1; i <= t_points; ++i) {
      double t = t_max * i / t_points;
      account((t * alg.matrix(w)).exp());
      account((-t * alg.matrix(w)).exp());
    }
  for (const Mat& h : spec.subgroup_generators) account(h);

  rep.invariant = rep.max_log_defect < 1e-10;
  for (double e : rep.generator_exponents)
    if (std::abs(e) > 1e-10) rep.invariant = false;
  return rep;
}

double half_density_character(const HomogeneousSpaceSpec& spec,
                              const StabilizerPoint& pt,
                              const AlgebraElement& y, double alpha) {
  const LieAlgebraSpec& alg = *spec.algebra;
  // y must lie in g_x.
  Vec in_gx = pt.gx_basis * (pt.gx_basis.transpose() * (alg.gram() * y.coords));
  double ynorm = alg.norm(y.coords);
  if (alg.norm(Vec(y.coords - in_gx)) > 1e-8 * std::max(1.0, ynorm))
    throw AlgebraError("half_density_character: y is not in g_x");
  if (pt.perp_basis.cols() == 0) return 1.0;
  Mat h = y.matrix().exp();
  double det = quotient_action(alg, pt.perp_basis, h).determinant();
  return std::pow(std::abs(det), -alpha);
}

AlgebraElement y_x_field(const StabilizerPoint& pt, const Covector& eta0,
                         double rel_tol) {
  const LieAlgebraSpec& alg = *eta0.algebra;
  Vec u = eta0.ip_representative();
  Vec proj = pt.gx_basis * (pt.gx_basis.transpose() * (alg.gram() * u));
  double pn = alg.norm(proj);
  if (pn <= rel_tol * std::max(1.0, alg.norm(u)))
    throw ConeError(
        "y_x_field: zero projection (eta0 lies in i(g/g_x)* at this point)");
  return {eta0.algebra, Vec(proj / pn)};
}

PhaseDerivative phase_derivative(const Covector& xi, const AlgebraElement& y,
                                 const GroupElement& g, double step_scale,
                                 double injectivity_radius) {
  if (xi.algebra != y.algebra || xi.algebra != g.algebra)
    throw AlgebraError("phase_derivative with mismatched algebras");
  Mat ym = y.matrix();
  auto f = [&](double s) {
    GroupElement moved{g.algebra, (s * ym).exp() * g.matrix};
    return trace_pairing(xi, group_log(moved, injectivity_radius));
  };
  double h = step_scale * std::max(1.0, y.norm());
  double d_h = (f(h) - f(-h)) / (2 * h);
  double d_h2 = (f(h / 2) - f(-h / 2)) / h;
  PhaseDerivative out;
  out.value = (4.0 * d_h2 - d_h) / 3.0;
  out.error_estimate = std::abs(d_h2 - d_h) / 3.0 + 1e-13 * std::abs(out.value);
  return out;
}

double product_chart_jacobian(const StabilizerPoint& pt,
                              const AlgebraElement& y, const AlgebraElement& z,
                              double chart_radius, double fd_step) {
  const LieAlgebraSpec& alg = *y.algebra;
  const int d = alg.dim();
  const int k = pt.sub_dim();
  if (y.norm() + z.norm() > chart_radius)
    throw AlgebraError("product_chart_jacobian: chart radius exceeded");

  Mat frame(d, d);
  frame.leftCols(k) = pt.gx_basis;
  frame.rightCols(d - k) = pt.perp_basis;

  // kappa in orthonormal frame coordinates on both sides.
  auto kappa = [&](const Vec& frame_coords) -> Vec {
    Vec cy = pt.gx_basis * frame_coords.head(k);
    Vec cz = pt.perp_basis * frame_coords.tail(d - k);
    Mat gm = alg.matrix(cy).exp() * alg.matrix(cz).exp();
    AlgebraElement lg = group_log({y.algebra, gm}, 10.0);
    return frame.transpose() * (alg.gram() * lg.coords);
  };

  Vec base(d);
  base.head(k) = pt.gx_basis.transpose() * (alg.gram() * y.coords);
  base.tail(d - k) = pt.perp_basis.transpose() * (alg.gram() * z.coords);

  Mat J(d, d);
  for (int i = 0; i < d; ++i) {
    Vec hi = base, lo = base;
    hi[i] += fd_step;
    lo[i] -= fd_step;
    J.col(i) = (kappa(hi) - kappa(lo)) / (2 * fd_step);
  }
  return std::abs(J.determinant());
}

namespace {

double c_omega_one_point(const HomogeneousSpaceSpec& spec, const Covector& eta0,
                         double omega_radius, int n_dir, std::uint64_t seed,
                         std::uint64_t index, const GroupSampler& sampler,
                         double* projection_out) {
  const LieAlgebraSpec& alg = *spec.algebra;
  Rng rng = Rng::at(seed, index);
  GroupElement g = sampler.sample(rng);
  StabilizerPoint pt = stabilizer_point(spec, g);

  Vec dual = alg.trace_gram() * eta0.coords;  // <eta0, .> on coordinates
  // Analytic maximizer: the normalized projection of the representative.
  Vec u = eta0.ip_representative();
  Vec pc = pt.gx_basis.transpose() * (alg.gram() * u);
  double best = 0.0;
  if (pc.norm() > 1e-14) {
    Vec ymax = pt.gx_basis * pc;
    ymax /= alg.norm(ymax);
    best = std::abs(dual.dot(ymax));
  }
  const int k = pt.sub_dim();
  for (int j = 0; j < n_dir; ++j) {
    Vec w(k);
    for (int i = 0; i < k; ++i) w[i] = rng.gauss();
    if (w.norm() < 1e-14) continue;
    Vec ydir = pt.gx_basis * w;
    ydir /= alg.norm(ydir);
    best = std::max(best, std::abs(dual.dot(ydir)));
  }
  if (projection_out) *projection_out = best;
  return std::max(best - omega_radius, 0.0);
}

}  // namespace

COmegaResult c_omega(const HomogeneousSpaceSpec& spec, const Covector& eta0,
                     double omega_radius, int n_x, int n_dir,
                     std::uint64_t seed, ExecPolicy policy,
                     const GroupSampler* sampler) {
  if (eta0.norm() == 0.0) throw ConeError("c_omega: eta0 must be nonzero");
  GroupSampler default_sampler{spec.algebra, 3, 1.5};
  const GroupSampler& gs = sampler ? *sampler : default_sampler;

  struct PerX {
    double value;
    double projection;
  };
  auto vals = par::map_indexed<PerX>(
      static_cast<std::size_t>(n_x), policy, [&](std::size_t i) -> PerX {
        PerX px{};
        px.value = c_omega_one_point(spec, eta0, omega_radius, n_dir, seed, i,
                                     gs, &px.projection);
        return px;
      });

  COmegaResult out;
  out.n_x = n_x;
  out.omega_radius = omega_radius;
  out.value = std::numeric_limits<double>::infinity();
  out.worst_x_index = -1;
  out.worst_projection = 0.0;
  out.per_x_values.reserve(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out.per_x_values.push_back(vals[i].value);
    if (vals[i].value < out.value) {
      out.value = vals[i].value;
      out.worst_x_index = static_cast<int>(i);
      out.worst_projection = vals[i].projection;
    }
  }
  return out;
}

COmegaResult c_omega_serial(const HomogeneousSpaceSpec& spec,
                            const Covector& eta0, double omega_radius, int n_x,
                            int n_dir, std::uint64_t seed,
                            const GroupSampler* sampler) {
  if (eta0.norm() == 0.0) throw ConeError("c_omega: eta0 must be nonzero");
  GroupSampler default_sampler{spec.algebra, 3, 1.5};
  const GroupSampler& gs = sampler ? *sampler : default_sampler;

  COmegaResult out;
  out.n_x = n_x;
  out.omega_radius = omega_radius;
  out.value = std::numeric_limits<double>::infinity();
  out.worst_x_index = -1;
  out.worst_projection = 0.0;
  for (int i = 0; i < n_x; ++i) {
    double proj = 0.0;
    double v = c_omega_one_point(spec, eta0, omega_radius, n_dir, seed,
                                 static_cast<std::uint64_t>(i), gs, &proj);
    out.per_x_values.push_back(v);
    if (v < out.value) {
      out.value = v;
      out.worst_x_index = i;
      out.worst_projection = proj;
    }
  }
  return out;
}

}  // namespace orbitcone
