// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and thresholds are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "orbitcone/builtin_specs.hpp"
#include "orbitcone/cases.hpp"
#include "orbitcone/catalog.hpp"
#include "orbitcone/cones.hpp"
#include "orbitcone/homspace.hpp"
#include "orbitcone/json_io.hpp"
#include "orbitcone/oscillatory.hpp"
#include "oracles.hpp"

using namespace orbitcone;

namespace {

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i)
    t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return t;
}

bool check(std::ostream& os, bool ok, const std::string& what) {
  if (!ok) os << " [failed: " << what << "]";
  return ok;
}

// ---- criterion 1: algebra invariants ---------------------------------------

bool criterion1(std::ostream& os) {
  bool ok = true;
  std::vector<SpecPtr> specs = {make_sl2(), make_su2(), make_sp(2)};

  // Ad*-compatibility, 1e4 trials.
  {
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
      const SpecPtr& s = specs[i % specs.size()];
      Rng rng = Rng::at(1001, i);
      GroupSampler sampler{s, 3, 1.0};
      GroupElement g = sampler.sample(rng);
      Covector xi{s, random_unit_element(s, rng).coords};
      AlgebraElement y = random_unit_element(s, rng);
      GroupElement ginv{s, g.matrix.inverse()};
      double lhs = trace_pairing(coadjoint(g, xi), y);
      double rhs = trace_pairing(xi, adjoint(ginv, y));
      if (std::abs(lhs - rhs) > 1e-9) ++failures;
    }
    os << " adstar_failures=" << failures;
    ok &= check(os, failures == 0, "Ad* compatibility");
  }

  // Classification conjugation invariance, 1e4 checked trials away from the
  // class boundary (tolerance scaled by the conjugation conditioning).
  {
    SpecPtr sl2 = make_sl2();
    GroupSampler sampler{sl2, 4, 2.3};
    int failures = 0, checked = 0;
    for (int i = 0; checked < 10000 && i < 40000; ++i) {
      Rng rng = Rng::at(1002, i);
      AlgebraElement y = random_unit_element(sl2, rng);
      GroupElement g = sampler.sample(rng);
      double cond = g.matrix.norm() * g.matrix.inverse().norm();
      double guard = std::max(0.02, 1e-12 * cond * cond);
      double disc = y.coords[0] * y.coords[0] + y.coords[1] * y.coords[1] -
                    y.coords[2] * y.coords[2];
      if (std::abs(disc) < guard) continue;
      ++checked;
      ElementClass base = classify(y);
      ElementClass conj = classify(adjoint(g, y));
      if (conj.kind != base.kind) ++failures;
      ElementClass scaled =
          classify({sl2, Vec(rng.uniform(0.1, 10.0) * y.coords)});
      if (scaled.kind != base.kind) ++failures;
    }
    os << " conj_failures=" << failures << "/" << checked;
    ok &= check(os, checked >= 10000 && failures == 0,
                "classification conjugation invariance");
  }

  // exp/log roundtrip, 1e4 trials.
  {
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
      const SpecPtr& s = specs[i % specs.size()];
      Rng rng = Rng::at(1003, i);
      AlgebraElement u = random_unit_element(s, rng);
      AlgebraElement y{s, Vec(rng.uniform(0.0, 0.5) * u.coords)};
      AlgebraElement back = group_log(group_exp(y));
      if ((back.coords - y.coords).norm() > 1e-9) ++failures;
    }
    os << " roundtrip_failures=" << failures;
    ok &= check(os, failures == 0, "exp/log roundtrip");
  }
  return ok;
}

// ---- criterion 2: annihilator exactness ------------------------------------

bool criterion2(std::ostream& os) {
  bool ok = true;
  SpecPtr sl2 = make_sl2();
  {
    InducedConeSpec ind{sl2, sl2_n_subalgebra(), {}};
    auto ann = annihilator(ind);
    ok &= check(os, ann.size() == 2, "ann(n) dimension");
    Mat span(3, 2);
    for (int j = 0; j < 2; ++j) span.col(j) = ann[j].coords;
    double worst = 0;
    for (const Vec& target : {v3(1, 0, 0), v3(0, 0.5, -0.5)}) {
      Vec c = span.colPivHouseholderQr().solve(target);
      worst = std::max(worst, (span * c - target).norm());
    }
    for (const auto& a : ann)
      worst = std::max(worst, std::abs(a.coords[1] + a.coords[2]));
    os << " ann_n_span_residual=" << worst;
    ok &= check(os, worst < 1e-12, "ann(n) = b span equality");
  }
  for (int k : {2, 3}) {
    SpecPtr prod = make_sl2_product(k);
    InducedConeSpec ind{prod, product_diagonal_subalgebra(prod, k), {}};
    auto ann = annihilator(ind);
    ok &= check(os, static_cast<int>(ann.size()) == 3 * (k - 1),
                "ann(diag) dimension");
    // projector identity: every annihilator vector has block sum zero, and
    // the projector onto {sum = 0} fixes the annihilator basis.
    double worst = 0;
    for (const auto& a : ann) {
      Vec sum = Vec::Zero(3);
      for (int b = 0; b < k; ++b) sum += a.coords.segment(3 * b, 3);
      worst = std::max(worst, sum.norm());
      Vec projected = a.coords;
      for (int b = 0; b < k; ++b) projected.segment(3 * b, 3) -= sum / k;
      worst = std::max(worst, (projected - a.coords).norm());
    }
    os << " ann_diag" << k << "_residual=" << worst;
    ok &= check(os, worst < 1e-12, "ann(diag) projector identity");
  }
  return ok;
}

// ---- criterion 3: SL2/N induced cone ----------------------------------------

bool criterion3(std::ostream& os) {
  bool ok = true;
  SpecPtr sl2 = make_sl2();
  InducedConeSpec ind{sl2, sl2_n_subalgebra(), {}};
  ConeSampleSet cone = sample_induced_cone(ind, 10000, 33);
  int elliptic = 0;
  for (const Vec& s : cone.samples)
    if (classify_matrix(*sl2, sl2->matrix(s)).kind ==
        ElementKind::SemisimpleElliptic)
      ++elliptic;
  os << " elliptic=" << elliptic << "/" << cone.samples.size();
  ok &= check(os, elliptic == 0, "no elliptic samples");

  Covector ell{sl2, v3(0, 0, 1)};
  double to_pred = distance_to_cone(ell, sl2_hyp_nilp_cone(sl2));
  double target = std::sqrt(2.0 - std::sqrt(2.0));
  double oracle = oracle::sl2_elliptic_to_quadric_distance();
  os << " dist_pred=" << to_pred;
  ok &= check(os, std::abs(to_pred - target) < 1e-6,
              "predicate distance sqrt(2 - sqrt 2)");
  ok &= check(os, std::abs(to_pred - oracle) < 1e-6, "oracle agreement");

  double to_cloud = distance_to_cone(ell, cone);
  os << " dist_cloud=" << to_cloud;
  ok &= check(os, to_cloud >= 0.7, "cloud distance >= 0.7");
  return ok;
}

// ---- criterion 4: Sp criterion -----------------------------------------------

bool criterion4(std::ostream& os) {
  bool ok = true;
  SearchBudget budget;
  for (auto [n, m] : std::vector<std::pair<int, int>>{
           {1, 0}, {2, 1}, {3, 1}, {4, 2}}) {
    EllipticSearchResult res = sp_regular_elliptic_search(n, m, budget, 44);
    os << " (" << n << "," << m << ")=" << (res.found ? "found" : "none");
    ok &= check(os, res.found, "witness search");
    if (res.found) {
      ClassifyOptions tight;
      tight.sv_rel_tol = 1e-10;
      ElementClass cls = classify({make_sp(n), res.witness}, tight);
      ok &= check(os,
                  cls.kind == ElementKind::SemisimpleElliptic && cls.regular,
                  "witness re-verification at 1e-10");
    }
  }
  for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 2}, {4, 3}}) {
    SearchBudget b2;
    b2.classify_samples = 10000;
    EllipticSearchResult res = sp_regular_elliptic_search(n, m, b2, 44);
    os << " (" << n << "," << m << ")_nonreg=" << res.nonregular_fraction;
    ok &= check(os, !res.found, "no witness on the 2m>n side");
    ok &= check(os, res.nonregular_fraction == 1.0,
                "100% non-regular samples");
  }
  return ok;
}

// ---- criterion 5: triple-space feasibility -------------------------------------

bool criterion5(std::ostream& os) {
  bool ok = true;
  SpecPtr sl2 = make_sl2();
  Vec j3 = v3(0, 0, 1);
  OrbitSumOptions opt;
  auto tuple = [&](std::initializer_list<double> ts) {
    std::vector<AlgebraElement> out;
    for (double t : ts) out.push_back({sl2, Vec(t * j3)});
    return out;
  };
  double r1 = orbit_sum_residual(tuple({5, -2, -2}), opt, 55).residual;
  double r2 = orbit_sum_residual(tuple({1, -1}), opt, 55).residual;
  double r3 = orbit_sum_residual(tuple({1, 1, 1}), opt, 55).residual;
  double r4 = orbit_sum_residual(tuple({1, -2, -2}), opt, 55).residual;
  os << " r(5,-2,-2)=" << r1 << " r(1,-1)=" << r2 << " r(1,1,1)=" << r3
     << " r(1,-2,-2)=" << r4;
  ok &= check(os, r1 <= 1e-6, "(5,-2,-2) feasible");
  ok &= check(os, r2 <= 1e-6, "(1,-1) feasible");
  ok &= check(os, r3 >= 2.9, "(1,1,1) blocked");
  ok &= check(os, r4 >= 0.3, "(1,-2,-2) plateau");

  OrbitSumOptions table_opt;
  table_opt.restarts = 24;
  table_opt.max_iters = 300;
  TupleTable table =
      tuple_space_support_table(3, {-2, -1, 0, 1, 2}, table_opt, 55);
  os << " octant_agreement=" << table.agreement;
  ok &= check(os, table.agreement >= 0.95, "octant agreement >= 95%");
  return ok;
}

// ---- criterion 6: bump sequence ------------------------------------------------

bool criterion6(std::ostream& os) {
  bool ok = true;
  const int res = 2049;
  const double a = 0.3, b = 0.9;
  const double h = 2.0 * b / (res - 1);
  double c_low = 0, c_all = 0;
  for (int N = 0; N <= 8; ++N) {
    BumpFunction bump = build_bump(N, {"box", (Vec(1) << a).finished()},
                                   {"box", (Vec(1) << b).finished()}, res);
    // plateau and support exactness on the grid
    for (int i = 0; i < res; ++i) {
      double x = -b + h * i;
      if (std::abs(x) <= a && bump.grid_values[i] != 1.0)
        ok &= check(os, false, "plateau exactness");
      if (std::abs(x) > b && bump.eval1(x) != 0.0)
        ok &= check(os, false, "support exactness");
    }
    if (bump.eval1(b + 1e-9) != 0.0 || bump.eval1(-b - 1e-9) != 0.0)
      ok &= check(os, false, "support endpoint");
    std::vector<double> v = bump.grid_values;
    for (int k = 1; k <= 4; ++k) {
      std::vector<double> d(v.size() - 1);
      for (std::size_t i = 0; i + 1 < v.size(); ++i)
        d[i] = (v[i + 1] - v[i]) / h;
      v = d;
      double sup = 0;
      for (double x : v) sup = std::max(sup, std::abs(x));
      double c = std::pow(sup / std::pow(N + 1.0, k), 1.0 / (k + 1));
      if (N <= 4) c_low = std::max(c_low, c);
      c_all = std::max(c_all, c);
    }
  }
  os << " C_fit=" << c_all << " C_fit_N<=4=" << c_low;
  ok &= check(os, c_all <= 1.2 * c_low, "single fitted constant across (N,k)");
  return ok;
}

// ---- criterion 7: decay slopes ---------------------------------------------------

bool criterion7(std::ostream& os) {
  bool ok = true;
  // windowed transform of the order-4 bump over t in [1e2, 1e4]
  {
    BumpFunction bump = build_bump(4, {"box", (Vec(1) << 0.3).finished()},
                                   {"box", (Vec(1) << 0.9).finished()}, 0);
    GridFunction f = GridFunction::tabulate(
        1, (Vec(1) << 0.9).finished(), {32769},
        [&](const Vec& y) { return Complex(bump.eval(y), 0.0); });
    Vec xi(1);
    xi << 1.0;
    std::vector<double> used, vals;
    for (double t : geometric(1e2, 1e4, 60)) {
      OscIntegral I = oscillatory_integral(f, xi, t);
      if (std::abs(I.value) > 10 * I.error_estimate) {
        used.push_back(t);
        vals.push_back(std::abs(I.value));
      }
    }
    DecayFit fit = fit_decay(used, vals);
    os << " bump4_slope=" << fit.slope;
    ok &= check(os, fit.reliable && fit.slope <= -3.5, "bump(4) slope <= -3.5");
  }
  // non-stationary phase: z perturbation and xi exponent
  {
    SpecPtr sl2 = make_sl2();
    HomogeneousSpaceSpec space{"sl2/n", sl2, sl2_n_subalgebra(), {}};
    StabilizerPoint pt = stabilizer_point(space, {sl2, Mat::Identity(2, 2)});
    const int N = 3;
    NspConfig cfg;
    cfg.bump = build_bump(N, {"box", (Vec(1) << 0.3).finished()},
                          {"box", (Vec(1) << 0.9).finished()}, 0);
    cfg.xi_directions = {(Vec(1) << 1.0).finished(),
                         (Vec(1) << -1.0).finished()};
    cfg.xi_scales = {2.0, 4.0, 8.0, 16.0, 32.0};
    cfg.t_grid = geometric(30.0, 3000.0, 108);
  // box-convolution transforms carry slow alignment beats on top of the
  // power envelope; the slope criteria keep margins of two decades
  cfg.fit.residual_threshold = 0.6;
    cfg.quad_nodes = 32769;
    cfg.target_t_slope = -N + 0.5;
    cfg.target_xi_exponent = -N + 0.5;
    Covector eta{sl2, v3(0, 0, 0.4)};
    Vec zero3 = Vec::Zero(3);
    NspReport base =
        nonstationary_phase_check(space, pt, eta, {sl2, zero3}, cfg);
    Vec z = 0.05 * pt.perp_basis.col(0);
    NspReport moved = nonstationary_phase_check(space, pt, eta, {sl2, z}, cfg);
    double max_change = 0;
    for (std::size_t i = 0; i < base.t_decay.series.size(); ++i) {
      const auto& s1 = base.t_decay.series[i];
      const auto& s2 = moved.t_decay.series[i];
      if (s1.excluded || s2.excluded || !s1.fit.reliable || !s2.fit.reliable)
        continue;
      max_change = std::max(max_change, std::abs(s1.fit.slope - s2.fit.slope));
    }
    os << " nsp_slope_change=" << max_change
       << " xi_exponent=" << moved.xi_exponent;
    ok &= check(os, max_change < 0.5, "z-perturbation slope stability");
    ok &= check(os, moved.xi_exponent <= -N + 0.5, "xi exponent <= -N + 0.5");
    ok &= check(os, base.pass && moved.pass, "nsp pass at both z");
  }
  return ok;
}

// ---- criterion 8: condition U, compact case ---------------------------------------

bool criterion8(std::ostream& os) {
  bool ok = true;
  SpecPtr su2 = make_su2();
  const int N = 3;
  HomogeneousSpaceSpec space{"su2/t", su2, su2_t_subalgebra(), {}};
  GroupSampler sampler{su2, 3, 1.2};
  std::vector<StabilizerPoint> points;
  for (int i = 0; i < 16; ++i)
    points.push_back(stabilizer_point(space, sampler.at(88, i)));

  for (int char_n = 0; char_n <= 3; ++char_n) {
    DecayProbe probe;
    probe.space = space;
    probe.points = points;
    probe.rep = circle_character(su2, su2_t_subalgebra()[0], char_n);
    probe.bump = build_bump(N, {"box", (Vec(1) << 0.3).finished()},
                            {"box", (Vec(1) << 0.9).finished()}, 0);
    probe.v1 = CVec::Ones(1);
    probe.v2 = CVec::Ones(1);
    probe.alpha = 0.5;
    probe.quad_nodes = 2049;
    probe.t_grid = geometric(30.0, 3000.0, 36);
    probe.target_slope = -N + 0.5;
    // Pairs (x, xi) with q_x(xi) inside the frequency ball are excluded;
    // on SU(2)/T the stabilizer kernels sweep every direction, so the
    // exclusion is necessarily per pair.
    probe.exclusion_radius = 0.3;
    Rng rng(89);
    while (probe.xi_grid.size() < 8) {
      Vec c(3);
      for (int j = 0; j < 3; ++j) c[j] = rng.gauss();
      Covector xi{su2, c};
      if (xi.norm() < 1e-9) continue;
      probe.xi_grid.push_back({su2, Vec(c / xi.norm())});
    }
    DecayReport rep = condition_u_probe(probe);
    int included = 0;
    for (const auto& s : rep.series)
      if (!s.excluded) ++included;
    os << " n" << char_n << "_max_slope=" << rep.max_slope
       << " pairs=" << included << "/" << rep.series.size();
    ok &= check(os, included >= 32, "enough included pairs");
    ok &= check(os, rep.pass, "uniform decay outside the frequency ball");
  }

  // negative control: q_x(xi) = 0 at one sampled point, character n = 2
  {
    DecayProbe probe;
    probe.space = space;
    probe.points = {points.front()};
    probe.rep = circle_character(su2, su2_t_subalgebra()[0], 2);
    probe.bump = build_bump(N, {"box", (Vec(1) << 0.3).finished()},
                            {"box", (Vec(1) << 0.9).finished()}, 0);
    probe.v1 = CVec::Ones(1);
    probe.v2 = CVec::Ones(1);
    probe.alpha = 0.5;
    probe.quad_nodes = 2049;
    probe.t_grid = geometric(30.0, 3000.0, 36);
    probe.target_slope = -N + 0.5;
    Vec c = su2->trace_gram().ldlt().solve(
        su2->gram() * points.front().perp_basis.col(0));
    probe.xi_grid = {{su2, Vec(c / Covector{su2, c}.norm())}};
    DecayReport rep = condition_u_probe(probe);
    os << " aligned_slope=" << rep.max_slope;
    ok &= check(os,
                !rep.series.empty() && rep.series.front().fit.reliable &&
                    rep.series.front().fit.slope >= -0.5,
                "aligned frequency slope >= -0.5");
  }
  return ok;
}

// ---- criterion 9: C_Omega -----------------------------------------------------

bool criterion9(std::ostream& os) {
  bool ok = true;
  SpecPtr sl2 = make_sl2();
  HomogeneousSpaceSpec space{"sl2/n", sl2, sl2_n_subalgebra(), {}};

  Covector unit_ell{sl2, v3(0, 0, 1.0 / std::sqrt(2.0))};
  COmegaResult ell = c_omega(space, unit_ell, 0.1, 2000, 8, 99);
  os << " ell=" << ell.value;
  ok &= check(os, ell.value >= 1e-3, "elliptic C_Omega positive");

  Covector unit_hyp{sl2, v3(1.0 / std::sqrt(2.0), 0, 0)};
  COmegaResult hyp = c_omega(space, unit_hyp, 0.01, 10000, 8, 99);
  os << " hyp=" << hyp.value;
  ok &= check(os, hyp.value <= 1e-2, "hyperbolic C_Omega collapses");

  HomogeneousSpaceSpec full{"sl2/sl2", sl2, full_subalgebra(sl2), {}};
  Covector eta{sl2, v3(0.3, 0.1, 0.8)};
  COmegaResult fullres = c_omega(full, eta, 0.25, 200, 8, 99);
  os << " full=" << fullres.value << " target=" << (eta.norm() - 0.25);
  ok &= check(os, std::abs(fullres.value - (eta.norm() - 0.25)) < 1e-9,
              "H=G closed form");
  return ok;
}

// ---- criterion 10: density machinery --------------------------------------------

bool criterion10(std::ostream& os) {
  bool ok = true;
  SpecPtr sl2 = make_sl2();
  HomogeneousSpaceSpec n_space{"sl2/n", sl2, sl2_n_subalgebra(), {}};
  HomogeneousSpaceSpec b_space{"sl2/b", sl2, sl2_b_subalgebra(), {}};

  DensityReport n_rep = has_invariant_density(n_space);
  ok &= check(os, n_rep.invariant && n_rep.max_log_defect < 1e-10,
              "SL2/N invariant density");
  DensityReport b_rep = has_invariant_density(b_space);
  os << " b_exponent=" << b_rep.generator_exponents[0];
  ok &= check(os, !b_rep.invariant, "SL2/B not unimodular");
  ok &= check(os, std::abs(b_rep.generator_exponents[0] + 2.0) < 1e-8,
              "modular exponent -2");

  StabilizerPoint pt_b = stabilizer_point(b_space, {sl2, Mat::Identity(2, 2)});
  double worst = 0;
  for (double t : {-0.9, -0.3, 0.2, 0.8})
    worst = std::max(worst,
                     std::abs(half_density_character(b_space, pt_b,
                                                     {sl2, v3(t, 0, 0)}, 0.5) -
                              std::exp(t)));
  os << " hdc_b_residual=" << worst;
  ok &= check(os, worst < 1e-8, "SL2/B half density e^t");

  StabilizerPoint pt_n = stabilizer_point(n_space, {sl2, Mat::Identity(2, 2)});
  Vec e = sl2_n_subalgebra()[0];
  double worst_n = 0;
  for (double t : {-1.0, 0.5, 1.5})
    worst_n = std::max(
        worst_n, std::abs(half_density_character(n_space, pt_n,
                                                 {sl2, Vec(t * e)}, 0.5) -
                          1.0));
  os << " hdc_n_residual=" << worst_n;
  ok &= check(os, worst_n < 1e-8, "SL2/N half density 1");
  return ok;
}

// ---- criterion 11: Whittaker counterexample ---------------------------------------

bool criterion11(std::ostream& os) {
  bool ok = true;
  WhittakerOptions opt;
  for (int sign : {+1, -1, 0}) {
    WhittakerReport rep = whittaker_counterexample_check(sign, opt, 1111);
    os << " sign" << sign << "=" << to_string(rep.relation);
    if (sign == 0) {
      ok &= check(os, rep.relation == ConeRelation::Equal, "lambda=0 equality");
    } else {
      ok &= check(os, rep.relation == ConeRelation::StrictSubset,
                  "strict inclusion");
      std::string want =
          std::string("semisimple-elliptic") + (sign > 0 ? "+" : "-");
      os << " witness=" << rep.witness_kind << " d=" << rep.witness_distance;
      ok &= check(os, rep.witness_kind == want, "witness sign");
      ok &= check(os, rep.witness_distance >= 0.5, "witness distance >= 0.5");
    }
  }
  return ok;
}

// ---- criterion 12: determinism -----------------------------------------------

bool criterion12(std::ostream& os) {
  bool ok = true;
  SpecPtr sl2 = make_sl2();
  InducedConeSpec ind{sl2, sl2_n_subalgebra(), {}};

  auto cone_dump = [&](ExecPolicy policy) {
    ConeSampleSet cone = sample_induced_cone(ind, 3000, 777, policy);
    return cone_to_json(cone).dump();
  };
  std::string a = cone_dump(ExecPolicy::Parallel);
  std::string b = cone_dump(ExecPolicy::Parallel);
  std::string c = cone_dump(ExecPolicy::Serial);
  ok &= check(os, a == b, "repeat run byte-identical");
  ok &= check(os, a == c, "parallel/serial byte-identical");

  HomogeneousSpaceSpec space{"sl2/n", sl2, sl2_n_subalgebra(), {}};
  Covector eta{sl2, v3(0, 0, 1.0 / std::sqrt(2.0))};
  auto comega_dump = [&](ExecPolicy policy) {
    COmegaResult r = policy == ExecPolicy::Serial
                         ? c_omega_serial(space, eta, 0.1, 500, 8, 3)
                         : c_omega(space, eta, 0.1, 500, 8, 3, policy);
    Json j;
    j["value"] = r.value;
    j["worst_x_index"] = r.worst_x_index;
    j["per_x"] = r.per_x_values;
    return j.dump();
  };
  ok &= check(os, comega_dump(ExecPolicy::Parallel) ==
                      comega_dump(ExecPolicy::Serial),
              "c_omega parallel/serial byte-identical");

  CaseResult case_a = run_case(builtin_case("pair-1-m1"), 9);
  CaseResult case_b = run_case(builtin_case("pair-1-m1"), 9);
  ok &= check(os, case_a.to_json().dump() == case_b.to_json().dump(),
              "case report byte-identical");
  return ok;
}

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);
  }

  std::vector<Criterion> criteria = {
      {1, "algebra invariants (10^4 trials each)", criterion1},
      {2, "annihilator exactness", criterion2},
      {3, "SL2/N induced cone and elliptic distance", criterion3},
      {4, "Sp(2n)/Sp(2m) regular elliptic criterion", criterion4},
      {5, "triple-space feasibility and octant table", criterion5},
      {6, "bump sequence bounds", criterion6},
      {7, "decay slopes (windowed transform, NSP)", criterion7},
      {8, "condition U on the compact case", criterion8},
      {9, "C_Omega estimates", criterion9},
      {10, "density machinery", criterion10},
      {11, "Whittaker counterexample cones", criterion11},
      {12, "determinism of reports", criterion12},
  };

  bool all_ok = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    std::ostringstream detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << " [exception: " << e.what() << "]";
    }
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": "
              << c.label << " (" << std::fixed << secs << "s)"
              << detail.str() << "\n";
    std::cout.unsetf(std::ios_base::fixed);
    all_ok &= ok;
  }
  return all_ok ? 0 : 1;
}
