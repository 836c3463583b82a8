#include "orbitcone/catalog.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitcone/builtin_specs.hpp"

namespace orbitcone {

namespace {

struct Spectrum {
  double max_abs_re = 0;
  double min_gap = 0;
};

Spectrum spectral_score(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  Spectrum s;
  if (es.info() != Eigen::Success) {
    s.max_abs_re = 1e300;
    return s;
  }
  CVec eig = es.eigenvalues();
  s.min_gap = 1e300;
  for (int i = 0; i < eig.size(); ++i) {
    s.max_abs_re = std::max(s.max_abs_re, std::abs(eig[i].real()));
    for (int j = i + 1; j < eig.size(); ++j)
      s.min_gap = std::min(s.min_gap, std::abs(eig[i] - eig[j]));
  }
  return s;
}

double ellipticity_score(const Mat& m) {
  Spectrum s = spectral_score(m);
  return s.min_gap - 20.0 * s.max_abs_re;
}

int centralizer_dim(const LieAlgebraSpec& alg, const Vec& coords) {
  Mat ad = alg.ad_matrix(coords);
  Eigen::JacobiSVD<Mat> svd(ad);
  double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  double tol = 1e-8 * std::max(1.0, top);
  int ker = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] <= tol) ++ker;
  return ker;
}

}  // namespace

EllipticSearchResult regular_elliptic_search(const SpecPtr& algebra,
                                             const std::vector<Vec>& subspace,
                                             const SearchBudget& budget,
                                             std::uint64_t seed,
                                             ExecPolicy policy,
                                             bool sample_regularity) {
  if (subspace.empty())
    throw AlgebraError("regular_elliptic_search: empty subspace");
  Mat frame = algebra->orthonormalize(subspace);
  const int k = static_cast<int>(frame.cols());

  struct RestartResult {
    double score = -1e300;
    Vec point;  // frame coordinates
  };
  auto restarts = par::map_indexed<RestartResult>(
      static_cast<std::size_t>(budget.restarts), policy,
      [&](std::size_t r) -> RestartResult {
        Rng rng = Rng::at(seed, r);
        Vec x(k);
        for (int i = 0; i < k; ++i) x[i] = rng.gauss();
        x.normalize();
        double score = ellipticity_score(algebra->matrix(frame * x));
        double step = 0.5;
        for (int it = 0; it < budget.iters && step > 1e-12; ++it) {
          bool improved = false;
          for (int p = 0; p < budget.probe_dirs; ++p) {
            Vec d(k);
            for (int i = 0; i < k; ++i) d[i] = rng.gauss();
            Vec cand = x + step * d.normalized();
            cand.normalize();
            double cs = ellipticity_score(algebra->matrix(frame * cand));
            if (cs > score) {
              score = cs;
              x = cand;
              improved = true;
              break;
            }
          }
          if (!improved) step *= 0.6;
        }
        return {score, x};
      });

  EllipticSearchResult out;
  double best = -1e300;
  Vec best_x;
  for (const auto& r : restarts)
    if (r.score > best) {
      best = r.score;
      best_x = r.point;
    }
  Vec witness = frame * best_x;
  witness /= algebra->norm(witness);
  Spectrum sp = spectral_score(algebra->matrix(witness));
  out.best_max_re = sp.max_abs_re;
  out.best_min_gap = sp.min_gap;

  ClassifyOptions tight;
  tight.sv_rel_tol = 1e-10;
  try {
    ElementClass cls = classify({algebra, witness}, tight);
    out.found =
        cls.kind == ElementKind::SemisimpleElliptic && cls.regular;
  } catch (const UnclassifiableError&) {
    out.found = false;
  }
  if (out.found) out.witness = witness;

  if (sample_regularity) {
    auto flags = par::map_indexed<char>(
        static_cast<std::size_t>(budget.classify_samples), policy,
        [&](std::size_t i) -> char {
          Rng rng = Rng::at(seed ^ 0xabcdef12345ULL, i);
          Vec c(k);
          for (int j = 0; j < k; ++j) c[j] = rng.gauss();
          Vec x = frame * c;
          double n = algebra->norm(x);
          if (n < 1e-12) return 1;
          x /= n;
          return centralizer_dim(*algebra, x) > algebra->rank() ? 1 : 0;
        });
    long nonreg = std::count(flags.begin(), flags.end(), 1);
    out.nonregular_fraction =
        static_cast<double>(nonreg) / budget.classify_samples;
    out.samples_classified = budget.classify_samples;
  }
  return out;
}

EllipticSearchResult sp_regular_elliptic_search(int n, int m,
                                                const SearchBudget& budget,
                                                std::uint64_t seed,
                                                ExecPolicy policy) {
  if (m < 0 || m > n - 1)
    throw AlgebraError("sp criterion needs 0 <= m <= n-1");
  SpecPtr sp = make_sp(n);
  std::vector<Vec> q = sp_block_complement(n, m);
  bool sample = 2 * m > n;
  return regular_elliptic_search(sp, q, budget, seed, policy, sample);
}

// -- orbit sums -------------------------------------------------------------------

namespace {

struct OrbitSumProblem {
  SpecPtr algebra;
  std::vector<Mat> x_mats;
};

double descend_once(const OrbitSumProblem& prob, Rng& rng, bool random_init,
                    int max_iters, double target) {
  const LieAlgebraSpec& alg = *prob.algebra;
  const int d = alg.dim();
  const int K = static_cast<int>(prob.x_mats.size());
  const int n = alg.ambient_dim();

  std::vector<Mat> a(K);
  for (int i = 0; i < K; ++i) {
    Mat g = Mat::Identity(n, n);
    if (random_init) {
      Vec w(d);
      for (int j = 0; j < d; ++j) w[j] = 0.7 * rng.gauss();
      g = alg.matrix(w).exp();
    }
    a[i] = g * prob.x_mats[i] * g.inverse();
  }
  Mat s = Mat::Zero(n, n);
  for (const Mat& ai : a) s += ai;
  double f = s.squaredNorm();
  double step = 0.1;

  for (int it = 0; it < max_iters && f > target * target; ++it) {
    // gradient per factor in exponential coordinates
    std::vector<Vec> grads(K, Vec(d));
    double gn2 = 0;
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < d; ++j) {
        const Mat& b = alg.basis()[j];
        grads[i][j] = 2.0 * (s.transpose() * (b * a[i] - a[i] * b)).trace();
      }
      gn2 += grads[i].squaredNorm();
    }
    if (gn2 < 1e-28) break;
    double gn = std::sqrt(gn2);
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::vector<Mat> a_try(K);
      Mat s_try = Mat::Zero(n, n);
      for (int i = 0; i < K; ++i) {
        Mat w = alg.matrix(Vec(-step / gn * grads[i]));
        Mat e = w.exp();
        a_try[i] = e * a[i] * e.inverse();
        s_try += a_try[i];
      }
      double f_try = s_try.squaredNorm();
      if (f_try < f) {
        a = std::move(a_try);
        s = s_try;
        f = f_try;
        step *= 1.6;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }

  // Levenberg-Marquardt polish near a zero, variables = one exponential
  // coordinate block per factor, residual = entries of the sum.
  if (f < 0.05 * 0.05) {
    const int nv = K * d;
    const int nr = n * n;
    double lambda = 1e-3;
    for (int it = 0; it < 60 && f > 1e-30; ++it) {
      Mat J(nr, nv);
      for (int i = 0; i < K; ++i)
        for (int j = 0; j < d; ++j) {
          const Mat& b = alg.basis()[j];
          Mat col = b * a[i] - a[i] * b;
          J.col(i * d + j) = Eigen::Map<Vec>(col.data(), nr);
        }
      Vec r = Eigen::Map<Vec>(s.data(), nr);
      Mat JtJ = J.transpose() * J;
      Vec rhs = -J.transpose() * r;
      Vec delta =
          (JtJ + lambda * Mat::Identity(nv, nv)).ldlt().solve(rhs);
      std::vector<Mat> a_try(K);
      Mat s_try = Mat::Zero(n, n);
      for (int i = 0; i < K; ++i) {
        Mat e = alg.matrix(Vec(delta.segment(i * d, d))).exp();
        a_try[i] = e * a[i] * e.inverse();
        s_try += a_try[i];
      }
      double f_try = s_try.squaredNorm();
      if (f_try < f) {
        a = std::move(a_try);
        s = s_try;
        f = f_try;
        lambda = std::max(lambda * 0.3, 1e-12);
      } else {
        lambda *= 10;
        if (lambda > 1e8) break;
      }
    }
  }
  return std::sqrt(f);
}

OrbitSumResult run_orbit_sum(const std::vector<AlgebraElement>& elements,
                             const OrbitSumOptions& opt, std::uint64_t seed,
                             ExecPolicy policy) {
  if (elements.size() < 2)
    throw AlgebraError("orbit_sum_residual needs at least two elements");
  OrbitSumProblem prob;
  prob.algebra = elements.front().algebra;
  for (const auto& e : elements) {
    if (e.algebra != prob.algebra)
      throw AlgebraError("orbit_sum_residual: mixed algebras");
  }
  // Canonical argument order makes the residual symmetric in the inputs.
  std::vector<Vec> coords;
  for (const auto& e : elements) coords.push_back(e.coords);
  std::sort(coords.begin(), coords.end(), [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  });
  for (const Vec& c : coords) prob.x_mats.push_back(prob.algebra->matrix(c));

  auto residuals = par::map_indexed<double>(
      static_cast<std::size_t>(opt.restarts), policy, [&](std::size_t r) {
        Rng rng = Rng::at(seed, r);
        return descend_once(prob, rng, r != 0, opt.max_iters, opt.target);
      });
  OrbitSumResult out;
  out.residual = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < residuals.size(); ++r)
    if (residuals[r] < out.residual) {
      out.residual = residuals[r];
      out.best_restart = static_cast<int>(r);
    }
  out.budget_exhausted = out.residual > opt.target;
  return out;
}

}  // namespace

OrbitSumResult orbit_sum_residual(const std::vector<AlgebraElement>& elements,
                                  const OrbitSumOptions& opt,
                                  std::uint64_t seed, ExecPolicy policy) {
  return run_orbit_sum(elements, opt, seed, policy);
}

OrbitSumResult orbit_sum_residual_serial(
    const std::vector<AlgebraElement>& elements, const OrbitSumOptions& opt,
    std::uint64_t seed) {
  return run_orbit_sum(elements, opt, seed, ExecPolicy::Serial);
}

// -- tuple spaces -----------------------------------------------------------------

bool tuple_feasible_rule(const std::vector<double>& thetas) {
  std::vector<double> nz;
  for (double t : thetas)
    if (t != 0.0) nz.push_back(t);
  if (nz.empty()) return true;  // all orbits are {0}
  if (nz.size() == 1) return false;
  if (nz.size() == 2) return nz[0] == -nz[1];
  // three nonzero parameters: minority sign s with s * sum >= 0
  int pos = 0;
  for (double t : nz)
    if (t > 0) ++pos;
  if (pos == 0 || pos == 3) return false;
  double s = (pos == 1) ? +1.0 : -1.0;
  double sum = nz[0] + nz[1] + nz[2];
  return s * sum >= 0.0;
}

TupleTable tuple_space_support_table(int n,
                                     const std::vector<double>& grid_values,
                                     const OrbitSumOptions& opt,
                                     std::uint64_t seed, ExecPolicy policy,
                                     double feasible_threshold,
                                     double plateau_threshold) {
  if (n != 2 && n != 3)
    throw AlgebraError("tuple_space_support_table supports n = 2 or 3");
  SpecPtr sl2 = make_sl2();
  Vec j3 = Vec::Zero(3);
  j3[2] = 1.0;

  std::vector<std::vector<double>> cells;
  const int g = static_cast<int>(grid_values.size());
  int total = 1;
  for (int i = 0; i < n; ++i) total *= g;
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    std::vector<double> thetas(n);
    for (int i = n - 1; i >= 0; --i) {
      thetas[i] = grid_values[rem % g];
      rem /= g;
    }
    cells.push_back(thetas);
  }

  auto rows = par::map_indexed<TupleCell>(
      cells.size(), policy, [&](std::size_t ci) -> TupleCell {
        const auto& thetas = cells[ci];
        TupleCell cell;
        cell.thetas = thetas;
        cell.expected = tuple_feasible_rule(thetas);
        // Zero parameters contribute the zero orbit; drop them.
        std::vector<AlgebraElement> elems;
        for (double t : thetas)
          if (t != 0.0) elems.push_back({sl2, Vec(t * j3)});
        if (elems.size() < 2) {
          cell.residual = 0;
          for (const auto& e : elems) cell.residual += e.norm();
          cell.feasible = cell.residual <= feasible_threshold;
          cell.agree = (cell.feasible == cell.expected);
          return cell;
        }
        OrbitSumResult r = orbit_sum_residual(elems, opt, seed + ci,
                                              ExecPolicy::Serial);
        cell.residual = r.residual;
        if (r.residual <= feasible_threshold)
          cell.feasible = true;
        else if (r.residual >= plateau_threshold)
          cell.feasible = false;
        else
          cell.feasible = !cell.expected;  // ambiguous band counts against
        cell.agree = (cell.feasible == cell.expected);
        return cell;
      });

  TupleTable table;
  table.feasible_threshold = feasible_threshold;
  table.plateau_threshold = plateau_threshold;
  table.cells.assign(rows.begin(), rows.end());
  int agree = 0;
  for (const auto& c : table.cells)
    if (c.agree) ++agree;
  table.agreement = static_cast<double>(agree) / table.cells.size();
  return table;
}

// -- Whittaker --------------------------------------------------------------------

namespace {

// Orbit sweep of parameter ladders: points Ad*(g_i)(s_j * base) collected and
// sorted by norm. include_negatives adds -Ad*(g)(s base); valid exactly when
// the orbit of the base is symmetric (hyperbolic orbits contain both signs
// through the Weyl rotation, one-sheeted elliptic orbits do not).
std::vector<Vec> orbit_sweep_points(const SpecPtr& alg, const Vec& base,
                                    const std::vector<double>& scales,
                                    int n_g, std::uint64_t seed,
                                    bool include_negatives) {
  GroupSampler sampler{alg, 3, 1.5};
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(n_g) * scales.size() *
              (include_negatives ? 2 : 1));
  for (int i = 0; i < n_g; ++i) {
    GroupElement g = sampler.at(seed, static_cast<std::uint64_t>(i));
    Covector moved = coadjoint(g, {alg, base});
    for (double s : scales) {
      pts.push_back(s * moved.coords);
      if (include_negatives) pts.push_back(-s * moved.coords);
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
  return pts;
}

}  // namespace

WhittakerReport whittaker_counterexample_check(int lambda_sign,
                                               const WhittakerOptions& opt,
                                               std::uint64_t seed,
                                               ExecPolicy policy) {
  SpecPtr sl2 = make_sl2();
  WhittakerReport rep;
  rep.lambda_sign = lambda_sign;

  // Cone A: Ind_N^G WF(chi) with WF(chi) = {0} (matrix coefficients of the
  // unitary character are smooth).
  InducedConeSpec ind{sl2, sl2_n_subalgebra(), {}};
  ConeSampleSet a_cloud = sample_induced_cone(ind, opt.n_induced, seed, policy);
  rep.induced_sample_count = static_cast<int>(a_cloud.samples.size());
  for (const Vec& s : a_cloud.samples) {
    ElementClass cls = classify_matrix(*sl2, sl2->matrix(s));
    if (cls.kind == ElementKind::SemisimpleElliptic)
      rep.induced_elliptic_count += 1;
  }

  // Cone B from the spectral list: principal series (hyperbolic parameters)
  // always; one signed discrete-series ladder when lambda != 0.
  std::vector<double> scales;
  for (double s = opt.horizon / std::pow(2.0, opt.param_steps - 1);
       s <= opt.horizon * 1.0001; s *= 2.0)
    scales.push_back(s);
  Vec h_dir = Vec::Zero(3);
  h_dir[0] = 1.0;
  std::vector<Vec> pts = orbit_sweep_points(sl2, h_dir, scales, opt.n_sweep_g,
                                            seed + 1, /*negatives=*/true);
  if (lambda_sign != 0) {
    Vec j_dir = Vec::Zero(3);
    j_dir[2] = lambda_sign > 0 ? 1.0 : -1.0;
    auto disc = orbit_sweep_points(sl2, j_dir, scales, opt.n_sweep_g, seed + 2,
                                   /*negatives=*/false);
    pts.insert(pts.end(), disc.begin(), disc.end());
  }
  std::sort(pts.begin(), pts.end(),
            [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
  double cap = pts.empty() ? 0.0 : pts.back().norm();

  // B as an AC predicate over the swept family, with a far-direction cloud
  // for witness candidates.
  auto family = std::make_shared<ExplicitFamily>(pts, cap);
  ConeSampleSet b_cloud{sl2, {}, {"spectral-ac", seed, 0, {}}, 0};
  double dir_floor = opt.horizon / 8.0;
  for (const Vec& p : pts)
    if (p.norm() >= dir_floor) {
      Vec u = p / sl2->norm(p);
      b_cloud.samples.push_back(u);
    }

  Cone cone_a{"ind-wf", sl2, a_cloud, std::nullopt};
  Cone cone_b{"spectral-ac", sl2, b_cloud, std::nullopt};

  // Membership of A samples in B through the asymptotic-cone test.
  AcOptions ac_opt;
  ac_opt.ladder_base = opt.horizon / 100.0;
  std::size_t stride = std::max<std::size_t>(1, a_cloud.samples.size() / 2000);
  std::vector<char> a_member;
  ExplicitFamily fam(pts, cap);
  for (std::size_t i = 0; i < a_cloud.samples.size(); i += stride) {
    AcVerdict v = ac_membership(fam, a_cloud.samples[i], opt.ac_width,
                                opt.horizon / 2.0, ac_opt);
    a_member.push_back(v == AcVerdict::In ? 1 : 0);
  }
  double a_in_b_frac =
      a_member.empty()
          ? 1.0
          : static_cast<double>(std::count(a_member.begin(), a_member.end(), 1)) /
                a_member.size();

  // Witness search: B directions far from the A cloud.
  double far = 0;
  Vec witness;
  std::size_t bstride = std::max<std::size_t>(1, b_cloud.samples.size() / 3000);
  for (std::size_t i = 0; i < b_cloud.samples.size(); i += bstride) {
    double d = distance_to_cone({sl2, b_cloud.samples[i]}, a_cloud);
    if (d > far) {
      far = d;
      witness = b_cloud.samples[i];
    }
  }

  bool a_in_b = a_in_b_frac >= 0.995;
  bool b_has_excess = far > opt.compare.witness_threshold;
  if (a_in_b && !b_has_excess)
    rep.relation = ConeRelation::Equal;
  else if (a_in_b && b_has_excess)
    rep.relation = ConeRelation::StrictSubset;
  else if (b_has_excess)
    rep.relation = ConeRelation::Incomparable;
  else
    rep.relation = ConeRelation::StrictSuperset;

  if (rep.relation == ConeRelation::StrictSubset ||
      rep.relation == ConeRelation::Incomparable) {
    rep.witness = witness;
    rep.witness_distance = far;
    ElementClass cls = classify_matrix(*sl2, sl2->matrix(witness));
    std::string kind = to_string(cls.kind);
    if (cls.kind == ElementKind::SemisimpleElliptic)
      kind += witness[2] > 0 ? "+" : "-";
    rep.witness_kind = kind;
  }
  return rep;
}

// -- AC of orbit families -----------------------------------------------------------

Covector cartan_dual_lift(const SpecPtr& algebra,
                          const std::vector<Vec>& cartan, const Vec& dual) {
  const LieAlgebraSpec& alg = *algebra;
  const int d = alg.dim();
  const int r = static_cast<int>(cartan.size());
  // [g, b] spanned by brackets of the basis with the cartan generators.
  std::vector<Vec> bracket_span;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    for (const Vec& c : cartan) {
      Mat br = alg.matrix(e) * alg.matrix(c) - alg.matrix(c) * alg.matrix(e);
      bracket_span.push_back(alg.to_coords(br));
    }
  }
  Mat spanm(d, static_cast<int>(bracket_span.size()));
  for (std::size_t j = 0; j < bracket_span.size(); ++j)
    spanm.col(static_cast<long>(j)) = bracket_span[j];
  Eigen::JacobiSVD<Mat> svd(spanm, Eigen::ComputeFullU);
  double tol = 1e-10 * std::max(1.0, svd.singularValues()[0]);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  if (rank + r != d)
    throw AlgebraError("cartan_dual_lift: [g,b] does not complement b");

  Mat A(d, d);
  Vec rhs(d);
  for (int j = 0; j < r; ++j) {
    A.row(j) = (alg.trace_gram() * cartan[j]).transpose();
    rhs[j] = dual[j];
  }
  for (int j = 0; j < rank; ++j) {
    A.row(r + j) = (alg.trace_gram() * svd.matrixU().col(j)).transpose();
    rhs[r + j] = 0.0;
  }
  Vec coords = A.colPivHouseholderQr().solve(rhs);
  if ((A * coords - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
    throw AlgebraError("cartan_dual_lift: inconsistent lift");
  return {algebra, coords};
}

AcFamilyTable ac_of_orbit_family(const OrbitFamily& family,
                                 const HomogeneousSpaceSpec& space,
                                 const std::vector<Vec>& directions,
                                 double cone_width, double horizon, int n_x,
                                 std::uint64_t seed, double vanish_tol) {
  AcFamilyTable table;
  GroupSampler sampler{space.algebra, 3, 1.5};
  std::vector<StabilizerPoint> pts;
  for (int i = 0; i < n_x; ++i)
    pts.push_back(
        stabilizer_point(space, sampler.at(seed, static_cast<std::uint64_t>(i))));

  for (const Vec& dir : directions) {
    AcFamilyRow row;
    row.direction = dir;
    row.ac = ac_membership(*family.params, dir, cone_width, horizon);
    Covector amb = cartan_dual_lift(family.algebra, family.cartan, dir);
    double nrm = amb.norm();
    row.annihilator_side = false;
    for (const auto& pt : pts) {
      Vec q(pt.sub_dim());
      Vec t = family.algebra->trace_gram() * amb.coords;
      for (int i = 0; i < pt.sub_dim(); ++i) q[i] = t.dot(pt.gx_basis.col(i));
      if (q.norm() <= vanish_tol * nrm) {
        row.annihilator_side = true;
        break;
      }
    }
    if (row.ac == AcVerdict::Undecided)
      table.undecided += 1;
    else if ((row.ac == AcVerdict::In) == row.annihilator_side)
      table.agree += 1;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace orbitcone
