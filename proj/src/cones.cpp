#include "orbitcone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orbitcone {

bool ConeSampleSet::symmetric_pm() const {
  return std::find(generator.symmetry_tags.begin(),
                   generator.symmetry_tags.end(),
                   "pm") != generator.symmetry_tags.end();
}

bool ConePredicate::contains(const Vec& coords) const {
  if (rule == "union") {
    for (const auto& p : parts)
      if (p.contains(coords)) return true;
    return false;
  }
  if (rule == "quadric") {
    return coords.dot(quad_form * coords) >= -tol * coords.squaredNorm();
  }
  double scale = algebra->norm(coords);
  if (scale == 0.0) return true;  // closed cones contain 0
  Vec c = coords / scale;
  if (rule == "eig-real" || rule == "eig-nilpotent") {
    // Closed profiles need only the raw spectrum; no clustering involved.
    Eigen::EigenSolver<Mat> es(algebra->matrix(c), false);
    if (es.info() != Eigen::Success) return false;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      const Complex ev = es.eigenvalues()[i];
      if (rule == "eig-real" && std::abs(ev.imag()) > tol) return false;
      if (rule == "eig-nilpotent" && std::abs(ev) > tol) return false;
    }
    return true;
  }
  if (rule == "eig-elliptic" || rule == "eig-elliptic-signed") {
    ElementClass cls;
    try {
      cls = classify_matrix(*algebra, algebra->matrix(c));
    } catch (const UnclassifiableError&) {
      return false;  // boundary points do not certify open-type membership
    }
    if (cls.kind != ElementKind::SemisimpleElliptic) return false;
    if (rule == "eig-elliptic-signed") {
      double v = lin.dot(c);
      return sign > 0 ? v > tol : v < -tol;
    }
    return true;
  }
  throw ConeError("unknown cone predicate rule '" + rule + "'");
}

ConePredicate sl2_hyp_nilp_cone(const SpecPtr& sl2) {
  ConePredicate p;
  p.algebra = sl2;
  p.rule = "quadric";
  p.quad_form = Mat::Zero(3, 3);
  p.quad_form(0, 0) = 1.0;
  p.quad_form(1, 1) = 1.0;
  p.quad_form(2, 2) = -1.0;
  p.tol = 1e-12;
  return p;
}

ConePredicate sl2_elliptic_signed_cone(const SpecPtr& sl2, int sign) {
  ConePredicate p;
  p.algebra = sl2;
  p.rule = "eig-elliptic-signed";
  p.sign = sign;
  p.lin = Vec::Zero(3);
  p.lin[2] = 1.0;
  return p;
}

ConePredicate cone_union(std::vector<ConePredicate> parts) {
  if (parts.empty()) throw ConeError("empty cone union");
  ConePredicate p;
  p.algebra = parts.front().algebra;
  p.rule = "union";
  p.parts = std::move(parts);
  return p;
}

std::vector<Covector> annihilator(const InducedConeSpec& spec) {
  const LieAlgebraSpec& alg = *spec.algebra;
  const int d = alg.dim();
  const int k = static_cast<int>(spec.subalgebra.size());
  std::vector<Covector> out;
  if (k == 0) {
    Mat onb = alg.orthonormalize({});
    Mat full = alg.orthogonal_complement(onb);
    for (int j = 0; j < full.cols(); ++j)
      out.push_back({spec.algebra, full.col(j)});
    return out;
  }
  // Rows: <xi, W_j> = coords' T w_j = 0.
  Mat A(k, d);
  for (int j = 0; j < k; ++j)
    A.row(j) = (alg.trace_gram() * spec.subalgebra[j]).transpose();
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  double tol = 1e-12 * std::max(1.0, svd.singularValues()[0]);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  if (rank != k)
    throw ConeError(
        "annihilator: trace form is degenerate on the subalgebra embedding");
  std::vector<Vec> kernel;
  for (int j = rank; j < d; ++j) kernel.push_back(svd.matrixV().col(j));
  Mat onb = alg.orthonormalize(kernel);
  for (int j = 0; j < onb.cols(); ++j) out.push_back({spec.algebra, onb.col(j)});
  return out;
}

namespace {

// Lift of a base-cone dual vector: representative X with Tr(X W_j) = d_j,
// minimal-norm solution.
Vec lift_dual(const LieAlgebraSpec& alg, const std::vector<Vec>& sub,
              const Vec& dual) {
  const int k = static_cast<int>(sub.size());
  Mat A(k, alg.dim());
  for (int j = 0; j < k; ++j)
    A.row(j) = (alg.trace_gram() * sub[j]).transpose();
  return A.completeOrthogonalDecomposition().solve(dual);
}

struct InducedSamplerContext {
  const InducedConeSpec* spec;
  Mat ann;      // orthonormal annihilator columns
  Vec lift;     // base ray lift (empty if kind == zero)
  GroupSampler sampler;
};

InducedSamplerContext make_context(const InducedConeSpec& spec,
                                   const GroupSampler* sampler) {
  check_subalgebra(spec.algebra, spec.subalgebra);
  InducedSamplerContext ctx{&spec, Mat(), Vec(), GroupSampler{spec.algebra, 3, 1.5}};
  if (sampler) ctx.sampler = *sampler;
  auto ann = annihilator(spec);
  ctx.ann.resize(spec.algebra->dim(), static_cast<long>(ann.size()));
  for (std::size_t j = 0; j < ann.size(); ++j)
    ctx.ann.col(static_cast<long>(j)) = ann[j].coords;
  if (spec.base.kind == "ray") {
    if (spec.base.ray_dual.size() !=
        static_cast<long>(spec.subalgebra.size()))
      throw ConeError("base ray dual length != subalgebra dimension");
    ctx.lift = lift_dual(*spec.algebra, spec.subalgebra, spec.base.ray_dual);
  } else if (spec.base.kind != "zero") {
    throw ConeError("unknown base cone kind '" + spec.base.kind + "'");
  }
  return ctx;
}

InducedConeSampleDetail sample_one(const InducedSamplerContext& ctx,
                                   std::uint64_t seed, std::uint64_t index) {
  const LieAlgebraSpec& alg = *ctx.spec->algebra;
  Rng rng = Rng::at(seed, index);
  GroupElement g = ctx.sampler.sample(rng);
  Vec xi = Vec::Zero(alg.dim());
  for (int j = 0; j < ctx.ann.cols(); ++j) xi += rng.gauss() * ctx.ann.col(j);
  if (ctx.lift.size() > 0) xi += std::abs(rng.gauss()) * ctx.lift;
  InducedConeSampleDetail d;
  d.pre_conjugation = xi;
  d.g = g.matrix;
  if (alg.norm(xi) < 1e-12) {
    d.sample = Vec::Zero(alg.dim());
    return d;
  }
  Covector moved = coadjoint(g, {ctx.spec->algebra, xi});
  d.sample = moved.coords / alg.norm(moved.coords);
  return d;
}

}  // namespace

ConeSampleSet sample_induced_cone_serial(const InducedConeSpec& spec, int n,
                                         std::uint64_t seed,
                                         const GroupSampler* sampler) {
  if (n < 1) throw ConeError("sample_induced_cone needs n >= 1");
  InducedSamplerContext ctx = make_context(spec, sampler);
  if (ctx.ann.cols() == 0 && ctx.lift.size() == 0 && spec.base.kind == "zero") {
    // H = G with trivial base: the cone is {0}.
    ConeSampleSet empty{spec.algebra, {}, {"induced-cone", seed, n, {}}, n};
    return empty;
  }
  ConeSampleSet out{spec.algebra, {}, {"induced-cone", seed, n, {}}, 0};
  if (spec.base.kind == "zero") out.generator.symmetry_tags.push_back("pm");
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto d = sample_one(ctx, seed, static_cast<std::uint64_t>(i));
    if (d.sample.squaredNorm() == 0.0)
      out.zero_samples += 1;
    else
      out.samples.push_back(d.sample);
  }
  return out;
}

ConeSampleSet sample_induced_cone(const InducedConeSpec& spec, int n,
                                  std::uint64_t seed, ExecPolicy policy,
                                  const GroupSampler* sampler) {
  if (n < 1) throw ConeError("sample_induced_cone needs n >= 1");
  InducedSamplerContext ctx = make_context(spec, sampler);
  if (ctx.ann.cols() == 0 && ctx.lift.size() == 0 && spec.base.kind == "zero") {
    ConeSampleSet empty{spec.algebra, {}, {"induced-cone", seed, n, {}}, n};
    return empty;
  }
  auto details = par::map_indexed<Vec>(
      static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        return sample_one(ctx, seed, i).sample;
      });
  ConeSampleSet out{spec.algebra, {}, {"induced-cone", seed, n, {}}, 0};
  if (spec.base.kind == "zero") out.generator.symmetry_tags.push_back("pm");
  out.samples.reserve(n);
  for (auto& s : details) {
    if (s.squaredNorm() == 0.0)
      out.zero_samples += 1;
    else
      out.samples.push_back(std::move(s));
  }
  return out;
}

std::vector<InducedConeSampleDetail> sample_induced_cone_detailed(
    const InducedConeSpec& spec, int n, std::uint64_t seed,
    const GroupSampler* sampler) {
  InducedSamplerContext ctx = make_context(spec, sampler);
  std::vector<InducedConeSampleDetail> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(sample_one(ctx, seed, static_cast<std::uint64_t>(i)));
  return out;
}

namespace {

double chord(const LieAlgebraSpec& alg, const Vec& a, const Vec& b) {
  Vec d = a - b;
  return std::sqrt(std::max(0.0, d.dot(alg.gram() * d)));
}

}  // namespace

double distance_to_cone(const Covector& xi, const ConeSampleSet& cone) {
  if (xi.algebra != cone.algebra)
    throw ConeError("distance_to_cone with mismatched algebras");
  double nrm = xi.norm();
  if (nrm == 0.0) throw ConeError("distance_to_cone: zero covector");
  if (cone.samples.empty()) return 2.0;  // the cone {0} has no directions
  Vec unit = xi.coords / nrm;
  const bool pm = cone.symmetric_pm();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& s : cone.samples) {
    best = std::min(best, chord(*xi.algebra, unit, s));
    if (pm) best = std::min(best, chord(*xi.algebra, unit, Vec(-s)));
  }
  return best;
}

double distance_to_cone(const Covector& xi, const ConePredicate& cone,
                        const PredicateDistanceOptions& opt) {
  if (xi.algebra != cone.algebra)
    throw ConeError("distance_to_cone with mismatched algebras");
  const LieAlgebraSpec& alg = *xi.algebra;
  double nrm = xi.norm();
  if (nrm == 0.0) throw ConeError("distance_to_cone: zero covector");
  Vec unit = xi.coords / nrm;
  if (cone.contains(unit)) return 0.0;

  const int d = alg.dim();
  Rng rng = Rng::at(opt.seed, 1);
  Vec best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.coarse_samples; ++i) {
    Vec c(d);
    for (int j = 0; j < d; ++j) c[j] = rng.gauss();
    double cn = alg.norm(c);
    if (cn < 1e-14) continue;
    c /= cn;
    if (!cone.contains(c)) continue;
    double dist = chord(alg, unit, c);
    if (dist < best_d) {
      best_d = dist;
      best = c;
    }
  }
  if (!best.size()) return 2.0;  // empty predicate within the budget

  // Shrinking Gaussian cloud refinement around the best member.
  double sigma = 0.4;
  for (int round = 0; round < opt.refine_rounds; ++round) {
    bool improved = false;
    for (int i = 0; i < opt.cloud; ++i) {
      Vec c = best;
      for (int j = 0; j < d; ++j) c[j] += sigma * rng.gauss();
      double cn = alg.norm(c);
      if (cn < 1e-14) continue;
      c /= cn;
      if (!cone.contains(c)) continue;
      double dist = chord(alg, unit, c);
      if (dist < best_d) {
        best_d = dist;
        best = c;
        improved = true;
      }
    }
    if (!improved) sigma *= 0.7;
    if (sigma < 1e-9) break;
  }
  return best_d;
}

// -- param families -------------------------------------------------------------

ExplicitFamily::ExplicitFamily(std::vector<Vec> points, double cap)
    : points_(std::move(points)), cap_(cap) {
  std::sort(points_.begin(), points_.end(),
            [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
}

int ExplicitFamily::dim() const {
  return points_.empty() ? 0 : static_cast<int>(points_.front().size());
}

bool ExplicitFamily::next(Vec& out) {
  if (pos_ >= points_.size()) return false;
  out = points_[pos_++];
  return true;
}

RayLatticeFamily::RayLatticeFamily(Vec direction, double step, double cap)
    : dir_(std::move(direction)), step_(step), cap_(cap) {
  double dn = dir_.norm();
  if (dn == 0.0) throw ConeError("ray family needs a nonzero direction");
  dir_ /= dn;
}

bool RayLatticeFamily::next(Vec& out) {
  double norm = step_ * static_cast<double>(n_);
  if (norm > cap_) return false;
  out = norm * dir_;
  n_ += 1;
  return true;
}

LatticeRule2DFamily::LatticeRule2DFamily(std::function<bool(long, long)> pred,
                                         double cap)
    : pred_(std::move(pred)), cap_(cap) {}

void LatticeRule2DFamily::reset() {
  shell_ = 0;
  buffer_.clear();
  pos_ = 0;
  done_ = false;
}

void LatticeRule2DFamily::fill_shell() {
  // Shells by max-coordinate; points sorted by Euclidean norm within shells.
  buffer_.clear();
  pos_ = 0;
  while (buffer_.empty()) {
    shell_ += 1;
    double shell_min_norm = static_cast<double>(shell_);
    if (shell_min_norm > cap_ * 1.5 + 4) {
      done_ = true;
      return;
    }
    for (long m1 = 0; m1 <= shell_; ++m1) {
      long m2 = shell_;
      if (pred_(m1, m2)) buffer_.push_back((Vec(2) << m1, m2).finished());
    }
    for (long m2 = 0; m2 < shell_; ++m2) {
      long m1 = shell_;
      if (pred_(m1, m2)) buffer_.push_back((Vec(2) << m1, m2).finished());
    }
    std::sort(buffer_.begin(), buffer_.end(),
              [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
  }
}

bool LatticeRule2DFamily::next(Vec& out) {
  if (done_) return false;
  if (pos_ >= buffer_.size()) {
    fill_shell();
    if (done_) return false;
  }
  out = buffer_[pos_++];
  return true;
}

std::string to_string(AcVerdict v) {
  switch (v) {
    case AcVerdict::In: return "in";
    case AcVerdict::Out: return "out";
    case AcVerdict::Undecided: return "undecided";
  }
  return "?";
}

AcVerdict ac_membership(ParamFamily& family, const Vec& xi, double cone_width,
                        double norm_horizon, const AcOptions& opt) {
  if (cone_width <= 0.0) throw ConeError("ac_membership: degenerate cone");
  double xin = xi.norm();
  if (xin == 0.0) throw ConeError("ac_membership: zero direction");
  Vec dir = xi / xin;

  std::vector<double> rungs;
  for (double h = opt.ladder_base; h <= norm_horizon * (1 + 1e-12);
       h *= opt.ladder_factor)
    rungs.push_back(h);
  if (rungs.empty()) rungs.push_back(norm_horizon);

  family.reset();
  Vec p;
  double max_cone_norm = 0.0;  // largest norm of a family point in the cone
  double max_seen_norm = 0.0;
  std::size_t count = 0;
  bool stream_ended = false;
  bool horizon_cut = false;
  // One factor beyond the last rung certifies emptiness of every tested
  // tail; the stream is norm-ordered, so it can stop there.
  const double cert_cap = rungs.back() * opt.ladder_factor;
  while (true) {
    if (count >= opt.max_points) break;
    if (!family.next(p)) {
      stream_ended = true;
      break;
    }
    ++count;
    double pn = p.norm();
    max_seen_norm = std::max(max_seen_norm, pn);
    if (pn > cert_cap * (1 + 1e-12)) {
      horizon_cut = true;
      break;
    }
    if (pn == 0.0) continue;
    double cosang = std::clamp(dir.dot(p) / pn, -1.0, 1.0);
    if (std::acos(cosang) < cone_width)
      max_cone_norm = std::max(max_cone_norm, pn);
    if (max_cone_norm > rungs.back()) return AcVerdict::In;
  }
  // Emptiness of a tail is certified up to the completeness cap (stream
  // ended), the certification horizon, or the largest norm reached (budget).
  double certified;
  if (horizon_cut)
    certified = std::min(cert_cap, family.completeness_cap());
  else if (stream_ended)
    certified = family.completeness_cap();
  else
    certified = std::min(max_seen_norm, family.completeness_cap());
  for (double h : rungs)
    if (max_cone_norm <= h && certified >= h * opt.ladder_factor)
      return AcVerdict::Out;
  return AcVerdict::Undecided;
}

// -- comparison -----------------------------------------------------------------

double distance_to_cone(const Covector& xi, const Cone& cone) {
  double best = std::numeric_limits<double>::infinity();
  if (cone.predicate) best = std::min(best, distance_to_cone(xi, *cone.predicate));
  if (cone.samples) best = std::min(best, distance_to_cone(xi, *cone.samples));
  if (!cone.predicate && !cone.samples)
    throw ConeError("cone '" + cone.name + "' has no representation");
  return best;
}

std::string to_string(ConeRelation r) {
  switch (r) {
    case ConeRelation::Equal: return "equal";
    case ConeRelation::StrictSubset: return "strict_subset";
    case ConeRelation::StrictSuperset: return "strict_superset";
    case ConeRelation::Incomparable: return "incomparable";
  }
  return "?";
}

namespace {

std::vector<Vec> cone_representatives(const Cone& c, int budget) {
  std::vector<Vec> reps;
  if (c.samples) {
    const auto& s = c.samples->samples;
    if (static_cast<int>(s.size()) <= budget) {
      reps = s;
      if (c.samples->symmetric_pm())
        for (const Vec& v : s) reps.push_back(-v);
    } else {
      std::size_t stride = s.size() / budget + 1;
      for (std::size_t i = 0; i < s.size(); i += stride) {
        reps.push_back(s[i]);
        if (c.samples->symmetric_pm()) reps.push_back(-s[i]);
      }
    }
  } else if (c.predicate) {
    Rng rng = Rng::at(99, 0);
    const LieAlgebraSpec& alg = *c.algebra;
    const int d = alg.dim();
    for (int i = 0; i < budget * 8 && static_cast<int>(reps.size()) < budget;
         ++i) {
      Vec v(d);
      for (int j = 0; j < d; ++j) v[j] = rng.gauss();
      double n = alg.norm(v);
      if (n < 1e-14) continue;
      v /= n;
      if (c.predicate->contains(v)) reps.push_back(v);
    }
  }
  return reps;
}

}  // namespace

namespace {

// One-sided sampled Hausdorff distance with witness. Membership against a
// predicate is exact and cheap; distances of the non-members start from the
// chord to the target's representative cloud (an upper bound) and only the
// leading candidates get the expensive predicate refinement.
struct SideEval {
  double hausdorff = 0;
  std::optional<Vec> witness;
};

SideEval eval_side(const SpecPtr& alg, const std::vector<Vec>& reps,
                   const Cone& target, const std::vector<Vec>& target_cloud) {
  const std::size_t n = reps.size();
  std::vector<double> dist(n, 0.0);
  std::vector<char> refined(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (target.predicate && target.predicate->contains(reps[i])) {
      dist[i] = 0.0;
      refined[i] = 1;
      continue;
    }
    if (!target.predicate && target.samples) {
      dist[i] = distance_to_cone({alg, reps[i]}, *target.samples);
      refined[i] = 1;  // exact for cloud-only cones
      continue;
    }
    double best = 2.0;
    for (const Vec& t : target_cloud)
      best = std::min(best, chord(*alg, reps[i], t));
    dist[i] = best;  // upper bound, sharpened below when it matters
  }
  if (target.predicate) {
    // refine the largest upper bounds
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return dist[x] > dist[y]; });
    int budget = 16;
    for (std::size_t k = 0; k < n && budget > 0; ++k) {
      std::size_t i = order[k];
      if (refined[i]) continue;
      dist[i] = std::min(dist[i],
                         distance_to_cone({alg, reps[i]}, *target.predicate));
      refined[i] = 1;
      --budget;
    }
  }
  SideEval out;
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i] > out.hausdorff) {
      out.hausdorff = dist[i];
      out.witness = reps[i];
    }
  return out;
}

}  // namespace

ConeComparison compare_cones(const Cone& a, const Cone& b,
                             const CompareOptions& opt) {
  if (a.algebra != b.algebra)
    throw ConeError("compare_cones over different algebras");
  std::vector<Vec> ra = cone_representatives(a, 4000);
  std::vector<Vec> rb = cone_representatives(b, 4000);
  bool a_trivial = ra.empty() && a.samples && a.samples->samples.empty();
  bool b_trivial = rb.empty() && b.samples && b.samples->samples.empty();
  if ((ra.size() && static_cast<int>(ra.size()) < opt.min_samples) ||
      (rb.size() && static_cast<int>(rb.size()) < opt.min_samples))
    throw ConeError("compare_cones: insufficient samples");
  if (ra.empty() && !a_trivial)
    throw ConeError("compare_cones: no representatives for cone '" + a.name +
                    "'");
  if (rb.empty() && !b_trivial)
    throw ConeError("compare_cones: no representatives for cone '" + b.name +
                    "'");

  double tol_against_b = b.predicate ? opt.containment_tol : opt.sampling_tol;
  double tol_against_a = a.predicate ? opt.containment_tol : opt.sampling_tol;

  ConeComparison cmp{};
  SideEval a_side = eval_side(a.algebra, ra, b, rb);
  SideEval b_side = eval_side(b.algebra, rb, a, ra);
  cmp.hausdorff_a_to_b = a_side.hausdorff;
  cmp.hausdorff_b_to_a = b_side.hausdorff;
  cmp.witness_in_a = a_side.witness;
  cmp.witness_in_b = b_side.witness;
  cmp.witness_distance_a = a_side.hausdorff;
  cmp.witness_distance_b = b_side.hausdorff;
  bool a_in_b = a_trivial || cmp.hausdorff_a_to_b <= tol_against_b;
  bool b_in_a = b_trivial || cmp.hausdorff_b_to_a <= tol_against_a;
  bool b_excess = cmp.hausdorff_b_to_a > opt.witness_threshold;
  bool a_excess = cmp.hausdorff_a_to_b > opt.witness_threshold;

  if (a_in_b && b_in_a) {
    cmp.relation = ConeRelation::Equal;
  } else if (a_in_b && b_excess) {
    cmp.relation = ConeRelation::StrictSubset;
  } else if (b_in_a && a_excess) {
    cmp.relation = ConeRelation::StrictSuperset;
  } else if (a_excess && b_excess) {
    cmp.relation = ConeRelation::Incomparable;
  } else {
    // Differences above tolerance but below the witness threshold: sampling
    // cannot certify either way.
    throw ConeError(
        "compare_cones: insufficient samples to separate the cones");
  }
  return cmp;
}

}  // namespace orbitcone
