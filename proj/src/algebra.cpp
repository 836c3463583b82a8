#include "orbitcone/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "orbitcone/parallel.hpp"

namespace orbitcone {

namespace {

Vec vectorize(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

}  // namespace

LieAlgebraSpec::LieAlgebraSpec(std::string name, int ambient_dim,
                               std::vector<Mat> basis, int rank,
                               std::map<std::string, std::vector<Vec>> cartan_reps,
                               std::optional<GroupConstraint> constraint)
    : name_(std::move(name)),
      ambient_dim_(ambient_dim),
      basis_(std::move(basis)),
      rank_(rank),
      cartan_reps_(std::move(cartan_reps)),
      constraint_(std::move(constraint)) {
  const int d = dim();
  if (d == 0) throw AlgebraError("empty basis for spec '" + name_ + "'");
  basis_stacked_.resize(ambient_dim_ * ambient_dim_, d);
  for (int j = 0; j < d; ++j) {
    if (basis_[j].rows() != ambient_dim_ || basis_[j].cols() != ambient_dim_)
      throw AlgebraError("basis matrix size mismatch in spec '" + name_ + "'");
    basis_stacked_.col(j) = vectorize(basis_[j]);
  }
  basis_cod_.compute(basis_stacked_);
  gram_.resize(d, d);
  trace_gram_.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      gram_(i, j) = (basis_[i].transpose() * basis_[j]).trace();
      trace_gram_(i, j) = (basis_[i] * basis_[j]).trace();
    }
  Eigen::LLT<Mat> llt(gram_);
  if (llt.info() != Eigen::Success)
    throw AlgebraError("basis of spec '" + name_ + "' is not independent");
  gram_chol_ = llt.matrixL();
}

Mat LieAlgebraSpec::orthonormalize(const std::vector<Vec>& vs) const {
  if (vs.empty()) return Mat(dim(), 0);
  Mat V(dim(), static_cast<int>(vs.size()));
  for (int j = 0; j < V.cols(); ++j) V.col(j) = vs[j];
  // Euclidize through the Cholesky factor, orthonormalize, map back.
  Mat Y = gram_chol_.transpose() * V;
  Eigen::HouseholderQR<Mat> qr(Y);
  Mat Q = qr.householderQ() * Mat::Identity(dim(), V.cols());
  return gram_chol_.transpose()
      .triangularView<Eigen::Upper>()
      .solve(Q);
}

Mat LieAlgebraSpec::orthogonal_complement(const Mat& onb_columns) const {
  const int d = dim();
  const int k = static_cast<int>(onb_columns.cols());
  Mat Y = gram_chol_.transpose() * onb_columns;
  Eigen::HouseholderQR<Mat> qr(Y);
  Mat Qfull = qr.householderQ() * Mat::Identity(d, d);
  Mat rest = Qfull.rightCols(d - k);
  return gram_chol_.transpose().triangularView<Eigen::Upper>().solve(rest);
}

Mat LieAlgebraSpec::matrix(const Vec& coords) const {
  if (coords.size() != dim())
    throw AlgebraError("coordinate length != dim in spec '" + name_ + "'");
  Mat m = Mat::Zero(ambient_dim_, ambient_dim_);
  for (int j = 0; j < dim(); ++j) m += coords[j] * basis_[j];
  return m;
}

Vec LieAlgebraSpec::to_coords(const Mat& m, double* residual) const {
  Vec c = basis_cod_.solve(vectorize(m));
  if (residual) {
    double scale = std::max(1.0, m.norm());
    *residual = (basis_stacked_ * c - vectorize(m)).norm() / scale;
  }
  return c;
}

double LieAlgebraSpec::ip(const Vec& a, const Vec& b) const {
  return a.dot(gram_ * b);
}

double LieAlgebraSpec::norm(const Vec& a) const {
  return std::sqrt(std::max(0.0, ip(a, a)));
}

Mat LieAlgebraSpec::ad_matrix(const Vec& y) const {
  const int d = dim();
  Mat ym = matrix(y);
  Mat ad(d, d);
  for (int j = 0; j < d; ++j) {
    Mat br = ym * basis_[j] - basis_[j] * ym;
    double res = 0;
    ad.col(j) = to_coords(br, &res);
    if (res > 1e-8)
      throw AlgebraError("bracket left the span of the basis in spec '" +
                         name_ + "'");
  }
  return ad;
}

void LieAlgebraSpec::validate() const {
  const int d = dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram_);
  if (es.eigenvalues().minCoeff() < 1e-10 * es.eigenvalues().maxCoeff())
    throw AlgebraError("basis of spec '" + name_ + "' is not independent");
  double scale = 0;
  for (const Mat& b : basis_) scale = std::max(scale, b.norm());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat br = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      double res = 0;
      to_coords(br, &res);
      if (res > 1e-10 * scale * scale)
        throw AlgebraError("spec '" + name_ + "' is not closed under bracket");
    }
  for (const auto& [cname, cbasis] : cartan_reps_) {
    if (static_cast<int>(cbasis.size()) != rank_)
      throw AlgebraError("cartan rep '" + cname + "' of spec '" + name_ +
                         "' has dimension != rank");
    for (size_t i = 0; i < cbasis.size(); ++i)
      for (size_t j = i + 1; j < cbasis.size(); ++j) {
        Mat br = matrix(cbasis[i]) * matrix(cbasis[j]) -
                 matrix(cbasis[j]) * matrix(cbasis[i]);
        if (br.norm() > 1e-10 * scale * scale)
          throw AlgebraError("cartan rep '" + cname + "' of spec '" + name_ +
                             "' is not abelian");
      }
  }
}

Vec Covector::ip_representative() const {
  // Solve G u = T c: (u, Y) = <xi, Y> for all Y.
  return algebra->gram().ldlt().solve(algebra->trace_gram() * coords);
}

void GroupElement::validate(double tol) const {
  double det = matrix.determinant();
  if (std::abs(det) < 1e-12)
    throw AlgebraError("singular group element");
  if (algebra->constraint()) {
    const Mat& M = algebra->constraint()->form;
    double defect = (matrix.transpose() * M * matrix - M).norm() / M.norm();
    if (defect > tol) {
      std::ostringstream os;
      os << "group element violates the " << algebra->constraint()->type
         << " constraint (defect " << defect << ")";
      throw AlgebraError(os.str());
    }
  }
}

std::string to_string(ElementKind k) {
  switch (k) {
    case ElementKind::SemisimpleHyperbolic: return "semisimple-hyperbolic";
    case ElementKind::SemisimpleElliptic: return "semisimple-elliptic";
    case ElementKind::SemisimpleMixed: return "semisimple-mixed";
    case ElementKind::Nilpotent: return "nilpotent";
    case ElementKind::Mixed: return "mixed";
  }
  return "?";
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra != b.algebra)
    throw AlgebraError("bracket of elements from different algebras");
  Mat br = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  double res = 0;
  Vec c = a.algebra->to_coords(br, &res);
  double scale = std::max(1e-300, a.norm() * b.norm());
  if (res > 1e-10 * std::max(1.0, scale))
    throw AlgebraError("bracket re-expression residual too large");
  return {a.algebra, c};
}

double trace_pairing(const Covector& xi, const AlgebraElement& y) {
  if (xi.algebra != y.algebra)
    throw AlgebraError("pairing of covector and element from different algebras");
  return xi.coords.dot(xi.algebra->trace_gram() * y.coords);
}

GroupElement group_exp(const AlgebraElement& y) {
  return {y.algebra, y.matrix().exp()};
}

AlgebraElement group_log(const GroupElement& g, double injectivity_radius) {
  const int n = g.algebra->ambient_dim();
  double dist = (g.matrix - Mat::Identity(n, n)).norm();
  if (dist > injectivity_radius) {
    std::ostringstream os;
    os << "group element outside the log injectivity radius (|g - I| = "
       << dist << " > " << injectivity_radius << ")";
    throw AlgebraError(os.str());
  }
  Mat lg = g.matrix.log();
  double res = 0;
  Vec c = g.algebra->to_coords(lg, &res);
  if (res > 1e-8)
    throw AlgebraError("log of group element left the algebra span");
  return {g.algebra, c};
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& y) {
  if (g.algebra != y.algebra)
    throw AlgebraError("adjoint with mismatched algebras");
  Mat conj = g.matrix * y.matrix() * g.matrix.inverse();
  double res = 0;
  Vec c = y.algebra->to_coords(conj, &res);
  if (res > 1e-6 * std::max(1.0, conj.norm()))
    throw AlgebraError("adjoint re-expression residual too large");
  return {y.algebra, c};
}

Covector coadjoint(const GroupElement& g, const Covector& xi) {
  AlgebraElement rep{xi.algebra, xi.coords};
  return {xi.algebra, adjoint(g, rep).coords};
}

namespace {

struct EigenCluster {
  Complex value;
  int multiplicity;
};

std::vector<EigenCluster> cluster_eigenvalues(const CVec& eig, double tol,
                                              double ambiguity_factor) {
  std::vector<Complex> vals(eig.data(), eig.data() + eig.size());
  std::sort(vals.begin(), vals.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<EigenCluster> clusters;
  for (const Complex& v : vals) {
    bool merged = false;
    for (auto& c : clusters) {
      if (std::abs(v - c.value) <= tol) {
        c.value = (c.value * static_cast<double>(c.multiplicity) + v) /
                  static_cast<double>(c.multiplicity + 1);
        c.multiplicity += 1;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({v, 1});
  }
  // Ambiguity guard: two clusters separated by less than ambiguity_factor
  // times the merge tolerance cannot be told apart reliably.
  for (size_t i = 0; i < clusters.size(); ++i)
    for (size_t j = i + 1; j < clusters.size(); ++j) {
      double gap = std::abs(clusters[i].value - clusters[j].value);
      if (gap < ambiguity_factor * tol)
        throw UnclassifiableError(
            "eigenvalue clustering is ambiguous near the merge tolerance");
    }
  return clusters;
}

int rank_with_threshold(const CMat& m, double threshold) {
  Eigen::JacobiSVD<CMat> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > threshold) ++r;
  return r;
}

}  // namespace

ElementClass classify_matrix(const LieAlgebraSpec& spec, const Mat& m,
                             const ClassifyOptions& opt) {
  const int n = spec.ambient_dim();
  double scale = m.norm();
  ElementClass result;
  if (scale == 0.0) {
    result.kind = ElementKind::Nilpotent;
    result.regular = false;
    result.eigen_profile.assign(n, Complex(0, 0));
    return result;
  }

  Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw UnclassifiableError("eigenvalue iteration failed to converge");
  CVec eig = es.eigenvalues();
  result.eigen_profile.assign(eig.data(), eig.data() + eig.size());

  double cluster_tol = opt.cluster_rel_tol * scale;
  auto clusters = cluster_eigenvalues(eig, cluster_tol, opt.ambiguity_factor);

  bool all_zero = true;
  bool all_real = true;
  bool all_imag = true;
  for (const auto& c : clusters) {
    if (std::abs(c.value) > cluster_tol) all_zero = false;
    if (std::abs(c.value.imag()) > cluster_tol) all_real = false;
    if (std::abs(c.value.real()) > cluster_tol) all_imag = false;
  }

  bool semisimple = true;
  if (!all_zero) {
    double sv_tol = opt.sv_rel_tol * scale;
    CMat mc = m.cast<Complex>();
    for (const auto& c : clusters) {
      CMat shifted = mc - c.value * CMat::Identity(n, n);
      if (rank_with_threshold(shifted, sv_tol) != n - c.multiplicity) {
        semisimple = false;
        break;
      }
    }
  } else {
    semisimple = false;  // nonzero with zero spectrum is never diagonalizable
  }

  if (all_zero) {
    result.kind = ElementKind::Nilpotent;
  } else if (semisimple) {
    if (all_real)
      result.kind = ElementKind::SemisimpleHyperbolic;
    else if (all_imag)
      result.kind = ElementKind::SemisimpleElliptic;
    else
      result.kind = ElementKind::SemisimpleMixed;
  } else {
    result.kind = ElementKind::Mixed;
  }

  result.regular = false;
  return result;
}

ElementClass classify(const AlgebraElement& y, const ClassifyOptions& opt) {
  ElementClass result = classify_matrix(*y.algebra, y.matrix(), opt);
  if (!result.semisimple()) {
    // "Regular" follows the regular-semisimple convention of the dual-cone
    // catalog: nilpotent and mixed elements never count.
    result.regular = false;
    return result;
  }
  double scale = std::max(y.norm(), 1e-300);
  Mat ad = y.algebra->ad_matrix(y.coords);
  Eigen::JacobiSVD<Mat> svd(ad);
  int ker = 0;
  double tol = opt.sv_rel_tol * std::max(scale, svd.singularValues().size()
                                                    ? svd.singularValues()[0]
                                                    : 0.0);
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] <= tol) ++ker;
  result.regular = (y.norm() > 0) && (ker == y.algebra->rank());
  return result;
}

// -- conjugate_to_cartan ------------------------------------------------------

namespace {

// Real block form: sorted real eigenvalues first as 1x1 blocks, then complex
// pairs (b > 0) as [a, -b; b, a] blocks. Returns P with P^-1 m P = canonical.
struct RealCanonical {
  Mat P;
  Mat form;
  bool ok = false;
};

RealCanonical real_canonical_form(const Mat& m, double tol) {
  const int n = static_cast<int>(m.rows());
  Eigen::EigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) return {};
  CVec eig = es.eigenvalues();
  CMat vec = es.eigenvectors();

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    long long ra = llround(eig[a].real() / tol);
    long long rb = llround(eig[b].real() / tol);
    if (ra != rb) return ra < rb;
    if (eig[a].imag() != eig[b].imag())
      return eig[a].imag() < eig[b].imag();
    return a < b;
  });

  Mat P(n, n);
  Mat form = Mat::Zero(n, n);
  int col = 0;
  std::vector<bool> used(n, false);
  for (int k = 0; k < n; ++k) {
    int i = idx[k];
    if (used[i]) continue;
    Complex lam = eig[i];
    if (std::abs(lam.imag()) <= tol) {
      // A real eigenvalue can come with a complex-scaled eigenvector; use
      // whichever real slice carries the mass.
      Vec re = vec.col(i).real();
      Vec im = vec.col(i).imag();
      P.col(col) = re.norm() >= im.norm() ? re : im;
      form(col, col) = lam.real();
      used[i] = true;
      col += 1;
    } else {
      if (lam.imag() < 0) continue;  // handled with its conjugate partner
      // find the conjugate partner
      int partner = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j] || j == i) continue;
        if (std::abs(eig[j] - std::conj(lam)) <= tol) {
          partner = j;
          break;
        }
      }
      if (partner < 0) return {};
      P.col(col) = vec.col(i).real();
      P.col(col + 1) = -vec.col(i).imag();
      form(col, col) = lam.real();
      form(col, col + 1) = -lam.imag();
      form(col + 1, col) = lam.imag();
      form(col + 1, col + 1) = lam.real();
      used[i] = used[partner] = true;
      col += 2;
    }
  }
  if (col != n) return {};
  RealCanonical rc;
  rc.P = P;
  rc.form = form;
  rc.ok = std::abs(P.determinant()) > 1e-12 * std::pow(P.norm(), n);
  return rc;
}

// Weight data of a cartan rep: a common complex eigenbasis and the eigenvalue
// of each basis element on each common eigenvector.
struct CartanWeights {
  CMat weights;  // n x r: weights(k, i) = eigenvalue of c_i on eigenvector k
  bool ok = false;
};

CartanWeights cartan_weights(const LieAlgebraSpec& spec,
                             const std::vector<Vec>& cbasis, Rng& rng) {
  const int n = spec.ambient_dim();
  const int r = static_cast<int>(cbasis.size());
  // Diagonalize a generic combination; its eigenvectors diagonalize all of
  // the (commuting, semisimple) cartan basis simultaneously. Columns are
  // sorted by the generic eigenvalue so that the weight rows have a
  // deterministic order matching the sorted target spectrum.
  Mat generic = Mat::Zero(n, n);
  for (const Vec& c : cbasis) generic += rng.uniform(0.5, 1.5) * spec.matrix(c);
  Eigen::EigenSolver<Mat> es(generic);
  if (es.info() != Eigen::Success) return {};
  CMat V_raw = es.eigenvectors();
  CVec ge = es.eigenvalues();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ge[a].real() != ge[b].real()) return ge[a].real() < ge[b].real();
    return ge[a].imag() < ge[b].imag();
  });
  CMat V(n, n);
  for (int k = 0; k < n; ++k) V.col(k) = V_raw.col(order[k]);
  if (std::abs(V.determinant()) < 1e-10) return {};
  CMat Vinv = V.inverse();
  CartanWeights cw;
  cw.weights.resize(n, r);
  for (int i = 0; i < r; ++i) {
    CMat d = Vinv * spec.matrix(cbasis[i]).cast<Complex>() * V;
    double off = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) off = std::max(off, std::abs(d(a, b)));
    if (off > 1e-6 * std::max(1.0, d.norm())) return {};
    for (int k = 0; k < n; ++k) cw.weights(k, i) = d(k, k);
  }
  cw.ok = true;
  return cw;
}


// Deterministic multiset order that ignores numerical noise below tol.
void sort_complex_quantized(std::vector<Complex>& v, double tol) {
  std::sort(v.begin(), v.end(), [tol](Complex a, Complex b) {
    long long ra = llround(a.real() / tol), rb = llround(b.real() / tol);
    if (ra != rb) return ra < rb;
    long long ia = llround(a.imag() / tol), ib = llround(b.imag() / tol);
    if (ia != ib) return ia < ib;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

// Greedy nearest matching distance between two equal-size multisets.
double multiset_mismatch(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0;
  for (const Complex& x : a) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    worst = std::max(worst, best);
    b.erase(b.begin() + arg);
  }
  return worst;
}

// Gradient descent over the group minimizing |Ad(g) y0 - y|^2, used when the
// eigenbasis conjugator must be replaced by one satisfying the constraint.
bool refine_conjugator_in_group(const LieAlgebraSpec& spec, const Vec& y0,
                                const Vec& y, Rng& rng, Mat& g_out) {
  const int d = spec.dim();
  for (int restart = 0; restart < 24; ++restart) {
    Mat g = Mat::Identity(spec.ambient_dim(), spec.ambient_dim());
    if (restart > 0) {
      Vec w(d);
      for (int i = 0; i < d; ++i) w[i] = 0.5 * rng.gauss();
      g = spec.matrix(w).exp();
    }
    Mat ytarget = spec.matrix(y);
    Mat a = g * spec.matrix(y0) * g.inverse();
    double f = (a - ytarget).squaredNorm();
    double step = 0.2;
    for (int it = 0; it < 600 && f > 1e-24; ++it) {
      // gradient in exponential coordinates: d/dt |e^{tW} a e^{-tW} - Y|^2
      // at t=0 equals 2 (a - Y, [W, a]).
      Vec grad(d);
      Mat diff = a - ytarget;
      for (int i = 0; i < d; ++i) {
        const Mat& b = spec.basis()[i];
        grad[i] = 2.0 * (diff.transpose() * (b * a - a * b)).trace();
      }
      double gn = grad.norm();
      if (gn < 1e-14) break;
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        Mat w = spec.matrix(Vec(-step / gn * grad));
        Mat gtry = w.exp() * g;
        Mat atry = gtry * spec.matrix(y0) * gtry.inverse();
        double ftry = (atry - ytarget).squaredNorm();
        if (ftry < f) {
          g = gtry;
          a = atry;
          f = ftry;
          step *= 1.5;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    // Levenberg-Marquardt polish once the descent is near a zero.
    if (f < 0.05 * 0.05 * std::max(1.0, ytarget.squaredNorm())) {
      const int nn = spec.ambient_dim();
      const int nr = nn * nn;
      double lambda = 1e-3;
      for (int it = 0; it < 80 && f > 1e-26; ++it) {
        Mat J(nr, d);
        for (int j = 0; j < d; ++j) {
          const Mat& b = spec.basis()[j];
          Mat col = b * a - a * b;
          J.col(j) = Eigen::Map<Vec>(col.data(), nr);
        }
        Mat diff = a - ytarget;
        Vec r = Eigen::Map<Vec>(diff.data(), nr);
        Vec delta = (J.transpose() * J + lambda * Mat::Identity(d, d))
                        .ldlt()
                        .solve(Vec(-J.transpose() * r));
        Mat e = spec.matrix(delta).exp();
        Mat gtry = e * g;
        Mat atry = e * a * e.inverse();
        double ftry = (atry - ytarget).squaredNorm();
        if (ftry < f) {
          g = gtry;
          a = atry;
          f = ftry;
          lambda = std::max(lambda * 0.3, 1e-12);
        } else {
          lambda *= 10;
          if (lambda > 1e8) break;
        }
      }
    }
    if (f <= 1e-18 * std::max(1.0, ytarget.squaredNorm())) {
      g_out = g;
      return true;
    }
  }
  return false;
}

}  // namespace

CartanConjugation conjugate_to_cartan(const AlgebraElement& y,
                                      std::uint64_t seed) {
  const LieAlgebraSpec& spec = *y.algebra;
  ElementClass cls = classify(y);
  if (!cls.semisimple())
    throw AlgebraError("conjugate_to_cartan requires a semisimple element");
  if (spec.cartan_reps().empty())
    throw AlgebraError("spec '" + spec.name() + "' has no cartan_reps");

  const int n = spec.ambient_dim();
  Mat ym = y.matrix();
  double scale = std::max(ym.norm(), 1e-300);
  double tol = 1e-7 * scale;
  Rng rng = Rng::at(seed, 0);

  CVec yeig(n);
  for (int i = 0; i < n; ++i) yeig[i] = cls.eigen_profile[i];

  for (const auto& [cname, cbasis] : spec.cartan_reps()) {
    CartanWeights cw = cartan_weights(spec, cbasis, rng);
    if (!cw.ok) continue;
    const int r = static_cast<int>(cbasis.size());

    // Match the eigenvalue multisets: find t with {sum_i t_i w_{k,i}} equal
    // to the spectrum of y. Candidate t vectors solve an invertible r x r
    // weight minor against ordered tuples of distinct target eigenvalues;
    // each candidate is verified against the whole spectrum.
    std::vector<Complex> target(yeig.data(), yeig.data() + n);
    sort_complex_quantized(target, tol);

    // greedy row selection for an invertible minor
    std::vector<int> pivot_rows;
    {
      CMat acc(r, 0);
      for (int k = 0; k < n && static_cast<int>(pivot_rows.size()) < r; ++k) {
        CMat cand(r, acc.cols() + 1);
        cand.leftCols(acc.cols()) = acc;
        cand.col(acc.cols()) = cw.weights.row(k).transpose();
        Eigen::FullPivLU<CMat> lu(cand);
        lu.setThreshold(1e-8);
        if (lu.rank() == cand.cols()) {
          acc = cand;
          pivot_rows.push_back(k);
        }
      }
      if (static_cast<int>(pivot_rows.size()) < r) continue;
    }
    CMat W(r, r);
    for (int i = 0; i < r; ++i) W.row(i) = cw.weights.row(pivot_rows[i]);
    Eigen::FullPivLU<CMat> wlu(W);

    // ordered tuples of distinct target indices
    std::vector<std::vector<int>> tuples;
    {
      std::vector<int> idx(r, 0);
      std::function<void(int)> rec = [&](int depth) {
        if (depth == r) {
          tuples.push_back(idx);
          return;
        }
        for (int k = 0; k < n; ++k) {
          bool used = false;
          for (int d2 = 0; d2 < depth; ++d2)
            if (idx[d2] == k) used = true;
          if (used) continue;
          idx[depth] = k;
          rec(depth + 1);
        }
      };
      rec(0);
    }

    for (const auto& tuple : tuples) {
      CVec lam(r);
      for (int i = 0; i < r; ++i) lam[i] = target[tuple[i]];
      CVec tc = wlu.solve(lam);
      double imag_part = 0;
      for (int i = 0; i < r; ++i) imag_part = std::max(imag_part, std::abs(tc[i].imag()));
      if (imag_part > 1e-6 * std::max(1.0, scale)) continue;
      Vec t(r);
      for (int i = 0; i < r; ++i) t[i] = tc[i].real();
      Vec y0 = Vec::Zero(spec.dim());
      for (int i = 0; i < r; ++i) y0 += t[i] * cbasis[i];

      // Verify the spectrum matches.
      Mat y0m = spec.matrix(y0);
      Eigen::EigenSolver<Mat> es0(y0m, false);
      if (es0.info() != Eigen::Success) continue;
      std::vector<Complex> got(es0.eigenvalues().data(),
                               es0.eigenvalues().data() + n);
      double mismatch = multiset_mismatch(got, target);
      if (mismatch > tol) continue;

      // Conjugator from matching real canonical forms.
      RealCanonical ry = real_canonical_form(ym, tol);
      RealCanonical r0 = real_canonical_form(y0m, tol);
      Mat g;
      bool have_g = false;
      if (ry.ok && r0.ok && (ry.form - r0.form).norm() <= 10 * tol) {
        g = ry.P * r0.P.inverse();
        // Normalize |det| to 1; a sign flip is absorbed by negating one real
        // eigenvector column, which preserves the similarity.
        double det = g.determinant();
        g /= std::pow(std::abs(det), 1.0 / n);
        if (g.determinant() < 0) {
          bool fixed = false;
          for (int cidx = 0; cidx < n && !fixed; ++cidx) {
            bool real_block = true;
            for (int rr = 0; rr < n; ++rr)
              if (rr != cidx && std::abs(ry.form(rr, cidx)) > tol)
                real_block = false;
            if (real_block) {
              Mat Pf = ry.P;
              Pf.col(cidx) *= -1.0;
              g = Pf * r0.P.inverse();
              g /= std::pow(std::abs(g.determinant()), 1.0 / n);
              fixed = g.determinant() > 0;
            }
          }
          if (!fixed) have_g = false;
        }
        if (g.determinant() > 0 &&
            (g * y0m * g.inverse() - ym).norm() <= 1e-6 * std::max(1.0, scale))
          have_g = true;
      }
      if (have_g && spec.constraint()) {
        GroupElement ge{y.algebra, g};
        try {
          ge.validate(1e-8);
        } catch (const AlgebraError&) {
          have_g = false;
        }
      }
      if (!have_g) {
        // Constraint not satisfied by the eigenbasis conjugator (or the
        // canonical forms differ by block orientation): search inside the
        // group directly.
        if (!refine_conjugator_in_group(spec, y0, y.coords, rng, g)) continue;
      }
      double check = (g * y0m * g.inverse() - ym).norm();
      if (check > 1e-6 * std::max(1.0, scale)) continue;

      CartanConjugation out{{y.algebra, g},
                            {y.algebra, y0},
                            cname,
                            spec.norm(y0) / std::max(y.norm(), 1e-300)};
      return out;
    }
  }
  throw AlgebraError(
      "could not conjugate the element into any cartan rep of spec '" +
      spec.name() + "'");
}

// -- sampling -----------------------------------------------------------------

void check_subalgebra(const SpecPtr& algebra, const std::vector<Vec>& basis,
                      double tol) {
  if (basis.empty()) return;
  Mat V(algebra->dim(), static_cast<int>(basis.size()));
  for (int j = 0; j < V.cols(); ++j) V.col(j) = basis[j];
  Eigen::ColPivHouseholderQR<Mat> qr(V);
  if (qr.rank() != V.cols())
    throw AlgebraError("subalgebra basis is not independent");
  for (int i = 0; i < V.cols(); ++i)
    for (int j = i + 1; j < V.cols(); ++j) {
      AlgebraElement br =
          bracket({algebra, basis[i]}, {algebra, basis[j]});
      Vec c = qr.solve(br.coords);
      if ((V * c - br.coords).norm() >
          tol * std::max(1.0, br.coords.norm()))
        throw AlgebraError("subalgebra basis is not closed under bracket");
    }
}

AlgebraElement random_unit_element(const SpecPtr& algebra, Rng& rng) {
  Vec c(algebra->dim());
  for (int i = 0; i < c.size(); ++i) c[i] = rng.gauss();
  double nrm = algebra->norm(c);
  if (nrm < 1e-12) {
    c.setZero();
    c[0] = 1.0;
    nrm = algebra->norm(c);
  }
  return {algebra, Vec(c / nrm)};
}

GroupElement GroupSampler::sample(Rng& rng) const {
  const int n = algebra->ambient_dim();
  Mat g = Mat::Identity(n, n);
  int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(
                                   std::max(1, factors)));
  for (int i = 0; i < k; ++i) {
    AlgebraElement u = random_unit_element(algebra, rng);
    double r = rng.uniform(0.0, max_scale);
    g = g * (r * u.matrix()).exp();
  }
  return {algebra, g};
}

GroupElement GroupSampler::at(std::uint64_t seed, std::uint64_t index) const {
  Rng rng = Rng::at(seed, index);
  return sample(rng);
}

double semisimple_density_serial(const SpecPtr& algebra, int n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 1) throw AlgebraError("semisimple_density needs n_samples >= 1");
  int count = 0;
  for (int i = 0; i < n_samples; ++i) {
    Rng rng = Rng::at(seed, static_cast<std::uint64_t>(i));
    AlgebraElement x = random_unit_element(algebra, rng);
    try {
      if (classify(x).semisimple()) ++count;
    } catch (const UnclassifiableError&) {
      // counted as not semisimple
    }
  }
  return static_cast<double>(count) / n_samples;
}

double semisimple_density(const SpecPtr& algebra, int n_samples,
                          std::uint64_t seed, ExecPolicy policy) {
  if (n_samples < 1) throw AlgebraError("semisimple_density needs n_samples >= 1");
  auto flags = par::map_indexed<char>(
      static_cast<std::size_t>(n_samples), policy, [&](std::size_t i) -> char {
        Rng rng = Rng::at(seed, i);
        AlgebraElement x = random_unit_element(algebra, rng);
        try {
          return classify(x).semisimple() ? 1 : 0;
        } catch (const UnclassifiableError&) {
          return 0;
        }
      });
  long count = std::count(flags.begin(), flags.end(), 1);
  return static_cast<double>(count) / n_samples;
}

}  // namespace orbitcone
