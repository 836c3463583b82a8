#include "orbitcone/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>

namespace orbitcone {

namespace {

// Coefficients of P(u + delta) in powers of u.
std::vector<double> shift_poly(const std::vector<double>& p, double delta) {
  const int n = static_cast<int>(p.size());
  std::vector<double> q(n, 0.0);
  for (int m = 0; m < n; ++m) {
    double binom = 1.0;  // C(m, k) * delta^{m-k}, built incrementally
    double pw = 1.0;
    // q[k] += C(m,k) delta^{m-k} p[m]; iterate k = m down to 0
    for (int k = m; k >= 0; --k) {
      q[k] += binom * pw * p[m];
      if (k > 0) {
        binom = binom * k / (m - k + 1);
        pw *= delta;
      }
    }
  }
  return q;
}

double eval_poly(const std::vector<double>& p, double u) {
  double v = 0.0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) v = v * u + p[i];
  return v;
}

}  // namespace

PiecewisePoly PiecewisePoly::indicator(double lo, double hi) {
  PiecewisePoly f;
  f.breaks_ = {lo, hi};
  f.coef_ = {{1.0}};
  return f;
}

double PiecewisePoly::eval(double x) const {
  if (breaks_.empty() || x < breaks_.front() || x >= breaks_.back()) return 0.0;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  int piece = static_cast<int>(it - breaks_.begin()) - 1;
  if (piece < 0 || piece >= pieces()) return 0.0;
  return eval_poly(coef_[piece], x - breaks_[piece]);
}

PiecewisePoly PiecewisePoly::box_convolved(double width) const {
  const double h = width / 2.0;
  // Antiderivative F with F(support_lo) = 0; per-piece constants accumulate.
  std::vector<std::vector<double>> F(coef_.size());
  std::vector<double> left_value(coef_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    std::vector<double> anti(coef_[i].size() + 1, 0.0);
    anti[0] = left_value[i];
    for (std::size_t k = 0; k < coef_[i].size(); ++k)
      anti[k + 1] = coef_[i][k] / static_cast<double>(k + 1);
    F[i] = anti;
    left_value[i + 1] = eval_poly(anti, breaks_[i + 1] - breaks_[i]);
  }
  const double total = left_value[coef_.size()];

  // F(x + shift) as a polynomial in (x - piece_left), on a result piece
  // (piece_left, piece_right) where x + shift stays inside one F branch.
  // The branch is selected with an interior probe point.
  auto shifted_F = [&](double piece_left, double piece_right, double shift) {
    double probe = 0.5 * (piece_left + piece_right) + shift;
    if (probe < breaks_.front()) return std::vector<double>{0.0};
    if (probe >= breaks_.back()) return std::vector<double>{total};
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), probe);
    int piece = std::clamp(static_cast<int>(it - breaks_.begin()) - 1, 0,
                           pieces() - 1);
    return shift_poly(F[piece], piece_left + shift - breaks_[piece]);
  };

  // New breakpoints: every old break shifted by +-h.
  std::vector<double> nb;
  for (double b : breaks_) {
    nb.push_back(b - h);
    nb.push_back(b + h);
  }
  std::sort(nb.begin(), nb.end());
  nb.erase(std::unique(nb.begin(), nb.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-15; }),
           nb.end());

  PiecewisePoly g;
  g.breaks_ = nb;
  for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
    // g(x) = (F(x + h) - F(x - h)) / width on this piece.
    std::vector<double> up = shifted_F(nb[i], nb[i + 1], h);
    std::vector<double> dn = shifted_F(nb[i], nb[i + 1], -h);
    std::vector<double> c(std::max(up.size(), dn.size()), 0.0);
    for (std::size_t k = 0; k < up.size(); ++k) c[k] += up[k];
    for (std::size_t k = 0; k < dn.size(); ++k) c[k] -= dn[k];
    for (double& v : c) v /= width;
    g.coef_.push_back(std::move(c));
  }
  return g;
}

void PiecewisePoly::clamp_plateau(double lo, double hi) {
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (breaks_[i] >= lo - 1e-14 && breaks_[i + 1] <= hi + 1e-14)
      coef_[i] = {1.0};
}

}  // namespace orbitcone
