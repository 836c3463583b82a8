#ifndef ORBITCONE_PIECEWISE_POLY_HPP
#define ORBITCONE_PIECEWISE_POLY_HPP

#include <vector>

namespace orbitcone {

/// Compactly supported piecewise polynomial on the real line. Piece i lives
/// on [breaks[i], breaks[i+1]) with coefficients in powers of (x - breaks[i]);
/// the function is zero outside [breaks.front(), breaks.back()].
class PiecewisePoly {
 public:
  PiecewisePoly() = default;

  static PiecewisePoly indicator(double lo, double hi);

  double eval(double x) const;

  /// Convolution with the normalized box kernel of the given width. The
  /// result is again compactly supported piecewise polynomial, computed
  /// exactly from the antiderivative.
  PiecewisePoly box_convolved(double width) const;

  /// Replaces every piece fully contained in [lo, hi] by the constant 1
  /// (used where the construction guarantees a plateau analytically).
  void clamp_plateau(double lo, double hi);

  double support_lo() const { return breaks_.empty() ? 0 : breaks_.front(); }
  double support_hi() const { return breaks_.empty() ? 0 : breaks_.back(); }
  int pieces() const { return static_cast<int>(coef_.size()); }

 private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coef_;
};

}  // namespace orbitcone

#endif
