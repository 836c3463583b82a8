#ifndef ORBITCONE_TESTS_ORACLES_HPP
#define ORBITCONE_TESTS_ORACLES_HPP

// Independent numerical oracles used by the tests. These stay deliberately
// separate from the library paths they check: the exponential is plain
// scaling-and-squaring on the Taylor series, the logarithm is inverse scaling
// through Denman-Beavers square roots, and the quadric-cone distance is a
// direct constrained minimization.

#include <cmath>

#include "orbitcone/types.hpp"

namespace orbitcone::oracle {

inline Mat expm_taylor(const Mat& a) {
  int squarings = 0;
  Mat s = a;
  while (s.norm() > 0.25) {
    s *= 0.5;
    ++squarings;
  }
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * s / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline Mat sqrtm_denman_beavers(const Mat& a) {
  Mat y = a;
  Mat z = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < 60; ++i) {
    Mat yn = 0.5 * (y + z.inverse());
    Mat zn = 0.5 * (z + y.inverse());
    if ((yn - y).norm() < 1e-15 * y.norm()) {
      y = yn;
      break;
    }
    y = yn;
    z = zn;
  }
  return y;
}

inline Mat logm_inverse_scaling(const Mat& g) {
  Mat a = g;
  int roots = 0;
  const Mat id = Mat::Identity(g.rows(), g.cols());
  while ((a - id).norm() > 0.2 && roots < 40) {
    a = sqrtm_denman_beavers(a);
    ++roots;
  }
  Mat x = a - id;
  Mat term = x;
  Mat sum = Mat::Zero(g.rows(), g.cols());
  for (int k = 1; k <= 30; ++k) {
    sum += term / static_cast<double>(k) * (k % 2 == 1 ? 1.0 : -1.0);
    term = term * x;
  }
  return std::pow(2.0, roots) * sum;
}

/// Distance on the unit sphere (chordal, in the Frobenius metric of the sl2
/// coordinates, where the basis Gram is 2 I) from the direction (0,0,1) to
/// the quadric cone x^2 + y^2 >= z^2, minimized directly over the boundary
/// parametrization z = cos(t), x = sin(t) (the azimuth is symmetric).
inline double sl2_elliptic_to_quadric_distance() {
  auto chord2 = [](double t) {
    // unit vectors in coordinates scaled so that the Gram factor cancels:
    // p = (0, 0, 1), q = (sin t, 0, cos t); the cone constraint is
    // sin^2 t >= cos^2 t, i.e. t >= pi/4.
    double dx = std::sin(t);
    double dz = 1.0 - std::cos(t);
    return dx * dx + dz * dz;
  };
  double lo = M_PI / 4.0, hi = M_PI / 2.0;
  // golden-section minimize (the minimum sits at the boundary t = pi/4, but
  // the oracle does not assume that)
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (chord2(c) < chord2(d))
      b = d;
    else
      a = c;
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return std::sqrt(chord2(0.5 * (a + b)));
}

}  // namespace orbitcone::oracle

#endif
