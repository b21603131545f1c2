#pragma once
// Smooth cutoffs and the dispersion-related Fourier multiplier symbols.
// All are C^inf functions of the real frequency variable xi; on integer
// slots the cutoffs reduce to the exact indicator of xi != 0, so the
// operators they define on periodic functions are the familiar ones:
//   |D|^m        : 0 on the mean, |j|^m elsewhere
//   T(D)         : |j|^{1/2} (1 + kappa j^2)^{1/2} on j != 0
//   g(D)         : 1 on the mean, |j|^{-1/2} (1 + kappa j^2)^{1/2} elsewhere.

#include <cmath>
#include <functional>

namespace toruskam {

// C^inf step: 0 for t <= 0, 1 for t >= 1, strictly increasing between.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Cutoff vanishing for |xi| <= 1/3 and equal to 1 for |xi| >= 2/3.
inline double cutoff_chi(double xi) { return smooth_step(3.0 * std::abs(xi) - 1.0); }

// Cutoff vanishing for |xi| <= 1/2 and equal to 1 for |xi| >= 3/4.
inline double cutoff_chi0(double xi) { return smooth_step(4.0 * std::abs(xi) - 2.0); }

// chi(xi) |xi|^m, the symbol of |D|^m.
inline double symbol_abs_pow(double xi, double m) {
  const double c = cutoff_chi(xi);
  if (c == 0.0) return 0.0;
  return c * std::pow(std::abs(xi), m);
}

// T(xi) = chi(xi) |xi|^{1/2} (1 + kappa xi^2)^{1/2}, order 3/2.
inline double symbol_T(double xi, double kappa) {
  const double c = cutoff_chi(xi);
  if (c == 0.0) return 0.0;
  return c * std::sqrt(std::abs(xi)) * std::sqrt(1.0 + kappa * xi * xi);
}

// d/dxi of |xi|^{1/2}(1 + kappa xi^2)^{1/2} away from the cutoff region
// (valid for |xi| >= 2/3 where chi = 1).
inline double symbol_T_prime(double xi, double kappa) {
  const double s = xi >= 0 ? 1.0 : -1.0;
  const double a = std::abs(xi);
  return s * (1.0 + 3.0 * kappa * xi * xi) /
         (2.0 * std::sqrt(a) * std::sqrt(1.0 + kappa * xi * xi));
}

// g(xi): even, positive, g(0) = 1, equal to |xi|^{-1/2}(1 + kappa xi^2)^{1/2}
// for |xi| >= 1/3 (smooth blend on 1/6 <= |xi| <= 1/3).
inline double symbol_g(double xi, double kappa) {
  const double a = std::abs(xi);
  const double w = smooth_step(6.0 * a - 1.0);
  if (w == 0.0) return 1.0;
  const double exact = std::sqrt(1.0 + kappa * xi * xi) / std::sqrt(a);
  return (1.0 - w) + w * exact;
}

inline double symbol_g_inv(double xi, double kappa) { return 1.0 / symbol_g(xi, kappa); }

// Linear frequencies omega_j = sqrt(j (1 + kappa j^2)) for j >= 1; the
// (,j = 0) convention sqrt(kappa) is used by the degenerate-KAM module.
inline double linear_frequency(int j, double kappa) {
  if (j == 0) return std::sqrt(kappa);
  const double a = std::abs(double(j));
  return std::sqrt(a * (1.0 + kappa * a * a));
}

}  // namespace toruskam
