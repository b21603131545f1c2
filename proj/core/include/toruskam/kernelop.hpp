#pragma once
// Smoothing integral operators on the x-circle, given by collocation kernels
//   (R u)(x) = (1/2pi) int_T K(x, z) u(z) dz,
// discretized by the trapezoid rule on n uniform points:
//   (R u)(x_m) = (1/n) sum_p K(m, p) u(x_p),  x_m = 2 pi m / n.
// Used for the commutator of a multiplication operator with the Hilbert
// transform and for the conjugation of the Hilbert transform by a
// change of the x variable, both of which have smooth kernels.

#include <Eigen/Dense>

#include "toruskam/op.hpp"

namespace toruskam {

struct IntegralKernel {
  int n = 0;            // collocation points x_m = 2 pi m / n
  Eigen::MatrixXcd K;   // n x n kernel values K(m, p)

  // Apply to x-Fourier coefficients (size 2 N_x + 1), returning coefficients.
  Eigen::VectorXcd apply_x(const Eigen::VectorXcd& modes, int N_x) const;
  double max_abs() const { return n == 0 ? 0.0 : K.cwiseAbs().maxCoeff(); }
};

// Hilbert transform on fields: e^{i j x} -> -i sign(j) e^{i j x}, means to 0.
TorusField hilbert(const TorusField& u);

// x-Fourier coefficients (size 2 N_x + 1) of a phi-independent field; throws
// std::invalid_argument naming `who` if any phi mode is populated.
Eigen::VectorXcd x_only_coeffs(const TorusField& a, const char* who);

// Kernel of the commutator [M_a, H] = a H - H a for an x-only multiplier a:
//   K(x, y) = (a(x) - a(y)) / tan((x - y)/2),   K(x, x) = 2 a'(x).
// Throws if a depends on phi.  n defaults to 4 * (2 N_x + 1) when <= 0.
IntegralKernel commutator_aH_kernel(const TorusField& a, int n = 0);

// Kernel of P^{-1} H P - H where (P u)(x) = u(x + p(x)) and
// z -> z + q(z) inverts x -> x + p(x).  Takes the inverse correction q
// (x-only) and returns
//   K(x, z) = (1 + q'(z)) / tan((Q(x) - Q(z))/2) - 1 / tan((x - z)/2),
//   Q(t) = t + q(t),    K(x, x) = -q''(x) / (1 + q'(x)).
IntegralKernel conjugated_hilbert_kernel(const TorusField& q, int n = 0);

// Matrix of the kernel operator on x-modes |j| <= N_x.
Eigen::MatrixXcd kernel_x_matrix(const IntegralKernel& ker, int N_x);

// Same matrix as a phi-independent (band 0) operator on the frame.
LinearOperator kernel_operator(const IntegralKernel& ker, const Truncation& tr);

}  // namespace toruskam
