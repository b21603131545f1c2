#pragma once
// The Dirichlet-Neumann operator of deep water on the circle, through the
// conformal change of variables.  A displacement p (zero x-average, one per
// angle) flattens the free surface; in the straightened variable the operator
// is the exact first-order multiplier conjugated by composition:
//     G = d/dx . P^{-1} H P,     (P u)(x) = u(x + p(x)),
// with H the Hilbert transform.  The difference G - |D| is a smoothing
// integral operator whose kernel is known in closed form and serves as an
// independent cross-check of the assembled matrix.

#include <vector>

#include "toruskam/field.hpp"
#include "toruskam/kernelop.hpp"
#include "toruskam/op.hpp"

namespace toruskam {

struct ConformalMap {
  TorusField p;      // displacement: the straightened abscissa is X with x = X + p(X)
  TorusField p_inv;  // inverse correction: X = x + p_inv(x)
  TorusField c;      // per-angle mean of the composed profile, supported on j = 0
  double residual = 0.0;        // fixed-point defect of p in the s0 norm
  int iterations = 0;           // composition steps taken
  std::vector<double> history;  // defect after each step
};

// Largest per-angle L2(dx) norm of p_xx.  The conformal construction needs it
// below conformal_c0(), which keeps the straightening a diffeomorphism with
// uniform margin.
double conformal_c0_norm(const TorusField& p);
constexpr double conformal_c0() { return 0.19947114020071633897; }  // 1/(2 sqrt(2 pi))

// Solves p = H[eta(. + p)] by the contraction iteration from p = 0, one
// composition per step on the collocation grid.  Throws std::domain_error
// when sup|eta_x| >= 1/2 (no contraction margin) or when the converged
// displacement violates the curvature bound; throws std::runtime_error when
// the defect stalls for five steps or max_iter is exhausted (the message
// carries the defect history).
ConformalMap solve_conformal(const TorusField& eta, double tol = 1e-11, int max_iter = 50);

// G psi = d/dx P^{-1} H P psi, evaluated by collocation composition.
TorusField dn_apply(const ConformalMap& map, const TorusField& psi);

struct DNOperator {
  TorusField eta;
  ConformalMap map;
  LinearOperator matrix;  // the operator assembled on the frame
};

DNOperator dn_assemble(const TorusField& eta, double tol = 1e-11, int max_iter = 50);

// G - |D| on the frame.
LinearOperator dn_remainder(const DNOperator& dn);

// Closed-form integral kernel of G - |D| for an angle-independent map, on n
// collocation points (n <= 0 picks 4 (2 N_x + 1)).  Convention matches
// IntegralKernel: the operator acts as (1/n) sum_p K(m, p) u(x_p).
IntegralKernel dn_remainder_kernel(const ConformalMap& map, int n = 0);

// Traces of the fluid velocity at the surface for the state (eta, psi):
//     B = (eta_x psi_x + G(eta) psi) / (1 + eta_x^2),   V = psi_x - B eta_x,
// the vertical and horizontal components.
struct SurfaceVelocity {
  TorusField B, V;
};
SurfaceVelocity surface_velocity(const TorusField& eta, const ConformalMap& map,
                                 const TorusField& psi);

// Derivative of eta -> G(eta) psi in the direction eta_hat:
//     -G(eta)(B eta_hat) - d/dx (V eta_hat),
// with B, V the surface velocity traces above.
TorusField dn_shape_derivative(const TorusField& eta, const ConformalMap& map,
                               const TorusField& eta_hat, const TorusField& psi);

}  // namespace toruskam
