#pragma once
// Collocation transforms between mode space and tensor grids, plus the
// grid-based field algebra (products, quotients, pointwise maps, composition
// with x-diffeomorphisms).  Grids are phi_m = 2*pi*m/P_phi per angle axis and
// x_n = 2*pi*n/P_x; values are stored row-major with x fastest.

#include <functional>

#include "toruskam/field.hpp"

namespace toruskam {

// Padded sizes that make a single pairwise product alias-free.
int padded_phi(int K_phi);  // >= 4*K_phi + 1
int padded_x(int N_x);      // >= 4*N_x + 1

// Mode space  <->  collocation values on the full (phi, x) grid.
Eigen::VectorXcd grid_synthesize(const TorusField& u, int P_phi, int P_x);
TorusField grid_analyze(const Eigen::VectorXcd& vals, const Truncation& tr, int P_phi, int P_x);

// Build a field by sampling fn(phi, x) on a grid and projecting.
TorusField field_from_fn(const Truncation& tr,
                         const std::function<cd(const double* phi, double x)>& fn,
                         int P_phi = 0, int P_x = 0);

// Pointwise algebra via padded collocation (exact product + mode truncation).
TorusField field_multiply(const TorusField& a, const TorusField& b);
TorusField field_divide(const TorusField& a, const TorusField& b);
TorusField field_map(const TorusField& a, const std::function<cd(cd)>& fn,
                     int P_phi = 0, int P_x = 0);
double field_min_real_on_grid(const TorusField& a, int P_phi = 0, int P_x = 0);
double field_max_abs_on_grid(const TorusField& a, int P_phi = 0, int P_x = 0);

// x-slices at phi collocation nodes: row p (p = 0..P^nu-1) holds the x-mode
// coefficients of u(phi_p, .).  Exact when P >= 2*K_phi + 1.
Eigen::MatrixXcd phi_slices(const TorusField& u, int P);
TorusField phi_unslices(const Eigen::MatrixXcd& slices, const Truncation& tr, int P);
// The phi node (vector of nu angles) for row p of phi_slices.
void phi_node(int nu, int P, std::int64_t p, double* phi_out);

// 1D x transforms for a single slice (modes |j| <= N).
Eigen::VectorXcd x_synthesize(const Eigen::VectorXcd& modes, int N, int P);
Eigen::VectorXcd x_analyze(const Eigen::VectorXcd& vals, int N, int P);
// Evaluate sum_j modes[j+N] e^{i j x} at one point.
cd x_eval(const Eigen::VectorXcd& modes, int N, double x);
cd x_eval_deriv(const Eigen::VectorXcd& modes, int N, double x);

// Batched phi-DFT with E complex channels per node.  `blocks` holds one
// E-vector per offset delta in PhiBox(nu, K) flat order; `vals` holds one
// E-vector per phi node p = 0..P^nu-1 (row-major, axis 0 most significant).
// synthesize:  vals(p) = sum_delta blocks(delta) e^{i delta . phi_p}
// analyze:     blocks(delta) = P^-nu sum_p vals(p) e^{-i delta . phi_p}
void phi_many_synthesize(const PhiBox& box, int P, std::int64_t E, const cd* blocks, cd* vals);
void phi_many_analyze(const PhiBox& out_box, int P, std::int64_t E, const cd* vals, cd* blocks);

// v(phi, x) = u(phi, x + beta(phi, x)); beta real-valued.
TorusField compose_x(const TorusField& u, const TorusField& beta, int oversample = 4);
// beta_tilde with  y = x + beta_tilde(x)  solving  y + beta(y) = x  per slice
// (the inverse diffeomorphism of x -> x + beta), via per-point Newton.
TorusField invert_diffeo_x(const TorusField& beta, int oversample = 4,
                           double tol = 1e-12, int max_iter = 60);

}  // namespace toruskam
