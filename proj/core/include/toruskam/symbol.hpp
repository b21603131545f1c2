#pragma once
// Discrete pseudo-differential symbols a(phi, x, xi) on the torus, tabulated
// on integer frequency slots |xi| <= N_xi.  The operator action is
//   (Op(a) u)(phi, x) = sum_j a(phi, x, j) u_j(phi) e^{i j x},
// so the quantized matrix is  A_j^{j'}(delta) = hat a(delta, j - j', j').
// Compositions shift the slot argument; slots whose value would require data
// beyond the slot box are "boundary-contaminated" and tracked by a margin:
// slots with |xi| > N_xi - margin are unreliable and excluded from norms.

#include <functional>
#include <utility>
#include <vector>

#include "toruskam/op.hpp"

namespace toruskam {

class DiscreteSymbol {
 public:
  DiscreteSymbol() = default;
  DiscreteSymbol(int nu, int band, int K_x, int N_xi, double order_m);

  // Fourier multiplier g(xi) sampled on integer slots (band = K_x = 0).
  static DiscreteSymbol from_multiplier(int nu, int N_xi,
                                        const std::function<cd(double)>& g, double order_m);
  // Multiplication symbol: a(phi, x) independent of xi.
  static DiscreteSymbol from_field(const TorusField& a, int N_xi);
  // Arbitrary table for tests: fn(delta, k, xi).
  static DiscreteSymbol from_fn(int nu, int band, int K_x, int N_xi, double order_m,
                                const std::function<cd(const MultiIndex&, int, int)>& fn);

  int nu() const { return nu_; }
  int band() const { return band_; }
  int K_x() const { return K_x_; }
  int N_xi() const { return N_xi_; }
  double order() const { return m_; }
  void set_order(double m) { m_ = m; }
  int margin() const { return margin_; }
  void set_margin(int m) { margin_ = m; }
  // Largest |xi| whose value is trustworthy.
  int interior_radius() const { return N_xi_ - margin_; }
  std::vector<int> contaminated_slots() const;

  PhiBox phi_box() const { return PhiBox{nu_, band_}; }
  std::int64_t size() const { return tab_.size(); }
  Eigen::VectorXcd& table() { return tab_; }
  const Eigen::VectorXcd& table() const { return tab_; }

  std::int64_t index(std::int64_t phi_flat, int k, int xi) const {
    return (phi_flat * (2 * K_x_ + 1) + (k + K_x_)) * (2 * N_xi_ + 1) + (xi + N_xi_);
  }
  cd& at(const MultiIndex& delta, int k, int xi) {
    return tab_[index(phi_box().flat(delta), k, xi)];
  }
  cd at(const MultiIndex& delta, int k, int xi) const {
    return tab_[index(phi_box().flat(delta), k, xi)];
  }
  cd at_or_zero(const MultiIndex& delta, int k, int xi) const;

  // Value a(phi, x, xi) at a collocation point (mode sum; diagnostics).
  cd eval(const double* phi, double x, int xi) const;

  DiscreteSymbol& operator+=(const DiscreteSymbol& o);
  DiscreteSymbol& operator-=(const DiscreteSymbol& o);
  DiscreteSymbol& operator*=(cd s);
  friend DiscreteSymbol operator+(DiscreteSymbol a, const DiscreteSymbol& b) { a += b; return a; }
  friend DiscreteSymbol operator-(DiscreteSymbol a, const DiscreteSymbol& b) { a -= b; return a; }
  friend DiscreteSymbol operator*(cd s, DiscreteSymbol a) { a *= s; return a; }
  DiscreteSymbol operator-() const;

  // Keep only |k| <= K (x-modes) / |delta|_inf <= B (phi-offsets).
  DiscreteSymbol trimmed_x(int K) const;
  DiscreteSymbol trimmed_band(int B) const;
  // Multiply each slot plane by w(xi).
  DiscreteSymbol scaled_slots(const std::function<cd(int)>& w) const;

 private:
  int nu_ = 2, band_ = 0, K_x_ = 0, N_xi_ = 0;
  double m_ = 0.0;
  int margin_ = 0;
  Eigen::VectorXcd tab_;
};

// ---- quantization ----
LinearOperator quantize(const DiscreteSymbol& a, const Truncation& tr);
TorusField act(const DiscreteSymbol& a, const TorusField& u);
DiscreteSymbol unquantize(const LinearOperator& A, int K_x, int N_xi, double order_m);

// ---- calculus ----
// Exact composition symbol of Op(a) Op(b).
DiscreteSymbol compose_exact(const DiscreteSymbol& a, const DiscreteSymbol& b);
// sum_{beta < N} (1/(beta! i^beta)) d_xi^beta a . d_x^beta b.
DiscreteSymbol expansion_sum(const DiscreteSymbol& a, const DiscreteSymbol& b, int N);
// The order-(m + m' - N) remainder from the Taylor-integral formula,
// discretized with `n_quad`-point Gauss-Legendre in the interpolation
// parameter; d_xi^N a at shifted (non-integer) slots via finite-difference
// interpolation of the slot table.
DiscreteSymbol remainder_taylor(const DiscreteSymbol& a, const DiscreteSymbol& b, int N,
                                int n_quad = 8);
// (expansion_sum, remainder_taylor): their sum approximates compose_exact.
std::pair<DiscreteSymbol, DiscreteSymbol> compose_asymptotic(const DiscreteSymbol& a,
                                                             const DiscreteSymbol& b, int N);
// L2-adjoint symbol: hat a*(delta, k, xi) = conj(hat a(-delta, -k, xi + k)).
DiscreteSymbol adjoint_symbol(const DiscreteSymbol& a);
// Commutator symbol decomposition: (-i {a, b}, r2) with the Poisson bracket
// {a, b} = d_xi a . d_x b - d_x a . d_xi b; the quantized sum approximates
// [Op(a), Op(b)].
std::pair<DiscreteSymbol, DiscreteSymbol> moyal(const DiscreteSymbol& a, const DiscreteSymbol& b);
// Exact commutator symbol compose_exact(a,b) - compose_exact(b,a).
DiscreteSymbol commutator_symbol(const DiscreteSymbol& a, const DiscreteSymbol& b);

// Pointwise (in xi) product of symbols: (phi, x) convolution per slot.
DiscreteSymbol symbol_mul(const DiscreteSymbol& a, const DiscreteSymbol& b);
// d_x (exact: i k) and the slot-difference realization of d_xi^beta
// (centered interpolating stencils of width ~ beta + 8, one-sided at edges).
DiscreteSymbol derivative_x(const DiscreteSymbol& a, int beta = 1);
DiscreteSymbol derivative_xi(const DiscreteSymbol& a, int beta = 1);

// ---- norms and diagnostics ----
// max_{0 <= beta <= alpha} sup over clean slots of
// ||Delta^beta a(.,.,xi)||_s <xi>^{-m+beta}, forward slot differences.
double psido_norm(const DiscreteSymbol& a, double m, double s, int alpha);
// Sobolev norm in (phi, x) of one slot plane.
double slot_sobolev_norm(const DiscreteSymbol& a, double s, int xi);
// All slot norms as a vector indexed xi + N_xi.
Eigen::VectorXd slot_norm_profile(const DiscreteSymbol& a, double s);
// Structure defects: even <=> a(phi,-x,-xi) = a(phi,x,xi);
// real <=> conj(a(phi,x,-xi)) = a(phi,x,xi).
double symbol_even_defect(const DiscreteSymbol& a);
double symbol_real_defect(const DiscreteSymbol& a);

// Least-squares exponent p of y ~ C x^p (log-log fit); xs, ys > 0.
double fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

// Finite-difference weights for the M-th derivative at point z from the
// given nodes (classic recursion; exact for polynomials up to the node count).
Eigen::VectorXd fd_weights(double z, const std::vector<double>& nodes, int M);

}  // namespace toruskam
