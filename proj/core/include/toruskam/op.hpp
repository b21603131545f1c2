#pragma once
// Quasi-periodic linear operators on truncated torus fields.  A family
// phi -> A(phi) of operators acting on x-modes is identified with the matrix
// coupling input mode (ell', j') to output mode (ell, j) through
//     A_j^{j'}(ell - ell'),
// i.e. the phi-dependence is Toeplitz: only the offset delta = ell - ell'
// enters.  Storage is one dense x-block per offset, |delta|_inf <= band.
// The unbounded part omega . d_phi is never stored here; it acts exactly on
// fields (see TorusField::omega_dphi) and on operators as the block scaling
// i (omega . delta).

#include <functional>
#include <iosfwd>
#include <vector>

#include "toruskam/field.hpp"

namespace toruskam {

class LinearOperator {
 public:
  LinearOperator() = default;
  LinearOperator(const Truncation& tr, int band);

  static LinearOperator zero(const Truncation& tr, int band = 0);
  static LinearOperator identity(const Truncation& tr);
  // Multiplication operator u -> a u; band = K_phi of the frame.
  static LinearOperator multiplication(const TorusField& a);
  // Fourier multiplier u_j -> g(j) u_j.
  static LinearOperator fourier_multiplier(const Truncation& tr,
                                           const std::function<cd(int)>& g);
  // d/dx, the Hilbert transform (-i sign(j), 0 on j = 0), and the x-average
  // projector pi_0.
  static LinearOperator dx(const Truncation& tr);
  static LinearOperator hilbert(const Truncation& tr);
  static LinearOperator mean_x(const Truncation& tr);

  const Truncation& trunc() const { return tr_; }
  int band() const { return band_; }
  int n_x() const { return tr_.x_count(); }
  PhiBox band_box() const { return PhiBox{tr_.nu, band_}; }

  Eigen::MatrixXcd& block(const MultiIndex& delta) { return blocks_[band_box().flat(delta)]; }
  const Eigen::MatrixXcd& block(const MultiIndex& delta) const {
    return blocks_[band_box().flat(delta)];
  }
  Eigen::MatrixXcd block_or_zero(const MultiIndex& delta) const;
  // Entry coupling input x-mode j' to output x-mode j at phi-offset delta.
  cd entry(const MultiIndex& delta, int j, int j_in) const;

  // ---- algebra ----
  LinearOperator& operator+=(const LinearOperator& o);
  LinearOperator& operator-=(const LinearOperator& o);
  LinearOperator& operator*=(cd s);
  friend LinearOperator operator+(LinearOperator a, const LinearOperator& b) { a += b; return a; }
  friend LinearOperator operator-(LinearOperator a, const LinearOperator& b) { a -= b; return a; }
  friend LinearOperator operator*(cd s, LinearOperator a) { a *= s; return a; }
  LinearOperator operator-() const;

  // Composition: exact for the action on the truncated frame.  The result
  // band is min(band_a + band_b, 2 K_phi, band_cap if >= 0); offsets beyond
  // 2 K_phi never couple two modes of the frame.
  LinearOperator compose(const LinearOperator& o, int band_cap = -1) const;
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    return a.compose(b);
  }

  TorusField apply(const TorusField& u) const;

  // ---- unary images ----
  LinearOperator adjoint() const;      // L2 adjoint: conj(A_{j'}^{j}(-delta))
  LinearOperator conj_op() const;      // bar A : u -> conj(A conj(u))
  LinearOperator majorant() const;     // entrywise moduli
  LinearOperator smoothed(int N) const;             // keep |delta|_inf <= N
  LinearOperator smoothed_complement(int N) const;  // the rest
  LinearOperator phi_weight(double b) const;        // scale blocks by <delta>^b
  LinearOperator omega_dphi(const Eigen::VectorXd& omega) const;  // blocks *= i(omega.delta)
  LinearOperator commutator_dx() const;             // [d_x, A]: entries *= i(j - j')
  LinearOperator reflected_phi() const;             // phi -> A(-phi): delta mirror
  LinearOperator truncated_band(int new_band) const;
  LinearOperator resized(const Truncation& tr) const;  // embed/restrict x and phi modes

  // Apply a field-level map entrywise to all blocks (helper for mirrors).
  LinearOperator map_entries(
      const std::function<cd(const MultiIndex& delta, int j, int j_in, cd)>& fn) const;

  // ---- structure diagnostics (max absolute defect over all entries) ----
  double norm_max() const;
  double evenness_defect() const;        // A_j^{j'}(d) - A_{-j}^{-j'}(d)
  double realness_defect() const;        // A - bar A
  double phi_even_defect() const;        // A(-d) - A(d)
  double phi_odd_defect() const;         // A(-d) + A(d)
  // For scalar operators in complex coordinates (blocks R1, R2 of a real
  // 2x2 system): reversible <=> R(d)_j^{j'} = -conj(R(-d)_{-j}^{-j'})
  // evaluated entrywise; reversibility-preserving with + sign.
  double reversible_defect() const;
  double rev_preserving_defect() const;

  // Exact symmetrizations (average with the mirrored copy).
  LinearOperator symmetrized_even() const;
  LinearOperator symmetrized_real() const;

  // Operator norm on H^s via power iteration on the weighted matrix
  // W_s A W_s^{-1} (deterministic start); exact induced norm in the limit.
  double op_norm_s(double s, int iters = 60) const;

  // ---- dense view (small frames only) ----
  Eigen::MatrixXcd dense() const;
  void to_dense_csv(std::ostream& os) const;

 private:
  Truncation tr_;
  int band_ = 0;
  std::vector<Eigen::MatrixXcd> blocks_;
};

// Collocation slices of the operator family: M(phi_p) = sum_delta A(delta)
// e^{i delta . phi_p} for p over the P^nu tensor grid.  Exact when
// P >= 2 band + 1.
std::vector<Eigen::MatrixXcd> op_slices(const LinearOperator& A, int P);
LinearOperator op_unslices(const std::vector<Eigen::MatrixXcd>& slices, const Truncation& tr,
                           int band, int P);

// omega . d_phi as a diagonal action on fields lives in TorusField; this
// helper returns the full operator L u = (omega . d_phi) u + A u applied to u.
TorusField apply_with_omega_dphi(const LinearOperator& A, const Eigen::VectorXd& omega,
                                 const TorusField& u);

// A real operator acting on pairs (eta, psi) of real fields.
struct RealBlockOperator {
  LinearOperator A, B, C, D;

  TorusField apply_eta(const TorusField& eta, const TorusField& psi) const;
  TorusField apply_psi(const TorusField& eta, const TorusField& psi) const;
  RealBlockOperator compose(const RealBlockOperator& o) const;
  RealBlockOperator operator+(const RealBlockOperator& o) const;
  RealBlockOperator operator-(const RealBlockOperator& o) const;

  // Structure in the (eta, psi) variables: all blocks real (as maps of real
  // fields); reversible <=> A, D odd and B, C even in phi;
  // reversibility-preserving <=> A, D even and B, C odd in phi.
  double realness_defect() const;
  double reversible_defect() const;
  double rev_preserving_defect() const;
  double evenness_defect() const;
};

// The same operator in complex coordinates u = eta + i psi: the two
// independent blocks of [[R1, R2], [bar R2, bar R1]].
struct BlockOperator {
  LinearOperator R1, R2;

  static BlockOperator from_real(const RealBlockOperator& R);
  RealBlockOperator to_real() const;

  // Action on (u, bar u): v = R1 u + R2 bar u (the second row is conjugate).
  TorusField apply(const TorusField& u, const TorusField& ubar) const;
  BlockOperator compose(const BlockOperator& o) const;
  BlockOperator operator+(const BlockOperator& o) const;
  BlockOperator operator-(const BlockOperator& o) const;
  BlockOperator operator*(cd s) const;

  // even <=> R1, R2 even; reversible <=> R_i(-phi) = -bar R_i(phi);
  // reversibility-preserving <=> R_i(-phi) = bar R_i(phi).
  double evenness_defect() const;
  double reversible_defect() const;
  double rev_preserving_defect() const;
};

}  // namespace toruskam
