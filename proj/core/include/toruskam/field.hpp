#pragma once
// TorusField: truncated Fourier coefficients of a function on T^nu x T.
// u(phi, x) = sum_{|ell|<=K_phi, |j|<=N_x} c(ell, j) e^{i(ell.phi + j x)}.

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "toruskam/truncation.hpp"

namespace toruskam {

using cd = std::complex<double>;

class TorusField {
 public:
  TorusField() = default;
  explicit TorusField(const Truncation& tr)
      : tr_(tr), c_(Eigen::VectorXcd::Zero(tr.size())) {}
  TorusField(const Truncation& tr, Eigen::VectorXcd coeffs)
      : tr_(tr), c_(std::move(coeffs)) {
    if (c_.size() != tr_.size()) throw std::invalid_argument("TorusField: size mismatch");
  }

  const Truncation& trunc() const { return tr_; }
  Eigen::VectorXcd& coeffs() { return c_; }
  const Eigen::VectorXcd& coeffs() const { return c_; }

  cd& at(const MultiIndex& ell, int j) { return c_[tr_.flat(ell, j)]; }
  cd at(const MultiIndex& ell, int j) const { return c_[tr_.flat(ell, j)]; }
  cd at_or_zero(const MultiIndex& ell, int j) const {
    return tr_.contains(ell, j) ? c_[tr_.flat(ell, j)] : cd(0.0, 0.0);
  }

  // ---- algebra ----
  TorusField& operator+=(const TorusField& o) { c_ += o.c_; return *this; }
  TorusField& operator-=(const TorusField& o) { c_ -= o.c_; return *this; }
  TorusField& operator*=(cd s) { c_ *= s; return *this; }
  friend TorusField operator+(TorusField a, const TorusField& b) { a += b; return a; }
  friend TorusField operator-(TorusField a, const TorusField& b) { a -= b; return a; }
  friend TorusField operator*(cd s, TorusField a) { a *= s; return a; }
  friend TorusField operator*(TorusField a, cd s) { a *= s; return a; }
  TorusField operator-() const { return TorusField(tr_, -c_); }

  // ---- norms and projections ----
  double sobolev_norm(double s) const;
  TorusField majorant() const;                 // coefficients replaced by moduli
  TorusField project(int K) const;             // keep max{|ell|_inf, |j|} <= K
  TorusField project_complement(int K) const;  // the rest
  TorusField project_x(int N) const;           // keep |j| <= N only

  // L2 pairing with normalized measure: <u,v> = sum c_u conj(c_v).
  cd inner(const TorusField& v) const { return (c_.array() * v.c_.array().conjugate()).sum(); }

  // ---- symmetries: defect measurement and exact enforcement ----
  double reality_defect() const;   // max |c(-ell,-j) - conj(c(ell,j))|
  double even_x_defect() const;    // max |c(ell,-j) - c(ell,j)|
  double odd_x_defect() const;     // max |c(ell,-j) + c(ell,j)|
  double even_phi_defect() const;  // max |c(-ell,j) - c(ell,j)|
  double odd_phi_defect() const;   // max |c(-ell,j) + c(ell,j)|
  TorusField symmetrized_real() const;
  TorusField symmetrized_even_x() const;
  TorusField symmetrized_odd_x() const;
  TorusField symmetrized_even_phi() const;
  TorusField symmetrized_odd_phi() const;

  // Complex conjugate of the function (coefficient mirror).
  TorusField conj_field() const;
  // u(phi, -x) and u(-phi, x).
  TorusField reflect_x() const;
  TorusField reflect_phi() const;

  // ---- calculus (exact on modes) ----
  TorusField dx() const;                           // d/dx
  TorusField dx_inv() const;                       // zero-mean antiderivative; requires mean_x == 0
  TorusField omega_dphi(const Eigen::VectorXd& omega) const;  // (omega . d_phi)
  // Solves (omega . d_phi) u = rhs on nonzero ell-modes; rhs ell=0 slice must vanish.
  TorusField omega_dphi_inv(const Eigen::VectorXd& omega) const;
  TorusField mean_x() const;   // per-phi x-average, returned as a field supported on j = 0
  cd average() const;          // total average = c(0, 0)
  double max_abs_x_mean_defect() const;  // max_ell |c(ell, 0)|

  // Pointwise evaluation (mode sum; used by collocation compositions).
  cd eval(const double* phi, double x) const;

  // ---- constructors for common fields ----
  // cos(j x) / sin(j x) as real fields (phi-independent).
  static TorusField cos_x(const Truncation& tr, int j, double amp = 1.0);
  static TorusField sin_x(const Truncation& tr, int j, double amp = 1.0);
  static TorusField constant(const Truncation& tr, cd value);
  // e^{i(ell.phi + j x)}.
  static TorusField exponential(const Truncation& tr, const MultiIndex& ell, int j, cd amp = 1.0);

 private:
  Truncation tr_;
  Eigen::VectorXcd c_;
};

// Iterate all (ell, j) modes; fn(ell, j, flat).
template <class Fn>
void for_each_mode(const Truncation& tr, Fn&& fn) {
  const std::int64_t np = tr.phi_count();
  std::int64_t flat = 0;
  for (std::int64_t p = 0; p < np; ++p) {
    MultiIndex ell = tr.phi_unflat(p);
    for (int j = -tr.N_x; j <= tr.N_x; ++j, ++flat) fn(ell, j, flat);
  }
}

}  // namespace toruskam
