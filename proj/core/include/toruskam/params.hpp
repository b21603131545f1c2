#pragma once
// Parameter points lambda = (omega, kappa), diophantine checks, and the
// gamma-weighted parameter-derivative Sobolev norm (central finite
// differences over the (omega, kappa) stencil).

#include <functional>

#include "toruskam/field.hpp"

namespace toruskam {

struct ParamPoint {
  Eigen::VectorXd omega;   // length nu
  double kappa = 1.0;      // surface tension, in [kappa1, kappa2]
  double gamma = 1e-2;     // diophantine constant, in (0,1)
  double tau = 3.0;        // diophantine exponent, >= 1
  int k0 = 0;              // parameter-derivative order carried by norms
  double kappa1 = 0.5;     // admissible kappa interval
  double kappa2 = 2.0;

  void validate() const;
};

// true iff |omega . ell| >= gamma * <ell>^{-tau} for all 0 < |ell|_inf <= K.
bool diophantine_check(const Eigen::VectorXd& omega, double gamma, double tau, int K);
// min over 0 < |ell|_inf <= K of |omega . ell| * <ell>^{tau} (the largest
// gamma that would still pass), for scenario tuning and reports.
double diophantine_margin(const Eigen::VectorXd& omega, double tau, int K);

// sum_{|k| <= k0} gamma^{|k|} || Delta_lambda^k family ||_s at lam0, where k
// runs over multi-indices on the nu+1 parameter axes (omega_1..omega_nu,
// kappa) and Delta^k is the tensor product of second-order central finite
// differences with the given step.  Throws std::domain_error if the kappa
// stencil leaves [kappa1, kappa2].
double weighted_param_norm(const std::function<TorusField(const ParamPoint&)>& family,
                           double s, const ParamPoint& lam0, double step);

}  // namespace toruskam
