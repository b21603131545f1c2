#include "toruskam/kernelop.hpp"

#include <cmath>
#include <stdexcept>

#include "toruskam/grid.hpp"

namespace toruskam {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

// x-Fourier coefficients of a phi-independent field (throws otherwise).
Eigen::VectorXcd x_only_coeffs(const TorusField& a, const char* who) {
  const Truncation& tr = a.trunc();
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(2 * tr.N_x + 1);
  double off = 0.0;
  for_each_mode(tr, [&](const MultiIndex& ell, int j, std::int64_t) {
    const cd v = a.at(ell, j);
    if (mi_is_zero(ell, tr.nu))
      coef[j + tr.N_x] = v;
    else
      off = std::max(off, std::abs(v));
  });
  if (off > 0.0)
    throw std::invalid_argument(std::string(who) + ": field must not depend on phi");
  return coef;
}

Eigen::VectorXcd IntegralKernel::apply_x(const Eigen::VectorXcd& modes, int N_x) const {
  if (modes.size() != 2 * N_x + 1)
    throw std::invalid_argument("IntegralKernel::apply_x: size mismatch");
  Eigen::VectorXcd vals = x_synthesize(modes, N_x, n);
  Eigen::VectorXcd out_vals = (K * vals) / static_cast<double>(n);
  return x_analyze(out_vals, N_x, n);
}

TorusField hilbert(const TorusField& u) {
  const Truncation& tr = u.trunc();
  TorusField r(tr);
  for_each_mode(tr, [&](const MultiIndex& ell, int j, std::int64_t f) {
    if (j == 0) return;
    const double s = j > 0 ? 1.0 : -1.0;
    r.coeffs()[f] = cd(0.0, -s) * u.coeffs()[f];
  });
  return r;
}

IntegralKernel commutator_aH_kernel(const TorusField& a, int n) {
  const Truncation& tr = a.trunc();
  if (n <= 0) n = 4 * (2 * tr.N_x + 1);
  Eigen::VectorXcd coef = x_only_coeffs(a, "commutator_aH_kernel");
  Eigen::VectorXcd av = x_synthesize(coef, tr.N_x, n);
  Eigen::VectorXcd dcoef = coef;
  for (int j = -tr.N_x; j <= tr.N_x; ++j) dcoef[j + tr.N_x] *= cd(0.0, j);
  Eigen::VectorXcd apv = x_synthesize(dcoef, tr.N_x, n);
  IntegralKernel ker;
  ker.n = n;
  ker.K.resize(n, n);
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p) {
      if (m == p) {
        ker.K(m, p) = 2.0 * apv[m];
      } else {
        const double d = 2.0 * kPi * (m - p) / n;
        ker.K(m, p) = (av[m] - av[p]) / std::tan(0.5 * d);
      }
    }
  return ker;
}

IntegralKernel conjugated_hilbert_kernel(const TorusField& q, int n) {
  const Truncation& tr = q.trunc();
  if (n <= 0) n = 4 * (2 * tr.N_x + 1);
  Eigen::VectorXcd coef = x_only_coeffs(q, "conjugated_hilbert_kernel");
  Eigen::VectorXcd d1 = coef, d2 = coef;
  for (int j = -tr.N_x; j <= tr.N_x; ++j) {
    d1[j + tr.N_x] *= cd(0.0, j);
    d2[j + tr.N_x] *= cd(0.0, j) * cd(0.0, j);
  }
  Eigen::VectorXcd qv = x_synthesize(coef, tr.N_x, n);
  Eigen::VectorXcd q1 = x_synthesize(d1, tr.N_x, n);
  Eigen::VectorXcd q2 = x_synthesize(d2, tr.N_x, n);
  IntegralKernel ker;
  ker.n = n;
  ker.K.resize(n, n);
  for (int m = 0; m < n; ++m) {
    const double xm = 2.0 * kPi * m / n;
    for (int p = 0; p < n; ++p) {
      if (m == p) {
        ker.K(m, p) = -q2[m] / (1.0 + q1[m]);
        continue;
      }
      const double zp = 2.0 * kPi * p / n;
      const cd dq = qv[m] - qv[p];
      const cd dQ = (xm - zp) + dq;
      ker.K(m, p) = (1.0 + q1[p]) / std::tan(0.5 * dQ) - 1.0 / std::tan(0.5 * (xm - zp));
    }
  }
  return ker;
}

Eigen::MatrixXcd kernel_x_matrix(const IntegralKernel& ker, int N_x) {
  const int d = 2 * N_x + 1;
  Eigen::MatrixXcd out(d, d);
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(d);
  for (int jp = -N_x; jp <= N_x; ++jp) {
    unit.setZero();
    unit[jp + N_x] = cd(1.0, 0.0);
    out.col(jp + N_x) = ker.apply_x(unit, N_x);
  }
  return out;
}

LinearOperator kernel_operator(const IntegralKernel& ker, const Truncation& tr) {
  LinearOperator A(tr, 0);
  MultiIndex zero{};
  A.block(zero) = kernel_x_matrix(ker, tr.N_x);
  return A;
}

}  // namespace toruskam
