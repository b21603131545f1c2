#include "toruskam/dn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "toruskam/chvar.hpp"
#include "toruskam/grid.hpp"

namespace toruskam {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

double conformal_c0_norm(const TorusField& p) {
  const Truncation& tr = p.trunc();
  Eigen::MatrixXcd slices = phi_slices(p.dx().dx(), padded_phi(tr.K_phi));
  double m = 0.0;
  for (std::int64_t r = 0; r < slices.rows(); ++r)
    m = std::max(m, std::sqrt(kTwoPi) * slices.row(r).norm());
  return m;
}

ConformalMap solve_conformal(const TorusField& eta, double tol, int max_iter) {
  const Truncation& tr = eta.trunc();
  const double s0 = default_s0(tr.nu);

  // The iteration contracts at the rate sup|eta_x| (composition Lipschitz
  // bound, the transform being an isometry); insist on a factor-two margin.
  const double slope = field_max_abs_on_grid(eta.dx());
  if (slope >= 0.5) {
    std::ostringstream os;
    os << "solve_conformal: sup|eta_x| = " << slope << " leaves no contraction margin";
    throw std::domain_error(os.str());
  }

  ConformalMap map;
  map.p = TorusField(tr);
  int since_best = 0;
  double best = -1.0;
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    TorusField next = hilbert(compose_x(eta, map.p));
    const double defect = (next - map.p).sobolev_norm(s0);
    map.history.push_back(defect);
    map.p = next;
    map.iterations = it;
    if (defect < tol) {
      converged = true;
      break;
    }
    if (best >= 0.0 && defect >= best) {
      if (++since_best >= 5) {
        std::ostringstream os;
        os << "solve_conformal: defect stalled at " << defect << " after " << it << " steps (";
        for (double h : map.history) os << " " << h;
        os << " )";
        throw std::runtime_error(os.str());
      }
    } else {
      best = defect;
      since_best = 0;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "solve_conformal: defect " << map.history.back() << " > tol " << tol << " after "
       << max_iter << " steps (";
    for (double h : map.history) os << " " << h;
    os << " )";
    throw std::runtime_error(os.str());
  }

  // Defect of the accepted displacement itself (one extra composition).
  TorusField composed = compose_x(eta, map.p);
  map.residual = (hilbert(composed) - map.p).sobolev_norm(s0);
  map.c = composed.mean_x();

  const double c0n = conformal_c0_norm(map.p);
  if (c0n > conformal_c0()) {
    std::ostringstream os;
    os << "solve_conformal: curvature norm " << c0n << " exceeds the margin " << conformal_c0();
    throw std::domain_error(os.str());
  }

  map.p_inv = invert_diffeo_x(map.p);
  return map;
}

TorusField dn_apply(const ConformalMap& map, const TorusField& psi) {
  TorusField straightened = compose_x(psi, map.p);
  TorusField transformed = hilbert(straightened);
  return compose_x(transformed, map.p_inv).dx();
}

DNOperator dn_assemble(const TorusField& eta, double tol, int max_iter) {
  DNOperator dn;
  dn.eta = eta;
  dn.map = solve_conformal(eta, tol, max_iter);
  const Truncation& tr = eta.trunc();
  DiffeoOperators d = change_of_variable(dn.map.p);
  dn.matrix = LinearOperator::dx(tr) *
              (d.Binv * (LinearOperator::hilbert(tr) * d.B));
  return dn;
}

LinearOperator dn_remainder(const DNOperator& dn) {
  LinearOperator absD = LinearOperator::fourier_multiplier(
      dn.eta.trunc(), [](int j) { return cd(std::abs(j), 0.0); });
  return dn.matrix - absD;
}

IntegralKernel dn_remainder_kernel(const ConformalMap& map, int n) {
  const Truncation& tr = map.p.trunc();
  const int N = tr.N_x;
  if (n <= 0) n = 4 * (2 * N + 1);
  Eigen::VectorXcd q = x_only_coeffs(map.p_inv, "dn_remainder_kernel");

  auto ring = [&](const Eigen::VectorXcd& modes) { return x_synthesize(modes, N, n); };
  Eigen::VectorXcd d1 = q, d2 = q, d3 = q;
  for (int j = -N; j <= N; ++j) {
    const cd ij(0.0, j);
    d1[j + N] *= ij;
    d2[j + N] *= ij * ij;
    d3[j + N] *= ij * ij * ij;
  }
  Eigen::VectorXcd qv = ring(q), q1 = ring(d1), q2 = ring(d2), q3 = ring(d3);

  IntegralKernel ker;
  ker.n = n;
  ker.K.resize(n, n);
  // Kernel of d/dx (P^{-1} H P - H): with Q(t) = t + q(t) and the half-angle
  // shorthand S(t) = 1 / sin^2(t/2),
  //     K(x, z) = (1/2) [ S(x - z) - Q'(x) Q'(z) S(Q(x) - Q(z)) ],
  // smooth across the diagonal where both poles cancel; the limit is
  //     (1/2) [ (1 - Q'^2)/3 - (2/3) Q'''/Q' + (Q''/Q')^2 ].
  for (int m = 0; m < n; ++m) {
    const double x = kTwoPi * m / n;
    const double Qx = x + qv[m].real();
    const double dQx = 1.0 + q1[m].real();
    for (int p = 0; p < n; ++p) {
      if (p == m) {
        const double ddQ = q2[m].real();
        const double dddQ = q3[m].real();
        ker.K(m, m) = 0.5 * ((1.0 - dQx * dQx) / 3.0 - (2.0 / 3.0) * dddQ / dQx +
                             (ddQ / dQx) * (ddQ / dQx));
        continue;
      }
      const double z = kTwoPi * p / n;
      const double Qz = z + qv[p].real();
      const double dQz = 1.0 + q1[p].real();
      const double su = std::sin(0.5 * (x - z));
      const double sq = std::sin(0.5 * (Qx - Qz));
      ker.K(m, p) = 0.5 * (1.0 / (su * su) - dQx * dQz / (sq * sq));
    }
  }
  return ker;
}

SurfaceVelocity surface_velocity(const TorusField& eta, const ConformalMap& map,
                                 const TorusField& psi) {
  const Truncation& tr = eta.trunc();
  TorusField eta_x = eta.dx();
  TorusField psi_x = psi.dx();
  TorusField g_psi = dn_apply(map, psi);
  TorusField denom = TorusField::constant(tr, cd(1.0, 0.0)) + field_multiply(eta_x, eta_x);
  SurfaceVelocity sv;
  sv.B = field_divide(field_multiply(eta_x, psi_x) + g_psi, denom);
  sv.V = psi_x - field_multiply(sv.B, eta_x);
  return sv;
}

TorusField dn_shape_derivative(const TorusField& eta, const ConformalMap& map,
                               const TorusField& eta_hat, const TorusField& psi) {
  SurfaceVelocity sv = surface_velocity(eta, map, psi);
  return -dn_apply(map, field_multiply(sv.B, eta_hat)) -
         field_multiply(sv.V, eta_hat).dx();
}

}  // namespace toruskam
