#include "toruskam/chvar.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "toruskam/grid.hpp"

namespace toruskam {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LinearOperator composition_operator(const TorusField& beta, int oversample) {
  const Truncation& tr = beta.trunc();
  const int N = tr.N_x;
  const int d = 2 * N + 1;
  int K_beta = 0;
  for_each_mode(tr, [&](const MultiIndex& ell, int, std::int64_t f) {
    if (beta.coeffs()[f] != cd(0.0, 0.0)) K_beta = std::max(K_beta, mi_norm_inf(ell, tr.nu));
  });
  // A phi-independent displacement gives a phi-independent operator; any
  // phi-dependence spreads over the whole retained offset band.
  const int band = K_beta == 0 ? 0 : 2 * tr.K_phi;
  // A slight surplus over the alias-free minimum keeps the high phi-harmonics
  // of e^{i j beta} from folding onto the extreme retained offsets.
  const int P = 2 * band + 9;
  const int M = oversample * d;
  const Eigen::MatrixXcd bslices = phi_slices(beta, P);
  std::int64_t nodes = 1;
  for (int i = 0; i < tr.nu; ++i) nodes *= P;
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(nodes));
  for (std::int64_t p = 0; p < nodes; ++p) {
    const Eigen::VectorXcd bvals = x_synthesize(bslices.row(p).transpose(), N, M);
    Eigen::MatrixXcd blk(d, d);
    Eigen::VectorXcd col(M);
    Eigen::VectorXcd w(M), cur(M);
    for (int m = 0; m < M; ++m) {
      const double y = 2.0 * kPi * m / M + bvals[m].real();
      w[m] = std::polar(1.0, y);
      cur[m] = std::polar(1.0, -N * y);
    }
    for (int j = -N; j <= N; ++j) {
      blk.col(j + N) = x_analyze(cur, N, M);
      if (j < N) cur.array() *= w.array();
    }
    blocks[static_cast<std::size_t>(p)] = std::move(blk);
  }
  return op_unslices(blocks, tr, band, P);
}

DiffeoOperators change_of_variable(const TorusField& beta, int oversample) {
  const double slope = field_max_abs_on_grid(beta.dx());
  if (slope >= 0.5)
    throw std::domain_error("change_of_variable: sup |beta_x| >= 1/2, not a diffeomorphism");
  DiffeoOperators out{LinearOperator(beta.trunc(), 0), LinearOperator(beta.trunc(), 0), beta,
                      invert_diffeo_x(beta, oversample)};
  out.B = composition_operator(beta, oversample);
  out.Binv = composition_operator(out.beta_inv, oversample);
  return out;
}

}  // namespace toruskam
