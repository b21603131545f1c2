#include "toruskam/symbol.hpp"

#include <cmath>

namespace toruskam {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 8;
constexpr double kGLx[kGL] = {
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
    -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
    0.79666647741362673959,  0.96028985649753623168};
constexpr double kGLw[kGL] = {
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
    0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binom(int n, int k) {
  double f = 1.0;
  for (int i = 1; i <= k; ++i) f = f * (n - k + i) / i;
  return f;
}

// i^beta cycle.
cd i_pow(int beta) {
  switch (((beta % 4) + 4) % 4) {
    case 0: return cd(1.0, 0.0);
    case 1: return cd(0.0, 1.0);
    case 2: return cd(-1.0, 0.0);
    default: return cd(0.0, -1.0);
  }
}

}  // namespace

Eigen::VectorXd fd_weights(double z, const std::vector<double>& nodes, int M) {
  const int n = static_cast<int>(nodes.size());
  if (n < M + 1) throw std::invalid_argument("fd_weights: need at least M+1 nodes");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, M + 1);
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, M);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  return C.col(M);
}

// ---- DiscreteSymbol basics ----

DiscreteSymbol::DiscreteSymbol(int nu, int band, int K_x, int N_xi, double order_m)
    : nu_(nu), band_(band), K_x_(K_x), N_xi_(N_xi), m_(order_m) {
  if (nu < 1 || nu > kMaxNu) throw std::invalid_argument("DiscreteSymbol: nu out of range");
  if (band < 0 || K_x < 0 || N_xi < 1) throw std::invalid_argument("DiscreteSymbol: bad sizes");
  tab_ = Eigen::VectorXcd::Zero(phi_box().count() * (2 * K_x + 1) * (2 * N_xi + 1));
}

DiscreteSymbol DiscreteSymbol::from_multiplier(int nu, int N_xi,
                                               const std::function<cd(double)>& g,
                                               double order_m) {
  DiscreteSymbol a(nu, 0, 0, N_xi, order_m);
  for (int xi = -N_xi; xi <= N_xi; ++xi) a.tab_[xi + N_xi] = g(static_cast<double>(xi));
  return a;
}

DiscreteSymbol DiscreteSymbol::from_field(const TorusField& f, int N_xi) {
  const Truncation& tr = f.trunc();
  DiscreteSymbol a(tr.nu, tr.K_phi, tr.N_x, N_xi, 0.0);
  const PhiBox box = a.phi_box();
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    for (int k = -tr.N_x; k <= tr.N_x; ++k) {
      const cd v = f.at(delta, k);
      if (v == cd(0.0, 0.0)) continue;
      for (int xi = -N_xi; xi <= N_xi; ++xi) a.tab_[a.index(b, k, xi)] = v;
    }
  }
  return a;
}

DiscreteSymbol DiscreteSymbol::from_fn(int nu, int band, int K_x, int N_xi, double order_m,
                                       const std::function<cd(const MultiIndex&, int, int)>& fn) {
  DiscreteSymbol a(nu, band, K_x, N_xi, order_m);
  const PhiBox box = a.phi_box();
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    for (int k = -K_x; k <= K_x; ++k)
      for (int xi = -N_xi; xi <= N_xi; ++xi) a.tab_[a.index(b, k, xi)] = fn(delta, k, xi);
  }
  return a;
}

std::vector<int> DiscreteSymbol::contaminated_slots() const {
  std::vector<int> out;
  for (int xi = -N_xi_; xi <= N_xi_; ++xi)
    if (std::abs(xi) > N_xi_ - margin_) out.push_back(xi);
  return out;
}

cd DiscreteSymbol::at_or_zero(const MultiIndex& delta, int k, int xi) const {
  if (!phi_box().contains(delta)) return cd(0.0, 0.0);
  if (k < -K_x_ || k > K_x_ || xi < -N_xi_ || xi > N_xi_) return cd(0.0, 0.0);
  return tab_[index(phi_box().flat(delta), k, xi)];
}

cd DiscreteSymbol::eval(const double* phi, double x, int xi) const {
  cd acc(0.0, 0.0);
  const PhiBox box = phi_box();
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    double dphi = 0.0;
    for (int i = 0; i < nu_; ++i) dphi += delta[i] * phi[i];
    for (int k = -K_x_; k <= K_x_; ++k)
      acc += tab_[index(b, k, xi)] * std::polar(1.0, dphi + k * x);
  }
  return acc;
}

namespace {

// Copy `a` into a table with at least the given band / K_x.
DiscreteSymbol grown(const DiscreteSymbol& a, int band, int K_x) {
  if (band == a.band() && K_x == a.K_x()) return a;
  DiscreteSymbol r(a.nu(), band, K_x, a.N_xi(), a.order());
  r.set_margin(a.margin());
  const PhiBox ab = a.phi_box();
  const PhiBox rb = r.phi_box();
  const int nslot = 2 * a.N_xi() + 1;
  const std::int64_t nb = ab.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = ab.unflat(b);
    const std::int64_t rf = rb.flat(delta);
    for (int k = -a.K_x(); k <= a.K_x(); ++k)
      r.table().segment(r.index(rf, k, -a.N_xi()), nslot) =
          a.table().segment(a.index(b, k, -a.N_xi()), nslot);
  }
  return r;
}

}  // namespace

DiscreteSymbol& DiscreteSymbol::operator+=(const DiscreteSymbol& o) {
  if (nu_ != o.nu_ || N_xi_ != o.N_xi_)
    throw std::invalid_argument("DiscreteSymbol+: frame mismatch");
  if (o.band_ > band_ || o.K_x_ > K_x_)
    *this = grown(*this, std::max(band_, o.band_), std::max(K_x_, o.K_x_));
  const PhiBox ob = o.phi_box();
  const PhiBox mb = phi_box();
  const int nslot = 2 * N_xi_ + 1;
  const std::int64_t nb = ob.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = ob.unflat(b);
    const std::int64_t mf = mb.flat(delta);
    for (int k = -o.K_x_; k <= o.K_x_; ++k)
      tab_.segment(index(mf, k, -N_xi_), nslot) += o.tab_.segment(o.index(b, k, -N_xi_), nslot);
  }
  margin_ = std::max(margin_, o.margin_);
  return *this;
}

DiscreteSymbol& DiscreteSymbol::operator-=(const DiscreteSymbol& o) {
  *this += (-o);
  return *this;
}

DiscreteSymbol& DiscreteSymbol::operator*=(cd s) {
  tab_ *= s;
  return *this;
}

DiscreteSymbol DiscreteSymbol::operator-() const {
  DiscreteSymbol r = *this;
  r.tab_ = -r.tab_;
  return r;
}

DiscreteSymbol DiscreteSymbol::trimmed_x(int K) const {
  if (K >= K_x_) return *this;
  DiscreteSymbol r(nu_, band_, K, N_xi_, m_);
  r.margin_ = margin_;
  const PhiBox box = phi_box();
  const int nslot = 2 * N_xi_ + 1;
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b)
    for (int k = -K; k <= K; ++k)
      r.tab_.segment(r.index(b, k, -N_xi_), nslot) = tab_.segment(index(b, k, -N_xi_), nslot);
  return r;
}

DiscreteSymbol DiscreteSymbol::trimmed_band(int B) const {
  if (B >= band_) return *this;
  DiscreteSymbol r(nu_, B, K_x_, N_xi_, m_);
  r.margin_ = margin_;
  const PhiBox rb = r.phi_box();
  const PhiBox mb = phi_box();
  const int nslot = 2 * N_xi_ + 1;
  const std::int64_t nb = rb.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = rb.unflat(b);
    const std::int64_t mf = mb.flat(delta);
    for (int k = -K_x_; k <= K_x_; ++k)
      r.tab_.segment(r.index(b, k, -N_xi_), nslot) = tab_.segment(index(mf, k, -N_xi_), nslot);
  }
  return r;
}

DiscreteSymbol DiscreteSymbol::scaled_slots(const std::function<cd(int)>& w) const {
  DiscreteSymbol r = *this;
  const std::int64_t channels = phi_box().count() * (2 * K_x_ + 1);
  for (std::int64_t c = 0; c < channels; ++c)
    for (int xi = -N_xi_; xi <= N_xi_; ++xi)
      r.tab_[c * (2 * N_xi_ + 1) + (xi + N_xi_)] *= w(xi);
  return r;
}

// ---- quantization ----

LinearOperator quantize(const DiscreteSymbol& a, const Truncation& tr) {
  if (tr.nu != a.nu()) throw std::invalid_argument("quantize: nu mismatch");
  if (a.N_xi() < tr.N_x)
    throw std::invalid_argument("quantize: slot box smaller than the x-mode box");
  const int band = std::min(a.band(), 2 * tr.K_phi);
  LinearOperator A(tr, band);
  const PhiBox obox = A.band_box();
  const PhiBox sbox = a.phi_box();
  const int N = tr.N_x;
  const std::int64_t nb = obox.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = obox.unflat(b);
    const std::int64_t sf = sbox.flat(delta);
    Eigen::MatrixXcd& blk = A.block(delta);
    for (int jp = -N; jp <= N; ++jp)
      for (int k = -a.K_x(); k <= a.K_x(); ++k) {
        const int j = jp + k;
        if (j < -N || j > N) continue;
        blk(j + N, jp + N) = a.table()[a.index(sf, k, jp)];
      }
  }
  return A;
}

TorusField act(const DiscreteSymbol& a, const TorusField& u) {
  return quantize(a, u.trunc()).apply(u);
}

DiscreteSymbol unquantize(const LinearOperator& A, int K_x, int N_xi, double order_m) {
  const Truncation& tr = A.trunc();
  if (N_xi < tr.N_x) throw std::invalid_argument("unquantize: slot box too small");
  DiscreteSymbol a(tr.nu, A.band(), K_x, N_xi, order_m);
  const PhiBox box = a.phi_box();
  const int N = tr.N_x;
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    const Eigen::MatrixXcd& blk = A.block(delta);
    for (int k = -K_x; k <= K_x; ++k)
      for (int xi = -N; xi <= N; ++xi) {
        const int j = xi + k;
        if (j < -N || j > N) continue;
        a.table()[a.index(b, k, xi)] = blk(j + N, xi + N);
      }
  }
  // Slots beyond the operator's x-box are unknown; so are x-modes j = xi + k
  // that fall outside it.
  a.set_margin(N_xi - tr.N_x + K_x);
  return a;
}

// ---- composition ----

DiscreteSymbol compose_exact(const DiscreteSymbol& a, const DiscreteSymbol& b) {
  if (a.nu() != b.nu() || a.N_xi() != b.N_xi())
    throw std::invalid_argument("compose_exact: frame mismatch");
  const int N = a.N_xi();
  DiscreteSymbol out(a.nu(), a.band() + b.band(), a.K_x() + b.K_x(), N, a.order() + b.order());
  const PhiBox ab = a.phi_box();
  const PhiBox bb = b.phi_box();
  const PhiBox ob = out.phi_box();
  const std::int64_t nb_b = bb.count();
  const std::int64_t nb_a = ab.count();
  for (std::int64_t b1 = 0; b1 < nb_b; ++b1) {
    MultiIndex d1 = bb.unflat(b1);
    for (std::int64_t b2 = 0; b2 < nb_a; ++b2) {
      MultiIndex d2 = ab.unflat(b2);
      const std::int64_t fo = ob.flat(mi_add(d1, d2, a.nu()));
      for (int k = -b.K_x(); k <= b.K_x(); ++k) {
        // slot overlap: xi and xi + k both within [-N, N]
        const int lo = std::max(-N, -N - k);
        const int hi = std::min(N, N - k);
        const int len = hi - lo + 1;
        if (len <= 0) continue;
        auto bseg = b.table().segment(b.index(b1, k, lo), len).array();
        for (int ka = -a.K_x(); ka <= a.K_x(); ++ka) {
          auto aseg = a.table().segment(a.index(b2, ka, lo + k), len).array();
          out.table().segment(out.index(fo, ka + k, lo), len).array() += aseg * bseg;
        }
      }
    }
  }
  out.set_margin(std::max(b.margin(), a.margin() + b.K_x()));
  return out;
}

DiscreteSymbol symbol_mul(const DiscreteSymbol& a, const DiscreteSymbol& b) {
  if (a.nu() != b.nu() || a.N_xi() != b.N_xi())
    throw std::invalid_argument("symbol_mul: frame mismatch");
  const int N = a.N_xi();
  DiscreteSymbol out(a.nu(), a.band() + b.band(), a.K_x() + b.K_x(), N, a.order() + b.order());
  const PhiBox ab = a.phi_box();
  const PhiBox bb = b.phi_box();
  const PhiBox ob = out.phi_box();
  const int nslot = 2 * N + 1;
  const std::int64_t nb_b = bb.count();
  const std::int64_t nb_a = ab.count();
  for (std::int64_t b1 = 0; b1 < nb_b; ++b1) {
    MultiIndex d1 = bb.unflat(b1);
    for (std::int64_t b2 = 0; b2 < nb_a; ++b2) {
      MultiIndex d2 = ab.unflat(b2);
      const std::int64_t fo = ob.flat(mi_add(d1, d2, a.nu()));
      for (int k = -b.K_x(); k <= b.K_x(); ++k) {
        auto bseg = b.table().segment(b.index(b1, k, -N), nslot).array();
        for (int ka = -a.K_x(); ka <= a.K_x(); ++ka) {
          auto aseg = a.table().segment(a.index(b2, ka, -N), nslot).array();
          out.table().segment(out.index(fo, ka + k, -N), nslot).array() += aseg * bseg;
        }
      }
    }
  }
  out.set_margin(std::max(a.margin(), b.margin()));
  return out;
}

DiscreteSymbol derivative_x(const DiscreteSymbol& a, int beta) {
  DiscreteSymbol r = a;
  const PhiBox box = a.phi_box();
  const int nslot = 2 * a.N_xi() + 1;
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b)
    for (int k = -a.K_x(); k <= a.K_x(); ++k) {
      cd f = i_pow(beta) * std::pow(static_cast<double>(k), beta);
      r.table().segment(r.index(b, k, -a.N_xi()), nslot) *= f;
    }
  return r;
}

DiscreteSymbol derivative_xi(const DiscreteSymbol& a, int beta) {
  if (beta == 0) return a;
  const int N = a.N_xi();
  const int W = std::min(2 * N + 1, beta + 9);  // stencil width
  DiscreteSymbol r(a.nu(), a.band(), a.K_x(), N, a.order() - beta);
  // Stencil per slot (differs near the edges only).
  std::vector<Eigen::VectorXd> wts(2 * N + 1);
  std::vector<int> starts(2 * N + 1);
  for (int xi = -N; xi <= N; ++xi) {
    int start = std::max(-N, std::min(xi - W / 2, N - W + 1));
    std::vector<double> nodes(W);
    for (int i = 0; i < W; ++i) nodes[i] = start + i;
    wts[xi + N] = fd_weights(static_cast<double>(xi), nodes, beta);
    starts[xi + N] = start;
  }
  const std::int64_t channels = a.phi_box().count() * (2 * a.K_x() + 1);
  const int nslot = 2 * N + 1;
  for (std::int64_t c = 0; c < channels; ++c) {
    const cd* src = a.table().data() + c * nslot;
    cd* dst = r.table().data() + c * nslot;
    for (int xi = -N; xi <= N; ++xi) {
      const Eigen::VectorXd& w = wts[xi + N];
      const int s0 = starts[xi + N];
      cd acc(0.0, 0.0);
      for (int i = 0; i < W; ++i) acc += w[i] * src[s0 + i + N];
      dst[xi + N] = acc;
    }
  }
  r.set_margin(a.margin() == 0 ? 0 : a.margin() + W - 1);
  return r;
}

DiscreteSymbol expansion_sum(const DiscreteSymbol& a, const DiscreteSymbol& b, int N) {
  DiscreteSymbol out;
  for (int beta = 0; beta < N; ++beta) {
    DiscreteSymbol term = symbol_mul(derivative_xi(a, beta), derivative_x(b, beta));
    term *= cd(1.0, 0.0) / (factorial(beta) * i_pow(beta));
    if (beta == 0)
      out = std::move(term);
    else
      out += term;
  }
  out.set_order(a.order() + b.order());
  return out;
}

DiscreteSymbol remainder_taylor(const DiscreteSymbol& a, const DiscreteSymbol& b, int N,
                                int n_quad) {
  if (a.nu() != b.nu() || a.N_xi() != b.N_xi())
    throw std::invalid_argument("remainder_taylor: frame mismatch");
  if (N < 1) throw std::invalid_argument("remainder_taylor: N >= 1 required");
  if (n_quad != kGL) n_quad = kGL;  // fixed 8-point rule
  const int Ns = a.N_xi();
  DiscreteSymbol out(a.nu(), a.band() + b.band(), a.K_x() + b.K_x(), Ns,
                     a.order() + b.order() - N);
  const PhiBox ab = a.phi_box();
  const PhiBox bb = b.phi_box();
  const PhiBox ob = out.phi_box();
  const std::int64_t nb_a = ab.count();
  const std::int64_t nb_b = bb.count();
  const int W = std::min(2 * Ns + 1, N + 9);
  const double fac = 1.0 / factorial(N - 1);
  Eigen::MatrixXcd Az(nb_a, 2 * a.K_x() + 1);  // d_xi^N a at the shifted slot
  std::vector<double> nodes(W);
  for (int q = 0; q < kGL; ++q) {
    const double tau = 0.5 * (kGLx[q] + 1.0);
    const double wq = 0.5 * kGLw[q] * std::pow(1.0 - tau, N - 1);
    for (int j = -b.K_x(); j <= b.K_x(); ++j) {
      if (j == 0) continue;  // (d_x^N b)^hat vanishes at the zero mode
      const double coef_j = wq * fac * std::pow(static_cast<double>(j), N);
      for (int xi = -Ns; xi <= Ns; ++xi) {
        const double z = xi + tau * j;
        int start = std::max(-Ns, std::min(static_cast<int>(std::floor(z)) - W / 2 + 1,
                                           Ns - W + 1));
        for (int i = 0; i < W; ++i) nodes[i] = start + i;
        Eigen::VectorXd w = fd_weights(z, nodes, N);
        for (std::int64_t b2 = 0; b2 < nb_a; ++b2)
          for (int ka = -a.K_x(); ka <= a.K_x(); ++ka) {
            cd acc(0.0, 0.0);
            const cd* src = a.table().data() + a.index(b2, ka, -Ns);
            for (int i = 0; i < W; ++i) acc += w[i] * src[start + i + Ns];
            Az(b2, ka + a.K_x()) = acc;
          }
        for (std::int64_t b1 = 0; b1 < nb_b; ++b1) {
          const cd bv = b.table()[b.index(b1, j, xi)];
          if (bv == cd(0.0, 0.0)) continue;
          MultiIndex d1 = bb.unflat(b1);
          const cd cf = coef_j * bv;
          for (std::int64_t b2 = 0; b2 < nb_a; ++b2) {
            const std::int64_t fo = ob.flat(mi_add(d1, ab.unflat(b2), a.nu()));
            for (int ka = -a.K_x(); ka <= a.K_x(); ++ka)
              out.table()[out.index(fo, ka + j, xi)] += cf * Az(b2, ka + a.K_x());
          }
        }
      }
    }
  }
  const int base = std::max(b.margin(), a.margin() + b.K_x());
  out.set_margin(std::max(base, a.margin() == 0 ? 0 : a.margin() + b.K_x() + W));
  return out;
}

std::pair<DiscreteSymbol, DiscreteSymbol> compose_asymptotic(const DiscreteSymbol& a,
                                                             const DiscreteSymbol& b, int N) {
  return {expansion_sum(a, b, N), remainder_taylor(a, b, N)};
}

DiscreteSymbol adjoint_symbol(const DiscreteSymbol& a) {
  const int N = a.N_xi();
  DiscreteSymbol out(a.nu(), a.band(), a.K_x(), N, a.order());
  const PhiBox box = a.phi_box();
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    const std::int64_t fm = box.flat(mi_neg(delta, a.nu()));
    for (int k = -a.K_x(); k <= a.K_x(); ++k)
      for (int xi = -N; xi <= N; ++xi) {
        const int zs = xi + k;
        if (zs < -N || zs > N) continue;
        out.table()[out.index(b, k, xi)] = std::conj(a.table()[a.index(fm, -k, zs)]);
      }
  }
  out.set_margin(a.margin() + a.K_x());
  return out;
}

DiscreteSymbol commutator_symbol(const DiscreteSymbol& a, const DiscreteSymbol& b) {
  DiscreteSymbol r = compose_exact(a, b);
  r -= compose_exact(b, a);
  r.set_order(a.order() + b.order() - 1.0);
  return r;
}

std::pair<DiscreteSymbol, DiscreteSymbol> moyal(const DiscreteSymbol& a,
                                                const DiscreteSymbol& b) {
  DiscreteSymbol poisson = symbol_mul(derivative_xi(a, 1), derivative_x(b, 1));
  poisson -= symbol_mul(derivative_x(a, 1), derivative_xi(b, 1));
  poisson *= cd(0.0, -1.0);
  poisson.set_order(a.order() + b.order() - 1.0);
  DiscreteSymbol r2 = remainder_taylor(a, b, 2);
  r2 -= remainder_taylor(b, a, 2);
  r2.set_order(a.order() + b.order() - 2.0);
  return {std::move(poisson), std::move(r2)};
}

// ---- norms ----

double slot_sobolev_norm(const DiscreteSymbol& a, double s, int xi) {
  const PhiBox box = a.phi_box();
  double acc = 0.0;
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    for (int k = -a.K_x(); k <= a.K_x(); ++k) {
      const double w = std::pow(mode_weight(delta, k, a.nu()), 2.0 * s);
      acc += w * std::norm(a.table()[a.index(b, k, xi)]);
    }
  }
  return std::sqrt(acc);
}

Eigen::VectorXd slot_norm_profile(const DiscreteSymbol& a, double s) {
  Eigen::VectorXd out(2 * a.N_xi() + 1);
  for (int xi = -a.N_xi(); xi <= a.N_xi(); ++xi)
    out[xi + a.N_xi()] = slot_sobolev_norm(a, s, xi);
  return out;
}

double psido_norm(const DiscreteSymbol& a, double m, double s, int alpha) {
  const PhiBox box = a.phi_box();
  const int N = a.N_xi();
  const int R = a.interior_radius();
  // channel weights <delta, k>^{2s}
  const std::int64_t channels = box.count() * (2 * a.K_x() + 1);
  Eigen::VectorXd w2(channels);
  {
    std::int64_t c = 0;
    const std::int64_t nb = box.count();
    for (std::int64_t b = 0; b < nb; ++b) {
      MultiIndex delta = box.unflat(b);
      for (int k = -a.K_x(); k <= a.K_x(); ++k, ++c)
        w2[c] = std::pow(mode_weight(delta, k, a.nu()), 2.0 * s);
    }
  }
  const int nslot = 2 * N + 1;
  double best = 0.0;
  for (int beta = 0; beta <= alpha; ++beta) {
    std::vector<double> coef(beta + 1);
    for (int i = 0; i <= beta; ++i)
      coef[i] = ((beta - i) % 2 == 0 ? 1.0 : -1.0) * binom(beta, i);
    for (int xi = -R; xi <= R - beta; ++xi) {
      double acc = 0.0;
      for (std::int64_t c = 0; c < channels; ++c) {
        const cd* src = a.table().data() + c * nslot;
        cd d(0.0, 0.0);
        for (int i = 0; i <= beta; ++i) d += coef[i] * src[xi + i + N];
        acc += w2[c] * std::norm(d);
      }
      const double val = std::sqrt(acc) *
                         std::pow(std::max(1.0, std::abs(static_cast<double>(xi))), -m + beta);
      best = std::max(best, val);
    }
  }
  return best;
}

double symbol_even_defect(const DiscreteSymbol& a) {
  double m = 0.0;
  const PhiBox box = a.phi_box();
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b)
    for (int k = -a.K_x(); k <= a.K_x(); ++k)
      for (int xi = -a.N_xi(); xi <= a.N_xi(); ++xi)
        m = std::max(m, std::abs(a.table()[a.index(b, k, xi)] -
                                 a.table()[a.index(b, -k, -xi)]));
  return m;
}

double symbol_real_defect(const DiscreteSymbol& a) {
  double m = 0.0;
  const PhiBox box = a.phi_box();
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::int64_t fm = box.flat(mi_neg(box.unflat(b), a.nu()));
    for (int k = -a.K_x(); k <= a.K_x(); ++k)
      for (int xi = -a.N_xi(); xi <= a.N_xi(); ++xi)
        m = std::max(m, std::abs(a.table()[a.index(b, k, xi)] -
                                 std::conj(a.table()[a.index(fm, -k, -xi)])));
  }
  return m;
}

double fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_power_law: need >= 2 points");
  const int n = static_cast<int>(xs.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw std::domain_error("fit_power_law: requires positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0) throw std::domain_error("fit_power_law: degenerate abscissae");
  return num / den;
}

}  // namespace toruskam
