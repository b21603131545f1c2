#include "toruskam/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <vector>

namespace toruskam {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// A cached FFTW plan with its own aligned buffers; data is copied in and out.
struct PlanSlot {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::int64_t n = 0;
};

PlanSlot& get_plan(const std::vector<int>& dims, int sign) {
  static std::map<std::pair<std::vector<int>, int>, PlanSlot> cache;
  auto key = std::make_pair(dims, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PlanSlot slot;
  slot.n = 1;
  for (int d : dims) slot.n *= d;
  slot.in = fftw_alloc_complex(slot.n);
  slot.out = fftw_alloc_complex(slot.n);
  slot.plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), slot.in, slot.out,
                            sign, FFTW_ESTIMATE);
  return cache.emplace(key, slot).first->second;
}

void run_dft(const std::vector<int>& dims, int sign, const Eigen::VectorXcd& in,
             Eigen::VectorXcd& out) {
  PlanSlot& slot = get_plan(dims, sign);
  std::memcpy(slot.in, in.data(), sizeof(fftw_complex) * slot.n);
  fftw_execute(slot.plan);
  out.resize(slot.n);
  std::memcpy(out.data(), slot.out, sizeof(fftw_complex) * slot.n);
}

std::vector<int> full_dims(const Truncation& tr, int P_phi, int P_x) {
  std::vector<int> dims(tr.nu + 1, P_phi);
  dims.back() = P_x;
  return dims;
}

inline int wrap(int mode, int P) { return ((mode % P) + P) % P; }

}  // namespace

int padded_phi(int K_phi) { return 4 * K_phi + 1; }
int padded_x(int N_x) { return 4 * N_x + 1; }

Eigen::VectorXcd grid_synthesize(const TorusField& u, int P_phi, int P_x) {
  const Truncation& tr = u.trunc();
  if (P_phi < tr.phi_dim() || P_x < tr.x_count())
    throw std::invalid_argument("grid_synthesize: grid smaller than mode set");
  const std::vector<int> dims = full_dims(tr, P_phi, P_x);
  std::int64_t n = 1;
  for (int d : dims) n *= d;
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(n);
  for_each_mode(tr, [&](const MultiIndex& ell, int j, std::int64_t f) {
    std::int64_t idx = 0;
    for (int i = 0; i < tr.nu; ++i) idx = idx * P_phi + wrap(ell[i], P_phi);
    idx = idx * P_x + wrap(j, P_x);
    padded[idx] = u.coeffs()[f];
  });
  Eigen::VectorXcd vals;
  run_dft(dims, FFTW_BACKWARD, padded, vals);
  return vals;
}

TorusField grid_analyze(const Eigen::VectorXcd& vals, const Truncation& tr, int P_phi, int P_x) {
  if (P_phi < tr.phi_dim() || P_x < tr.x_count())
    throw std::invalid_argument("grid_analyze: grid smaller than mode set");
  const std::vector<int> dims = full_dims(tr, P_phi, P_x);
  std::int64_t n = 1;
  for (int d : dims) n *= d;
  if (vals.size() != n) throw std::invalid_argument("grid_analyze: value size mismatch");
  Eigen::VectorXcd hat;
  run_dft(dims, FFTW_FORWARD, vals, hat);
  const double scale = 1.0 / static_cast<double>(n);
  TorusField u(tr);
  for_each_mode(tr, [&](const MultiIndex& ell, int j, std::int64_t f) {
    std::int64_t idx = 0;
    for (int i = 0; i < tr.nu; ++i) idx = idx * P_phi + wrap(ell[i], P_phi);
    idx = idx * P_x + wrap(j, P_x);
    u.coeffs()[f] = hat[idx] * scale;
  });
  return u;
}

TorusField field_from_fn(const Truncation& tr,
                         const std::function<cd(const double*, double)>& fn,
                         int P_phi, int P_x) {
  if (P_phi == 0) P_phi = padded_phi(tr.K_phi);
  if (P_x == 0) P_x = padded_x(tr.N_x);
  std::int64_t nphi = 1;
  for (int i = 0; i < tr.nu; ++i) nphi *= P_phi;
  Eigen::VectorXcd vals(nphi * P_x);
  double phi[kMaxNu] = {0, 0, 0, 0};
  for (std::int64_t p = 0; p < nphi; ++p) {
    std::int64_t rest = p;
    for (int i = tr.nu - 1; i >= 0; --i) {
      phi[i] = kTwoPi * (rest % P_phi) / P_phi;
      rest /= P_phi;
    }
    for (int nx = 0; nx < P_x; ++nx)
      vals[p * P_x + nx] = fn(phi, kTwoPi * nx / P_x);
  }
  return grid_analyze(vals, tr, P_phi, P_x);
}

TorusField field_multiply(const TorusField& a, const TorusField& b) {
  if (a.trunc() != b.trunc()) throw std::invalid_argument("field_multiply: truncation mismatch");
  const int P_phi = padded_phi(a.trunc().K_phi);
  const int P_x = padded_x(a.trunc().N_x);
  Eigen::VectorXcd va = grid_synthesize(a, P_phi, P_x);
  Eigen::VectorXcd vb = grid_synthesize(b, P_phi, P_x);
  va.array() *= vb.array();
  return grid_analyze(va, a.trunc(), P_phi, P_x);
}

TorusField field_divide(const TorusField& a, const TorusField& b) {
  if (a.trunc() != b.trunc()) throw std::invalid_argument("field_divide: truncation mismatch");
  const int P_phi = padded_phi(a.trunc().K_phi);
  const int P_x = padded_x(a.trunc().N_x);
  Eigen::VectorXcd va = grid_synthesize(a, P_phi, P_x);
  Eigen::VectorXcd vb = grid_synthesize(b, P_phi, P_x);
  for (std::int64_t i = 0; i < vb.size(); ++i) {
    if (std::abs(vb[i]) < 1e-14)
      throw std::domain_error("field_divide: denominator vanishes on the grid");
    va[i] /= vb[i];
  }
  return grid_analyze(va, a.trunc(), P_phi, P_x);
}

TorusField field_map(const TorusField& a, const std::function<cd(cd)>& fn, int P_phi, int P_x) {
  if (P_phi == 0) P_phi = padded_phi(a.trunc().K_phi);
  if (P_x == 0) P_x = padded_x(a.trunc().N_x);
  Eigen::VectorXcd v = grid_synthesize(a, P_phi, P_x);
  for (std::int64_t i = 0; i < v.size(); ++i) v[i] = fn(v[i]);
  return grid_analyze(v, a.trunc(), P_phi, P_x);
}

double field_min_real_on_grid(const TorusField& a, int P_phi, int P_x) {
  if (P_phi == 0) P_phi = padded_phi(a.trunc().K_phi);
  if (P_x == 0) P_x = padded_x(a.trunc().N_x);
  Eigen::VectorXcd v = grid_synthesize(a, P_phi, P_x);
  double m = v[0].real();
  for (std::int64_t i = 1; i < v.size(); ++i) m = std::min(m, v[i].real());
  return m;
}

double field_max_abs_on_grid(const TorusField& a, int P_phi, int P_x) {
  if (P_phi == 0) P_phi = padded_phi(a.trunc().K_phi);
  if (P_x == 0) P_x = padded_x(a.trunc().N_x);
  Eigen::VectorXcd v = grid_synthesize(a, P_phi, P_x);
  double m = 0.0;
  for (std::int64_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

Eigen::MatrixXcd phi_slices(const TorusField& u, int P) {
  const Truncation& tr = u.trunc();
  if (P < tr.phi_dim()) throw std::invalid_argument("phi_slices: P too small");
  std::vector<int> dims(tr.nu, P);
  std::int64_t nphi = 1;
  for (int i = 0; i < tr.nu; ++i) nphi *= P;
  const int nx = tr.x_count();
  Eigen::MatrixXcd out(nphi, nx);
  Eigen::VectorXcd padded(nphi), vals;
  for (int col = 0; col < nx; ++col) {
    padded.setZero();
    const std::int64_t np = tr.phi_count();
    for (std::int64_t p = 0; p < np; ++p) {
      MultiIndex ell = tr.phi_unflat(p);
      std::int64_t idx = 0;
      for (int i = 0; i < tr.nu; ++i) idx = idx * P + wrap(ell[i], P);
      padded[idx] = u.coeffs()[p * nx + col];
    }
    run_dft(dims, FFTW_BACKWARD, padded, vals);
    out.col(col) = vals;
  }
  return out;
}

TorusField phi_unslices(const Eigen::MatrixXcd& slices, const Truncation& tr, int P) {
  if (P < tr.phi_dim()) throw std::invalid_argument("phi_unslices: P too small");
  std::vector<int> dims(tr.nu, P);
  std::int64_t nphi = 1;
  for (int i = 0; i < tr.nu; ++i) nphi *= P;
  if (slices.rows() != nphi || slices.cols() != tr.x_count())
    throw std::invalid_argument("phi_unslices: shape mismatch");
  TorusField u(tr);
  Eigen::VectorXcd hat;
  const double scale = 1.0 / static_cast<double>(nphi);
  for (int col = 0; col < tr.x_count(); ++col) {
    Eigen::VectorXcd vals = slices.col(col);
    run_dft(dims, FFTW_FORWARD, vals, hat);
    const std::int64_t np = tr.phi_count();
    for (std::int64_t p = 0; p < np; ++p) {
      MultiIndex ell = tr.phi_unflat(p);
      std::int64_t idx = 0;
      for (int i = 0; i < tr.nu; ++i) idx = idx * P + wrap(ell[i], P);
      u.coeffs()[p * tr.x_count() + col] = hat[idx] * scale;
    }
  }
  return u;
}

namespace {

// Cached many-channel plans: rank-nu DFT of size P per axis over E channels,
// channel index fastest (istride = E, idist = 1).
struct ManyPlanSlot {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;  // in-place
  std::int64_t n = 0;
};

ManyPlanSlot& get_many_plan(int nu, int P, std::int64_t E, int sign) {
  static std::map<std::array<std::int64_t, 4>, ManyPlanSlot> cache;
  std::array<std::int64_t, 4> key{nu, P, E, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  ManyPlanSlot slot;
  std::int64_t nphi = 1;
  for (int i = 0; i < nu; ++i) nphi *= P;
  slot.n = nphi * E;
  slot.buf = fftw_alloc_complex(slot.n);
  std::vector<int> dims(nu, P);
  slot.plan = fftw_plan_many_dft(nu, dims.data(), static_cast<int>(E), slot.buf, nullptr,
                                 static_cast<int>(E), 1, slot.buf, nullptr,
                                 static_cast<int>(E), 1, sign, FFTW_ESTIMATE);
  return cache.emplace(key, slot).first->second;
}

}  // namespace

void phi_many_synthesize(const PhiBox& box, int P, std::int64_t E, const cd* blocks, cd* vals) {
  if (P < box.dim()) throw std::invalid_argument("phi_many_synthesize: P too small");
  ManyPlanSlot& slot = get_many_plan(box.nu, P, E, FFTW_BACKWARD);
  std::memset(slot.buf, 0, sizeof(fftw_complex) * slot.n);
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    std::int64_t idx = 0;
    for (int i = 0; i < box.nu; ++i) idx = idx * P + wrap(delta[i], P);
    std::memcpy(slot.buf + idx * E, blocks + b * E, sizeof(fftw_complex) * E);
  }
  fftw_execute(slot.plan);
  std::memcpy(vals, slot.buf, sizeof(fftw_complex) * slot.n);
}

void phi_many_analyze(const PhiBox& out_box, int P, std::int64_t E, const cd* vals, cd* blocks) {
  if (P < out_box.dim()) throw std::invalid_argument("phi_many_analyze: P too small");
  ManyPlanSlot& slot = get_many_plan(out_box.nu, P, E, FFTW_FORWARD);
  std::memcpy(slot.buf, vals, sizeof(fftw_complex) * slot.n);
  fftw_execute(slot.plan);
  std::int64_t nphi = 1;
  for (int i = 0; i < out_box.nu; ++i) nphi *= P;
  const double scale = 1.0 / static_cast<double>(nphi);
  const std::int64_t nb = out_box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = out_box.unflat(b);
    std::int64_t idx = 0;
    for (int i = 0; i < out_box.nu; ++i) idx = idx * P + wrap(delta[i], P);
    const cd* src = reinterpret_cast<const cd*>(slot.buf) + idx * E;
    for (std::int64_t e = 0; e < E; ++e) blocks[b * E + e] = src[e] * scale;
  }
}

void phi_node(int nu, int P, std::int64_t p, double* phi_out) {
  for (int i = nu - 1; i >= 0; --i) {
    phi_out[i] = kTwoPi * (p % P) / P;
    p /= P;
  }
}

Eigen::VectorXcd x_synthesize(const Eigen::VectorXcd& modes, int N, int P) {
  if (modes.size() != 2 * N + 1) throw std::invalid_argument("x_synthesize: size");
  if (P < 2 * N + 1) throw std::invalid_argument("x_synthesize: P too small");
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(P), vals;
  for (int j = -N; j <= N; ++j) padded[wrap(j, P)] = modes[j + N];
  run_dft({P}, FFTW_BACKWARD, padded, vals);
  return vals;
}

Eigen::VectorXcd x_analyze(const Eigen::VectorXcd& vals, int N, int P) {
  if (vals.size() != P) throw std::invalid_argument("x_analyze: size");
  Eigen::VectorXcd hat;
  run_dft({P}, FFTW_FORWARD, vals, hat);
  Eigen::VectorXcd modes(2 * N + 1);
  for (int j = -N; j <= N; ++j) modes[j + N] = hat[wrap(j, P)] / static_cast<double>(P);
  return modes;
}

cd x_eval(const Eigen::VectorXcd& modes, int N, double x) {
  cd acc(0.0, 0.0);
  for (int j = -N; j <= N; ++j) acc += modes[j + N] * std::polar(1.0, j * x);
  return acc;
}

cd x_eval_deriv(const Eigen::VectorXcd& modes, int N, double x) {
  cd acc(0.0, 0.0);
  for (int j = -N; j <= N; ++j)
    acc += modes[j + N] * cd(0.0, j) * std::polar(1.0, j * x);
  return acc;
}

TorusField compose_x(const TorusField& u, const TorusField& beta, int oversample) {
  if (u.trunc() != beta.trunc()) throw std::invalid_argument("compose_x: truncation mismatch");
  const Truncation& tr = u.trunc();
  const int P_phi = padded_phi(tr.K_phi);
  const int P_x = oversample * tr.x_count();
  const int N = tr.N_x;
  Eigen::MatrixXcd su = phi_slices(u, P_phi);
  Eigen::MatrixXcd sb = phi_slices(beta, P_phi);
  Eigen::MatrixXcd out(su.rows(), P_x);
  for (std::int64_t p = 0; p < su.rows(); ++p) {
    const Eigen::VectorXcd uc = su.row(p);
    const Eigen::VectorXcd bc = sb.row(p);
    Eigen::VectorXcd bv = x_synthesize(bc, N, P_x);
    for (int nx = 0; nx < P_x; ++nx) {
      const double x = kTwoPi * nx / P_x;
      out(p, nx) = x_eval(uc, N, x + bv[nx].real());
    }
  }
  // project each slice back to |j| <= N, then the phi axis back to the box
  Eigen::MatrixXcd proj(su.rows(), tr.x_count());
  for (std::int64_t p = 0; p < su.rows(); ++p)
    proj.row(p) = x_analyze(out.row(p), N, P_x);
  return phi_unslices(proj, tr, P_phi);
}

TorusField invert_diffeo_x(const TorusField& beta, int oversample, double tol, int max_iter) {
  const Truncation& tr = beta.trunc();
  const int P_phi = padded_phi(tr.K_phi);
  const int P_x = oversample * tr.x_count();
  const int N = tr.N_x;
  Eigen::MatrixXcd sb = phi_slices(beta, P_phi);
  Eigen::MatrixXcd out(sb.rows(), P_x);
  for (std::int64_t p = 0; p < sb.rows(); ++p) {
    const Eigen::VectorXcd bc = sb.row(p);
    for (int nx = 0; nx < P_x; ++nx) {
      const double x = kTwoPi * nx / P_x;
      double y = x;
      bool done = false;
      for (int it = 0; it < max_iter; ++it) {
        const double r = y + x_eval(bc, N, y).real() - x;
        if (std::abs(r) < tol) { done = true; break; }
        const double dp = 1.0 + x_eval_deriv(bc, N, y).real();
        y -= r / dp;
      }
      if (!done) throw std::runtime_error("invert_diffeo_x: Newton failed to converge");
      out(p, nx) = y - x;
    }
  }
  Eigen::MatrixXcd proj(sb.rows(), tr.x_count());
  for (std::int64_t p = 0; p < sb.rows(); ++p)
    proj.row(p) = x_analyze(out.row(p), N, P_x);
  return phi_unslices(proj, tr, P_phi);
}

}  // namespace toruskam
