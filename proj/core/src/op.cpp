#include "toruskam/op.hpp"

#include <cmath>
#include <cstring>
#include <ostream>

#include "toruskam/grid.hpp"

namespace toruskam {

namespace {

int sign_of(int j) { return (j > 0) - (j < 0); }

}  // namespace

LinearOperator::LinearOperator(const Truncation& tr, int band) : tr_(tr), band_(band) {
  if (band < 0 || band > 2 * tr.K_phi)
    throw std::invalid_argument("LinearOperator: band out of [0, 2 K_phi]");
  blocks_.assign(band_box().count(), Eigen::MatrixXcd::Zero(tr.x_count(), tr.x_count()));
}

LinearOperator LinearOperator::zero(const Truncation& tr, int band) {
  return LinearOperator(tr, band);
}

LinearOperator LinearOperator::identity(const Truncation& tr) {
  LinearOperator A(tr, 0);
  A.blocks_[0] = Eigen::MatrixXcd::Identity(tr.x_count(), tr.x_count());
  return A;
}

LinearOperator LinearOperator::multiplication(const TorusField& a) {
  const Truncation& tr = a.trunc();
  LinearOperator A(tr, tr.K_phi);
  const PhiBox box = A.band_box();
  const int N = tr.N_x;
  const std::int64_t nb = box.count();
  for (std::int64_t b = 0; b < nb; ++b) {
    MultiIndex delta = box.unflat(b);
    if (!tr.contains_phi(delta)) continue;  // band == K_phi: all contained
    Eigen::MatrixXcd& blk = A.blocks_[b];
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp) {
        const int k = j - jp;
        if (k < -N || k > N) continue;
        blk(j + N, jp + N) = a.at(delta, k);
      }
  }
  return A;
}

LinearOperator LinearOperator::fourier_multiplier(const Truncation& tr,
                                                  const std::function<cd(int)>& g) {
  LinearOperator A(tr, 0);
  const int N = tr.N_x;
  for (int j = -N; j <= N; ++j) A.blocks_[0](j + N, j + N) = g(j);
  return A;
}

LinearOperator LinearOperator::dx(const Truncation& tr) {
  return fourier_multiplier(tr, [](int j) { return cd(0.0, j); });
}

LinearOperator LinearOperator::hilbert(const Truncation& tr) {
  return fourier_multiplier(tr, [](int j) { return cd(0.0, -sign_of(j)); });
}

LinearOperator LinearOperator::mean_x(const Truncation& tr) {
  return fourier_multiplier(tr, [](int j) { return cd(j == 0 ? 1.0 : 0.0, 0.0); });
}

Eigen::MatrixXcd LinearOperator::block_or_zero(const MultiIndex& delta) const {
  if (band_box().contains(delta)) return blocks_[band_box().flat(delta)];
  return Eigen::MatrixXcd::Zero(tr_.x_count(), tr_.x_count());
}

cd LinearOperator::entry(const MultiIndex& delta, int j, int j_in) const {
  if (!band_box().contains(delta)) return cd(0.0, 0.0);
  const int N = tr_.N_x;
  if (j < -N || j > N || j_in < -N || j_in > N) return cd(0.0, 0.0);
  return blocks_[band_box().flat(delta)](j + N, j_in + N);
}

LinearOperator& LinearOperator::operator+=(const LinearOperator& o) {
  if (tr_ != o.tr_) throw std::invalid_argument("LinearOperator+: truncation mismatch");
  if (o.band_ > band_) {
    LinearOperator grown(tr_, o.band_);
    const PhiBox nb = grown.band_box();
    const PhiBox ob = band_box();
    const std::int64_t n = ob.count();
    for (std::int64_t b = 0; b < n; ++b) grown.blocks_[nb.flat(ob.unflat(b))] = blocks_[b];
    *this = std::move(grown);
  }
  const PhiBox mine = band_box();
  const PhiBox theirs = o.band_box();
  const std::int64_t n = theirs.count();
  for (std::int64_t b = 0; b < n; ++b) blocks_[mine.flat(theirs.unflat(b))] += o.blocks_[b];
  return *this;
}

LinearOperator& LinearOperator::operator-=(const LinearOperator& o) {
  *this += (-o);
  return *this;
}

LinearOperator& LinearOperator::operator*=(cd s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

LinearOperator LinearOperator::operator-() const {
  LinearOperator r = *this;
  for (auto& b : r.blocks_) b = -b;
  return r;
}

std::vector<Eigen::MatrixXcd> op_slices(const LinearOperator& A, int P) {
  const Truncation& tr = A.trunc();
  const PhiBox box = A.band_box();
  const int n = tr.x_count();
  const std::int64_t E = static_cast<std::int64_t>(n) * n;
  std::int64_t nphi = 1;
  for (int i = 0; i < tr.nu; ++i) nphi *= P;
  Eigen::VectorXcd packed(box.count() * E);
  for (std::int64_t b = 0; b < box.count(); ++b)
    std::memcpy(packed.data() + b * E, A.block(box.unflat(b)).data(), sizeof(cd) * E);
  Eigen::VectorXcd vals(nphi * E);
  phi_many_synthesize(box, P, E, packed.data(), vals.data());
  std::vector<Eigen::MatrixXcd> out(nphi);
  for (std::int64_t p = 0; p < nphi; ++p)
    out[p] = Eigen::Map<const Eigen::MatrixXcd>(vals.data() + p * E, n, n);
  return out;
}

LinearOperator op_unslices(const std::vector<Eigen::MatrixXcd>& slices, const Truncation& tr,
                           int band, int P) {
  const int n = tr.x_count();
  const std::int64_t E = static_cast<std::int64_t>(n) * n;
  std::int64_t nphi = 1;
  for (int i = 0; i < tr.nu; ++i) nphi *= P;
  if (static_cast<std::int64_t>(slices.size()) != nphi)
    throw std::invalid_argument("op_unslices: slice count mismatch");
  Eigen::VectorXcd vals(nphi * E);
  for (std::int64_t p = 0; p < nphi; ++p)
    std::memcpy(vals.data() + p * E, slices[p].data(), sizeof(cd) * E);
  LinearOperator A(tr, band);
  const PhiBox box = A.band_box();
  Eigen::VectorXcd packed(box.count() * E);
  phi_many_analyze(box, P, E, vals.data(), packed.data());
  for (std::int64_t b = 0; b < box.count(); ++b)
    A.block(box.unflat(b)) =
        Eigen::Map<const Eigen::MatrixXcd>(packed.data() + b * E, n, n);
  return A;
}

LinearOperator LinearOperator::compose(const LinearOperator& o, int band_cap) const {
  if (tr_ != o.tr_) throw std::invalid_argument("LinearOperator::compose: truncation mismatch");
  const int bsum = band_ + o.band_;
  int band_c = std::min(bsum, 2 * tr_.K_phi);
  if (band_cap >= 0) band_c = std::min(band_c, band_cap);
  // Alias-free analysis of the product band within the output window, and
  // large enough to hold either factor's mode box.
  const int P = std::max(bsum + band_c + 1, 2 * std::max(band_, o.band_) + 1);
  std::vector<Eigen::MatrixXcd> sa = op_slices(*this, P);
  std::vector<Eigen::MatrixXcd> sb = op_slices(o, P);
  for (std::size_t p = 0; p < sa.size(); ++p) sa[p] = sa[p] * sb[p];
  return op_unslices(sa, tr_, band_c, P);
}

TorusField LinearOperator::apply(const TorusField& u) const {
  if (tr_ != u.trunc()) throw std::invalid_argument("LinearOperator::apply: truncation mismatch");
  const int n = tr_.x_count();
  if (band_ == 0) {
    TorusField out(tr_);
    const std::int64_t np = tr_.phi_count();
    for (std::int64_t p = 0; p < np; ++p)
      out.coeffs().segment(p * n, n) = blocks_[0] * u.coeffs().segment(p * n, n);
    return out;
  }
  const int P = band_ + 2 * tr_.K_phi + 1;
  std::vector<Eigen::MatrixXcd> sa = op_slices(*this, P);
  Eigen::MatrixXcd su = phi_slices(u, P);
  Eigen::MatrixXcd sv(su.rows(), su.cols());
  for (std::int64_t p = 0; p < su.rows(); ++p)
    sv.row(p) = (sa[p] * su.row(p).transpose()).transpose();
  return phi_unslices(sv, tr_, P);
}

TorusField apply_with_omega_dphi(const LinearOperator& A, const Eigen::VectorXd& omega,
                                 const TorusField& u) {
  TorusField out = u.omega_dphi(omega);
  out += A.apply(u);
  return out;
}

LinearOperator LinearOperator::adjoint() const {
  LinearOperator r(tr_, band_);
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    MultiIndex delta = box.unflat(b);
    r.blocks_[b] = blocks_[box.flat(mi_neg(delta, tr_.nu))].adjoint();
  }
  return r;
}

LinearOperator LinearOperator::conj_op() const {
  LinearOperator r(tr_, band_);
  const PhiBox box = band_box();
  const int N = tr_.N_x;
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    MultiIndex delta = box.unflat(b);
    const Eigen::MatrixXcd& src = blocks_[box.flat(mi_neg(delta, tr_.nu))];
    Eigen::MatrixXcd& dst = r.blocks_[b];
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        dst(j + N, jp + N) = std::conj(src(-j + N, -jp + N));
  }
  return r;
}

LinearOperator LinearOperator::majorant() const {
  LinearOperator r = *this;
  for (auto& b : r.blocks_) b = b.cwiseAbs().cast<cd>();
  return r;
}

LinearOperator LinearOperator::smoothed(int N) const {
  const int nb = std::min(N, band_);
  LinearOperator r(tr_, nb);
  const PhiBox rb = r.band_box();
  const PhiBox box = band_box();
  const std::int64_t n = rb.count();
  for (std::int64_t b = 0; b < n; ++b) r.blocks_[b] = blocks_[box.flat(rb.unflat(b))];
  return r;
}

LinearOperator LinearOperator::smoothed_complement(int N) const {
  LinearOperator r = *this;
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b)
    if (mi_norm_inf(box.unflat(b), tr_.nu) <= N) r.blocks_[b].setZero();
  return r;
}

LinearOperator LinearOperator::phi_weight(double bexp) const {
  LinearOperator r = *this;
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b)
    r.blocks_[b] *= std::pow(ell_weight(box.unflat(b), tr_.nu), bexp);
  return r;
}

LinearOperator LinearOperator::omega_dphi(const Eigen::VectorXd& omega) const {
  LinearOperator r = *this;
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    MultiIndex delta = box.unflat(b);
    double wd = 0.0;
    for (int i = 0; i < tr_.nu; ++i) wd += omega[i] * delta[i];
    r.blocks_[b] *= cd(0.0, wd);
  }
  return r;
}

LinearOperator LinearOperator::commutator_dx() const {
  LinearOperator r = *this;
  const int N = tr_.N_x;
  for (auto& blk : r.blocks_)
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp) blk(j + N, jp + N) *= cd(0.0, j - jp);
  return r;
}

LinearOperator LinearOperator::reflected_phi() const {
  LinearOperator r(tr_, band_);
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b)
    r.blocks_[b] = blocks_[box.flat(mi_neg(box.unflat(b), tr_.nu))];
  return r;
}

LinearOperator LinearOperator::truncated_band(int new_band) const {
  return smoothed(new_band);
}

LinearOperator LinearOperator::resized(const Truncation& tr) const {
  if (tr.nu != tr_.nu) throw std::invalid_argument("LinearOperator::resized: nu mismatch");
  const int nb = std::min(band_, 2 * tr.K_phi);
  LinearOperator r(tr, nb);
  const PhiBox rb = r.band_box();
  const PhiBox ob = band_box();
  const int N = std::min(tr.N_x, tr_.N_x);
  const std::int64_t n = rb.count();
  for (std::int64_t b = 0; b < n; ++b) {
    MultiIndex delta = rb.unflat(b);
    const Eigen::MatrixXcd& src = blocks_[ob.flat(delta)];
    Eigen::MatrixXcd& dst = r.blocks_[b];
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        dst(j + tr.N_x, jp + tr.N_x) = src(j + tr_.N_x, jp + tr_.N_x);
  }
  return r;
}

LinearOperator LinearOperator::map_entries(
    const std::function<cd(const MultiIndex&, int, int, cd)>& fn) const {
  LinearOperator r = *this;
  const PhiBox box = band_box();
  const int N = tr_.N_x;
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    MultiIndex delta = box.unflat(b);
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        r.blocks_[b](j + N, jp + N) = fn(delta, j, jp, blocks_[b](j + N, jp + N));
  }
  return r;
}

double LinearOperator::norm_max() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

double LinearOperator::evenness_defect() const {
  double m = 0.0;
  const int N = tr_.N_x;
  for (const auto& blk : blocks_)
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        m = std::max(m, std::abs(blk(j + N, jp + N) - blk(-j + N, -jp + N)));
  return m;
}

double LinearOperator::realness_defect() const {
  double m = 0.0;
  const PhiBox box = band_box();
  const int N = tr_.N_x;
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    const Eigen::MatrixXcd& cur = blocks_[b];
    const Eigen::MatrixXcd& mir = blocks_[box.flat(mi_neg(box.unflat(b), tr_.nu))];
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        m = std::max(m, std::abs(cur(j + N, jp + N) - std::conj(mir(-j + N, -jp + N))));
  }
  return m;
}

double LinearOperator::phi_even_defect() const {
  double m = 0.0;
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    const Eigen::MatrixXcd& mir = blocks_[box.flat(mi_neg(box.unflat(b), tr_.nu))];
    m = std::max(m, (blocks_[b] - mir).cwiseAbs().maxCoeff());
  }
  return m;
}

double LinearOperator::phi_odd_defect() const {
  double m = 0.0;
  const PhiBox box = band_box();
  const std::int64_t n = box.count();
  for (std::int64_t b = 0; b < n; ++b) {
    const Eigen::MatrixXcd& mir = blocks_[box.flat(mi_neg(box.unflat(b), tr_.nu))];
    m = std::max(m, (blocks_[b] + mir).cwiseAbs().maxCoeff());
  }
  return m;
}

double LinearOperator::reversible_defect() const {
  double m = 0.0;
  const int N = tr_.N_x;
  for (const auto& blk : blocks_)
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        m = std::max(m, std::abs(blk(j + N, jp + N) + std::conj(blk(-j + N, -jp + N))));
  return m;
}

double LinearOperator::rev_preserving_defect() const {
  double m = 0.0;
  const int N = tr_.N_x;
  for (const auto& blk : blocks_)
    for (int j = -N; j <= N; ++j)
      for (int jp = -N; jp <= N; ++jp)
        m = std::max(m, std::abs(blk(j + N, jp + N) - std::conj(blk(-j + N, -jp + N))));
  return m;
}

LinearOperator LinearOperator::symmetrized_even() const {
  return map_entries([this](const MultiIndex& delta, int j, int jp, cd v) {
    return 0.5 * (v + entry(delta, -j, -jp));
  });
}

LinearOperator LinearOperator::symmetrized_real() const {
  LinearOperator c = conj_op();
  LinearOperator r = *this;
  r += c;
  r *= cd(0.5, 0.0);
  return r;
}

double LinearOperator::op_norm_s(double s, int iters) const {
  const std::int64_t n = tr_.size();
  Eigen::VectorXd w(n);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    w[f] = std::pow(mode_weight(ell, j, tr_.nu), s);
  });
  LinearOperator adj = adjoint();
  TorusField v(tr_, Eigen::VectorXcd::Constant(n, cd(1.0, 0.0) / std::sqrt(double(n))));
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    // y = W A W^{-1} v ; z = W^{-T*} A^* W v ... power iteration on G^H G.
    TorusField t(tr_, (v.coeffs().array() / w.array()).matrix());
    TorusField y = apply(t);
    y.coeffs().array() *= w.array();
    TorusField t2(tr_, (y.coeffs().array() * w.array()).matrix());
    TorusField z = adj.apply(t2);
    z.coeffs().array() /= w.array();
    const double nz = z.coeffs().norm();
    if (nz == 0.0) return 0.0;
    lambda = nz;  // approximates the top eigenvalue of G^H G
    v = TorusField(tr_, z.coeffs() / nz);
  }
  return std::sqrt(lambda);
}

Eigen::MatrixXcd LinearOperator::dense() const {
  const std::int64_t n = tr_.size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  const int N = tr_.N_x;
  const std::int64_t np = tr_.phi_count();
  for (std::int64_t pr = 0; pr < np; ++pr) {
    MultiIndex ell = tr_.phi_unflat(pr);
    for (std::int64_t pc = 0; pc < np; ++pc) {
      MultiIndex ellp = tr_.phi_unflat(pc);
      MultiIndex delta = mi_sub(ell, ellp, tr_.nu);
      if (!band_box().contains(delta)) continue;
      M.block(pr * tr_.x_count(), pc * tr_.x_count(), 2 * N + 1, 2 * N + 1) =
          blocks_[band_box().flat(delta)];
    }
  }
  return M;
}

void LinearOperator::to_dense_csv(std::ostream& os) const {
  Eigen::MatrixXcd M = dense();
  for (std::int64_t r = 0; r < M.rows(); ++r) {
    for (std::int64_t c = 0; c < M.cols(); ++c) {
      if (c) os << ',';
      const cd v = M(r, c);
      os << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << 'j';
    }
    os << '\n';
  }
}

// ---- RealBlockOperator ----

TorusField RealBlockOperator::apply_eta(const TorusField& eta, const TorusField& psi) const {
  TorusField r = A.apply(eta);
  r += B.apply(psi);
  return r;
}

TorusField RealBlockOperator::apply_psi(const TorusField& eta, const TorusField& psi) const {
  TorusField r = C.apply(eta);
  r += D.apply(psi);
  return r;
}

RealBlockOperator RealBlockOperator::compose(const RealBlockOperator& o) const {
  RealBlockOperator r;
  r.A = A * o.A + B * o.C;
  r.B = A * o.B + B * o.D;
  r.C = C * o.A + D * o.C;
  r.D = C * o.B + D * o.D;
  return r;
}

RealBlockOperator RealBlockOperator::operator+(const RealBlockOperator& o) const {
  RealBlockOperator r = *this;
  r.A += o.A; r.B += o.B; r.C += o.C; r.D += o.D;
  return r;
}

RealBlockOperator RealBlockOperator::operator-(const RealBlockOperator& o) const {
  RealBlockOperator r = *this;
  r.A -= o.A; r.B -= o.B; r.C -= o.C; r.D -= o.D;
  return r;
}

double RealBlockOperator::realness_defect() const {
  return std::max(std::max(A.realness_defect(), B.realness_defect()),
                  std::max(C.realness_defect(), D.realness_defect()));
}

double RealBlockOperator::reversible_defect() const {
  return std::max(std::max(A.phi_odd_defect(), D.phi_odd_defect()),
                  std::max(B.phi_even_defect(), C.phi_even_defect()));
}

double RealBlockOperator::rev_preserving_defect() const {
  return std::max(std::max(A.phi_even_defect(), D.phi_even_defect()),
                  std::max(B.phi_odd_defect(), C.phi_odd_defect()));
}

double RealBlockOperator::evenness_defect() const {
  return std::max(std::max(A.evenness_defect(), B.evenness_defect()),
                  std::max(C.evenness_defect(), D.evenness_defect()));
}

// ---- BlockOperator ----

BlockOperator BlockOperator::from_real(const RealBlockOperator& R) {
  BlockOperator r;
  const cd ih(0.0, 0.5);
  // R1 = ((A + D) - i (B - C)) / 2,  R2 = ((A - D) + i (B + C)) / 2.
  r.R1 = cd(0.5, 0.0) * (R.A + R.D) - ih * (R.B - R.C);
  r.R2 = cd(0.5, 0.0) * (R.A - R.D) + ih * (R.B + R.C);
  return r;
}

RealBlockOperator BlockOperator::to_real() const {
  RealBlockOperator r;
  LinearOperator R1b = R1.conj_op();
  LinearOperator R2b = R2.conj_op();
  const cd ih(0.0, 0.5);
  r.A = cd(0.5, 0.0) * (R1 + R1b + R2 + R2b);
  r.B = ih * (R1 - R1b - R2 + R2b);
  r.C = -ih * (R1 + R2 - R1b - R2b);
  r.D = cd(0.5, 0.0) * (R1 + R1b - R2 - R2b);
  return r;
}

TorusField BlockOperator::apply(const TorusField& u, const TorusField& ubar) const {
  TorusField r = R1.apply(u);
  r += R2.apply(ubar);
  return r;
}

BlockOperator BlockOperator::compose(const BlockOperator& o) const {
  BlockOperator r;
  r.R1 = R1 * o.R1 + R2 * o.R2.conj_op();
  r.R2 = R1 * o.R2 + R2 * o.R1.conj_op();
  return r;
}

BlockOperator BlockOperator::operator+(const BlockOperator& o) const {
  BlockOperator r = *this;
  r.R1 += o.R1;
  r.R2 += o.R2;
  return r;
}

BlockOperator BlockOperator::operator-(const BlockOperator& o) const {
  BlockOperator r = *this;
  r.R1 -= o.R1;
  r.R2 -= o.R2;
  return r;
}

BlockOperator BlockOperator::operator*(cd s) const {
  BlockOperator r = *this;
  r.R1 *= s;
  r.R2 *= s;
  return r;
}

double BlockOperator::evenness_defect() const {
  return std::max(R1.evenness_defect(), R2.evenness_defect());
}

double BlockOperator::reversible_defect() const {
  return std::max(R1.reversible_defect(), R2.reversible_defect());
}

double BlockOperator::rev_preserving_defect() const {
  return std::max(R1.rev_preserving_defect(), R2.rev_preserving_defect());
}

}  // namespace toruskam
