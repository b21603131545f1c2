#pragma once
// Truncated Fourier frame on T^nu x T: angle modes ell in Z^nu with
// |ell|_inf <= K_phi, space modes j in Z with |j| <= N_x.  Flat storage is
// lexicographic in (ell, j): ell runs mixed-radix with ell[0] most
// significant, then j from -N_x to N_x.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace toruskam {

inline constexpr int kMaxNu = 4;  // compile-time cap on the number of angles
using MultiIndex = std::array<int, kMaxNu>;  // entries beyond nu are zero

struct Truncation {
  int nu = 2;
  int K_phi = 8;
  int N_x = 32;

  Truncation() = default;
  Truncation(int nu_, int K_phi_, int N_x_) : nu(nu_), K_phi(K_phi_), N_x(N_x_) {
    if (nu < 1 || nu > kMaxNu) throw std::invalid_argument("Truncation: nu out of range");
    if (K_phi < 1 || N_x < 1) throw std::invalid_argument("Truncation: cutoffs must be >= 1");
  }

  int phi_dim() const { return 2 * K_phi + 1; }     // modes per angle axis
  int x_count() const { return 2 * N_x + 1; }
  std::int64_t phi_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < nu; ++i) n *= phi_dim();
    return n;
  }
  std::int64_t size() const { return phi_count() * x_count(); }

  bool contains_phi(const MultiIndex& ell) const {
    for (int i = 0; i < nu; ++i)
      if (ell[i] < -K_phi || ell[i] > K_phi) return false;
    return true;
  }
  bool contains(const MultiIndex& ell, int j) const {
    return contains_phi(ell) && j >= -N_x && j <= N_x;
  }

  std::int64_t phi_flat(const MultiIndex& ell) const {
    std::int64_t f = 0;
    for (int i = 0; i < nu; ++i) f = f * phi_dim() + (ell[i] + K_phi);
    return f;
  }
  MultiIndex phi_unflat(std::int64_t f) const {
    MultiIndex ell{};
    for (int i = nu - 1; i >= 0; --i) {
      ell[i] = static_cast<int>(f % phi_dim()) - K_phi;
      f /= phi_dim();
    }
    return ell;
  }
  std::int64_t flat(const MultiIndex& ell, int j) const {
    return phi_flat(ell) * x_count() + (j + N_x);
  }

  bool operator==(const Truncation& o) const {
    return nu == o.nu && K_phi == o.K_phi && N_x == o.N_x;
  }
  bool operator!=(const Truncation& o) const { return !(*this == o); }
};

// Mixed-radix box iteration helpers for offsets |ell|_inf <= K over nu axes.
struct PhiBox {
  int nu;
  int K;
  int dim() const { return 2 * K + 1; }
  std::int64_t count() const {
    std::int64_t n = 1;
    for (int i = 0; i < nu; ++i) n *= dim();
    return n;
  }
  std::int64_t flat(const MultiIndex& ell) const {
    std::int64_t f = 0;
    for (int i = 0; i < nu; ++i) f = f * dim() + (ell[i] + K);
    return f;
  }
  MultiIndex unflat(std::int64_t f) const {
    MultiIndex ell{};
    for (int i = nu - 1; i >= 0; --i) {
      ell[i] = static_cast<int>(f % dim()) - K;
      f /= dim();
    }
    return ell;
  }
  bool contains(const MultiIndex& ell) const {
    for (int i = 0; i < nu; ++i)
      if (ell[i] < -K || ell[i] > K) return false;
    return true;
  }
};

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b, int nu) {
  MultiIndex r{};
  for (int i = 0; i < nu; ++i) r[i] = a[i] + b[i];
  return r;
}
inline MultiIndex mi_sub(const MultiIndex& a, const MultiIndex& b, int nu) {
  MultiIndex r{};
  for (int i = 0; i < nu; ++i) r[i] = a[i] - b[i];
  return r;
}
inline MultiIndex mi_neg(const MultiIndex& a, int nu) {
  MultiIndex r{};
  for (int i = 0; i < nu; ++i) r[i] = -a[i];
  return r;
}
inline int mi_norm_inf(const MultiIndex& a, int nu) {
  int m = 0;
  for (int i = 0; i < nu; ++i) m = std::max(m, a[i] < 0 ? -a[i] : a[i]);
  return m;
}
inline bool mi_is_zero(const MultiIndex& a, int nu) {
  for (int i = 0; i < nu; ++i)
    if (a[i] != 0) return false;
  return true;
}

// <ell, j> = max{1, |ell|_inf, |j|}: the unified Sobolev weight base.
inline double mode_weight(const MultiIndex& ell, int j, int nu) {
  int m = mi_norm_inf(ell, nu);
  int aj = j < 0 ? -j : j;
  return static_cast<double>(std::max(1, std::max(m, aj)));
}
// <ell> = max{1, |ell|_inf} for angle-only weights.
inline double ell_weight(const MultiIndex& ell, int nu) {
  return static_cast<double>(std::max(1, mi_norm_inf(ell, nu)));
}

// Build s0 = floor((nu+1)/2) + 1, the default diagnostic Sobolev index.
inline double default_s0(int nu) { return static_cast<double>((nu + 1) / 2 + 1); }

}  // namespace toruskam
