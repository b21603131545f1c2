#include "toruskam/field.hpp"

#include <cmath>

namespace toruskam {

double TorusField::sobolev_norm(double s) const {
  double acc = 0.0;
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    const double w = mode_weight(ell, j, tr_.nu);
    acc += std::norm(c_[f]) * std::pow(w, 2.0 * s);
  });
  return std::sqrt(acc);
}

TorusField TorusField::majorant() const {
  TorusField r(tr_);
  for (std::int64_t i = 0; i < c_.size(); ++i) r.c_[i] = std::abs(c_[i]);
  return r;
}

TorusField TorusField::project(int K) const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    if (std::max(mi_norm_inf(ell, tr_.nu), std::abs(j)) <= K) r.c_[f] = c_[f];
  });
  return r;
}

TorusField TorusField::project_complement(int K) const { return *this - project(K); }

TorusField TorusField::project_x(int N) const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    if (std::abs(j) <= N) r.c_[f] = c_[f];
  });
  return r;
}

double TorusField::reality_defect() const {
  double d = 0.0;
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    const cd mirror = c_[tr_.flat(mi_neg(ell, tr_.nu), -j)];
    d = std::max(d, std::abs(mirror - std::conj(c_[f])));
  });
  return d;
}

double TorusField::even_x_defect() const {
  double d = 0.0;
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    d = std::max(d, std::abs(c_[tr_.flat(ell, -j)] - c_[f]));
  });
  return d;
}

double TorusField::odd_x_defect() const {
  double d = 0.0;
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    d = std::max(d, std::abs(c_[tr_.flat(ell, -j)] + c_[f]));
  });
  return d;
}

double TorusField::even_phi_defect() const {
  double d = 0.0;
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    d = std::max(d, std::abs(c_[tr_.flat(mi_neg(ell, tr_.nu), j)] - c_[f]));
  });
  return d;
}

double TorusField::odd_phi_defect() const {
  double d = 0.0;
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    d = std::max(d, std::abs(c_[tr_.flat(mi_neg(ell, tr_.nu), j)] + c_[f]));
  });
  return d;
}

TorusField TorusField::symmetrized_real() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    const cd mirror = c_[tr_.flat(mi_neg(ell, tr_.nu), -j)];
    r.c_[f] = 0.5 * (c_[f] + std::conj(mirror));
  });
  return r;
}

TorusField TorusField::symmetrized_even_x() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = 0.5 * (c_[f] + c_[tr_.flat(ell, -j)]);
  });
  return r;
}

TorusField TorusField::symmetrized_odd_x() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = 0.5 * (c_[f] - c_[tr_.flat(ell, -j)]);
  });
  return r;
}

TorusField TorusField::symmetrized_even_phi() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = 0.5 * (c_[f] + c_[tr_.flat(mi_neg(ell, tr_.nu), j)]);
  });
  return r;
}

TorusField TorusField::symmetrized_odd_phi() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = 0.5 * (c_[f] - c_[tr_.flat(mi_neg(ell, tr_.nu), j)]);
  });
  return r;
}

TorusField TorusField::conj_field() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = std::conj(c_[tr_.flat(mi_neg(ell, tr_.nu), -j)]);
  });
  return r;
}

TorusField TorusField::reflect_x() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = c_[tr_.flat(ell, -j)];
  });
  return r;
}

TorusField TorusField::reflect_phi() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    r.c_[f] = c_[tr_.flat(mi_neg(ell, tr_.nu), j)];
  });
  return r;
}

TorusField TorusField::dx() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex&, int j, std::int64_t f) {
    r.c_[f] = cd(0.0, static_cast<double>(j)) * c_[f];
  });
  return r;
}

TorusField TorusField::dx_inv() const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex&, int j, std::int64_t f) {
    if (j != 0) r.c_[f] = c_[f] / cd(0.0, static_cast<double>(j));
  });
  return r;
}

TorusField TorusField::omega_dphi(const Eigen::VectorXd& omega) const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    double wl = 0.0;
    for (int i = 0; i < tr_.nu; ++i) wl += omega[i] * ell[i];
    r.c_[f] = cd(0.0, wl) * c_[f];
    (void)j;
  });
  return r;
}

TorusField TorusField::omega_dphi_inv(const Eigen::VectorXd& omega) const {
  TorusField r(tr_);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    if (mi_is_zero(ell, tr_.nu)) return;
    double wl = 0.0;
    for (int i = 0; i < tr_.nu; ++i) wl += omega[i] * ell[i];
    r.c_[f] = c_[f] / cd(0.0, wl);
    (void)j;
  });
  return r;
}

TorusField TorusField::mean_x() const {
  TorusField r(tr_);
  const std::int64_t np = tr_.phi_count();
  for (std::int64_t p = 0; p < np; ++p) {
    const std::int64_t base = p * tr_.x_count();
    r.c_[base + tr_.N_x] = c_[base + tr_.N_x];
  }
  return r;
}

cd TorusField::average() const {
  MultiIndex z{};
  return c_[tr_.flat(z, 0)];
}

double TorusField::max_abs_x_mean_defect() const {
  double d = 0.0;
  const std::int64_t np = tr_.phi_count();
  for (std::int64_t p = 0; p < np; ++p)
    d = std::max(d, std::abs(c_[p * tr_.x_count() + tr_.N_x]));
  return d;
}

cd TorusField::eval(const double* phi, double x) const {
  cd acc(0.0, 0.0);
  for_each_mode(tr_, [&](const MultiIndex& ell, int j, std::int64_t f) {
    double arg = j * x;
    for (int i = 0; i < tr_.nu; ++i) arg += ell[i] * phi[i];
    acc += c_[f] * std::polar(1.0, arg);
  });
  return acc;
}

TorusField TorusField::cos_x(const Truncation& tr, int j, double amp) {
  TorusField r(tr);
  MultiIndex z{};
  if (j == 0) {
    r.at(z, 0) = amp;
  } else {
    r.at(z, j) = 0.5 * amp;
    r.at(z, -j) = 0.5 * amp;
  }
  return r;
}

TorusField TorusField::sin_x(const Truncation& tr, int j, double amp) {
  TorusField r(tr);
  MultiIndex z{};
  if (j != 0) {
    r.at(z, j) = cd(0.0, -0.5 * amp);
    r.at(z, -j) = cd(0.0, 0.5 * amp);
  }
  return r;
}

TorusField TorusField::constant(const Truncation& tr, cd value) {
  TorusField r(tr);
  MultiIndex z{};
  r.at(z, 0) = value;
  return r;
}

TorusField TorusField::exponential(const Truncation& tr, const MultiIndex& ell, int j, cd amp) {
  TorusField r(tr);
  r.at(ell, j) = amp;
  return r;
}

}  // namespace toruskam
