#include "toruskam/params.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace toruskam {

void ParamPoint::validate() const {
  if (kappa1 <= 0.0) throw std::invalid_argument("ParamPoint: kappa1 must be positive");
  if (kappa < kappa1 || kappa > kappa2)
    throw std::invalid_argument("ParamPoint: kappa outside [kappa1, kappa2]");
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("ParamPoint: gamma in (0,1)");
  if (tau < 1.0) throw std::invalid_argument("ParamPoint: tau >= 1");
  if (k0 < 0) throw std::invalid_argument("ParamPoint: k0 >= 0");
}

namespace {

// Walk ell over 0 < |ell|_inf <= K and fold fn(omega.ell, <ell>).
template <class Fn>
void for_each_ell(int nu, int K, const Eigen::VectorXd& omega, Fn&& fn) {
  PhiBox box{nu, K};
  const std::int64_t n = box.count();
  for (std::int64_t f = 0; f < n; ++f) {
    MultiIndex ell = box.unflat(f);
    if (mi_is_zero(ell, nu)) continue;
    double dot = 0.0;
    for (int i = 0; i < nu; ++i) dot += omega[i] * ell[i];
    fn(dot, ell_weight(ell, nu));
  }
}

}  // namespace

bool diophantine_check(const Eigen::VectorXd& omega, double gamma, double tau, int K) {
  if (gamma <= 0.0) return true;  // vacuous bound
  bool ok = true;
  for_each_ell(static_cast<int>(omega.size()), K, omega, [&](double dot, double w) {
    if (std::abs(dot) < gamma * std::pow(w, -tau)) ok = false;
  });
  return ok;
}

double diophantine_margin(const Eigen::VectorXd& omega, double tau, int K) {
  double margin = std::numeric_limits<double>::infinity();
  for_each_ell(static_cast<int>(omega.size()), K, omega, [&](double dot, double w) {
    margin = std::min(margin, std::abs(dot) * std::pow(w, tau));
  });
  return margin;
}

namespace {

// Second-order-accurate central difference stencils for d/dt^d on unit-step
// nodes, d = 0..4 (offsets -2..2).
const std::vector<std::pair<int, double>>& stencil(int d) {
  static const std::vector<std::vector<std::pair<int, double>>> tables = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  };
  if (d < 0 || d >= static_cast<int>(tables.size()))
    throw std::invalid_argument("weighted_param_norm: derivative order beyond stencil table");
  return tables[d];
}

void enumerate_multiindices(int axes, int budget, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == axes) {
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= budget; ++d) {
    cur.push_back(d);
    enumerate_multiindices(axes, budget - d, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double weighted_param_norm(const std::function<TorusField(const ParamPoint&)>& family,
                           double s, const ParamPoint& lam0, double step) {
  lam0.validate();
  const int nu = static_cast<int>(lam0.omega.size());
  const int axes = nu + 1;  // omega components then kappa
  std::vector<std::vector<int>> ks;
  std::vector<int> cur;
  enumerate_multiindices(axes, lam0.k0, cur, ks);

  std::map<std::vector<int>, TorusField> cache;  // offsets (in steps) -> field
  auto eval_at = [&](const std::vector<int>& off) -> const TorusField& {
    auto it = cache.find(off);
    if (it != cache.end()) return it->second;
    ParamPoint lam = lam0;
    for (int i = 0; i < nu; ++i) lam.omega[i] += off[i] * step;
    lam.kappa += off[nu] * step;
    if (lam.kappa < lam.kappa1 || lam.kappa > lam.kappa2)
      throw std::domain_error("weighted_param_norm: kappa stencil leaves [kappa1, kappa2]");
    return cache.emplace(off, family(lam)).first->second;
  };

  double total = 0.0;
  for (const auto& k : ks) {
    int abs_k = 0;
    for (int d : k) abs_k += d;
    // tensor-combine the per-axis stencils
    std::vector<std::pair<std::vector<int>, double>> terms = {{std::vector<int>(axes, 0), 1.0}};
    for (int axis = 0; axis < axes; ++axis) {
      const auto& st = stencil(k[axis]);
      std::vector<std::pair<std::vector<int>, double>> next;
      for (const auto& [off, w] : terms)
        for (const auto& [o1, w1] : st) {
          auto off2 = off;
          off2[axis] = o1;
          next.emplace_back(std::move(off2), w * w1);
        }
      terms = std::move(next);
    }
    TorusField acc;
    bool first = true;
    for (const auto& [off, w] : terms) {
      TorusField t = eval_at(off);
      t *= cd(w, 0.0);
      if (first) {
        acc = std::move(t);
        first = false;
      } else {
        acc += t;
      }
    }
    const double h_pow = std::pow(step, abs_k);
    total += std::pow(lam0.gamma, abs_k) * acc.sobolev_norm(s) / h_pow;
  }
  return total;
}

}  // namespace toruskam
