#include "toruskam/linop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "toruskam/grid.hpp"
#include "toruskam/kernelop.hpp"

namespace toruskam {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTau = 2.0 * kPi;

// Mode scale of the action-angle normalization.
double lambda_scale(int j, double kappa) {
  const double aj = std::abs(j);
  return std::sqrt(aj / (1.0 + kappa * aj * aj));
}

void validate_sites(const FrequencySet& fs, const char* who) {
  if (!(fs.kappa > 0.0))
    throw std::invalid_argument(std::string(who) + ": kappa must be positive");
  if (fs.S_plus.empty())
    throw std::invalid_argument(std::string(who) + ": empty site list");
  std::vector<int> s = fs.S_plus;
  std::sort(s.begin(), s.end());
  if (s.front() < 1)
    throw std::invalid_argument(std::string(who) + ": tangential sites must be positive");
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw std::invalid_argument(std::string(who) + ": tangential sites must be distinct");
}

void validate_amplitudes(const FrequencySet& fs, const std::vector<double>& xi,
                         const char* who) {
  if (xi.size() != fs.S_plus.size())
    throw std::invalid_argument(std::string(who) + ": one amplitude per tangential site");
  for (double x : xi)
    if (!(x > 0.0)) throw std::domain_error(std::string(who) + ": amplitudes must be positive");
}

// Values of a phi-only field at the phi collocation nodes (P^nu of them).
// Rejects any x dependence.
Eigen::VectorXd phi_only_values(const TorusField& u, int P, const char* who) {
  const Truncation& tr = u.trunc();
  const Eigen::MatrixXcd slices = phi_slices(u, P);
  for (int col = 0; col < slices.cols(); ++col) {
    if (col == tr.N_x) continue;
    if (slices.col(col).lpNorm<Eigen::Infinity>() > 1e-12)
      throw std::invalid_argument(std::string(who) + ": expected a phi-only field");
  }
  return slices.col(tr.N_x).real();
}

}  // namespace

double FrequencySet::omega(int j) const {
  const double aj = std::abs(j);
  return std::sqrt(aj * (1.0 + kappa * aj * aj));
}

double FrequencySet::lambda(int j) const { return j == 0 ? std::sqrt(kappa) : omega(j); }

double FrequencySet::omega_deriv(int j, int r) const {
  if (r < 0) throw std::invalid_argument("FrequencySet::omega_deriv: negative order");
  if (r == 0) return lambda(j);
  const double aj = std::abs(j);
  const double x =
      j == 0 ? 1.0 / (2.0 * kappa) : aj * aj / (2.0 * (1.0 + kappa * aj * aj));
  double semifact = 1.0;  // (2r-3)!!, with (-1)!! = 1!! = 1
  for (int m = 2 * r - 3; m >= 3; m -= 2) semifact *= m;
  const double sign = (r % 2 == 0) ? -1.0 : 1.0;  // (-1)^{r+1}
  return sign * semifact * lambda(j) * std::pow(x, r);
}

bool FrequencySet::is_tangential(int j) const {
  if (j == 0) return true;
  const int aj = std::abs(j);
  return std::find(S_plus.begin(), S_plus.end(), aj) != S_plus.end();
}

Eigen::VectorXd FrequencySet::frequencies() const {
  Eigen::VectorXd om(static_cast<int>(S_plus.size()));
  for (int k = 0; k < om.size(); ++k) om[k] = omega(S_plus[k]);
  return om;
}

Eigen::VectorXd linear_frequencies(const std::vector<int>& S_plus, double kappa) {
  FrequencySet fs{S_plus, kappa};
  validate_sites(fs, "linear_frequencies");
  return fs.frequencies();
}

// ---------------------------------------------------------------------------
// Standing waves and energies
// ---------------------------------------------------------------------------

static WavePair standing_wave_impl(const Truncation& tr, const FrequencySet& fs,
                                   const std::vector<double>& xi, double t,
                                   bool velocity) {
  validate_sites(fs, "standing_wave");
  validate_amplitudes(fs, xi, "standing_wave");
  WavePair u{TorusField(tr), TorusField(tr)};
  for (std::size_t k = 0; k < fs.S_plus.size(); ++k) {
    const int j = fs.S_plus[k];
    if (j > tr.N_x)
      throw std::invalid_argument("standing_wave: tangential site outside the frame");
    const double om = fs.omega(j);
    const double amp = std::sqrt(xi[k]);
    double ce, cp;  // cosine coefficients of eta and psi
    if (velocity) {
      ce = -amp * om * std::sin(om * t);
      cp = -amp * om * om / j * std::cos(om * t);
    } else {
      ce = amp * std::cos(om * t);
      cp = -amp * om / j * std::sin(om * t);
    }
    u.eta += TorusField::cos_x(tr, j, ce);
    u.psi += TorusField::cos_x(tr, j, cp);
  }
  return u;
}

WavePair standing_wave(const Truncation& tr, const FrequencySet& fs,
                       const std::vector<double>& xi, double t) {
  return standing_wave_impl(tr, fs, xi, t, false);
}

WavePair standing_wave_velocity(const Truncation& tr, const FrequencySet& fs,
                                const std::vector<double>& xi, double t) {
  return standing_wave_impl(tr, fs, xi, t, true);
}

double hamiltonian(const WavePair& u, double kappa, double tol) {
  const Truncation& tr = u.eta.trunc();
  x_only_coeffs(u.eta, "hamiltonian");
  x_only_coeffs(u.psi, "hamiltonian");
  const MultiIndex zero{};
  ConformalMap map = solve_conformal(u.eta, tol);
  TorusField g_psi = dn_apply(map, u.psi);
  const double kinetic = 0.5 * kTau * field_multiply(u.psi, g_psi).at(zero, 0).real();
  const double gravity = 0.5 * kTau * field_multiply(u.eta, u.eta).at(zero, 0).real();
  TorusField eta_x = u.eta.dx();
  TorusField root =
      field_map(TorusField::constant(tr, cd(1.0, 0.0)) + field_multiply(eta_x, eta_x),
                [](cd z) { return std::sqrt(z); });
  const double capillary = kappa * kTau * (root.at(zero, 0).real() - 1.0);
  return kinetic + gravity + capillary;
}

double hamiltonian_linear(const WavePair& u, double kappa) {
  const Eigen::VectorXcd e = x_only_coeffs(u.eta, "hamiltonian_linear");
  const Eigen::VectorXcd s = x_only_coeffs(u.psi, "hamiltonian_linear");
  const int N = u.eta.trunc().N_x;
  double acc = 0.0;
  for (int j = -N; j <= N; ++j) {
    const double jj = static_cast<double>(j) * j;
    acc += std::abs(j) * std::norm(s[j + N]) + (1.0 + kappa * jj) * std::norm(e[j + N]);
  }
  return 0.5 * kTau * acc;
}

// ---------------------------------------------------------------------------
// Action-angle chart
// ---------------------------------------------------------------------------

WavePair action_angle_point(const Truncation& tr, const FrequencySet& fs,
                            const std::vector<double>& xi,
                            const std::vector<double>& theta,
                            const std::vector<double>& I) {
  validate_sites(fs, "action_angle_point");
  validate_amplitudes(fs, xi, "action_angle_point");
  if (theta.size() != xi.size() || I.size() != xi.size())
    throw std::invalid_argument("action_angle_point: one angle and action per site");
  WavePair u{TorusField(tr), TorusField(tr)};
  for (std::size_t k = 0; k < fs.S_plus.size(); ++k) {
    const int j = fs.S_plus[k];
    if (j > tr.N_x)
      throw std::invalid_argument("action_angle_point: tangential site outside the frame");
    const double a = xi[k] + I[k];
    if (!(a > 0.0))
      throw std::domain_error("action_angle_point: xi + I must stay positive");
    const double lam = lambda_scale(j, fs.kappa);
    u.eta += TorusField::cos_x(tr, j,
                               std::sqrt(2.0 / kPi * lam * a) * std::cos(theta[k]));
    u.psi += TorusField::cos_x(tr, j,
                               std::sqrt(2.0 / kPi / lam * a) * std::sin(theta[k]));
  }
  return u;
}

std::pair<std::vector<double>, std::vector<double>> action_angle_read(
    const WavePair& u, const FrequencySet& fs, const std::vector<double>& xi) {
  validate_sites(fs, "action_angle_read");
  validate_amplitudes(fs, xi, "action_angle_read");
  const Eigen::VectorXcd e = x_only_coeffs(u.eta, "action_angle_read");
  const Eigen::VectorXcd s = x_only_coeffs(u.psi, "action_angle_read");
  const int N = u.eta.trunc().N_x;
  std::vector<double> theta(xi.size()), act(xi.size());
  for (std::size_t k = 0; k < fs.S_plus.size(); ++k) {
    const int j = fs.S_plus[k];
    const double lam = lambda_scale(j, fs.kappa);
    // Cosine coefficients (the field is real and even in x).
    const double eta_j = 2.0 * e[j + N].real();
    const double psi_j = 2.0 * s[j + N].real();
    const double a = eta_j * std::sqrt(kPi / 2.0 / lam);
    const double b = psi_j * std::sqrt(kPi / 2.0 * lam);
    theta[k] = std::atan2(b, a);
    act[k] = a * a + b * b - xi[k];
  }
  return {theta, act};
}

// ---------------------------------------------------------------------------
// Normal projection and torus embeddings
// ---------------------------------------------------------------------------

TorusField project_normal(const TorusField& u, const std::vector<int>& S_plus) {
  TorusField out = u;
  for_each_mode(u.trunc(), [&](const MultiIndex&, int j, std::int64_t f) {
    const bool tang = (j == 0) || std::find(S_plus.begin(), S_plus.end(),
                                            std::abs(j)) != S_plus.end();
    if (tang) out.coeffs()[f] = cd(0.0, 0.0);
  });
  return out;
}

LinearOperator normal_projector(const Truncation& tr, const std::vector<int>& S_plus) {
  return LinearOperator::fourier_multiplier(tr, [&](int j) {
    const bool tang = (j == 0) || std::find(S_plus.begin(), S_plus.end(),
                                            std::abs(j)) != S_plus.end();
    return cd(tang ? 0.0 : 1.0, 0.0);
  });
}

TorusEmbedding TorusEmbedding::trivial(const Truncation& tr) {
  TorusEmbedding emb;
  emb.Theta.assign(tr.nu, TorusField(tr));
  emb.I.assign(tr.nu, TorusField(tr));
  emb.z_eta = TorusField(tr);
  emb.z_psi = TorusField(tr);
  return emb;
}

double TorusEmbedding::reversibility_defect() const {
  double d = 0.0;
  for (const TorusField& th : Theta) d = std::max(d, th.odd_phi_defect());
  for (const TorusField& ii : I) d = std::max(d, ii.even_phi_defect());
  d = std::max(d, z_eta.even_phi_defect());
  d = std::max(d, z_psi.odd_phi_defect());
  return d;
}

WavePair embed_torus(const TorusEmbedding& emb, const FrequencySet& fs,
                     const std::vector<double>& xi) {
  validate_sites(fs, "embed_torus");
  validate_amplitudes(fs, xi, "embed_torus");
  const Truncation& tr = emb.z_eta.trunc();
  const std::size_t nu = static_cast<std::size_t>(tr.nu);
  if (fs.S_plus.size() != nu || emb.Theta.size() != nu || emb.I.size() != nu)
    throw std::invalid_argument("embed_torus: one site, angle shift and action per torus angle");
  for (int j : fs.S_plus)
    if (j > tr.N_x) throw std::invalid_argument("embed_torus: tangential site outside the frame");
  const double zscale = 1.0 + std::max(emb.z_eta.coeffs().lpNorm<Eigen::Infinity>(),
                                       emb.z_psi.coeffs().lpNorm<Eigen::Infinity>());
  if ((project_normal(emb.z_eta, fs.S_plus) - emb.z_eta).coeffs().lpNorm<Eigen::Infinity>() >
          1e-14 * zscale ||
      (project_normal(emb.z_psi, fs.S_plus) - emb.z_psi).coeffs().lpNorm<Eigen::Infinity>() >
          1e-14 * zscale)
    throw std::invalid_argument("embed_torus: z must be supported on the normal sites");

  const int P = padded_phi(tr.K_phi);
  std::int64_t nodes = 1;
  for (std::size_t i = 0; i < nu; ++i) nodes *= P;

  Eigen::MatrixXcd se = Eigen::MatrixXcd::Zero(nodes, tr.x_count());
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(nodes, tr.x_count());
  std::array<double, kMaxNu> phi{};
  for (std::size_t k = 0; k < nu; ++k) {
    const int j = fs.S_plus[k];
    const double lam = lambda_scale(j, fs.kappa);
    const Eigen::VectorXd th = phi_only_values(emb.Theta[k], P, "embed_torus");
    const Eigen::VectorXd ac = phi_only_values(emb.I[k], P, "embed_torus");
    for (std::int64_t p = 0; p < nodes; ++p) {
      phi_node(tr.nu, P, p, phi.data());
      const double amp2 = xi[k] + ac[p];
      if (!(amp2 > 0.0))
        throw std::domain_error("embed_torus: xi + I must stay positive on the torus");
      const double angle = phi[k] + th[p];
      // Half of each cosine coefficient lands on each of the +-j modes.
      const cd fe(0.5 * std::sqrt(2.0 / kPi * lam * amp2) * std::cos(angle), 0.0);
      const cd fp(0.5 * std::sqrt(2.0 / kPi / lam * amp2) * std::sin(angle), 0.0);
      se(p, j + tr.N_x) += fe;
      se(p, -j + tr.N_x) += fe;
      sp(p, j + tr.N_x) += fp;
      sp(p, -j + tr.N_x) += fp;
    }
  }
  WavePair u{phi_unslices(se, tr, P) + emb.z_eta, phi_unslices(sp, tr, P) + emb.z_psi};
  return u;
}

// ---------------------------------------------------------------------------
// Linearized operator
// ---------------------------------------------------------------------------

WavePair LinearizedWW::apply(const WavePair& u) const {
  return {u.eta.omega_dphi(omega) + blocks.apply_eta(u.eta, u.psi),
          u.psi.omega_dphi(omega) + blocks.apply_psi(u.eta, u.psi)};
}

LinearizedWW assemble_linearized(const WavePair& u, double kappa,
                                 const Eigen::VectorXd& omega, double epsilon,
                                 double tol) {
  const Truncation& tr = u.eta.trunc();
  if (!(u.psi.trunc() == tr))
    throw std::invalid_argument("assemble_linearized: eta and psi on different frames");
  if (omega.size() != tr.nu)
    throw std::invalid_argument("assemble_linearized: one frequency per torus angle");
  if (!(kappa > 0.0)) throw std::invalid_argument("assemble_linearized: kappa must be positive");

  const TorusField eta = u.eta * cd(epsilon, 0.0);
  const TorusField psi = u.psi * cd(epsilon, 0.0);

  LinearizedWW L;
  L.omega = omega;
  L.dn = dn_assemble(eta, tol);
  SurfaceVelocity sv = surface_velocity(eta, L.dn.map, psi);
  L.B = sv.B;
  L.V = sv.V;
  const TorusField one = TorusField::constant(tr, cd(1.0, 0.0));
  L.c = field_map(one + field_multiply(eta.dx(), eta.dx()),
                  [](cd z) { return std::pow(z, -1.5); });

  const LinearOperator& G = L.dn.matrix;
  const LinearOperator Dx = LinearOperator::dx(tr);
  const LinearOperator MB = LinearOperator::multiplication(L.B);
  const LinearOperator MV = LinearOperator::multiplication(L.V);
  const LinearOperator Mc = LinearOperator::multiplication(L.c);

  L.blocks.A = Dx * MV + G * MB;
  L.blocks.B = cd(-1.0, 0.0) * G;
  L.blocks.C = LinearOperator::multiplication(one + field_multiply(L.B, L.V.dx())) +
               MB * (G * MB) - cd(kappa, 0.0) * (Dx * (Mc * Dx));
  L.blocks.D = MV * Dx - MB * G;
  return L;
}

}  // namespace toruskam
