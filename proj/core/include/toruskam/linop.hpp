#pragma once
// Linear water-wave layer on the truncated torus frame: the gravity-capillary
// dispersion relation and its parameter derivatives, standing waves of the
// linearized system at the flat surface, the energy functional, the
// action-angle chart on the tangential sites, approximate invariant-torus
// embeddings, and the assembly of the linearized operator at a given state
// as a 2x2 block system over the surface operator.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "toruskam/dn.hpp"
#include "toruskam/field.hpp"
#include "toruskam/op.hpp"

namespace toruskam {

// Tangential-site bookkeeping for the dispersion relation
//   omega_j = sqrt(j (1 + kappa j^2)),  j >= 1.
struct FrequencySet {
  std::vector<int> S_plus;  // tangential sites, positive and distinct
  double kappa = 1.0;       // surface-tension coefficient, > 0

  double omega(int j) const;   // dispersion relation at |j|
  double lambda(int j) const;  // omega away from 0; sqrt(kappa) at j = 0
  // d^r lambda / d kappa^r in closed form:
  //   r = 0: lambda;   r >= 1: (-1)^{r+1} (2r-3)!! lambda x^r,
  // with x = j^2 / (2 (1 + kappa j^2)) for j != 0 and x = 1 / (2 kappa)
  // at j = 0.
  double omega_deriv(int j, int r) const;
  bool is_tangential(int j) const;      // j == 0 or |j| in S_plus
  Eigen::VectorXd frequencies() const;  // omega at the S_plus sites
};

Eigen::VectorXd linear_frequencies(const std::vector<int>& S_plus, double kappa);

// A surface state: elevation eta and trace psi of the velocity potential.
struct WavePair {
  TorusField eta, psi;
};

// Standing-wave solution of the linearized system at the flat surface,
//   eta =  sum_j sqrt(xi_j) cos(omega_j t) cos(j x),
//   psi = -sum_j sqrt(xi_j) omega_j / j sin(omega_j t) cos(j x),
// summed over the S_plus sites, and its exact time derivative.
WavePair standing_wave(const Truncation& tr, const FrequencySet& fs,
                       const std::vector<double>& xi, double t);
WavePair standing_wave_velocity(const Truncation& tr, const FrequencySet& fs,
                                const std::vector<double>& xi, double t);

// Energy of an x-only state (any phi dependence is rejected):
//   H = 1/2 (psi, G(eta) psi) + int eta^2 / 2 + kappa int (sqrt(1+eta_x^2) - 1)
// with the unnormalized L^2 pairing on the circle, and its quadratic part at
// the flat surface, where the surface operator is |D|.
double hamiltonian(const WavePair& u, double kappa, double tol = 1e-11);
double hamiltonian_linear(const WavePair& u, double kappa);

// Action-angle chart on the tangential sites: cosine coefficients
//   eta_j = sqrt(2/pi) Lambda_j^{ 1/2} sqrt(xi_j + I_j) cos(theta_j),
//   psi_j = sqrt(2/pi) Lambda_j^{-1/2} sqrt(xi_j + I_j) sin(theta_j),
// with Lambda_j = sqrt(j / (1 + kappa j^2)).  Requires xi_j + I_j > 0.
WavePair action_angle_point(const Truncation& tr, const FrequencySet& fs,
                            const std::vector<double>& xi,
                            const std::vector<double>& theta,
                            const std::vector<double>& I);
// Inverse chart: (theta, I) from the tangential cosine coefficients.
std::pair<std::vector<double>, std::vector<double>> action_angle_read(
    const WavePair& u, const FrequencySet& fs, const std::vector<double>& xi);

// Mask to the normal sites: zeroes x-modes with j = 0 or |j| in S_plus.
TorusField project_normal(const TorusField& u, const std::vector<int>& S_plus);
LinearOperator normal_projector(const Truncation& tr, const std::vector<int>& S_plus);

// Parametrization of an approximately invariant torus,
//   theta(phi) = phi + Theta(phi),   I(phi),   z(phi) = (z_eta, z_psi),
// with Theta, I phi-only fields and z supported on the normal sites.
// Reversible data has Theta odd, I even, z_eta even, z_psi odd in phi.
struct TorusEmbedding {
  std::vector<TorusField> Theta;  // one phi-only field per tangential site
  std::vector<TorusField> I;
  TorusField z_eta, z_psi;

  static TorusEmbedding trivial(const Truncation& tr);
  // Max deviation from the reversible parities above (0 for admissible data).
  double reversibility_defect() const;
};

// Evaluate the embedded torus as a surface state over the angle grid:
//   eta(phi, .) = sum_k sqrt(2/pi) Lambda^{1/2} sqrt(xi_k + I_k(phi))
//                   cos(phi_k + Theta_k(phi)) cos(j_k x)  +  z_eta(phi, .)
// and likewise psi with Lambda^{-1/2} sin.  Throws std::domain_error when
// xi_k + I_k(phi) <= 0 at a grid node, std::invalid_argument on malformed
// data (x-dependent Theta or I, tangentially supported z, size mismatch).
WavePair embed_torus(const TorusEmbedding& emb, const FrequencySet& fs,
                     const std::vector<double>& xi);

// Linearization of the water-wave flow at the state epsilon * u:
//   L = omega . d_phi Id + [[ d_x V + G B,                      -G       ],
//                           [ 1 + B V_x + B G B - kappa d_x c d_x,
//                                                          V d_x - B G  ]]
// with G the surface operator at epsilon * eta, B and V the surface velocity
// traces there, and c = (1 + eta_x^2)^{-3/2}.
struct LinearizedWW {
  Eigen::VectorXd omega;     // transport frequencies
  RealBlockOperator blocks;  // everything except the transport term
  TorusField B, V, c;        // coefficient fields at the linearization state
  DNOperator dn;             // surface operator at the linearization state

  WavePair apply(const WavePair& u) const;  // transport + blocks
};

LinearizedWW assemble_linearized(const WavePair& u, double kappa,
                                 const Eigen::VectorXd& omega,
                                 double epsilon = 1e-2, double tol = 1e-11);

}  // namespace toruskam
