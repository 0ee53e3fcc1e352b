#pragma once
// Mean-field treatment of the squeezed-coherent ansatz: energy surface, optimizer,
// analytic alpha/theta/alpha', phase boundary, ground-state overlap, flux statistics.

#include "fluxsim/types.hpp"

namespace fluxsim {

struct MeanFieldResult {
    double alpha_opt = 0.0;
    double theta_opt = 0.0;
    double energy = 0.0;
    bool symmetry_broken = false;  // alpha_opt > 1e-3
};

// E_mf = hbar*omega (alpha^2 + sinh^2 theta) + E_j exp(-phi0^2 e^{-2theta}/2) cos(2 alpha phi0)
double mean_field_energy(double alpha, double theta, const CircuitParams& params);

// local minimum over alpha >= 0, theta >= 0 (anti-squeezed theta < 0 only lowers the
// symmetric branch and is outside the ansatz physics); multi-start from (0,0) and
// the analytic guess
MeanFieldResult optimize_mean_field(const CircuitParams& params);

// symmetry-breaking boundary E_j/E_l = exp(sqrt(2 E_c/E_l)/2)
double phase_boundary(double ec_over_el);

double analytic_alpha(const CircuitParams& params);       // E_c -> 0 limit form
double analytic_alpha_full(const CircuitParams& params);  // finite-E_c form
double analytic_theta(const CircuitParams& params);       // full log expression
double analytic_theta_simple(const CircuitParams& params);  // (1/4) ln(E_j/E_l)
double alpha_prime(const CircuitParams& params);

// |<gnd | psi_sq>|^2 with |psi_sq> ~ |alpha,theta> + |-alpha,theta>, exact ground
// state from Fock diagonalization at the sweet spot
double ground_overlap(const CircuitParams& params, const BasisSpec& basis);

struct FluxStatistics {
    double mean_flux;            // +pi E_j/(E_j+E_l) (the mirror state has -)
    double flux_variance;        // sqrt(2 E_c/E_j)
    double circulating_current;  // I/I_0 = sin(mean_flux)
};
FluxStatistics flux_statistics(const CircuitParams& params);

}  // namespace fluxsim
