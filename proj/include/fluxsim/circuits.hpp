#pragma once
// Circuit Hamiltonians (fluxonium in Fock and flux-grid bases, cos(2theta) qubit,
// QPS-coupled pair) and their diagonalization.

#include "fluxsim/types.hpp"

namespace fluxsim {

struct EigenSystem {
    Eigen::VectorXd energies;  // ascending, h*GHz
    Matrix states;             // orthonormal columns
    BasisSpec basis;
    int k = 0;                 // number retained
};

// H = hbar*omega a^dag a + E_j cos(phi0(a+a^dag)) at the sweet spot; away from it
// the linear flux term -E_l dphi_e * phi (+ const) is added.
OperatorMatrix fluxonium_fock(const CircuitParams& params, const BasisSpec& basis);

// H = 4E_c n^2 + E_l (phi - dphi_e)^2/2 + E_j cos(phi) on a uniform grid,
// second-order central differences with Dirichlet boundaries.
OperatorMatrix fluxonium_flux(const CircuitParams& params, const BasisSpec& basis);

// H = -E_j2 cos(2theta) - E_j1 cos(theta - phi_e) + 4E_c (n - n_e)^2
OperatorMatrix cos2theta_hamiltonian(const Cos2ThetaParams& params, const BasisSpec& basis);

// k lowest eigenpairs of a hermitian matrix; phase fixed so the largest-|entry|
// component of each eigenvector is real positive
EigenSystem eigensystem(const OperatorMatrix& H, int k);

// epsilon_{0j} at the sweet spot (flux-grid diagonalization)
double splitting(const CircuitParams& params, const BasisSpec& basis, int j);

// solve -Q_sum/2 = x + ratio*sin(2 pi x); returns the branch continuous through
// Q_sum = 0 (Kepler's equation)
double kepler_solve(double q_sum, double ratio);

// two-rotor QPS pair: E_cn[(n1^2+n3^2)/2 - 2 n1 n3] - E_q (-1)^{n1+n3}
//                     - E_j [cos 2phi_1 + cos 2phi_3]
OperatorMatrix qps_pair_hamiltonian(const QpsPairParams& params, const RotorBasis& per_rotor);

// XX coupling of the four lowest levels, capacitive baseline (E_q = 0) subtracted
double qps_xx_coupling(const QpsPairParams& params, int n_max);

}  // namespace fluxsim
