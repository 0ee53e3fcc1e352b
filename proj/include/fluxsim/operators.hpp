#pragma once
// Bosonic and rotor operator algebra.

#include "fluxsim/types.hpp"

namespace fluxsim {

// <n-1|a|n> = sqrt(n) on a Fock basis
OperatorMatrix annihilation(const BasisSpec& basis);

// D(alpha) = exp(alpha a^dag - alpha^* a), via hermitian eigendecomposition of
// the generator. Guard: |alpha|^2 <= dim/4.
OperatorMatrix displacement(cd alpha, const BasisSpec& basis);

// S(theta) = exp((theta^* a^2 - theta a^dag^2)/2). Guard: e^{2|theta|} <= dim/8.
OperatorMatrix squeeze(cd theta, const BasisSpec& basis);

// |alpha,theta> = D(alpha) S(theta) |vac>
StateVector squeezed_coherent_state(const SqueezedAnsatz& ansatz, const BasisSpec& basis);
StateVector squeezed_coherent_state(cd alpha, cd theta, const BasisSpec& basis);

// phi = phi0 (a + a^dag), n = i/(2 phi0) (a^dag - a) on a Fock basis
std::pair<OperatorMatrix, OperatorMatrix> flux_charge_ops(const CircuitParams& params,
                                                          const BasisSpec& basis);

// Z2 parity: Fock (-1)^n, FluxGrid reflection phi -> -phi, Rotor (-1)^n over charges
OperatorMatrix parity(const BasisSpec& basis);

struct RotorTrigOps {
    OperatorMatrix cos_theta, cos_2theta, sin_theta, n_op;
};
RotorTrigOps rotor_trig_ops(const BasisSpec& basis);

// projector onto a phi interval (FluxGrid: diagonal indicator) or a theta interval
// (Rotor: Pi_nm = (1/2pi) \int_a^b e^{i(n-m)theta} dtheta in closed form)
OperatorMatrix well_projector(const BasisSpec& basis, double lo, double hi);

// exponential of an anti-hermitian matrix i*G (G hermitian), used by D and S
Matrix unitary_exp(const Matrix& antihermitian);

}  // namespace fluxsim
