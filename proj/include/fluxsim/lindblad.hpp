#pragma once
// Johnson-Nyquist bath, universal Lindblad dissipators in the truncated eigenbasis,
// superoperator construction, evolution and spectrum.

#include "fluxsim/circuits.hpp"
#include "fluxsim/types.hpp"

namespace fluxsim {

enum class NoiseChannel { flux, charge, cos_theta };

struct BathSpec {
    double k_BT = 1.0;                   // h*GHz
    double x = 3.1622776601683794e-3;    // sqrt(1e-5), dimensionless coupling
    NoiseChannel channel = NoiseChannel::flux;
    void validate() const {
        if (!(k_BT > 0.0) || x < 0.0) throw FluxsimError("BathSpec: need k_BT > 0, x >= 0");
    }
};

struct LindbladModel {
    EigenSystem eig;                       // k retained levels, energies relative to E_0
    std::vector<Matrix> dissipators;       // k x k, already in the eigenbasis
};

using DensityMatrix = Matrix;

// S(omega) = hbar*omega/(1 - e^{-beta hbar omega}) with the omega -> 0 limit k_BT;
// takes the energy quantum hbar*omega directly (h*GHz)
double spectral_density(double hbar_omega, double k_BT);

// L_{ji} = x sqrt(S(eps_i - eps_j)) <j|op|i> with op given in the diagonalization basis
Matrix build_dissipator(const OperatorMatrix& op, const EigenSystem& eig, const BathSpec& bath);

// column-stacking vectorization of rho -> (-i[H,rho] + sum_j D[L_j] rho)/hbar
Matrix liouvillian(const LindbladModel& model);

// dense eigendecomposition of a general complex matrix (LAPACK zgeev)
void eig_general(const Matrix& A, Vector& evals, Matrix& evecs);

// cached superoperator eigendecomposition for repeated propagation
struct Propagator {
    Vector evals;
    Matrix evecs;
    Eigen::PartialPivLU<Matrix> lu;
    int k = 0;

    explicit Propagator(const LindbladModel& model);
    DensityMatrix at(const DensityMatrix& rho0, double t) const;
    // |Re| of the slowest nonzero mode
    double lambda1() const;
    // |Re| of the slowest mode actually carrying weight in Tr[obs rho(t)] for
    // the given initial state (metastable modes invisible to the observable
    // are skipped)
    double slow_rate(const DensityMatrix& rho0, const Matrix& obs) const;
    DensityMatrix stationary() const;
};

std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0,
                                  const std::vector<double>& times);

// m eigenvalues sorted by |Re|
std::vector<cd> lindblad_spectrum(const LindbladModel& model, int m);

}  // namespace fluxsim
