#pragma once
// Shared types: bases, operator/state containers, circuit parameter sets, errors.
// Unit convention throughout: energies in h*GHz, times in ns, hbar = 1/(2*pi).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fluxsim {

inline constexpr double kHbar = 0.15915494309189535;  // 1/(2*pi)
inline constexpr double kPi = 3.14159265358979323846;

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// ---------------------------------------------------------------- errors

struct FluxsimError : std::runtime_error {
    explicit FluxsimError(const std::string& msg) : std::runtime_error(msg) {}
};
struct BasisError : FluxsimError {
    using FluxsimError::FluxsimError;
};
struct TruncationError : FluxsimError {
    int suggested_dim;
    TruncationError(const std::string& msg, int suggested)
        : FluxsimError(msg + " (suggested dim >= " + std::to_string(suggested) + ")"),
          suggested_dim(suggested) {}
};
struct ProtocolError : FluxsimError {
    using FluxsimError::FluxsimError;
};
struct FitError : FluxsimError {
    using FluxsimError::FluxsimError;
};

// ---------------------------------------------------------------- bases

struct FockBasis {
    int dim;
};
struct FluxGridBasis {
    double phi_min, phi_max;
    int n_points;
};
struct RotorBasis {
    int n_max;  // charge labels -n_max..n_max, dim = 2 n_max + 1
};

using BasisSpec = std::variant<FockBasis, FluxGridBasis, RotorBasis>;

void validate_basis(const BasisSpec& b);
int basis_dim(const BasisSpec& b);

inline BasisSpec fock(int dim) { return FockBasis{dim}; }
inline BasisSpec flux_grid(double phi_max, int n_points) {
    return FluxGridBasis{-phi_max, phi_max, n_points};
}
inline BasisSpec rotor(int n_max) { return RotorBasis{n_max}; }

// grid points of a FluxGrid basis
Eigen::VectorXd grid_points(const FluxGridBasis& g);

// ---------------------------------------------------------------- matrices / states

struct OperatorMatrix {
    Matrix mat;
    bool is_hermitian = false;

    int dim() const { return static_cast<int>(mat.rows()); }
    // verify the hermiticity flag on demand
    bool hermitian_ok(double tol = 1e-12) const {
        double scale = mat.cwiseAbs().maxCoeff();
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(scale, 1.0);
    }
};

struct StateVector {
    Vector amps;
    BasisSpec basis;

    int dim() const { return static_cast<int>(amps.size()); }
    void normalize() { amps /= amps.norm(); }
};

struct SqueezedAnsatz {
    double alpha = 0.0;  // displacement
    double theta = 0.0;  // squeezing
    double alpha_prime() const { return alpha * std::exp(theta); }
};

// free harmonic rotation takes (alpha, theta) complex; kept separate from the
// real-parameter ansatz used everywhere else
struct SqueezedAnsatzC {
    cd alpha;
    cd theta;
};

// ---------------------------------------------------------------- circuit parameters

struct CircuitParams {
    double E_c, E_l, E_j;     // h*GHz
    double phi_e = kPi;       // external flux, sweet spot = pi

    double phi0() const { return std::pow(2.0 * E_c / E_l, 0.25); }
    double hbar_omega() const { return std::sqrt(8.0 * E_l * E_c); }
    double omega() const { return hbar_omega() / kHbar; }  // rad/ns
    double delta_phi_e() const { return phi_e - kPi; }     // deviation from sweet spot
    void validate() const {
        if (!(E_c > 0.0) || !(E_l > 0.0) || !(E_j > 0.0))
            throw FluxsimError("CircuitParams: E_c, E_l, E_j must be > 0");
    }
};

struct Cos2ThetaParams {
    double E_j2;        // h*GHz, cos(2theta) junction
    double E_j1 = 0.0;  // ordinary junction (0 at sweet spot)
    double E_c;
    double phi_e = 0.0;
    double n_e = 0.0;
    void validate() const {
        if (!(E_j2 > 0.0) || E_j1 < 0.0 || !(E_c > 0.0))
            throw FluxsimError("Cos2ThetaParams: need E_j2 > 0, E_j1 >= 0, E_c > 0");
    }
};

struct QpsPairParams {
    double E_c_node;  // (2e)^2 / 2C
    double E_q;       // phase-slip energy
    double E_j;       // cos(2theta) Josephson energy per qubit
    void validate() const {
        if (!(E_c_node > 0.0) || !(E_q >= 0.0) || !(E_j > 0.0))
            throw FluxsimError("QpsPairParams: energies must be positive");
    }
};

}  // namespace fluxsim
