#include "fluxsim/operators.hpp"

namespace fluxsim {

namespace {
const FockBasis& require_fock(const BasisSpec& b, const char* who) {
    validate_basis(b);
    if (const auto* f = std::get_if<FockBasis>(&b)) return *f;
    throw BasisError(std::string(who) + ": Fock basis required");
}
}  // namespace

OperatorMatrix annihilation(const BasisSpec& basis) {
    const auto& f = require_fock(basis, "annihilation");
    Matrix a = Matrix::Zero(f.dim, f.dim);
    for (int n = 1; n < f.dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {a, false};
}

Matrix unitary_exp(const Matrix& A) {
    // A anti-hermitian; write A = i G with G hermitian and exponentiate by
    // eigendecomposition of G
    Matrix G = cd(0, -1) * A;
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    Vector ph = (cd(0, 1) * es.eigenvalues().cast<cd>().array()).exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

OperatorMatrix displacement(cd alpha, const BasisSpec& basis) {
    const auto& f = require_fock(basis, "displacement");
    double a2 = std::norm(alpha);
    if (a2 > f.dim / 4.0)
        throw TruncationError("displacement: |alpha|^2 > dim/4", int(std::ceil(4.0 * a2)) + 1);
    Matrix a = annihilation(basis).mat;
    Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return {unitary_exp(gen), false};
}

OperatorMatrix squeeze(cd theta, const BasisSpec& basis) {
    const auto& f = require_fock(basis, "squeeze");
    if (std::exp(2.0 * std::abs(theta)) > f.dim / 8.0)
        throw TruncationError("squeeze: e^{2|theta|} > dim/8",
                              int(std::ceil(8.0 * std::exp(2.0 * std::abs(theta)))) + 1);
    Matrix a = annihilation(basis).mat;
    Matrix gen = 0.5 * (std::conj(theta) * a * a - theta * a.adjoint() * a.adjoint());
    return {unitary_exp(gen), false};
}

StateVector squeezed_coherent_state(cd alpha, cd theta, const BasisSpec& basis) {
    int d = basis_dim(basis);
    Vector vac = Vector::Zero(d);
    vac(0) = 1.0;
    Vector psi = displacement(alpha, basis).mat * (squeeze(theta, basis).mat * vac);
    StateVector out{psi, basis};
    out.normalize();
    return out;
}

StateVector squeezed_coherent_state(const SqueezedAnsatz& ansatz, const BasisSpec& basis) {
    return squeezed_coherent_state(cd(ansatz.alpha, 0), cd(ansatz.theta, 0), basis);
}

std::pair<OperatorMatrix, OperatorMatrix> flux_charge_ops(const CircuitParams& params,
                                                          const BasisSpec& basis) {
    params.validate();
    require_fock(basis, "flux_charge_ops");
    double p0 = params.phi0();
    Matrix a = annihilation(basis).mat;
    Matrix phi = p0 * (a + a.adjoint());
    Matrix n = cd(0, 1) / (2.0 * p0) * (a.adjoint() - a);
    return {{phi, true}, {n, true}};
}

OperatorMatrix parity(const BasisSpec& basis) {
    validate_basis(basis);
    int d = basis_dim(basis);
    Matrix P = Matrix::Zero(d, d);
    if (std::holds_alternative<FockBasis>(basis)) {
        for (int n = 0; n < d; ++n) P(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    } else if (std::holds_alternative<FluxGridBasis>(basis)) {
        for (int i = 0; i < d; ++i) P(i, d - 1 - i) = 1.0;  // phi -> -phi
    } else {
        int n_max = std::get<RotorBasis>(basis).n_max;
        for (int i = 0; i < d; ++i) {
            int n = i - n_max;
            P(i, i) = (((n % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
        }
    }
    return {P, true};
}

RotorTrigOps rotor_trig_ops(const BasisSpec& basis) {
    validate_basis(basis);
    if (!std::holds_alternative<RotorBasis>(basis))
        throw BasisError("rotor_trig_ops: Rotor basis required");
    int d = basis_dim(basis);
    int n_max = std::get<RotorBasis>(basis).n_max;
    auto cos_k = [&](int k) {
        // cos k theta = (e^{ik theta} + h.c.)/2, e^{ik theta}|n> = |n+k>, truncated
        Matrix m = Matrix::Zero(d, d);
        for (int i = 0; i + k < d; ++i) {
            m(i + k, i) = 0.5;
            m(i, i + k) = 0.5;
        }
        return m;
    };
    auto sin_k = [&](int k) {
        Matrix m = Matrix::Zero(d, d);
        for (int i = 0; i + k < d; ++i) {
            m(i + k, i) = cd(0, -0.5);
            m(i, i + k) = cd(0, 0.5);
        }
        return m;
    };
    Matrix n = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) n(i, i) = double(i - n_max);
    return {{cos_k(1), true}, {cos_k(2), true}, {sin_k(1), true}, {n, true}};
}

OperatorMatrix well_projector(const BasisSpec& basis, double lo, double hi) {
    validate_basis(basis);
    if (!(hi > lo)) throw FluxsimError("well_projector: empty region");
    if (const auto* g = std::get_if<FluxGridBasis>(&basis)) {
        Eigen::VectorXd phi = grid_points(*g);
        Matrix P = Matrix::Zero(g->n_points, g->n_points);
        for (int i = 0; i < g->n_points; ++i)
            if (phi(i) >= lo && phi(i) <= hi) P(i, i) = 1.0;
        return {P, true};
    }
    if (const auto* r = std::get_if<RotorBasis>(&basis)) {
        int d = 2 * r->n_max + 1;
        Matrix P(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                int k = (i - r->n_max) - (j - r->n_max);
                if (k == 0)
                    P(i, j) = (hi - lo) / (2.0 * kPi);
                else
                    P(i, j) = (std::exp(cd(0, k * hi)) - std::exp(cd(0, k * lo))) /
                              (cd(0, 2.0 * kPi) * double(k));
            }
        }
        return {P, true};
    }
    throw BasisError("well_projector: FluxGrid or Rotor basis required");
}

}  // namespace fluxsim
