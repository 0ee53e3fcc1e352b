#include "fluxsim/circuits.hpp"

#include <iostream>

#include "fluxsim/operators.hpp"

namespace fluxsim {

OperatorMatrix fluxonium_fock(const CircuitParams& params, const BasisSpec& basis) {
    params.validate();
    if (!std::holds_alternative<FockBasis>(basis))
        throw BasisError("fluxonium_fock: Fock basis required");
    int d = basis_dim(basis);
    Matrix a = annihilation(basis).mat;
    Matrix phi = params.phi0() * (a + a.adjoint());
    // cos(phi) by functional calculus on the hermitian quadrature
    Eigen::SelfAdjointEigenSolver<Matrix> es(phi);
    Matrix cphi = es.eigenvectors() *
                  es.eigenvalues().array().cos().matrix().cast<cd>().asDiagonal() *
                  es.eigenvectors().adjoint();
    Matrix H = params.hbar_omega() * (a.adjoint() * a) + params.E_j * cphi;
    double dphi = params.delta_phi_e();
    if (dphi != 0.0)
        H += -params.E_l * dphi * phi + 0.5 * params.E_l * dphi * dphi * Matrix::Identity(d, d);
    // truncation check: ground-state weight on the top 10% of levels
    Eigen::SelfAdjointEigenSolver<Matrix> esH(H);
    int tail = std::max(1, d / 10);
    double w = esH.eigenvectors().col(0).tail(tail).squaredNorm();
    if (w > 1e-8)
        std::cerr << "fluxonium_fock: truncation warning, ground-state tail weight " << w << "\n";
    return {H, true};
}

OperatorMatrix fluxonium_flux(const CircuitParams& params, const BasisSpec& basis) {
    params.validate();
    const auto* g = std::get_if<FluxGridBasis>(&basis);
    if (!g) throw BasisError("fluxonium_flux: FluxGrid basis required");
    validate_basis(basis);
    if (g->phi_max < 2.0 * kPi - 1e-12)
        throw BasisError("fluxonium_flux: grid must cover at least [-2pi, 2pi]");
    Eigen::VectorXd phi = grid_points(*g);
    int N = g->n_points;
    double h = phi(1) - phi(0);
    double dphi = params.delta_phi_e();
    Matrix H = Matrix::Zero(N, N);
    double kin = 4.0 * params.E_c / (h * h);
    for (int i = 0; i < N; ++i) {
        double v = 0.5 * params.E_l * (phi(i) - dphi) * (phi(i) - dphi) +
                   params.E_j * std::cos(phi(i));
        H(i, i) = 2.0 * kin + v;
        if (i + 1 < N) {
            H(i, i + 1) = -kin;
            H(i + 1, i) = -kin;
        }
    }
    return {H, true};
}

OperatorMatrix cos2theta_hamiltonian(const Cos2ThetaParams& params, const BasisSpec& basis) {
    params.validate();
    if (!std::holds_alternative<RotorBasis>(basis))
        throw BasisError("cos2theta_hamiltonian: Rotor basis required");
    int d = basis_dim(basis);
    auto ops = rotor_trig_ops(basis);
    Matrix nshift = ops.n_op.mat - params.n_e * Matrix::Identity(d, d);
    Matrix H = -params.E_j2 * ops.cos_2theta.mat -
               params.E_j1 * (std::cos(params.phi_e) * ops.cos_theta.mat +
                              std::sin(params.phi_e) * ops.sin_theta.mat) +
               4.0 * params.E_c * nshift * nshift;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    double edge = std::norm(es.eigenvectors()(0, 0)) + std::norm(es.eigenvectors()(d - 1, 0));
    if (edge > 1e-8)
        std::cerr << "cos2theta_hamiltonian: charge-cutoff warning, edge weight " << edge << "\n";
    return {H, true};
}

EigenSystem eigensystem(const OperatorMatrix& H, int k) {
    if (!H.hermitian_ok(1e-10)) throw FluxsimError("eigensystem: hermitian input required");
    if (k < 1 || k > H.dim()) throw FluxsimError("eigensystem: bad k");
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
    EigenSystem out;
    out.energies = es.eigenvalues().head(k);
    out.states = es.eigenvectors().leftCols(k);
    out.k = k;
    out.basis = FockBasis{H.dim()};  // overwritten by callers that know better
    for (int j = 0; j < k; ++j) {
        int imax;
        out.states.col(j).cwiseAbs().maxCoeff(&imax);
        cd z = out.states(imax, j);
        out.states.col(j) *= std::abs(z) / z;
    }
    return out;
}

double splitting(const CircuitParams& params, const BasisSpec& basis, int j) {
    auto eig = eigensystem(fluxonium_flux(params, basis), j + 1);
    return eig.energies(j) - eig.energies(0);
}

double kepler_solve(double q_sum, double ratio) {
    if (ratio < 0.0) throw FluxsimError("kepler_solve: ratio must be >= 0");
    const double c_final = -0.5 * q_sum;
    int steps = (2.0 * kPi * ratio < 0.9) ? 1 : 64;  // continuation keeps the branch through 0
    double x = 0.0;
    for (int s = 1; s <= steps; ++s) {
        double c = c_final * double(s) / steps;
        auto f = [&](double y) { return y + ratio * std::sin(2.0 * kPi * y) - c; };
        bool ok = false;
        for (int it = 0; it < 200; ++it) {
            double fx = f(x);
            if (std::abs(fx) <= 1e-13) {
                ok = true;
                break;
            }
            double fp = 1.0 + 2.0 * kPi * ratio * std::cos(2.0 * kPi * x);
            if (std::abs(fp) < 1e-10) break;
            x -= fx / fp;
        }
        if (!ok && std::abs(f(x)) > 1e-13) {
            // bisection fallback on the guaranteed bracket |x - c| <= ratio
            double lo = c - ratio - 1e-9, hi = c + ratio + 1e-9;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if (f(lo) * f(mid) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            x = 0.5 * (lo + hi);
        }
    }
    return x;
}

OperatorMatrix qps_pair_hamiltonian(const QpsPairParams& params, const RotorBasis& per_rotor) {
    params.validate();
    int d = 2 * per_rotor.n_max + 1;
    auto ops = rotor_trig_ops(BasisSpec{per_rotor});
    Eigen::VectorXd n(d);
    for (int i = 0; i < d; ++i) n(i) = double(i - per_rotor.n_max);
    int D = d * d;
    Matrix H = Matrix::Zero(D, D);
    auto idx = [d](int i1, int i3) { return i1 * d + i3; };
    for (int i1 = 0; i1 < d; ++i1)
        for (int i3 = 0; i3 < d; ++i3) {
            double cap = params.E_c_node * (0.5 * (n(i1) * n(i1) + n(i3) * n(i3)) -
                                            2.0 * n(i1) * n(i3));
            // -E_q cos(pi(n1+n3)) = -E_q (-1)^{n1+n3}: the half-flux-quantum translation
            double pslip = -params.E_q * ((std::lround(n(i1) + n(i3)) % 2 == 0) ? 1.0 : -1.0);
            H(idx(i1, i3), idx(i1, i3)) = cap + pslip;
        }
    // -E_j (cos 2phi_1 + cos 2phi_3)
    const Matrix& c2 = ops.cos_2theta.mat;
    for (int i1 = 0; i1 < d; ++i1)
        for (int j1 = 0; j1 < d; ++j1) {
            if (c2(i1, j1) == cd(0, 0)) continue;
            for (int i3 = 0; i3 < d; ++i3) H(idx(i1, i3), idx(j1, i3)) += -params.E_j * c2(i1, j1);
        }
    for (int i3 = 0; i3 < d; ++i3)
        for (int j3 = 0; j3 < d; ++j3) {
            if (c2(i3, j3) == cd(0, 0)) continue;
            for (int i1 = 0; i1 < d; ++i1) H(idx(i1, i3), idx(i1, j3)) += -params.E_j * c2(i3, j3);
        }
    return {H, true};
}

namespace {
// sector-resolved mean of the two lowest levels: sector = sign of total
// Cooper-pair parity (-1)^{n1+n3}
std::pair<double, double> sector_means(const QpsPairParams& p, int n_max) {
    int d = 2 * n_max + 1, D = d * d;
    auto H = qps_pair_hamiltonian(p, RotorBasis{n_max});
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
    Eigen::VectorXd pdiag(D);
    for (int i1 = 0; i1 < d; ++i1)
        for (int i3 = 0; i3 < d; ++i3)
            pdiag(i1 * d + i3) = (((i1 - n_max) + (i3 - n_max)) % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> even, odd;
    for (int j = 0; j < D && (even.size() < 2 || odd.size() < 2); ++j) {
        double pexp = (es.eigenvectors().col(j).cwiseAbs2().array() * pdiag.array()).sum();
        if (pexp > 0.5 && even.size() < 2) even.push_back(es.eigenvalues()(j));
        if (pexp < -0.5 && odd.size() < 2) odd.push_back(es.eigenvalues()(j));
    }
    if (even.size() < 2 || odd.size() < 2)
        throw FluxsimError("qps_xx_coupling: parity sectors not resolved");
    return {0.5 * (even[0] + even[1]), 0.5 * (odd[0] + odd[1])};
}
}  // namespace

double qps_xx_coupling(const QpsPairParams& params, int n_max) {
    auto [ev, od] = sector_means(params, n_max);
    QpsPairParams base = params;
    base.E_q = 0.0;
    auto [ev0, od0] = sector_means(base, n_max);
    return 0.5 * ((od - ev) - (od0 - ev0));
}

}  // namespace fluxsim
