#include "fluxsim/lindblad.hpp"

#include <algorithm>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace fluxsim {

double spectral_density(double hbar_omega, double k_BT) {
    if (!(k_BT > 0.0)) throw FluxsimError("spectral_density: k_BT must be > 0");
    double x = hbar_omega / k_BT;
    if (std::abs(x) < 1e-6) return k_BT * (1.0 + 0.5 * x);  // L'Hopital limit
    return hbar_omega / (1.0 - std::exp(-x));
}

Matrix build_dissipator(const OperatorMatrix& op, const EigenSystem& eig, const BathSpec& bath) {
    bath.validate();
    if (op.dim() != eig.states.rows())
        throw BasisError("build_dissipator: operator and eigensystem dimension mismatch");
    if (eig.k < 2) throw FluxsimError("build_dissipator: need k >= 2 levels");
    int k = eig.k;
    Matrix opk = eig.states.adjoint() * op.mat * eig.states;  // k x k in the eigenbasis
    Matrix L(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            L(j, i) = bath.x *
                      std::sqrt(spectral_density(eig.energies(i) - eig.energies(j), bath.k_BT)) *
                      opk(j, i);
    return L;
}

Matrix liouvillian(const LindbladModel& model) {
    int k = model.eig.k;
    Matrix I = Matrix::Identity(k, k);
    Matrix Hd = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) Hd(i, i) = model.eig.energies(i) - model.eig.energies(0);
    auto kron = [k](const Matrix& A, const Matrix& B) {
        Matrix K(k * k, k * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) K.block(i * k, j * k, k, k) = A(i, j) * B;
        return K;
    };
    Matrix sup = cd(0, -1) * (kron(I, Hd) - kron(Hd.transpose(), I));
    for (const Matrix& L : model.dissipators) {
        Matrix LdL = L.adjoint() * L;
        sup += kron(L.conjugate(), L) -
               0.5 * (kron(I, LdL) + kron(LdL.transpose(), I));
    }
    return sup / kHbar;
}

void eig_general(const Matrix& A, Vector& evals, Matrix& evecs) {
    lapack_int n = static_cast<lapack_int>(A.rows());
    Matrix work = A;  // zgeev overwrites
    evals.resize(n);
    evecs.resize(n, n);
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, evals.data(),
                                    nullptr, 1, evecs.data(), n);
    if (info != 0) throw FluxsimError("eig_general: zgeev failed, info=" + std::to_string(info));
}

Propagator::Propagator(const LindbladModel& model) : k(model.eig.k) {
    Matrix sup = liouvillian(model);
    eig_general(sup, evals, evecs);
    lu = Eigen::PartialPivLU<Matrix>(evecs);
}

DensityMatrix Propagator::at(const DensityMatrix& rho0, double t) const {
    Vector rv = Eigen::Map<const Vector>(rho0.data(), k * k);
    Vector c = lu.solve(rv);
    Vector out = evecs * (c.array() * (evals.array() * t).exp()).matrix();
    return Eigen::Map<const Matrix>(out.data(), k, k);
}

double Propagator::lambda1() const {
    std::vector<double> re(evals.size());
    for (int i = 0; i < evals.size(); ++i) re[i] = std::abs(evals(i).real());
    std::sort(re.begin(), re.end());
    return re.size() > 1 ? re[1] : 0.0;
}

double Propagator::slow_rate(const DensityMatrix& rho0, const Matrix& obs) const {
    Vector c = lu.solve(Eigen::Map<const Vector>(rho0.data(), k * k));
    // amplitude of each mode in the observable trace
    int i0 = 0;
    for (int i = 1; i < evals.size(); ++i)
        if (std::abs(evals(i).real()) < std::abs(evals(i0).real())) i0 = i;
    std::vector<double> amp(evals.size(), 0.0);
    double amax = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
        if (i == i0) continue;  // stationary background
        Matrix mode = Eigen::Map<const Matrix>(evecs.col(i).data(), k, k);
        amp[i] = std::abs(c(i) * (obs * mode).trace());
        amax = std::max(amax, amp[i]);
    }
    double best = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
        if (i == i0 || amp[i] < 2e-2 * amax) continue;
        double r = std::abs(evals(i).real());
        if (best == 0.0 || r < best) best = r;
    }
    return best;
}

DensityMatrix Propagator::stationary() const {
    int i0 = 0;
    for (int i = 1; i < evals.size(); ++i)
        if (std::abs(evals(i).real()) < std::abs(evals(i0).real())) i0 = i;
    Matrix rho = Eigen::Map<const Matrix>(evecs.col(i0).data(), k, k);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return rho;
}

std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0,
                                  const std::vector<double>& times) {
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw FluxsimError("evolve: times must be ascending and >= 0");
    double tr = std::abs(rho0.trace() - cd(1.0, 0.0));
    if (tr > 1e-8 || (rho0 - rho0.adjoint()).norm() > 1e-10)
        throw FluxsimError("evolve: rho0 must be hermitian with unit trace");
    Propagator prop(model);
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (double t : times) {
        DensityMatrix rho = prop.at(rho0, t);
        if (std::abs(rho.trace() - cd(1.0, 0.0)) > 1e-8)
            throw FluxsimError("evolve: trace drift at t=" + std::to_string(t));
        if ((rho - rho.adjoint()).norm() > 1e-8)
            throw FluxsimError("evolve: hermiticity drift at t=" + std::to_string(t));
        out.push_back(std::move(rho));
    }
    return out;
}

std::vector<cd> lindblad_spectrum(const LindbladModel& model, int m) {
    Propagator prop(model);
    std::vector<cd> ev(prop.evals.data(), prop.evals.data() + prop.evals.size());
    std::sort(ev.begin(), ev.end(),
              [](cd a, cd b) { return std::abs(a.real()) < std::abs(b.real()); });
    if (m < static_cast<int>(ev.size())) ev.resize(m);
    return ev;
}

}  // namespace fluxsim
