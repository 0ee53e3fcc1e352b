#include "fluxsim/gates.hpp"

#include <functional>

#include "fluxsim/circuits.hpp"
#include "fluxsim/operators.hpp"

namespace fluxsim {

namespace {

struct GateWorkspace {
    std::function<Matrix(double)> hamiltonian;  // H(E_j)
    Matrix proj_right;
    Matrix reflect;  // parity / mirror
    Matrix a_op;     // for phase-space separation tracking
};

GateWorkspace make_workspace(const CircuitParams& params, const BasisSpec& basis) {
    GateWorkspace w;
    if (std::holds_alternative<FockBasis>(basis)) {
        Matrix a = annihilation(basis).mat;
        double p0 = params.phi0();
        Matrix quad = p0 * (a + a.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(quad);
        Matrix cphi = es.eigenvectors() *
                      es.eigenvalues().array().cos().matrix().cast<cd>().asDiagonal() *
                      es.eigenvectors().adjoint();
        // projector onto positive flux by functional calculus on the quadrature
        Eigen::VectorXd ind = (es.eigenvalues().array() > 0.0).cast<double>();
        w.proj_right = es.eigenvectors() * ind.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
        Matrix num = params.hbar_omega() * (a.adjoint() * a);
        w.hamiltonian = [num, cphi](double ej) { return (num + ej * cphi).eval(); };
        w.reflect = parity(basis).mat;
        w.a_op = a;
    } else if (std::holds_alternative<FluxGridBasis>(basis)) {
        const auto& g = std::get<FluxGridBasis>(basis);
        Eigen::VectorXd phi = grid_points(g);
        int N = g.n_points;
        double h = phi(1) - phi(0);
        CircuitParams p = params;
        p.phi_e = kPi;
        w.hamiltonian = [p, basis](double ej) {
            CircuitParams q = p;
            q.E_j = ej;
            return fluxonium_flux(q, basis).mat;
        };
        w.proj_right = well_projector(basis, 0.0, g.phi_max).mat;
        w.proj_right.diagonal()[(N - 1) / 2] = 0.5;
        w.reflect = parity(basis).mat;
        Matrix nop = Matrix::Zero(N, N);
        for (int i = 0; i + 1 < N; ++i) {
            nop(i, i + 1) = cd(0, -1.0) / (2.0 * h);
            nop(i + 1, i) = cd(0, 1.0) / (2.0 * h);
        }
        double p0 = params.phi0();
        w.a_op = ((phi / (2.0 * p0)).cast<cd>().asDiagonal().toDenseMatrix() +
                  cd(0, 1) * p0 * nop)
                     .eval();
    } else {
        throw BasisError("x_gate_simulate: Fock or FluxGrid basis required");
    }
    return w;
}

Matrix step_propagator(const Matrix& H, double dt) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    Vector ph = (cd(0, -1) * es.eigenvalues().cast<cd>().array() * (dt / kHbar)).exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

SqueezedAnsatzC free_rotation_map(const SqueezedAnsatz& ansatz, double t, double omega) {
    return {ansatz.alpha * std::exp(cd(0, -omega * t)),
            ansatz.theta * std::exp(cd(0, -2.0 * omega * t))};
}

GateResult x_gate_simulate(const CircuitParams& params, const GateSchedule& schedule,
                           const BasisSpec& basis) {
    params.validate();
    schedule.validate();
    GateWorkspace w = make_workspace(params, basis);
    double omega = params.omega();  // rad/ns
    double dt_max = (1.0 / omega) / 50.0;

    // ramp propagators, midpoint rule per step
    auto ramp_prop = [&](bool down) {
        int nstep = std::max(1, int(std::ceil(schedule.t_rise / dt_max)));
        double dt = schedule.t_rise / nstep;
        Matrix U = Matrix::Identity(w.proj_right.rows(), w.proj_right.cols());
        for (int s = 0; s < nstep; ++s) {
            double frac = (s + 0.5) / nstep;  // progress through the ramp
            if (!down) frac = 1.0 - frac;
            double shape = schedule.ramp == RampShape::linear
                               ? frac
                               : 0.5 * (1.0 - std::cos(kPi * frac));
            double ej = schedule.E_j_max + (schedule.E_j_min - schedule.E_j_max) * shape;
            U = step_propagator(w.hamiltonian(ej), dt) * U;
        }
        return U;
    };
    Matrix U_down = schedule.t_rise > 0.0
                        ? ramp_prop(true)
                        : Matrix::Identity(w.proj_right.rows(), w.proj_right.cols());
    Matrix U_up = schedule.t_rise > 0.0 ? ramp_prop(false) : U_down;

    // hold propagator via a single eigendecomposition of H(E_j_min)
    Eigen::SelfAdjointEigenSolver<Matrix> hold_es(w.hamiltonian(schedule.E_j_min));
    auto hold_prop = [&](double t) {
        Vector ph = (cd(0, -1) * hold_es.eigenvalues().cast<cd>().array() * (t / kHbar)).exp();
        return (hold_es.eigenvectors() * ph.asDiagonal() * hold_es.eigenvectors().adjoint()).eval();
    };

    // left/right codewords from the ground space of H(E_j_max)
    auto eig = eigensystem({w.hamiltonian(schedule.E_j_max), true}, 2);
    auto pr = [&](const Vector& v) { return (v.adjoint() * w.proj_right * v)(0).real(); };
    Vector sym = ((eig.states.col(0) + eig.states.col(1)) / std::sqrt(2.0)).eval();
    Vector asym = ((eig.states.col(0) - eig.states.col(1)) / std::sqrt(2.0)).eval();
    Vector psiL = pr(sym) < pr(asym) ? sym : asym;
    Vector psiR = pr(sym) < pr(asym) ? asym : sym;

    double hold0 = schedule.hold >= 0.0 ? schedule.hold : kPi / omega;
    Vector psiL1 = U_down * psiL;
    auto miss = [&](double t) {
        Vector f = U_up * (hold_prop(t) * psiL1);
        return 1.0 - pr(f);
    };
    double hold = hold0;
    if (schedule.calibrate_hold) {
        // golden-section search for the hold time that lands in the opposite well
        double lo = 0.7 * kPi / omega, hi = 1.1 * kPi / omega;
        const double gr = 0.6180339887498949;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = miss(c), fd = miss(d);
        for (int it = 0; it < 60; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = miss(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = miss(d);
            }
        }
        hold = 0.5 * (lo + hi);
        if (miss(hold) > miss(hold0)) hold = hold0;  // never worse than the nominal hold
    }

    // final propagation, tracking codeword separation on a modest time mesh
    Vector fL = U_up * (hold_prop(hold) * psiL1);
    Vector fR = U_up * (hold_prop(hold) * (U_down * psiR));
    double sep0 = std::abs((psiL.adjoint() * w.a_op * psiL)(0) -
                           (psiR.adjoint() * w.a_op * psiR)(0));
    double min_sep = sep0;
    {
        int nmesh = 40;
        for (int i = 1; i <= nmesh; ++i) {
            double t = hold * i / nmesh;
            Vector vL = hold_prop(t) * psiL1;
            Vector vR = hold_prop(t) * (U_down * psiR);
            double sep = std::abs((vL.adjoint() * w.a_op * vL)(0) -
                                  (vR.adjoint() * w.a_op * vR)(0));
            min_sep = std::min(min_sep, sep);
        }
    }
    if (std::abs(fL.norm() - 1.0) > 1e-8)
        throw FluxsimError("x_gate_simulate: norm drift " + std::to_string(fL.norm() - 1.0));

    GateResult res;
    res.final_state = {fL, basis};
    res.error = 1.0 - pr(fL);
    Vector target = w.reflect * psiL;  // mirror codeword
    res.target_fidelity = std::norm(target.dot(fL));
    res.hold_used = hold;
    res.gate_time = 2.0 * schedule.t_rise + hold;
    res.min_separation_ratio = sep0 > 0.0 ? min_sep / sep0 : 0.0;
    return res;
}

}  // namespace fluxsim
