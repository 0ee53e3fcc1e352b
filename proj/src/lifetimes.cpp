#include "fluxsim/lifetimes.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>

#include "fluxsim/meanfield.hpp"
#include "fluxsim/operators.hpp"

namespace fluxsim {

namespace {

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> out(n);
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * i / double(n - 1));
    return out;
}

// pick k so that at least min_delocalized eigenstates live in both wells
int choose_k(const Eigen::VectorXd& pr_diag, const LifetimeProtocolConfig& cfg) {
    if (cfg.k_levels > 0) return cfg.k_levels;
    int n_deloc = 0;
    for (int i = 0; i < pr_diag.size(); ++i) {
        if (pr_diag(i) > 0.05 && pr_diag(i) < 0.95) ++n_deloc;
        if (n_deloc >= cfg.min_delocalized && i + 1 >= cfg.k_min) return i + 1;
    }
    return cfg.k_max;
}

struct AssembledSystem {
    LindbladModel model;
    Matrix Pw;   // well projector, eigenbasis
    Matrix Par;  // parity, eigenbasis
};

AssembledSystem assemble(const OperatorMatrix& H, const Matrix& well, const Matrix& par,
                         const std::vector<Matrix>& coupling_ops, const BasisSpec& basis,
                         const BathSpec& bath, const LifetimeProtocolConfig& cfg) {
    int kmax = std::min(cfg.k_max, H.dim());
    EigenSystem full = eigensystem(H, kmax);
    full.basis = basis;
    Eigen::VectorXd pr(kmax);
    for (int i = 0; i < kmax; ++i)
        pr(i) = (full.states.col(i).adjoint() * well * full.states.col(i))(0).real();
    int k = std::min(choose_k(pr, cfg), kmax);
    EigenSystem eig = full;
    eig.k = k;
    eig.energies = full.energies.head(k).eval();
    eig.states = full.states.leftCols(k).eval();
    AssembledSystem out;
    out.model.eig = eig;
    for (const Matrix& op : coupling_ops)
        out.model.dissipators.push_back(build_dissipator({op, true}, eig, bath));
    out.Pw = eig.states.adjoint() * well * eig.states;
    out.Par = eig.states.adjoint() * par * eig.states;
    return out;
}

}  // namespace

LindbladModel fluxonium_model(const CircuitParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& cfg, Matrix* well_proj,
                              Matrix* parity_op) {
    BasisSpec basis = flux_grid(cfg.phi_max, cfg.n_points);
    const auto& g = std::get<FluxGridBasis>(basis);
    OperatorMatrix H = fluxonium_flux(params, basis);
    Eigen::VectorXd phi = grid_points(g);
    int N = g.n_points;
    double h = phi(1) - phi(0);
    Matrix phiop = phi.cast<cd>().asDiagonal();
    Matrix nop = Matrix::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) {
        nop(i, i + 1) = cd(0, -1.0) / (2.0 * h);
        nop(i + 1, i) = cd(0, 1.0) / (2.0 * h);
    }
    Matrix well = well_projector(basis, 0.0, g.phi_max).mat;  // right well: phi > 0
    well.diagonal()[ (N - 1) / 2 ] = 0.5;                     // split the phi = 0 point
    Matrix par = parity(basis).mat;
    auto sys = assemble(H, well, par, {phiop, nop}, basis, bath, cfg);
    if (well_proj) *well_proj = sys.Pw;
    if (parity_op) *parity_op = sys.Par;
    return sys.model;
}

LindbladModel cos2theta_model(const Cos2ThetaParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& cfg, Matrix* well_proj,
                              Matrix* parity_op) {
    BasisSpec basis = rotor(cfg.n_max);
    OperatorMatrix H = cos2theta_hamiltonian(params, basis);
    auto ops = rotor_trig_ops(basis);
    Matrix well = well_projector(basis, 0.5 * kPi, 1.5 * kPi).mat;  // around theta = pi
    Matrix par = parity(basis).mat;
    auto sys = assemble(H, well, par, {ops.cos_theta.mat, ops.n_op.mat}, basis, bath, cfg);
    if (well_proj) *well_proj = sys.Pw;
    if (parity_op) *parity_op = sys.Par;
    return sys.model;
}

DecayFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                         bool complement) {
    if (t.size() != y.size()) throw FitError("fit_exponential: size mismatch");
    if (t.size() < 8) throw FitError("fit_exponential: need >= 8 points");
    std::vector<double> tt, ly;
    for (size_t i = 0; i < t.size(); ++i) {
        double v = complement ? 1.0 - 2.0 * y[i] : y[i];
        if (v > 0.0) {
            tt.push_back(t[i]);
            ly.push_back(std::log(v));
        }
    }
    if (tt.size() < 2) throw FitError("fit_exponential: no positive transformed values");
    double n = double(tt.size());
    double mt = std::accumulate(tt.begin(), tt.end(), 0.0) / n;
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < tt.size(); ++i) {
        sxx += (tt[i] - mt) * (tt[i] - mt);
        sxy += (tt[i] - mt) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    double slope = sxy / sxx;
    DecayFit fit;
    fit.n_points = int(tt.size());
    if (syy < 1e-20 || slope > -1e-300) {  // constant or non-decaying trace: censored
        fit.T = std::numeric_limits<double>::infinity();
        fit.amplitude = std::exp(my);
        fit.r_squared = 0.0;
        return fit;
    }
    double ssr = 0;
    for (size_t i = 0; i < tt.size(); ++i) {
        double pred = my + slope * (tt[i] - mt);
        ssr += (ly[i] - pred) * (ly[i] - pred);
    }
    fit.T = -1.0 / slope;
    fit.amplitude = std::exp(my - slope * mt);
    fit.r_squared = 1.0 - ssr / syy;
    return fit;
}

namespace {

DecayFit censored(double amplitude) {
    return {std::numeric_limits<double>::infinity(), amplitude, 0.0, 0};
}

// shared trace-and-fit machinery given an assembled model
ProtocolResult run_bitflip(const LindbladModel& model_in, const Matrix& Pw_in,
                           const BathSpec& bath, const LifetimeProtocolConfig& cfg,
                           const std::function<LindbladModel(int, Matrix*)>& rebuild) {
    LindbladModel model = model_in;
    Matrix Pw = Pw_in;
    int k = model.eig.k;
    // initial state: lowest eigenstate localized opposite the target well
    int i0 = -1;
    bool flip = false;
    for (int i = 0; i < k; ++i)
        if (Pw(i, i).real() < 0.05) {
            i0 = i;
            break;
        }
    if (i0 < 0) {  // wells oriented the other way round
        for (int i = 0; i < k; ++i)
            if (Pw(i, i).real() > 0.95) {
                i0 = i;
                flip = true;
                break;
            }
    }
    if (i0 < 0) throw ProtocolError("bitflip_time: initial state not localized in one well");
    ProtocolResult res;
    res.k = k;
    if (bath.x == 0.0) {  // closed system: no tunneling off resonance
        res.fit = censored(1.0);
        return res;
    }
    auto prop = std::make_unique<Propagator>(model);
    if (cfg.verify_convergence && rebuild) {
        while (k + 4 <= cfg.k_max) {
            Matrix Pw2;
            LindbladModel m2 = rebuild(k + 4, &Pw2);
            if (m2.eig.k != k + 4) break;
            auto p2 = std::make_unique<Propagator>(m2);
            double l1 = prop->lambda1(), l2 = p2->lambda1();
            bool done = std::abs(l1 - l2) <= 0.2 * std::max(l2, 1e-300);
            k = m2.eig.k;
            model = std::move(m2);
            Pw = Pw2;
            prop = std::move(p2);
            if (done) break;
        }
        res.k = k;
    }
    Matrix tgt = flip ? (Matrix::Identity(k, k) - Pw).eval() : Pw;
    DensityMatrix rho0 = DensityMatrix::Zero(k, k);
    rho0(i0, i0) = 1.0;
    res.p0 = tgt(i0, i0).real();
    double lam = prop->slow_rate(rho0, tgt);
    res.lambda1 = lam;
    if (lam <= 0.0) {
        res.fit = censored(1.0);
        return res;
    }
    double yinf = 1.0 - 2.0 * (prop->stationary() * tgt).trace().real();
    auto q = [&](double t) { return (prop->at(rho0, t) * tgt).trace().real(); };
    // bracket the decay, then refit on one decade below the bracket end
    auto scan = geomspace(1e-4 / lam, 10.0 / lam, 80);
    double T2 = 1.0 / lam;
    for (double t : scan)
        if (1.0 - 2.0 * q(t) - yinf > 0.05) T2 = t;
    auto ts = geomspace(T2 / 30.0, T2, 20);
    std::vector<double> tt, yy;
    for (double t : ts) {
        double y = 1.0 - 2.0 * q(t) - yinf;
        if (y > 1e-4) {
            tt.push_back(t);
            yy.push_back(y);
        }
    }
    res.fit = fit_exponential(tt, yy, false);
    if (res.fit.r_squared < 0.98)
        throw FitError("bitflip_time: fit r^2 = " + std::to_string(res.fit.r_squared));
    return res;
}

ProtocolResult run_phaseflip(const LindbladModel& model, const Matrix& Par,
                             const BathSpec& bath) {
    int k = model.eig.k;
    ProtocolResult res;
    res.k = k;
    DensityMatrix rho0 = DensityMatrix::Zero(k, k);
    rho0(0, 0) = 1.0;  // even-parity ground state
    res.p0 = Par(0, 0).real();
    if (bath.x == 0.0) {  // parity conserved in the closed system
        res.fit = censored(res.p0);
        return res;
    }
    Propagator prop(model);
    res.lambda1 = prop.slow_rate(rho0, Par);
    auto p = [&](double t) { return (prop.at(rho0, t) * Par).trace().real() / res.p0; };
    auto scan = geomspace(1.0, 1e8, 90);
    double T0 = -1.0;
    for (double t : scan)
        if (p(t) > std::exp(-3.0)) T0 = t;
    if (T0 < 0.0) T0 = 1.0;
    auto ts = geomspace(T0 / 30.0, T0, 20);
    std::vector<double> tt, pp;
    for (double t : ts) {
        double v = p(t);
        if (v > 1e-4) {
            tt.push_back(t);
            pp.push_back(v);
        }
    }
    res.fit = fit_exponential(tt, pp, false);
    if (std::isfinite(res.fit.T) && res.fit.r_squared < 0.98)
        throw FitError("phaseflip_time: fit r^2 = " + std::to_string(res.fit.r_squared));
    return res;
}

}  // namespace

ProtocolResult bitflip_time(const CircuitParams& params, const BathSpec& bath,
                            const LifetimeProtocolConfig& cfg) {
    if (cfg.delta_phi_e == 0.0)
        throw ProtocolError("bitflip_time: symmetric double well (delta_phi_e = 0) rejected");
    CircuitParams p = params;
    p.phi_e = kPi + cfg.delta_phi_e;
    Matrix Pw;
    LindbladModel model = fluxonium_model(p, bath, cfg, &Pw, nullptr);
    auto rebuild = [&](int k, Matrix* pw) {
        LifetimeProtocolConfig c2 = cfg;
        c2.k_levels = k;
        return fluxonium_model(p, bath, c2, pw, nullptr);
    };
    return run_bitflip(model, Pw, bath, cfg, rebuild);
}

ProtocolResult phaseflip_time(const CircuitParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& cfg) {
    CircuitParams p = params;
    p.phi_e = kPi;  // sweet spot
    Matrix Par;
    LindbladModel model = fluxonium_model(p, bath, cfg, nullptr, &Par);
    return run_phaseflip(model, Par, bath);
}

ProtocolResult bitflip_time(const Cos2ThetaParams& params, const BathSpec& bath,
                            const LifetimeProtocolConfig& cfg) {
    Cos2ThetaParams p = params;
    if (p.E_j1 == 0.0) p.E_j1 = cfg.ej1_frac * p.E_j2;  // tilt the wells off sweet spot
    Matrix Pw;
    LindbladModel model = cos2theta_model(p, bath, cfg, &Pw, nullptr);
    auto rebuild = [&](int k, Matrix* pw) {
        LifetimeProtocolConfig c2 = cfg;
        c2.k_levels = k;
        return cos2theta_model(p, bath, c2, pw, nullptr);
    };
    return run_bitflip(model, Pw, bath, cfg, rebuild);
}

ProtocolResult phaseflip_time(const Cos2ThetaParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& cfg) {
    Cos2ThetaParams p = params;
    p.E_j1 = 0.0;
    p.phi_e = 0.0;
    p.n_e = 0.0;
    Matrix Par;
    LindbladModel model = cos2theta_model(p, bath, cfg, nullptr, &Par);
    return run_phaseflip(model, Par, bath);
}

double depsilon01_dphie(const CircuitParams& params, double step, int n_points) {
    auto eps01 = [&](double phie) {
        CircuitParams p = params;
        p.phi_e = phie;
        return splitting(p, flux_grid(4.0 * kPi, n_points), 1);
    };
    auto central = [&](double h) {
        return (eps01(params.phi_e + h) - eps01(params.phi_e - h)) / (2.0 * h);
    };
    double d1 = central(step), d2 = central(0.5 * step);
    if (std::abs(d1 - d2) > 0.01 * std::max(std::abs(d2), 1e-10))
        throw FluxsimError("depsilon01_dphie: derivative not Richardson-converged");
    return (4.0 * d2 - d1) / 3.0;
}

double one_over_f_dephasing(const CircuitParams& params, double A_phi_e, double omega_low,
                            double t_exp) {
    if (A_phi_e == 0.0) return 0.0;
    double d = depsilon01_dphie(params);
    return std::sqrt(2.0) * A_phi_e * std::abs(d) *
           std::sqrt(std::abs(std::log(omega_low * t_exp)));
}

double one_over_f_bitflip_proxy(const CircuitParams& params, double delta_phi_e, int n_points) {
    if (delta_phi_e == 0.0)
        throw ProtocolError("one_over_f_bitflip_proxy: needs nonzero flux offset");
    CircuitParams p = params;
    p.phi_e = kPi + delta_phi_e;
    BasisSpec basis = flux_grid(4.0 * kPi, n_points);
    auto eig = eigensystem(fluxonium_flux(p, basis), 2);
    Eigen::VectorXd phi = grid_points(std::get<FluxGridBasis>(basis));
    cd me = (eig.states.col(0).adjoint() *
             (phi.cast<cd>().asDiagonal() * eig.states.col(1)))(0);
    double eps01 = eig.energies(1) - eig.energies(0);
    return std::norm(me) / eps01;
}

GoldenRuleElements twolevel_golden_rule_elements(const CircuitParams& params) {
    double al = analytic_alpha(params);
    double th = analytic_theta(params);
    double ap = al * std::exp(th);
    double n0 = 1.0 / (2.0 * params.phi0());
    double charge = 4.0 * std::pow(n0 * ap * std::exp(th), 2) * std::exp(-4.0 * ap * ap);
    double s = params.E_j / (params.E_j + params.E_l);
    return {0.0, charge, kPi * kPi * s * s, charge};
}

}  // namespace fluxsim
