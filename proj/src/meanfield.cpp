#include "fluxsim/meanfield.hpp"

#include <algorithm>
#include <array>

#include "fluxsim/circuits.hpp"
#include "fluxsim/operators.hpp"

namespace fluxsim {

double mean_field_energy(double alpha, double theta, const CircuitParams& params) {
    params.validate();
    double p0 = params.phi0();
    return params.hbar_omega() * (alpha * alpha + std::sinh(theta) * std::sinh(theta)) +
           params.E_j * std::exp(-0.5 * p0 * p0 * std::exp(-2.0 * theta)) *
               std::cos(2.0 * alpha * p0);
}

double phase_boundary(double ec_over_el) {
    if (ec_over_el < 0.0) throw FluxsimError("phase_boundary: ratio must be >= 0");
    return std::exp(0.5 * std::sqrt(2.0 * ec_over_el));
}

double analytic_alpha(const CircuitParams& p) {
    return 0.5 * kPi * std::pow(p.E_l / (2.0 * p.E_c), 0.25) * p.E_j / (p.E_j + p.E_l);
}

double analytic_alpha_full(const CircuitParams& p) {
    double p0 = p.phi0(), hw = p.hbar_omega();
    double ejt = p.E_j * 2.0 * p0 * p0 * std::exp(-0.5 * p0 * p0);
    return kPi / (2.0 * p0) * (1.0 - hw / (hw + ejt));
}

double analytic_theta(const CircuitParams& p) {
    double s = p.E_j + p.E_l;
    double arg = p.E_j / p.E_l - 0.5 * kPi * kPi * p.E_j * p.E_l / (s * s) + 1.0;
    if (arg <= 0.0) throw FluxsimError("analytic_theta: log argument <= 0, outside validity");
    return 0.25 * std::log(arg);
}

double analytic_theta_simple(const CircuitParams& p) { return 0.25 * std::log(p.E_j / p.E_l); }

double alpha_prime(const CircuitParams& p) {
    return 0.5 * kPi * std::pow(p.E_j / (2.0 * p.E_c), 0.25) * p.E_j / (p.E_j + p.E_l);
}

namespace {

using Pt = std::array<double, 2>;  // (alpha, theta), both clamped to >= 0

Pt project(Pt p) { return {std::max(p[0], 0.0), std::max(p[1], 0.0)}; }

// Nelder-Mead on the projected domain followed by a finite-difference Newton polish
Pt minimize(const CircuitParams& params, Pt start, double scale) {
    auto f = [&](const Pt& p) { return mean_field_energy(p[0], p[1], params); };
    std::array<Pt, 3> s = {project(start),
                           project({start[0] + 0.25, start[1]}),
                           project({start[0], start[1] + 0.25})};
    std::array<double, 3> fs = {f(s[0]), f(s[1]), f(s[2])};
    for (int it = 0; it < 600; ++it) {
        // order best..worst
        std::array<int, 3> o = {0, 1, 2};
        std::sort(o.begin(), o.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<Pt, 3> ss = {s[o[0]], s[o[1]], s[o[2]]};
        std::array<double, 3> ff = {fs[o[0]], fs[o[1]], fs[o[2]]};
        s = ss;
        fs = ff;
        double size = std::max(std::hypot(s[1][0] - s[0][0], s[1][1] - s[0][1]),
                               std::hypot(s[2][0] - s[0][0], s[2][1] - s[0][1]));
        if (size < 1e-10 && std::abs(fs[2] - fs[0]) < 1e-13 * std::max(scale, 1.0)) break;
        Pt c = {0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])};
        auto along = [&](double t) {
            return project({c[0] + t * (c[0] - s[2][0]), c[1] + t * (c[1] - s[2][1])});
        };
        Pt xr = along(1.0);
        double fr = f(xr);
        if (fr < fs[0]) {
            Pt xe = along(2.0);
            double fe = f(xe);
            if (fe < fr) {
                s[2] = xe;
                fs[2] = fe;
            } else {
                s[2] = xr;
                fs[2] = fr;
            }
        } else if (fr < fs[1]) {
            s[2] = xr;
            fs[2] = fr;
        } else {
            Pt xc = along(fr < fs[2] ? 0.5 : -0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fs[2])) {
                s[2] = xc;
                fs[2] = fc;
            } else {  // shrink
                for (int i = 1; i < 3; ++i) {
                    s[i] = project({0.5 * (s[i][0] + s[0][0]), 0.5 * (s[i][1] + s[0][1])});
                    fs[i] = f(s[i]);
                }
            }
        }
    }
    Pt x = s[0];
    // Newton polish (2x2 finite-difference Hessian) with projection and backtracking
    const double h = 1e-5;
    for (int it = 0; it < 40; ++it) {
        double f0 = f(x);
        double ga = (f({x[0] + h, x[1]}) - f({std::max(x[0] - h, 0.0), x[1]})) /
                    (h + std::min(x[0], h));
        double gt = (f({x[0], x[1] + h}) - f({x[0], std::max(x[1] - h, 0.0)})) /
                    (h + std::min(x[1], h));
        // drop gradient components pushing into the boundary
        if (x[0] <= 0.0 && ga > 0.0) ga = 0.0;
        if (x[1] <= 0.0 && gt > 0.0) gt = 0.0;
        if (std::hypot(ga, gt) <= 1e-10 * std::max(scale, 1.0)) break;
        double haa = (f({x[0] + h, x[1]}) - 2.0 * f0 + f({std::abs(x[0] - h), x[1]})) / (h * h);
        double htt = (f({x[0], x[1] + h}) - 2.0 * f0 + f({x[0], std::abs(x[1] - h)})) / (h * h);
        double hat = (f({x[0] + h, x[1] + h}) - f({x[0] + h, std::abs(x[1] - h)}) -
                      f({std::abs(x[0] - h), x[1] + h}) +
                      f({std::abs(x[0] - h), std::abs(x[1] - h)})) /
                     (4.0 * h * h);
        double det = haa * htt - hat * hat;
        double da, dt;
        if (det > 1e-14 && haa > 0.0) {
            da = -(htt * ga - hat * gt) / det;
            dt = -(haa * gt - hat * ga) / det;
        } else {
            da = -ga;
            dt = -gt;
        }
        double step = 1.0;
        Pt xn = x;
        for (int bt = 0; bt < 30; ++bt) {
            xn = project({x[0] + step * da, x[1] + step * dt});
            if (f(xn) <= f0) break;
            step *= 0.5;
        }
        if (f(xn) > f0) break;
        x = xn;
    }
    return x;
}

}  // namespace

MeanFieldResult optimize_mean_field(const CircuitParams& params) {
    params.validate();
    double scale = std::max({params.hbar_omega(), params.E_j, params.E_l});
    Pt guess = {0.0, 0.0};
    if (params.E_j > params.E_l)
        guess = {analytic_alpha(params), std::max(analytic_theta_simple(params), 0.0)};
    Pt a = minimize(params, {0.0, 0.0}, scale);
    Pt b = minimize(params, guess, scale);
    double fa = mean_field_energy(a[0], a[1], params);
    double fb = mean_field_energy(b[0], b[1], params);
    Pt best = fa <= fb ? a : b;
    MeanFieldResult r;
    r.alpha_opt = best[0];
    r.theta_opt = best[1];
    r.energy = std::min(fa, fb);
    if (r.energy > mean_field_energy(0.0, 0.0, params) + 1e-12 * scale)
        throw FluxsimError("optimize_mean_field: did not reach the trivial point energy");
    r.symmetry_broken = r.alpha_opt > 1e-3;
    return r;
}

double ground_overlap(const CircuitParams& params, const BasisSpec& basis) {
    // exact sweet-spot ground state vs the symmetric squeezed-state superposition;
    // (alpha, theta) from the finite-E_c alpha and the full theta expression
    CircuitParams p = params;
    p.phi_e = kPi;
    auto eig = eigensystem(fluxonium_fock(p, basis), 1);
    double al = analytic_alpha_full(p);
    double th = p.E_j > p.E_l ? std::max(analytic_theta(p), 0.0) : 0.0;
    Vector plus = squeezed_coherent_state({al, th}, basis).amps;
    Vector minus = squeezed_coherent_state({-al, th}, basis).amps;
    Vector cat = plus + minus;
    cat /= cat.norm();
    return std::norm(eig.states.col(0).dot(cat));
}

FluxStatistics flux_statistics(const CircuitParams& p) {
    p.validate();
    double mean = kPi * p.E_j / (p.E_j + p.E_l);
    return {mean, std::sqrt(2.0 * p.E_c / p.E_j), std::sin(mean)};
}

}  // namespace fluxsim
