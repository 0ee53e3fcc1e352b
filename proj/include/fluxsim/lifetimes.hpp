#pragma once
// Measurement protocols: bit-flip time from tunneling traces, phase-flip time from
// parity traces, exponential fitting, closed-form 1/f estimators and golden-rule
// matrix elements. Protocols run on fluxonium (flux grid) and cos(2theta) (rotor).

#include "fluxsim/lindblad.hpp"
#include "fluxsim/types.hpp"

namespace fluxsim {

struct DecayFit {
    double T = 0.0;         // ns; +inf = censored (no decay observed)
    double amplitude = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

struct LifetimeProtocolConfig {
    double delta_phi_e = 0.03 * kPi;  // fluxonium bit-flip detuning
    double ej1_frac = 0.03;           // cos(2theta) bit-flip: E_j1 = frac * E_j2
    int n_points = 401;               // flux grid
    double phi_max = 4.0 * kPi;
    int n_max = 30;                   // rotor cutoff
    int k_levels = 0;                 // 0 = adaptive (delocalized-state count)
    int min_delocalized = 5;
    int k_min = 8;
    int k_max = 40;
    bool verify_convergence = false;  // re-check lambda_1 at k+4
};

// diagnostics carried alongside the fit
struct ProtocolResult {
    DecayFit fit;
    double lambda1 = 0.0;  // |Re| of slowest nonzero Lindblad mode
    int k = 0;             // levels retained
    double p0 = 0.0;       // initial observable value
};

ProtocolResult bitflip_time(const CircuitParams& params, const BathSpec& bath,
                            const LifetimeProtocolConfig& config);
ProtocolResult phaseflip_time(const CircuitParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& config);
ProtocolResult bitflip_time(const Cos2ThetaParams& params, const BathSpec& bath,
                            const LifetimeProtocolConfig& config);
ProtocolResult phaseflip_time(const Cos2ThetaParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& config);

// least squares of log y against t; y = A e^{-t/T}. complement=true first maps
// y -> 1 - 2y (tunneling traces). Constant traces return the T = +inf sentinel.
DecayFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                         bool complement = false);

// truncated eigenbasis model shared by the protocols (exposed for tests/CLI)
LindbladModel fluxonium_model(const CircuitParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& config, Matrix* well_proj = nullptr,
                              Matrix* parity_op = nullptr);
LindbladModel cos2theta_model(const Cos2ThetaParams& params, const BathSpec& bath,
                              const LifetimeProtocolConfig& config, Matrix* well_proj = nullptr,
                              Matrix* parity_op = nullptr);

// d epsilon_01 / d phi_e by Richardson-checked central differences
double depsilon01_dphie(const CircuitParams& params, double step = 1e-4, int n_points = 801);

// 1/T_{pf,1/f} = sqrt(2) A |d eps01/d phi_e| sqrt(|ln(omega_low t_exp)|)
double one_over_f_dephasing(const CircuitParams& params, double A_phi_e, double omega_low,
                            double t_exp);

// |<0bar|phi|1bar>|^2 / eps01 from the exact spectrum, off sweet spot
double one_over_f_bitflip_proxy(const CircuitParams& params, double delta_phi_e = 0.03 * kPi,
                                int n_points = 801);

struct GoldenRuleElements {
    double flux_codeword;    // 0 by symmetry
    double charge_codeword;  // 4 |n0 alpha' e^theta|^2 exp(-4 alpha'^2)
    double flux_cat;         // pi^2 (E_j/(E_j+E_l))^2
    double charge_cat;       // same exponential form as charge_codeword
};
GoldenRuleElements twolevel_golden_rule_elements(const CircuitParams& params);

}  // namespace fluxsim
