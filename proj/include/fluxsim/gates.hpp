#pragma once
// Diabatic X gate on tunable-E_j fluxonium: piecewise-constant propagation of an
// E_j(t) quench schedule, well-miss error, codeword-separation tracking.

#include "fluxsim/types.hpp"

namespace fluxsim {

enum class RampShape { linear, cosine };

struct GateSchedule {
    double E_j_max, E_j_min;  // h*GHz
    double t_rise = 0.05;     // ns
    double hold = -1.0;       // ns; < 0 means pi/omega
    RampShape ramp = RampShape::linear;
    bool calibrate_hold = true;  // minimize well-miss error over hold in [0.7, 1.1] pi/omega
    void validate() const {
        if (E_j_min > E_j_max || t_rise < 0.0)
            throw FluxsimError("GateSchedule: need E_j_min <= E_j_max and t_rise >= 0");
    }
};

struct GateResult {
    StateVector final_state;
    double error = 0.0;            // 1 - <psi_f| Pi_r |psi_f>
    double target_fidelity = 0.0;  // |<mirror psi_0 | psi_f>|^2, secondary diagnostic
    double gate_time = 0.0;        // ns
    double hold_used = 0.0;        // ns
    double min_separation_ratio = 0.0;  // min_t |<a>_L - <a>_R| / initial
};

// closed-system simulation; start state is the left-well ground-space state
GateResult x_gate_simulate(const CircuitParams& params, const GateSchedule& schedule,
                           const BasisSpec& basis);

// harmonic free evolution: (alpha, theta) -> (alpha e^{-i w t}, theta e^{-2i w t})
SqueezedAnsatzC free_rotation_map(const SqueezedAnsatz& ansatz, double t, double omega);

}  // namespace fluxsim
