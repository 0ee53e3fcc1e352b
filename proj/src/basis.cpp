#include "fluxsim/types.hpp"

namespace fluxsim {

void validate_basis(const BasisSpec& b) {
    if (const auto* f = std::get_if<FockBasis>(&b)) {
        if (f->dim < 2) throw BasisError("Fock dim must be >= 2");
    } else if (const auto* g = std::get_if<FluxGridBasis>(&b)) {
        if (g->n_points < 3 || g->n_points % 2 == 0)
            throw BasisError("FluxGrid n_points must be odd and >= 3");
        if (std::abs(g->phi_min + g->phi_max) > 1e-12 * std::abs(g->phi_max))
            throw BasisError("FluxGrid must be symmetric: phi_min = -phi_max");
    } else if (const auto* r = std::get_if<RotorBasis>(&b)) {
        if (r->n_max < 0) throw BasisError("Rotor n_max must be >= 0");
    }
}

int basis_dim(const BasisSpec& b) {
    validate_basis(b);
    if (const auto* f = std::get_if<FockBasis>(&b)) return f->dim;
    if (const auto* g = std::get_if<FluxGridBasis>(&b)) return g->n_points;
    return 2 * std::get<RotorBasis>(b).n_max + 1;
}

Eigen::VectorXd grid_points(const FluxGridBasis& g) {
    return Eigen::VectorXd::LinSpaced(g.n_points, g.phi_min, g.phi_max);
}

}  // namespace fluxsim
