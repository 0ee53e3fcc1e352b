// pybind11 bindings for the figure-level operations: spectra, mean field,
// lifetimes, gate, QPS coupling, and the sweep runner.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluxsim/circuits.hpp"
#include "fluxsim/gates.hpp"
#include "fluxsim/lifetimes.hpp"
#include "fluxsim/lindblad.hpp"
#include "fluxsim/meanfield.hpp"
#include "fluxsim/operators.hpp"
#include "fluxsim/sweep.hpp"

namespace py = pybind11;
using namespace fluxsim;

namespace {

BasisSpec make_basis(const std::string& kind, int n, double phi_max) {
    if (kind == "fock") return fock(n);
    if (kind == "flux_grid") return flux_grid(phi_max, n);
    if (kind == "rotor") return rotor(n);
    throw FluxsimError("basis kind must be fock, flux_grid, or rotor");
}

}  // namespace

PYBIND11_MODULE(_fluxsim, m) {
    m.doc() = "fluxonium / protected-qubit simulation core";
    m.attr("HBAR") = kHbar;

    py::register_exception<FluxsimError>(m, "FluxsimError");

    py::class_<CircuitParams>(m, "CircuitParams")
        .def(py::init([](double ec, double el, double ej, double phie) {
                 return CircuitParams{ec, el, ej, phie};
             }),
             py::arg("E_c"), py::arg("E_l"), py::arg("E_j"), py::arg("phi_e") = kPi)
        .def_readwrite("E_c", &CircuitParams::E_c)
        .def_readwrite("E_l", &CircuitParams::E_l)
        .def_readwrite("E_j", &CircuitParams::E_j)
        .def_readwrite("phi_e", &CircuitParams::phi_e)
        .def("phi0", &CircuitParams::phi0)
        .def("hbar_omega", &CircuitParams::hbar_omega);

    py::class_<Cos2ThetaParams>(m, "Cos2ThetaParams")
        .def(py::init([](double ej2, double ej1, double ec) {
                 return Cos2ThetaParams{ej2, ej1, ec};
             }),
             py::arg("E_j2"), py::arg("E_j1") = 0.0, py::arg("E_c") = 0.1)
        .def_readwrite("E_j2", &Cos2ThetaParams::E_j2)
        .def_readwrite("E_j1", &Cos2ThetaParams::E_j1)
        .def_readwrite("E_c", &Cos2ThetaParams::E_c);

    py::class_<MeanFieldResult>(m, "MeanFieldResult")
        .def_readonly("alpha_opt", &MeanFieldResult::alpha_opt)
        .def_readonly("theta_opt", &MeanFieldResult::theta_opt)
        .def_readonly("energy", &MeanFieldResult::energy)
        .def_readonly("symmetry_broken", &MeanFieldResult::symmetry_broken);

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("T", &DecayFit::T)
        .def_readonly("amplitude", &DecayFit::amplitude)
        .def_readonly("r_squared", &DecayFit::r_squared)
        .def_readonly("n_points", &DecayFit::n_points);

    py::class_<ProtocolResult>(m, "ProtocolResult")
        .def_readonly("fit", &ProtocolResult::fit)
        .def_readonly("lambda1", &ProtocolResult::lambda1)
        .def_readonly("k", &ProtocolResult::k)
        .def_readonly("p0", &ProtocolResult::p0);

    py::class_<GateResult>(m, "GateResult")
        .def_readonly("error", &GateResult::error)
        .def_readonly("target_fidelity", &GateResult::target_fidelity)
        .def_readonly("gate_time", &GateResult::gate_time)
        .def_readonly("hold_used", &GateResult::hold_used)
        .def_readonly("min_separation_ratio", &GateResult::min_separation_ratio);

    // spectra
    m.def(
        "spectrum",
        [](const CircuitParams& p, int k, const std::string& basis, int n, double phi_max) {
            BasisSpec b = make_basis(basis, n, phi_max);
            OperatorMatrix H = basis == "fock" ? fluxonium_fock(p, b) : fluxonium_flux(p, b);
            return Eigen::VectorXd(eigensystem(H, k).energies);
        },
        py::arg("params"), py::arg("k") = 4, py::arg("basis") = "flux_grid",
        py::arg("n") = 801, py::arg("phi_max") = 4.0 * kPi);
    m.def(
        "splitting",
        [](const CircuitParams& p, int j, int n_points) {
            return splitting(p, flux_grid(4.0 * kPi, n_points), j);
        },
        py::arg("params"), py::arg("j") = 1, py::arg("n_points") = 801);

    // mean field
    m.def("mean_field_energy", &mean_field_energy, py::arg("alpha"), py::arg("theta"),
          py::arg("params"));
    m.def("optimize_mean_field", &optimize_mean_field, py::arg("params"));
    m.def("phase_boundary", &phase_boundary, py::arg("ec_over_el"));
    m.def("analytic_alpha", &analytic_alpha, py::arg("params"));
    m.def("analytic_theta", &analytic_theta, py::arg("params"));
    m.def("alpha_prime", &alpha_prime, py::arg("params"));
    m.def(
        "ground_overlap",
        [](const CircuitParams& p, int dim) { return ground_overlap(p, fock(dim)); },
        py::arg("params"), py::arg("dim") = 150);

    // lifetimes (default bath and protocol settings)
    m.def(
        "bitflip_time",
        [](const CircuitParams& p, double x2) {
            BathSpec bath;
            bath.x = std::sqrt(x2);
            return bitflip_time(p, bath, LifetimeProtocolConfig{});
        },
        py::arg("params"), py::arg("x2") = 1e-5);
    m.def(
        "phaseflip_time",
        [](const CircuitParams& p, double x2) {
            BathSpec bath;
            bath.x = std::sqrt(x2);
            return phaseflip_time(p, bath, LifetimeProtocolConfig{});
        },
        py::arg("params"), py::arg("x2") = 1e-5);
    m.def(
        "cos2theta_bitflip_time",
        [](const Cos2ThetaParams& p, double x2) {
            BathSpec bath;
            bath.x = std::sqrt(x2);
            return bitflip_time(p, bath, LifetimeProtocolConfig{});
        },
        py::arg("params"), py::arg("x2") = 1e-5);
    m.def(
        "cos2theta_phaseflip_time",
        [](const Cos2ThetaParams& p, double x2) {
            BathSpec bath;
            bath.x = std::sqrt(x2);
            return phaseflip_time(p, bath, LifetimeProtocolConfig{});
        },
        py::arg("params"), py::arg("x2") = 1e-5);
    m.def("depsilon01_dphie", &depsilon01_dphie, py::arg("params"), py::arg("step") = 1e-4,
          py::arg("n_points") = 801);

    // gate
    m.def(
        "x_gate",
        [](const CircuitParams& p, double ej_min, double t_rise, int dim) {
            GateSchedule sched{p.E_j, ej_min};
            sched.t_rise = t_rise;
            return x_gate_simulate(p, sched, fock(dim));
        },
        py::arg("params"), py::arg("E_j_min") = 0.1, py::arg("t_rise") = 0.05,
        py::arg("dim") = 140);

    // QPS pair
    m.def("kepler_solve", &kepler_solve, py::arg("q_sum"), py::arg("ratio"));
    m.def(
        "qps_xx_coupling",
        [](double ecn, double eq, double ej, int n_max) {
            return qps_xx_coupling({ecn, eq, ej}, n_max);
        },
        py::arg("E_c_node"), py::arg("E_q"), py::arg("E_j"), py::arg("n_max") = 12);

    // sweep runner: JSON config text in, CSV text out
    m.def(
        "run_sweep_config",
        [](const std::string& config_text, int jobs) {
            SweepConfig cfg = validate_config(config_text);
            cfg.jobs = jobs;
            SweepResult res = run_sweep(cfg);
            return py::make_tuple(to_csv(res), manifest_json(cfg, res, config_text));
        },
        py::arg("config_text"), py::arg("jobs") = 1);
}
