#include "fluxsim/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fluxsim/circuits.hpp"
#include "fluxsim/gates.hpp"
#include "fluxsim/lifetimes.hpp"
#include "fluxsim/meanfield.hpp"

namespace fluxsim {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

struct ExperimentSpec {
    std::vector<std::string> sweep_params;
    std::vector<std::string> sweep2_params;                    // empty = no second axis
    std::map<std::string, std::optional<double>> fixed;        // nullopt = required
    std::map<std::string, double> numerics;                    // defaults
    std::vector<std::string> output_columns;
};

const std::map<std::string, ExperimentSpec>& experiment_specs() {
    static const double x2_def = 1e-5, dphi_def = 0.03 * kPi;
    static const std::map<std::string, ExperimentSpec> specs = {
        {"phase_diagram",
         {{"Ec_over_El"},
          {"Ej_over_El"},
          {},
          {},
          {"alpha_opt", "theta_opt", "energy", "symmetry_broken"}}},
        {"overlap",
         {{"Ej_over_Ec"},
          {"Ec_over_El"},
          {{"Ec_over_El", std::nullopt}},
          {{"dim", 150}},
          {"overlap"}}},
        {"splitting",
         {{"Ej_over_Ec", "Ec_over_El", "El_over_Ec"},
          {},
          {{"Ec_over_El", std::nullopt},
           {"Ej_over_El", std::nullopt},
           {"Ej_over_Ec", std::nullopt},
           {"level", 1.0}},
          {{"n_points", 801}, {"phi_max", 4.0 * kPi}},
          {"eps0j", "N"}}},
        {"bitflip",
         {{"E_j", "E_c"},
          {},
          {{"E_c", std::nullopt},
           {"E_l", std::nullopt},
           {"E_j", std::nullopt},
           {"k_BT", 1.0},
           {"x2", x2_def},
           {"delta_phi_e", dphi_def}},
          {{"n_points", 401}, {"phi_max", 4.0 * kPi}, {"k_levels", 0}, {"k_max", 40},
           {"min_delocalized", 5}},
          {"T_bf", "x2_T_bf", "r_squared", "inv_lambda1", "k"}}},
        {"phaseflip",
         {{"E_j", "E_c"},
          {},
          {{"E_c", std::nullopt},
           {"E_l", std::nullopt},
           {"E_j", std::nullopt},
           {"k_BT", 1.0},
           {"x2", x2_def}},
          {{"n_points", 401}, {"phi_max", 4.0 * kPi}, {"k_levels", 0}, {"k_max", 40},
           {"min_delocalized", 5}},
          {"T_pf", "x2_T_pf", "r_squared", "k"}}},
        {"lindblad_spectrum",
         {{"E_j", "E_c"},
          {},
          {{"E_c", std::nullopt},
           {"E_l", std::nullopt},
           {"E_j", std::nullopt},
           {"k_BT", 1.0},
           {"x2", x2_def},
           {"delta_phi_e", dphi_def}},
          {{"n_points", 401}, {"phi_max", 4.0 * kPi}, {"k_levels", 0}, {"k_max", 40},
           {"min_delocalized", 5}},
          {"lambda1", "inv_lambda1", "k"}}},
        {"xgate",
         {{"E_j_min", "t_rise"},
          {},
          {{"E_c", std::nullopt},
           {"E_l", std::nullopt},
           {"E_j_max", std::nullopt},
           {"E_j_min", 0.1},
           {"t_rise", 0.05},
           {"calibrate_hold", 1.0}},
          {{"dim", 140}},
          {"error", "gate_time", "hold_used", "target_fidelity", "min_separation_ratio"}}},
        {"cos2theta_lifetimes",
         {{"E_j2"},
          {},
          {{"E_c", std::nullopt},
           {"E_j2", std::nullopt},
           {"k_BT", 1.0},
           {"x2", x2_def},
           {"ej1_frac", 0.03}},
          {{"n_max", 30}, {"k_levels", 0}, {"k_max", 40}, {"min_delocalized", 5}},
          {"T_bf", "x2_T_bf", "T_pf", "x2_T_pf", "inv_lambda1"}}},
        {"qps_pair",
         {{"E_q"},
          {},
          {{"E_c_node", std::nullopt}, {"E_j", std::nullopt}},
          {{"n_max", 12}},
          {"g", "g_over_Eq"}}},
    };
    return specs;
}

double get(const std::map<std::string, double>& m, const std::string& k) {
    auto it = m.find(k);
    if (it == m.end()) throw FluxsimError("internal: missing key " + k);
    return it->second;
}

LifetimeProtocolConfig protocol_config(const SweepConfig& cfg) {
    LifetimeProtocolConfig c;
    auto num = cfg.numerics;
    if (num.count("n_points")) c.n_points = int(num["n_points"]);
    if (num.count("phi_max")) c.phi_max = num["phi_max"];
    if (num.count("n_max")) c.n_max = int(num["n_max"]);
    if (num.count("k_levels")) c.k_levels = int(num["k_levels"]);
    if (num.count("k_max")) c.k_max = int(num["k_max"]);
    if (num.count("min_delocalized")) c.min_delocalized = int(num["min_delocalized"]);
    if (cfg.fixed.count("delta_phi_e")) c.delta_phi_e = cfg.fixed.at("delta_phi_e");
    if (cfg.fixed.count("ej1_frac")) c.ej1_frac = cfg.fixed.at("ej1_frac");
    c.verify_convergence = cfg.verify_convergence;
    return c;
}

std::vector<double> evaluate_point(const SweepConfig& cfg, const std::vector<double>& vals) {
    std::map<std::string, double> p = cfg.fixed;
    p[cfg.sweep.parameter] = vals[0];
    if (cfg.sweep2) p[cfg.sweep2->parameter] = vals[1];
    const std::string& ex = cfg.experiment;

    if (ex == "phase_diagram") {
        CircuitParams cp{get(p, "Ec_over_El"), 1.0, get(p, "Ej_over_El")};
        auto r = optimize_mean_field(cp);
        return {r.alpha_opt, r.theta_opt, r.energy, r.symmetry_broken ? 1.0 : 0.0};
    }
    if (ex == "overlap") {
        double ecel = get(p, "Ec_over_El"), ejec = get(p, "Ej_over_Ec");
        CircuitParams cp{ecel, 1.0, ejec * ecel};
        int dim = int(cfg.numerics.count("dim") ? cfg.numerics.at("dim") : 150);
        return {ground_overlap(cp, fock(dim))};
    }
    if (ex == "splitting") {
        double Ec, El, Ej;
        const std::string& sp = cfg.sweep.parameter;
        if (sp == "Ej_over_Ec") {
            El = 1.0;
            Ec = get(p, "Ec_over_El");
            Ej = vals[0] * Ec;
        } else if (sp == "Ec_over_El") {
            El = 1.0;
            Ec = vals[0];
            Ej = get(p, "Ej_over_El");
        } else {  // El_over_Ec
            Ec = 1.0;
            El = vals[0];
            Ej = get(p, "Ej_over_Ec");
        }
        CircuitParams cp{Ec, El, Ej};
        int np = int(cfg.numerics.count("n_points") ? cfg.numerics.at("n_points") : 801);
        double pm = cfg.numerics.count("phi_max") ? cfg.numerics.at("phi_max") : 4.0 * kPi;
        double eps = splitting(cp, flux_grid(pm, np), int(get(p, "level")));
        double ap = alpha_prime(cp);
        return {eps, ap * ap};
    }
    if (ex == "bitflip" || ex == "phaseflip" || ex == "lindblad_spectrum") {
        CircuitParams cp{get(p, "E_c"), get(p, "E_l"), get(p, "E_j")};
        BathSpec bath{get(p, "k_BT"), std::sqrt(get(p, "x2"))};
        LifetimeProtocolConfig pc = protocol_config(cfg);
        if (ex == "bitflip") {
            auto r = bitflip_time(cp, bath, pc);
            return {r.fit.T, get(p, "x2") * r.fit.T, r.fit.r_squared,
                    r.lambda1 > 0 ? 1.0 / r.lambda1 : 0.0, double(r.k)};
        }
        if (ex == "phaseflip") {
            auto r = phaseflip_time(cp, bath, pc);
            return {r.fit.T, get(p, "x2") * r.fit.T, r.fit.r_squared, double(r.k)};
        }
        cp.phi_e = kPi + pc.delta_phi_e;
        LindbladModel model = fluxonium_model(cp, bath, pc, nullptr, nullptr);
        Propagator prop(model);
        double l1 = prop.lambda1();
        return {l1, l1 > 0 ? 1.0 / l1 : 0.0, double(model.eig.k)};
    }
    if (ex == "xgate") {
        CircuitParams cp{get(p, "E_c"), get(p, "E_l"), get(p, "E_j_max")};
        GateSchedule sched{get(p, "E_j_max"), get(p, "E_j_min"), get(p, "t_rise")};
        sched.calibrate_hold = get(p, "calibrate_hold") != 0.0;
        int dim = int(cfg.numerics.count("dim") ? cfg.numerics.at("dim") : 140);
        auto r = x_gate_simulate(cp, sched, fock(dim));
        return {r.error, r.gate_time, r.hold_used, r.target_fidelity, r.min_separation_ratio};
    }
    if (ex == "cos2theta_lifetimes") {
        Cos2ThetaParams cp{get(p, "E_j2"), 0.0, get(p, "E_c")};
        BathSpec bath{get(p, "k_BT"), std::sqrt(get(p, "x2"))};
        LifetimeProtocolConfig pc = protocol_config(cfg);
        auto rb = bitflip_time(cp, bath, pc);
        auto rp = phaseflip_time(cp, bath, pc);
        double x2 = get(p, "x2");
        return {rb.fit.T, x2 * rb.fit.T, rp.fit.T, x2 * rp.fit.T,
                rb.lambda1 > 0 ? 1.0 / rb.lambda1 : 0.0};
    }
    if (ex == "qps_pair") {
        QpsPairParams qp{get(p, "E_c_node"), get(p, "E_q"), get(p, "E_j")};
        int nm = int(cfg.numerics.count("n_max") ? cfg.numerics.at("n_max") : 12);
        double g = qps_xx_coupling(qp, nm);
        return {g, qp.E_q > 0 ? g / qp.E_q : 0.0};
    }
    throw FluxsimError("unknown experiment " + ex);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : FluxsimError("config validation failed:\n  " + join(errs, "\n  ")), errors(std::move(errs)) {}

const std::map<std::string, std::vector<std::string>>& experiment_parameters() {
    static std::map<std::string, std::vector<std::string>> out = [] {
        std::map<std::string, std::vector<std::string>> m;
        for (const auto& [name, spec] : experiment_specs()) m[name] = spec.sweep_params;
        return m;
    }();
    return out;
}

namespace {

SweepAxis parse_axis(const json& j, const std::string& where, std::vector<std::string>& errs) {
    SweepAxis ax;
    if (!j.is_object()) {
        errs.push_back(where + ": must be an object");
        return ax;
    }
    for (auto& [k, v] : j.items())
        if (k != "parameter" && k != "values" && k != "from" && k != "to" && k != "count" &&
            k != "scale")
            errs.push_back(where + ": unknown key '" + k + "'");
    if (!j.contains("parameter") || !j["parameter"].is_string())
        errs.push_back(where + ": missing string 'parameter'");
    else
        ax.parameter = j["parameter"];
    if (j.contains("values")) {
        if (!j["values"].is_array() || j["values"].empty())
            errs.push_back(where + ": 'values' must be a nonempty array");
        else
            for (auto& v : j["values"]) ax.values.push_back(v.get<double>());
    } else if (j.contains("from") && j.contains("to") && j.contains("count")) {
        double a = j["from"], b = j["to"];
        int n = j["count"];
        std::string scale = j.value("scale", "linear");
        if (n < 1) {
            errs.push_back(where + ": count must be >= 1");
        } else if (scale == "log") {
            if (a <= 0 || b <= 0)
                errs.push_back(where + ": log scale needs positive endpoints");
            else
                for (int i = 0; i < n; ++i)
                    ax.values.push_back(std::exp(std::log(a) + (std::log(b) - std::log(a)) *
                                                                  (n == 1 ? 0.0 : double(i) / (n - 1))));
        } else if (scale == "linear") {
            for (int i = 0; i < n; ++i)
                ax.values.push_back(a + (b - a) * (n == 1 ? 0.0 : double(i) / (n - 1)));
        } else {
            errs.push_back(where + ": scale must be 'linear' or 'log'");
        }
    } else {
        errs.push_back(where + ": provide 'values' or 'from'/'to'/'count'");
    }
    return ax;
}

// whether a required fixed key is actually needed given the chosen sweep axes
bool requires_key(const SweepConfig& cfg, const std::string& k) {
    if (cfg.experiment == "splitting") {
        static const std::map<std::string, std::string> need = {{"Ej_over_Ec", "Ec_over_El"},
                                                                {"Ec_over_El", "Ej_over_El"},
                                                                {"El_over_Ec", "Ej_over_Ec"}};
        auto it = need.find(cfg.sweep.parameter);
        return it != need.end() && it->second == k;
    }
    if (cfg.experiment == "overlap" && k == "Ec_over_El") return !cfg.sweep2.has_value();
    return true;
}

}  // namespace

SweepConfig validate_config(const std::string& text) {
    std::vector<std::string> errs;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }
    SweepConfig cfg;
    static const std::vector<std::string> top = {"experiment", "fixed",  "sweep",
                                                 "sweep2",     "numerics", "output",
                                                 "jobs",       "verify_convergence"};
    for (auto& [k, v] : j.items())
        if (std::find(top.begin(), top.end(), k) == top.end())
            errs.push_back("unknown top-level key '" + k + "'");
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        errs.push_back("missing string 'experiment'");
        throw ConfigError(errs);
    }
    cfg.experiment = j["experiment"];
    auto it = experiment_specs().find(cfg.experiment);
    if (it == experiment_specs().end()) {
        errs.push_back("unknown experiment '" + cfg.experiment + "'");
        throw ConfigError(errs);
    }
    const ExperimentSpec& spec = it->second;

    if (j.contains("fixed")) {
        for (auto& [k, v] : j["fixed"].items()) {
            if (!spec.fixed.count(k)) {
                errs.push_back("fixed: unknown key '" + k + "' for experiment " + cfg.experiment);
                continue;
            }
            if (!v.is_number()) {
                errs.push_back("fixed: '" + k + "' must be a number");
                continue;
            }
            double x = v.get<double>();
            if ((k.rfind("E_", 0) == 0 || k == "k_BT" || k == "x2") && x < 0.0)
                errs.push_back("fixed: '" + k + "' must be nonnegative");
            cfg.fixed[k] = x;
        }
    }
    if (!j.contains("sweep")) {
        errs.push_back("missing 'sweep'");
    } else {
        cfg.sweep = parse_axis(j["sweep"], "sweep", errs);
        if (!cfg.sweep.parameter.empty() &&
            std::find(spec.sweep_params.begin(), spec.sweep_params.end(), cfg.sweep.parameter) ==
                spec.sweep_params.end())
            errs.push_back("sweep: parameter '" + cfg.sweep.parameter + "' not used by " +
                           cfg.experiment + " (allowed: " + join(spec.sweep_params, ", ") + ")");
    }
    if (j.contains("sweep2")) {
        if (spec.sweep2_params.empty()) {
            errs.push_back("sweep2 not supported by experiment " + cfg.experiment);
        } else {
            cfg.sweep2 = parse_axis(j["sweep2"], "sweep2", errs);
            if (std::find(spec.sweep2_params.begin(), spec.sweep2_params.end(),
                          cfg.sweep2->parameter) == spec.sweep2_params.end())
                errs.push_back("sweep2: parameter '" + cfg.sweep2->parameter + "' not allowed");
        }
    }
    if (j.contains("numerics")) {
        for (auto& [k, v] : j["numerics"].items()) {
            if (!spec.numerics.count(k))
                errs.push_back("numerics: unknown key '" + k + "'");
            else
                cfg.numerics[k] = v.get<double>();
        }
    }
    for (const auto& [k, v] : spec.numerics)
        if (!cfg.numerics.count(k)) cfg.numerics[k] = v;
    // fill fixed defaults; required keys may be supplied by the sweep axes instead
    for (const auto& [k, dflt] : spec.fixed) {
        if (cfg.fixed.count(k)) continue;
        bool swept = (cfg.sweep.parameter == k) || (cfg.sweep2 && cfg.sweep2->parameter == k);
        if (dflt.has_value())
            cfg.fixed[k] = *dflt;
        else if (!swept && requires_key(cfg, k))
            errs.push_back("fixed: missing required key '" + k + "'");
    }
    cfg.output = j.value("output", "");
    cfg.jobs = j.value("jobs", 0);
    if (cfg.jobs < 0) errs.push_back("jobs must be >= 0");
    cfg.verify_convergence = j.value("verify_convergence", false);
    if (!errs.empty()) throw ConfigError(errs);
    return cfg;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SweepResult res;
    res.input_columns = {cfg.sweep.parameter};
    if (cfg.sweep2) res.input_columns.push_back(cfg.sweep2->parameter);
    res.output_columns = experiment_specs().at(cfg.experiment).output_columns;
    size_t n1 = cfg.sweep.values.size();
    size_t n2 = cfg.sweep2 ? cfg.sweep2->values.size() : 1;
    res.records.resize(n1 * n2);
    int jobs = cfg.jobs;
    if (jobs == 0) {
        const char* env = std::getenv("FLUXSIM_JOBS");
        jobs = env ? std::max(1, std::atoi(env)) : 1;
    }
    jobs = std::min<int>(jobs, int(res.records.size()));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= res.records.size()) return;
            SweepRecord& rec = res.records[i];
            rec.index = int(i);
            rec.inputs = {cfg.sweep.values[i / n2]};
            if (cfg.sweep2) rec.inputs.push_back(cfg.sweep2->values[i % n2]);
            try {
                rec.outputs = evaluate_point(cfg, rec.inputs);
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& r : res.records)
        if (!r.error.empty()) res.ok = false;
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string to_csv(const SweepResult& res) {
    std::ostringstream os;
    os << "index";
    for (const auto& c : res.input_columns) os << "," << c;
    for (const auto& c : res.output_columns) os << "," << c;
    os << ",error\n";
    char buf[40];
    for (const auto& r : res.records) {
        os << r.index;
        auto emit = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            os << "," << buf;
        };
        for (double v : r.inputs) emit(v);
        if (r.error.empty()) {
            for (double v : r.outputs) emit(v);
        } else {
            for (size_t i = 0; i < res.output_columns.size(); ++i) os << ",";
        }
        std::string msg = r.error;
        for (auto& ch : msg)
            if (ch == ',' || ch == '\n') ch = ';';
        os << "," << msg << "\n";
    }
    return os.str();
}

std::string manifest_json(const SweepConfig& cfg, const SweepResult& res,
                          const std::string& raw_config) {
    // FNV-1a of the raw config text
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : raw_config) {
        h ^= c;
        h *= 1099511628211ull;
    }
    json m;
    m["experiment"] = cfg.experiment;
    m["config_hash_fnv1a"] = h;
    m["artifact_version"] = "0.1.0";
    m["wall_time_s"] = res.wall_time_s;
    m["n_points"] = res.records.size();
    int failed = 0;
    for (const auto& r : res.records)
        if (!r.error.empty()) ++failed;
    m["n_failed"] = failed;
    m["convergence_verified"] = cfg.verify_convergence;
    return m.dump(2) + "\n";
}

}  // namespace fluxsim
