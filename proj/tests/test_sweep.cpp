#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxsim/sweep.hpp"

using namespace fluxsim;

namespace {
std::vector<std::string> errors_of(const std::string& text) {
    try {
        validate_config(text);
    } catch (const ConfigError& e) {
        return e.errors;
    }
    return {};
}
}  // namespace

TEST_CASE("minimal bitflip config gets documented defaults") {
    auto cfg = validate_config(R"({
        "experiment": "bitflip",
        "fixed": {"E_c": 0.1, "E_l": 0.1},
        "sweep": {"parameter": "E_j", "values": [2.0, 3.0]}
    })");
    CHECK(cfg.fixed.at("k_BT") == 1.0);
    CHECK(cfg.fixed.at("x2") == doctest::Approx(1e-5));
    CHECK(cfg.fixed.at("delta_phi_e") == doctest::Approx(0.03 * kPi));
    CHECK(cfg.numerics.at("n_points") == 401);
    CHECK(cfg.jobs == 0);
    CHECK_FALSE(cfg.verify_convergence);
}

TEST_CASE("validation reports every problem at once") {
    auto errs = errors_of(R"({
        "experiment": "bitflip",
        "fixed": {"E_c": -0.1, "E_l": 0.1, "E_j": 2.0, "bogus": 1},
        "sweep": {"parameter": "E_q", "values": []},
        "jobz": 1
    })");
    REQUIRE(errs.size() >= 4);
    auto has = [&](const std::string& needle) {
        for (const auto& e : errs)
            if (e.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(has("E_c"));        // negative energy names the field
    CHECK(has("bogus"));      // unknown fixed key
    CHECK(has("E_q"));        // swept parameter not used by bitflip
    CHECK(has("jobz"));       // unknown top-level key
    CHECK(has("nonempty"));   // empty values list
}

TEST_CASE("unknown experiment and missing sweep") {
    CHECK_THROWS_AS(validate_config(R"({"experiment": "nope"})"), ConfigError);
    CHECK_THROWS_AS(validate_config(R"({"experiment": "overlap"})"), ConfigError);
    CHECK_THROWS_AS(validate_config("not json at all"), ConfigError);
}

TEST_CASE("range axes expand to values") {
    auto cfg = validate_config(R"({
        "experiment": "splitting",
        "fixed": {"Ec_over_El": 0.1},
        "sweep": {"parameter": "Ej_over_Ec", "from": 1.0, "to": 10.0, "count": 4, "scale": "log"}
    })");
    REQUIRE(cfg.sweep.values.size() == 4);
    CHECK(cfg.sweep.values.front() == doctest::Approx(1.0));
    CHECK(cfg.sweep.values.back() == doctest::Approx(10.0));
    CHECK(cfg.sweep.values[1] / cfg.sweep.values[0] ==
          doctest::Approx(cfg.sweep.values[3] / cfg.sweep.values[2]));
}

TEST_CASE("run_sweep: deterministic output, parallel agrees with serial") {
    auto cfg = validate_config(R"({
        "experiment": "phase_diagram",
        "sweep": {"parameter": "Ec_over_El", "values": [0.5, 1.5]},
        "sweep2": {"parameter": "Ej_over_El", "values": [0.5, 2.0, 4.0]}
    })");
    auto r1 = run_sweep(cfg);
    auto r2 = run_sweep(cfg);
    CHECK(to_csv(r1) == to_csv(r2));
    cfg.jobs = 3;
    auto rp = run_sweep(cfg);
    CHECK(to_csv(rp) == to_csv(r1));
    CHECK(r1.records.size() == 6);
    CHECK(r1.ok);
    // canonical ordering: row-major over (sweep, sweep2)
    CHECK(r1.records[0].inputs[0] == 0.5);
    CHECK(r1.records[0].inputs[1] == 0.5);
    CHECK(r1.records[5].inputs[0] == 1.5);
    CHECK(r1.records[5].inputs[1] == 4.0);
}

TEST_CASE("splitting sweep reproduces the negative log-slope") {
    auto cfg = validate_config(R"({
        "experiment": "splitting",
        "fixed": {"Ec_over_El": 0.1},
        "sweep": {"parameter": "Ej_over_Ec", "values": [2.0, 4.0, 6.0, 8.0, 10.0]},
        "numerics": {"n_points": 401}
    })");
    auto res = run_sweep(cfg);
    REQUIRE(res.ok);
    for (size_t i = 1; i < res.records.size(); ++i) {
        CHECK(res.records[i].outputs[0] < res.records[i - 1].outputs[0]);  // eps0j falls
        CHECK(res.records[i].outputs[1] > res.records[i - 1].outputs[1]);  // N grows
    }
}

TEST_CASE("per-point failures are recorded, not silent") {
    SweepConfig cfg = validate_config(R"({
        "experiment": "overlap",
        "fixed": {"Ec_over_El": 0.2},
        "sweep": {"parameter": "Ej_over_Ec", "values": [20.0, 60.0]},
        "numerics": {"dim": 10}
    })");
    // dim = 10 trips the displacement/squeeze truncation guards at these parameters
    auto res = run_sweep(cfg);
    CHECK_FALSE(res.ok);
    int failed = 0;
    for (const auto& r : res.records)
        if (!r.error.empty()) ++failed;
    CHECK(failed == 2);
    CHECK(res.records.size() == 2);

    std::string csv = to_csv(res);
    CHECK(csv.find("index,Ej_over_Ec,overlap,error") == 0);
    std::string manifest = manifest_json(cfg, res, "{}");
    CHECK(manifest.find("\"n_failed\": 2") != std::string::npos);
    CHECK(manifest.find("config_hash_fnv1a") != std::string::npos);
}
