// simulate <experiment> --config <path> [--out <path>] [--jobs N] [--verify-convergence]
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fluxsim/sweep.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fluxsim parameter sweeps"};
    std::string experiment, config_path, out_path;
    int jobs = -1;
    bool verify = false;
    app.add_option("experiment", experiment, "experiment name")->required();
    app.add_option("--config", config_path, "JSON config path")->required();
    app.add_option("--out", out_path, "CSV output path (overrides config; default stdout)");
    app.add_option("--jobs", jobs, "worker threads (default: config, FLUXSIM_JOBS, or 1)");
    app.add_flag("--verify-convergence", verify, "enable truncation-convergence checks");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config " << config_path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string raw = ss.str();

    fluxsim::SweepConfig cfg;
    try {
        cfg = fluxsim::validate_config(raw);
    } catch (const fluxsim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (cfg.experiment != experiment) {
        std::cerr << "error: config is for experiment '" << cfg.experiment
                  << "', but '" << experiment << "' was requested\n";
        return 2;
    }
    if (jobs >= 0) cfg.jobs = jobs;
    if (verify) cfg.verify_convergence = true;
    if (!out_path.empty()) cfg.output = out_path;

    fluxsim::SweepResult res;
    try {
        res = fluxsim::run_sweep(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string csv = fluxsim::to_csv(res);
    const std::string manifest = fluxsim::manifest_json(cfg, res, raw);
    if (cfg.output.empty()) {
        std::cout << csv;
        std::cerr << manifest;
    } else {
        std::ofstream fc(cfg.output);
        if (!fc) {
            std::cerr << "error: cannot write " << cfg.output << "\n";
            return 2;
        }
        fc << csv;
        std::ofstream fm(cfg.output + ".manifest.json");
        fm << manifest;
        std::cerr << "wrote " << cfg.output << " (" << res.records.size() << " points, "
                  << res.wall_time_s << " s)\n";
    }
    if (!res.ok) {
        int failed = 0;
        for (const auto& r : res.records)
            if (!r.error.empty()) ++failed;
        std::cerr << "error: " << failed << " point(s) failed\n";
        return 1;
    }
    return 0;
}
