// Command-line front end: resolves the run configuration from an optional
// key=value file plus flags (flags win), then either runs one experiment or
// a beta sweep. Exit codes: 0 success, 1 configuration error, 2 run failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smjdyn/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Trajectory-ensemble simulator for a lossy two-level junction "
                 "coupled to a thermostatted harmonic mode"};

    std::string config_path, mode, out_dir, initial_state, bath_distribution;
    double beta = 0.0, tau = 0.0, gamma = -1.0, omega = 0.0, delta = 0.0;
    double coupling = 0.0, mu1 = 0.0, mu2 = 0.0, beta0 = 0.0;
    long long steps = 0, samples = 0, stride = 0, seed = -1;
    int sweep_count = 0, workers = -1;

    app.add_option("--config", config_path, "key = value configuration file");
    auto* o_mode = app.add_option("--mode", mode, "SMJ, SMJ+NHC, SMJ+nH or SMJ+nH+NHC");
    auto* o_beta = app.add_option("--beta", beta, "inverse temperature");
    auto* o_sweep = app.add_option("--sweep-count", sweep_count,
                                   "number of sweep points beta0*(1+l)");
    auto* o_beta0 = app.add_option("--beta0", beta0, "sweep base inverse temperature");
    auto* o_seed = app.add_option("--seed", seed, "master seed");
    auto* o_samples = app.add_option("--samples", samples, "Monte Carlo sample count");
    auto* o_steps = app.add_option("--steps", steps, "number of time steps");
    auto* o_tau = app.add_option("--tau", tau, "time step");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    auto* o_workers = app.add_option("--workers", workers, "worker thread count");
    auto* o_stride = app.add_option("--stride", stride, "recording stride");
    auto* o_gamma = app.add_option("--gamma", gamma, "sink strength");
    auto* o_omega = app.add_option("--omega", omega, "mode frequency");
    auto* o_delta = app.add_option("--delta", delta, "two-level splitting");
    auto* o_coupling = app.add_option("--coupling", coupling, "mode coupling");
    auto* o_mu1 = app.add_option("--mu1", mu1, "first thermostat inertia");
    auto* o_mu2 = app.add_option("--mu2", mu2, "second thermostat inertia");
    auto* o_init = app.add_option("--initial-state", initial_state,
                                  "diabatic_ground or adiabatic_superposition");
    auto* o_bath = app.add_option("--bath-distribution", bath_distribution,
                                  "as_printed or standard_wigner");

    CLI11_PARSE(app, argc, argv);

    try {
        smj::RunConfig cfg;
        if (!config_path.empty()) cfg = smj::parse_config_file(config_path);

        auto set = [&cfg](const std::string& key, const std::string& value) {
            smj::set_config_key(cfg, key, value);
        };
        if (o_mode->count()) set("mode", mode);
        if (o_beta->count()) set("beta", std::to_string(beta));
        if (o_sweep->count()) set("sweep_count", std::to_string(sweep_count));
        if (o_beta0->count()) set("beta0", std::to_string(beta0));
        if (o_seed->count()) set("seed", std::to_string(seed));
        if (o_samples->count()) set("n_mcs", std::to_string(samples));
        if (o_steps->count()) set("n_step", std::to_string(steps));
        if (o_tau->count()) cfg.params.tau = tau;
        if (o_out->count()) cfg.output_dir = out_dir;
        if (o_workers->count()) cfg.workers = workers;
        if (o_stride->count()) cfg.record_stride = stride;
        if (o_gamma->count()) cfg.params.gamma = gamma;
        if (o_omega->count()) cfg.params.omega = omega;
        if (o_delta->count()) cfg.params.delta = delta;
        if (o_coupling->count()) cfg.params.coupling = coupling;
        if (o_mu1->count()) cfg.params.mu1 = mu1;
        if (o_mu2->count()) cfg.params.mu2 = mu2;
        if (o_init->count()) set("initial_state", initial_state);
        if (o_bath->count()) set("bath_distribution", bath_distribution);

        cfg.apply_mode();
        cfg.validate();
        return cfg.beta_sweep ? smj::sweep_beta(cfg) : smj::run_experiment(cfg);
    } catch (const smj::ConfigError& ex) {
        std::cerr << "configuration error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "run failed: " << ex.what() << "\n";
        return 2;
    }
}
