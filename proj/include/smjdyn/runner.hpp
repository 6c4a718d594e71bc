#pragma once

// Experiment orchestration: resolve a run configuration from a key=value
// file plus command-line overrides, execute the Monte Carlo ensemble in
// parallel with per-sample seeding, reduce to observable series and write
// them as CSV. A beta sweep repeats the run over an arithmetic temperature
// schedule in each dynamics mode.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smjdyn/model.hpp"
#include "smjdyn/observables.hpp"

namespace smj {

// The four dynamics modes: plain junction, thermostatted, lossy, and both.
enum class Mode { SMJ, SMJ_NHC, SMJ_nH, SMJ_nH_NHC };

std::string mode_name(Mode m);
Mode mode_from_string(const std::string& name);  // throws ConfigError

struct BetaSweep {
    double beta0 = 0.0005;
    int count = 20;
};

struct RunConfig {
    ModelParams params;
    Mode mode = Mode::SMJ;
    std::optional<BetaSweep> beta_sweep;
    std::int64_t record_stride = 10;
    std::string output_dir = "out";
    int workers = 0;  // 0 = hardware concurrency
    std::vector<Mode> sweep_modes = {Mode::SMJ, Mode::SMJ_NHC, Mode::SMJ_nH,
                                     Mode::SMJ_nH_NHC};

    // Copies the mode into the (nhc_enabled, decay_enabled) flags.
    void apply_mode();
    void validate() const;  // throws ConfigError
};

// Applies one key=value assignment; throws ConfigError for unknown keys or
// unparsable values. Shared by the file parser and the flag layer.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses a flat key=value file ('#' comments allowed) on top of defaults.
RunConfig parse_config_file(const std::string& path);

// beta value of sweep cell l under the arithmetic schedule beta0 * (1 + l).
double sweep_beta_value(double beta0, int l);

// Fixed-point decimal-scientific CSV with 17 significant digits per value.
void write_csv(const ObservableSeries& s, const std::filesystem::path& path);
void write_spectrum_csv(const Spectrum& sp, const std::filesystem::path& path);

// Draws and propagates every sample (three element trajectories each) using
// `workers` threads over fixed index blocks; aborted samples are dropped and
// counted. The returned ensemble is identical for any worker count.
Ensemble build_ensemble(const ModelParams& p, std::int64_t record_stride,
                        int workers, std::size_t* aborted = nullptr);

// Full experiment: build the ensemble, reduce all reported observables and
// the population-difference spectrum, write CSVs plus metadata under
// cfg.output_dir. Returns 0 on success, 2 when more than 1% of the samples
// aborted.
int run_experiment(const RunConfig& cfg);

// Runs run_experiment for each beta in the schedule and each configured
// mode, under output_dir/beta_<l>/mode_<name>/. Failed cells are reported
// and do not stop the sweep.
int sweep_beta(const RunConfig& cfg);

} // namespace smj
