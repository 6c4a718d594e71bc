#include "smjdyn/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "smjdyn/sampling.hpp"

namespace smj {

namespace {

constexpr const char* kVersion = "smjdyn 0.1.0";

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + value + "' as a number");
    }
    if (pos != value.size())
        throw ConfigError(key + ": trailing characters in '" + value + "'");
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + value + "' as an integer");
    }
    if (pos != value.size())
        throw ConfigError(key + ": trailing characters in '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + value + "' as an unsigned integer");
    }
    if (pos != value.size())
        throw ConfigError(key + ": trailing characters in '" + value + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void format_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    out += buf;
}

} // namespace

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::SMJ: return "SMJ";
        case Mode::SMJ_NHC: return "SMJ+NHC";
        case Mode::SMJ_nH: return "SMJ+nH";
        case Mode::SMJ_nH_NHC: return "SMJ+nH+NHC";
    }
    return "SMJ";
}

Mode mode_from_string(const std::string& name) {
    if (name == "SMJ") return Mode::SMJ;
    if (name == "SMJ+NHC") return Mode::SMJ_NHC;
    if (name == "SMJ+nH") return Mode::SMJ_nH;
    if (name == "SMJ+nH+NHC") return Mode::SMJ_nH_NHC;
    throw ConfigError("mode must be one of SMJ, SMJ+NHC, SMJ+nH, SMJ+nH+NHC");
}

void RunConfig::apply_mode() {
    params.nhc_enabled = (mode == Mode::SMJ_NHC || mode == Mode::SMJ_nH_NHC);
    params.decay_enabled = (mode == Mode::SMJ_nH || mode == Mode::SMJ_nH_NHC);
}

void RunConfig::validate() const {
    params.validate();
    if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
    if (params.n_step % record_stride != 0)
        throw ConfigError("record_stride must divide n_step");
    if (workers < 0) throw ConfigError("workers must be >= 0");
    if (beta_sweep && beta_sweep->count < 1)
        throw ConfigError("sweep_count must be >= 1");
    if (beta_sweep && !(beta_sweep->beta0 > 0.0))
        throw ConfigError("beta0 must be > 0");
    if (sweep_modes.empty()) throw ConfigError("sweep_modes must not be empty");
}

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "delta") cfg.params.delta = parse_double(key, value);
    else if (key == "omega") cfg.params.omega = parse_double(key, value);
    else if (key == "coupling") cfg.params.coupling = parse_double(key, value);
    else if (key == "gamma") cfg.params.gamma = parse_double(key, value);
    else if (key == "beta") cfg.params.beta = parse_double(key, value);
    else if (key == "mu1") cfg.params.mu1 = parse_double(key, value);
    else if (key == "mu2") cfg.params.mu2 = parse_double(key, value);
    else if (key == "tau") cfg.params.tau = parse_double(key, value);
    else if (key == "n_step") cfg.params.n_step = parse_int(key, value);
    else if (key == "n_mcs") cfg.params.n_mcs = parse_int(key, value);
    else if (key == "seed") cfg.params.seed = parse_u64(key, value);
    else if (key == "mode") cfg.mode = mode_from_string(value);
    else if (key == "record_stride") cfg.record_stride = parse_int(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, value));
    else if (key == "beta0") {
        if (!cfg.beta_sweep) cfg.beta_sweep = BetaSweep{};
        cfg.beta_sweep->beta0 = parse_double(key, value);
    } else if (key == "sweep_count") {
        if (!cfg.beta_sweep) cfg.beta_sweep = BetaSweep{};
        cfg.beta_sweep->count = static_cast<int>(parse_int(key, value));
    } else if (key == "sweep_modes") {
        if (value == "all") return;
        cfg.sweep_modes.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            cfg.sweep_modes.push_back(mode_from_string(trim(item)));
        if (cfg.sweep_modes.empty())
            throw ConfigError("sweep_modes must name at least one mode");
    } else if (key == "bath_distribution") {
        if (value == "as_printed")
            cfg.params.bath_distribution = BathDistribution::as_printed;
        else if (value == "standard_wigner")
            cfg.params.bath_distribution = BathDistribution::standard_wigner;
        else
            throw ConfigError("bath_distribution must be as_printed or standard_wigner");
    } else if (key == "thermostat_momentum_variance") {
        if (value == "thermal")
            cfg.params.thermostat_momentum_variance = ThermostatMomentumVariance::thermal;
        else if (value == "unit")
            cfg.params.thermostat_momentum_variance = ThermostatMomentumVariance::unit;
        else
            throw ConfigError("thermostat_momentum_variance must be thermal or unit");
    } else if (key == "initial_state") {
        if (value == "diabatic_ground")
            cfg.params.initial_state = InitialState::diabatic_ground;
        else if (value == "adiabatic_superposition")
            cfg.params.initial_state = InitialState::adiabatic_superposition;
        else
            throw ConfigError("initial_state must be diabatic_ground or adiabatic_superposition");
    } else if (key == "initial_upper_fraction") {
        cfg.params.initial_upper_fraction = parse_double(key, value);
    } else if (key == "fft_window") {
        if (value == "none") cfg.params.fft_window = FftWindow::none;
        else if (value == "hann") cfg.params.fft_window = FftWindow::hann;
        else throw ConfigError("fft_window must be none or hann");
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not of the form key = value");
        set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

double sweep_beta_value(double beta0, int l) {
    return beta0 * (1.0 + static_cast<double>(l));
}

void write_csv(const ObservableSeries& s, const std::filesystem::path& path) {
    std::string out;
    out.reserve(s.times.size() * 80 + 64);
    out += s.complex_valued() ? "time,re_mean,im_mean,stderr\n" : "time,mean,stderr\n";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        format_value(out, s.times[k]);
        out += ',';
        format_value(out, s.mean[k]);
        if (s.complex_valued()) {
            out += ',';
            format_value(out, s.imag[k]);
        }
        out += ',';
        format_value(out, s.stderr_[k]);
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << out;
    if (!f) throw IoError("write failed: " + path.string());
}

void write_spectrum_csv(const Spectrum& sp, const std::filesystem::path& path) {
    std::string out = "omega,magnitude\n";
    for (std::size_t k = 0; k < sp.omega.size(); ++k) {
        format_value(out, sp.omega[k]);
        out += ',';
        format_value(out, sp.magnitude[k]);
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << out;
    if (!f) throw IoError("write failed: " + path.string());
}

Ensemble build_ensemble(const ModelParams& p, std::int64_t record_stride,
                        int workers, std::size_t* aborted) {
    p.validate();
    const std::size_t n = static_cast<std::size_t>(p.n_mcs);
    std::vector<SampleRecord> records(n);
    std::vector<char> ok(n, 0);

    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const InitialSample init = draw_initial_sample(p, i);
                SampleRecord rec;
                rec.omega0 = init.omega0;
                const AdiabaticPair pairs[3] = {pair_upper(), pair_lower(),
                                                pair_coherence()};
                for (int slot = 0; slot < 3; ++slot) {
                    const auto traj = propagate_element_for_averages(
                        init.point, pairs[slot], p, record_stride);
                    rec.traj[slot].reserve(traj.size());
                    for (const ElementTrajectory& t : traj)
                        rec.traj[slot].push_back({t.point.Q, t.point.P, t.weight});
                }
                records[i] = std::move(rec);
                ok[i] = 1;
            } catch (const NonFiniteState&) {
                ok[i] = 0;
            }
        }
    };

    int nw = workers > 0 ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
    if (nw < 1) nw = 1;
    if (static_cast<std::size_t>(nw) > n) nw = static_cast<int>(n);
    if (nw == 1) {
        run_block(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        const std::size_t chunk = (n + static_cast<std::size_t>(nw) - 1) /
                                  static_cast<std::size_t>(nw);
        for (int w = 0; w < nw; ++w) {
            const std::size_t b = static_cast<std::size_t>(w) * chunk;
            if (b >= n) break;
            pool.emplace_back(run_block, b, std::min(b + chunk, n));
        }
        for (auto& t : pool) t.join();
    }

    Ensemble e;
    e.params = p;
    e.record_stride = record_stride;
    for (std::int64_t j = 0; j <= p.n_step; ++j)
        if (j % record_stride == 0 || j == p.n_step)
            e.times.push_back(static_cast<double>(j) * p.tau);

    std::size_t dropped = 0;
    e.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (ok[i])
            e.samples.push_back(std::move(records[i]));
        else
            ++dropped;
    }
    if (aborted) *aborted = dropped;
    return e;
}

namespace {

ObservableSeries real_series(const std::string& label, const Ensemble& e,
                             double (*pick)(const MatrixEstimate&),
                             double (*pick_se)(const MatrixEstimate&), bool normalized) {
    ObservableSeries s;
    s.label = label;
    s.times = e.times;
    s.mean.reserve(e.times.size());
    s.stderr_.reserve(e.times.size());
    for (std::size_t k = 0; k < e.times.size(); ++k) {
        const MatrixEstimate m =
            normalized ? estimate_normalized(e, k) : estimate_unnormalized(e, k);
        s.mean.push_back(pick(m));
        s.stderr_.push_back(pick_se(m));
    }
    return s;
}

void write_metadata(const RunConfig& cfg, const std::filesystem::path& dir,
                    std::size_t aborted, double wall_seconds) {
    std::ofstream f(dir / "metadata.txt");
    if (!f) throw IoError("cannot write metadata in " + dir.string());
    const ModelParams& p = cfg.params;
    f << "version = " << kVersion << "\n";
    f << "mode = " << mode_name(cfg.mode) << "\n";
    f << "delta = " << p.delta << "\n";
    f << "omega = " << p.omega << "\n";
    f << "coupling = " << p.coupling << "\n";
    f << "gamma = " << p.gamma << "\n";
    f << "beta = " << p.beta << "\n";
    f << "mu1 = " << p.mu1 << "\n";
    f << "mu2 = " << p.mu2 << "\n";
    f << "tau = " << p.tau << "\n";
    f << "n_step = " << p.n_step << "\n";
    f << "n_mcs = " << p.n_mcs << "\n";
    f << "seed = " << p.seed << "\n";
    f << "nhc_enabled = " << (p.nhc_enabled ? 1 : 0) << "\n";
    f << "decay_enabled = " << (p.decay_enabled ? 1 : 0) << "\n";
    f << "record_stride = " << cfg.record_stride << "\n";
    f << "workers = " << cfg.workers << "\n";
    f << "bath_distribution = "
      << (p.bath_distribution == BathDistribution::as_printed ? "as_printed"
                                                              : "standard_wigner")
      << "\n";
    f << "thermostat_momentum_variance = "
      << (p.thermostat_momentum_variance == ThermostatMomentumVariance::thermal
              ? "thermal"
              : "unit")
      << "\n";
    f << "initial_state = "
      << (p.initial_state == InitialState::diabatic_ground ? "diabatic_ground"
                                                           : "adiabatic_superposition")
      << "\n";
    f << "fft_window = " << (p.fft_window == FftWindow::hann ? "hann" : "none") << "\n";
    f << "aborted_samples = " << aborted << "\n";
    f << "wall_time_seconds = " << wall_seconds << "\n";
}

} // namespace

int run_experiment(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.apply_mode();
    cfg.validate();

    const auto t0 = std::chrono::steady_clock::now();
    std::size_t aborted = 0;
    const Ensemble e = build_ensemble(cfg.params, cfg.record_stride, cfg.workers,
                                      &aborted);

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    const double abort_fraction =
        static_cast<double>(aborted) / static_cast<double>(cfg.params.n_mcs);
    if (abort_fraction > 0.01) {
        write_metadata(cfg, dir, aborted, 0.0);
        std::cerr << "run failed: " << aborted << " of " << cfg.params.n_mcs
                  << " samples aborted\n";
        return 2;
    }

    ObservableSeries trace;
    trace.label = "trace";
    trace.times = e.times;
    for (std::size_t k = 0; k < e.times.size(); ++k) {
        const Estimate t = trace_omega(e, k);
        trace.mean.push_back(t.value);
        trace.stderr_.push_back(t.stderr_);
    }
    write_csv(trace, dir / "trace.csv");

    write_csv(real_series("xi_11", e,
                          [](const MatrixEstimate& m) { return m.mean.at(1, 1).real(); },
                          [](const MatrixEstimate& m) { return m.se(1, 1); }, false),
              dir / "xi_11.csv");
    write_csv(real_series("xi_22", e,
                          [](const MatrixEstimate& m) { return m.mean.at(2, 2).real(); },
                          [](const MatrixEstimate& m) { return m.se(2, 2); }, false),
              dir / "xi_22.csv");
    write_csv(real_series("chi_11", e,
                          [](const MatrixEstimate& m) { return m.mean.at(1, 1).real(); },
                          [](const MatrixEstimate& m) { return m.se(1, 1); }, true),
              dir / "chi_11.csv");
    write_csv(real_series("chi_22", e,
                          [](const MatrixEstimate& m) { return m.mean.at(2, 2).real(); },
                          [](const MatrixEstimate& m) { return m.se(2, 2); }, true),
              dir / "chi_22.csv");

    ObservableSeries coh;
    coh.label = "chi_12";
    coh.times = e.times;
    for (std::size_t k = 0; k < e.times.size(); ++k) {
        const ComplexEstimate c = coherence(e, k);
        coh.mean.push_back(c.value.real());
        coh.imag.push_back(c.value.imag());
        coh.stderr_.push_back(c.stderr_);
    }
    write_csv(coh, dir / "chi_12.csv");

    ObservableSeries pop;
    pop.label = "population_difference";
    pop.times = e.times;
    for (std::size_t k = 0; k < e.times.size(); ++k) {
        const Estimate v = population_difference(e, k);
        pop.mean.push_back(v.value);
        pop.stderr_.push_back(v.stderr_);
    }
    write_csv(pop, dir / "population_difference.csv");

    // Spectrum of the stabilized tail; skipped when the run is too short.
    try {
        const Spectrum sp = fourier_spectrum(pop, 20.0, cfg.params.fft_window);
        write_spectrum_csv(sp, dir / "population_difference_spectrum.csv");
    } catch (const InsufficientData&) {
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_metadata(cfg, dir, aborted, wall);
    return 0;
}

int sweep_beta(const RunConfig& cfg) {
    if (!cfg.beta_sweep) throw ConfigError("sweep requested without sweep_count");
    int failures = 0;
    for (int l = 0; l < cfg.beta_sweep->count; ++l) {
        for (Mode m : cfg.sweep_modes) {
            RunConfig cell = cfg;
            cell.beta_sweep.reset();
            cell.params.beta = sweep_beta_value(cfg.beta_sweep->beta0, l);
            cell.mode = m;
            cell.output_dir = (std::filesystem::path(cfg.output_dir) /
                               ("beta_" + std::to_string(l)) /
                               ("mode_" + mode_name(m)))
                                  .string();
            try {
                if (run_experiment(cell) != 0) ++failures;
            } catch (const std::exception& ex) {
                std::cerr << "sweep cell beta_" << l << "/" << mode_name(m)
                          << " failed: " << ex.what() << "\n";
                ++failures;
            }
        }
    }
    if (failures > 0) {
        std::cerr << "sweep finished with " << failures << " failed cells\n";
        return 2;
    }
    return 0;
}

} // namespace smj
