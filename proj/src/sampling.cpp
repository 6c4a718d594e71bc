#include "smjdyn/sampling.hpp"

#include <cmath>

namespace smj {

namespace {

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

std::uint64_t derive_sample_seed(std::uint64_t master_seed,
                                 std::uint64_t sample_index) {
    return mix64(master_seed ^ mix64(sample_index + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t SampleRng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
}

double SampleRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SampleRng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

std::pair<double, double> sample_bath(const ModelParams& p, SampleRng& rng) {
    const double t = std::tanh(0.5 * p.beta * p.omega);
    double var_q = 1.0 / (p.omega * t);
    double var_p = p.omega / t;
    if (p.bath_distribution == BathDistribution::standard_wigner) {
        var_q *= 0.5;
        var_p *= 0.5;
    }
    const double Q = std::sqrt(var_q) * rng.gaussian();
    const double P = std::sqrt(var_p) * rng.gaussian();
    return {Q, P};
}

std::array<double, 4> sample_thermostat(const ModelParams& p, SampleRng& rng) {
    if (!p.nhc_enabled) return {0.0, 0.0, 0.0, 0.0};
    double sd1 = 1.0;
    double sd2 = 1.0;
    if (p.thermostat_momentum_variance == ThermostatMomentumVariance::thermal) {
        sd1 = std::sqrt(p.mu1 * p.kT());
        sd2 = std::sqrt(p.mu2 * p.kT());
    }
    // The Lambdas are delta-distributed at zero.
    return {0.0, 0.0, sd1 * rng.gaussian(), sd2 * rng.gaussian()};
}

QuantumMatrix2 initial_quantum_matrix(double Q, const ModelParams& p) {
    QuantumMatrix2 w;
    if (p.initial_state == InitialState::adiabatic_superposition) {
        // Projector onto the tilted pure state with the configured upper
        // population; coherent across the whole ensemble.
        const double p1 = p.initial_upper_fraction;
        const double c = std::sqrt(p1 * (1.0 - p1));
        w.at(1, 1) = p1;
        w.at(2, 2) = 1.0 - p1;
        w.at(1, 2) = c;
        w.at(2, 1) = c;
        return w;
    }
    // Projector onto the lowest eigenstate of -delta*sigma_z, rotated into
    // the adiabatic basis at Q: amplitudes <Phi_a|ground>.
    const double half = 0.5 * mixing_angle(Q, p);
    const double a1 = -std::sin(half);
    const double a2 = std::cos(half);
    w.at(1, 1) = a1 * a1;
    w.at(2, 2) = a2 * a2;
    w.at(1, 2) = a1 * a2;
    w.at(2, 1) = a1 * a2;
    return w;
}

InitialSample draw_initial_sample(const ModelParams& p, std::uint64_t sample_index) {
    SampleRng rng(derive_sample_seed(p.seed, sample_index));
    InitialSample s;
    s.sample_index = sample_index;
    auto [Q, P] = sample_bath(p, rng);
    const auto y = sample_thermostat(p, rng);
    s.point = {Q, P, y[0], y[1], y[2], y[3]};
    s.omega0 = initial_quantum_matrix(Q, p);
    return s;
}

} // namespace smj
