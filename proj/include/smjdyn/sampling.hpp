#pragma once

// Seeded Monte Carlo generation of the uncorrelated initial ensemble:
// a thermal draw of the harmonic mode, thermostat initial conditions, and
// the initial quantum matrix in the adiabatic basis at the sampled Q.
// Every sample owns an independent generator keyed by (master seed, index),
// so streams are identical no matter how samples are scheduled.

#include <array>
#include <cstdint>
#include <utility>

#include "smjdyn/dynamics.hpp"
#include "smjdyn/model.hpp"
#include "smjdyn/quantum_matrix.hpp"

namespace smj {

// 64-bit avalanche mix of (master_seed, sample_index). Built from bijective
// finalizer rounds, so distinct indices at a fixed master seed can never
// collide.
std::uint64_t derive_sample_seed(std::uint64_t master_seed,
                                 std::uint64_t sample_index);

// Minimal deterministic generator: splitmix64 stream with a Box-Muller
// gaussian on top. Self-contained so that draws are bit-identical across
// standard libraries.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();   // [0, 1)
    double gaussian();  // standard normal

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Draws (Q, P) from the thermal harmonic-mode density. The default form has
// P variance omega/tanh(beta*omega/2) and Q variance 1/(omega*tanh(beta*omega/2));
// the standard_wigner option halves both.
std::pair<double, double> sample_bath(const ModelParams& p, SampleRng& rng);

// Thermostat initial conditions (Lambda1, Lambda2, Pi1, Pi2): the Lambdas
// start at exactly zero; the chain momenta are gaussian with variance
// mu_K * kT (or unit variance when configured). All zeros when the
// thermostat is off.
std::array<double, 4> sample_thermostat(const ModelParams& p, SampleRng& rng);

// Initial quantum matrix in the adiabatic basis at Q. The default is the
// projector onto the lowest eigenstate of the bare two-level Hamiltonian
// (exactly diag(0, 1) at Q = 0); the adiabatic_superposition option is the
// projector onto (|1> + |2>)/sqrt(2), i.e. equal populations with maximal
// coherence. Both are Hermitian rank-1 projectors with unit trace.
QuantumMatrix2 initial_quantum_matrix(double Q, const ModelParams& p);

struct InitialSample {
    ExtendedPoint point;
    QuantumMatrix2 omega0;
    std::uint64_t sample_index = 0;
};

// Full draw for one Monte Carlo sample. Draw order is fixed: (Q, P) first,
// then the chain momenta.
InitialSample draw_initial_sample(const ModelParams& p, std::uint64_t sample_index);

} // namespace smj
