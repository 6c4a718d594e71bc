#pragma once

// Closed-form layer of the junction model: a two-level system (the leads)
// coupled to one harmonic mode through -c*Q*sigma_x, with a phenomenological
// probability sink attached to the upper adiabatic state. Everything here is
// an analytic function of the mode coordinate Q; no iterative solvers.

#include <cstdint>
#include <string>

#include "smjdyn/errors.hpp"

namespace smj {

enum class BathDistribution { as_printed, standard_wigner };
enum class ThermostatMomentumVariance { thermal, unit };
enum class InitialState { diabatic_ground, adiabatic_superposition };
enum class FftWindow { none, hann };

// All physical and numerical constants, in adimensional units
// (hbar = k_B = 1, unit mass for the harmonic mode).
struct ModelParams {
    double delta = 1.0;         // two-level splitting
    double omega = 1.0 / 3.0;   // harmonic mode angular frequency
    double coupling = 0.007;    // mode / two-level coupling strength c
    double gamma = 0.1;         // sink strength
    double beta = 0.005;        // inverse temperature, k_B T = 1/beta
    double mu1 = 1.0;           // thermostat inertia, first chain link
    double mu2 = 1.0;           // thermostat inertia, second chain link
    double tau = 0.005;         // time step
    std::int64_t n_step = 10000;
    std::int64_t n_mcs = 2500;  // Monte Carlo sample count
    std::uint64_t seed = 42;
    bool nhc_enabled = false;
    bool decay_enabled = false;

    BathDistribution bath_distribution = BathDistribution::as_printed;
    ThermostatMomentumVariance thermostat_momentum_variance =
        ThermostatMomentumVariance::thermal;
    InitialState initial_state = InitialState::diabatic_ground;
    // Upper-state population of the adiabatic_superposition state,
    // cos(eta)|2> + sin(eta)|1> with sin^2(eta) = initial_upper_fraction.
    double initial_upper_fraction = 0.5;
    FftWindow fft_window = FftWindow::none;

    double kT() const { return 1.0 / beta; }

    // Throws ConfigError naming the violated constraint.
    void validate() const;
};

// Adiabatic index convention, fixed once and used everywhere:
// state 1 = upper surface (the one in contact with the sink),
// state 2 = lower surface.
inline constexpr int kUpperSurface = 1;
inline constexpr int kLowerSurface = 2;

struct AdiabaticPair {
    int alpha = 1;
    int alpha_prime = 1;

    bool diagonal() const { return alpha == alpha_prime; }
};

inline AdiabaticPair pair_upper() { return {kUpperSurface, kUpperSurface}; }
inline AdiabaticPair pair_lower() { return {kLowerSurface, kLowerSurface}; }
inline AdiabaticPair pair_coherence() { return {kUpperSurface, kLowerSurface}; }

// Small real 2x2 matrix with the same 1-based index convention as the
// adiabatic pairs: at(1,1) is the upper-state entry.
struct Mat2 {
    double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    double& at(int a, int ap) { return m[a - 1][ap - 1]; }
    double at(int a, int ap) const { return m[a - 1][ap - 1]; }

    double trace() const { return m[0][0] + m[1][1]; }
    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

struct SurfaceEnergies {
    double lower = 0.0;
    double upper = 0.0;
};

// Two-level Hamiltonian at frozen Q (kinetic term of the mode excluded):
// -delta*sigma_z - c*Q*sigma_x + (omega^2 Q^2 / 2) * identity,
// written in the diabatic (lead) basis.
Mat2 diabatic_hamiltonian(double Q, const ModelParams& p);

// Closed-form eigenvalues of diabatic_hamiltonian, sorted ascending:
// E_{-,+}(Q) = omega^2 Q^2 / 2 -/+ sqrt(delta^2 + c^2 Q^2).
SurfaceEnergies adiabatic_energies(double Q, const ModelParams& p);

// Energy of one adiabatic surface; alpha follows the index convention above.
double surface_energy(double Q, int alpha, const ModelParams& p);

// Rotation angle of the adiabatic eigenbasis, tan(theta) = c*Q/delta,
// theta in (-pi/2, pi/2). Smooth in Q, so the basis never flips sign.
double mixing_angle(double Q, const ModelParams& p);

// Orthogonal eigenbasis of diabatic_hamiltonian; column a (1-based) is the
// adiabatic state a expressed in the diabatic basis.
Mat2 adiabatic_basis(double Q, const ModelParams& p);

// Hellmann-Feynman force F_alpha = -dE_alpha/dQ in closed form.
double hellmann_feynman_force(double Q, int alpha, const ModelParams& p);

// (F_alpha + F_alpha')/2, the force felt by the trajectory carrying the
// (alpha, alpha') density-matrix element.
double mean_force(double Q, const AdiabaticPair& pair, const ModelParams& p);

// Adiabatic coupling <Phi_1|d/dQ Phi_2> = c*delta / (2(delta^2 + c^2 Q^2));
// the (2,1) element is its negative.
double coupling_vector(double Q, const ModelParams& p);

// Momentum variation associated with a surface jump,
// (E_alpha - E_beta) * C_ab / (P * C_ab). Throws DegenerateJump when the
// denominator vanishes (P = 0 or zero coupling).
double momentum_shift(double Q, double P, const AdiabaticPair& pair,
                      const ModelParams& p);

// E_alpha(Q) - E_alpha'(Q); zero for diagonal pairs.
double bohr_frequency(double Q, const AdiabaticPair& pair, const ModelParams& p);

// Element decay rate gamma_aa' = Gamma_aa + Gamma_a'a' for the sink operator
// (gamma/2) * diag(1, 0) in the adiabatic basis. Zero when decay is disabled.
double decay_rate(const AdiabaticPair& pair, const ModelParams& p);

// The lead population-difference operator sigma_z rotated into the adiabatic
// basis at Q. Real symmetric, trace 0, determinant -1.
Mat2 sigma_z_adiabatic(double Q, const ModelParams& p);

} // namespace smj
