#pragma once

// Extended-phase-space dynamics of one trajectory: the harmonic mode (Q, P)
// plus a two-link Nose-Hoover chain (Lambda_1, Lambda_2, Pi_1, Pi_2), driven
// by the mean Hellmann-Feynman force of the density-matrix element being
// carried. Each element accumulates a complex weight
//   exp(-integral (i*omega_aa' + gamma_aa' + kappa) dt)
// built from the Bohr phase, the sink rate and the phase-space
// compressibility.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "smjdyn/model.hpp"

namespace smj {

struct ExtendedPoint {
    double Q = 0.0;
    double P = 0.0;
    double Lambda1 = 0.0;
    double Lambda2 = 0.0;
    double Pi1 = 0.0;
    double Pi2 = 0.0;

    bool finite() const {
        return std::isfinite(Q) && std::isfinite(P) && std::isfinite(Lambda1) &&
               std::isfinite(Lambda2) && std::isfinite(Pi1) && std::isfinite(Pi2);
    }
};

// Time derivative of the extended point under the quasi-Hamiltonian flow,
// returned in the same layout. With the thermostat disabled only (Q, P)
// move. mean_force is the force of the propagated pair at x.Q.
ExtendedPoint extended_vector_field(const ExtendedPoint& x, double mean_force,
                                    const ModelParams& p);

// Divergence of the flow, kappa = -Pi_1/mu_1 - Pi_2/mu_2 (one thermalized
// mode). Zero when the thermostat is off.
double compressibility(const ExtendedPoint& x, const ModelParams& p);

// One time step tau: half thermostat sweep, velocity-Verlet core on the
// pair's mean surface, half thermostat sweep. Second order, and exactly
// time-reversible in the Hamiltonian limit. Throws NonFiniteState if any
// output coordinate is non-finite.
ExtendedPoint step(const ExtendedPoint& x, const AdiabaticPair& pair,
                   const ModelParams& p);

// Conserved quantity of the exact flow:
// P^2/2 + (E_alpha + E_alpha')/2 + sum_K Pi_K^2/(2 mu_K) + kT (Lambda_1 + Lambda_2).
// Reduces to the mechanical energy when the thermostat is off.
double conserved_energy(const ExtendedPoint& x, const AdiabaticPair& pair,
                        const ModelParams& p);

// One-step weight factor exp(-(i*omega_aa'(Q) + gamma_aa' + kappa(x)) * tau)
// with everything evaluated at the supplied midpoint state.
std::complex<double> weight_increment(const ExtendedPoint& x_mid,
                                      const AdiabaticPair& pair,
                                      const ModelParams& p);

struct ElementTrajectory {
    AdiabaticPair pair;
    ExtendedPoint point;
    std::complex<double> weight = {1.0, 0.0};
    double elapsed = 0.0;
};

// Propagates the (alpha, alpha') element for n_step steps from x0 and records
// a snapshot every record_stride steps (the initial and final states always
// included). The Bohr/decay part of the exponent uses the midpoint of each
// step; the compressibility part is accumulated as exp(dLambda_1 + dLambda_2),
// the exact step integral of -kappa along the discrete trajectory.
std::vector<ElementTrajectory> propagate_element(const ExtendedPoint& x0,
                                                 const AdiabaticPair& pair,
                                                 const ModelParams& p,
                                                 std::int64_t record_stride);

// Same trajectory and snapshot grid, but the weight is the one a phase-space
// average sees when the integral is evaluated at sampled initial conditions:
// the flow Jacobian exp(+integral kappa dt) cancels the compressibility
// factor of the density exactly, leaving only the Bohr phase and the decay.
std::vector<ElementTrajectory> propagate_element_for_averages(
    const ExtendedPoint& x0, const AdiabaticPair& pair, const ModelParams& p,
    std::int64_t record_stride);

} // namespace smj
