#include "smjdyn/model.hpp"

#include <cmath>

namespace smj {

void ModelParams::validate() const {
    if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
    if (!(omega > 0.0)) throw ConfigError("omega must be > 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
    if (!(mu1 > 0.0)) throw ConfigError("mu1 must be > 0");
    if (!(mu2 > 0.0)) throw ConfigError("mu2 must be > 0");
    if (!(tau > 0.0)) throw ConfigError("tau must be > 0");
    if (n_step < 1) throw ConfigError("n_step must be >= 1");
    if (n_mcs < 1) throw ConfigError("n_mcs must be >= 1");
    if (!(initial_upper_fraction >= 0.0 && initial_upper_fraction <= 1.0))
        throw ConfigError("initial_upper_fraction must be in [0, 1]");
}

Mat2 diabatic_hamiltonian(double Q, const ModelParams& p) {
    const double shift = 0.5 * p.omega * p.omega * Q * Q;
    Mat2 h;
    h.m[0][0] = -p.delta + shift;
    h.m[1][1] = p.delta + shift;
    h.m[0][1] = h.m[1][0] = -p.coupling * Q;
    return h;
}

SurfaceEnergies adiabatic_energies(double Q, const ModelParams& p) {
    const double shift = 0.5 * p.omega * p.omega * Q * Q;
    const double cq = p.coupling * Q;
    const double gap_half = std::sqrt(p.delta * p.delta + cq * cq);
    return {shift - gap_half, shift + gap_half};
}

double surface_energy(double Q, int alpha, const ModelParams& p) {
    const SurfaceEnergies e = adiabatic_energies(Q, p);
    return alpha == kUpperSurface ? e.upper : e.lower;
}

double mixing_angle(double Q, const ModelParams& p) {
    return std::atan(p.coupling * Q / p.delta);
}

Mat2 adiabatic_basis(double Q, const ModelParams& p) {
    const double half = 0.5 * mixing_angle(Q, p);
    const double s = std::sin(half);
    const double c = std::cos(half);
    // Upper state (-s, c), lower state (c, s); both smooth in Q and
    // reducing to the diabatic basis vectors at Q = 0.
    Mat2 u;
    u.m[0][0] = -s;
    u.m[1][0] = c;
    u.m[0][1] = c;
    u.m[1][1] = s;
    return u;
}

double hellmann_feynman_force(double Q, int alpha, const ModelParams& p) {
    const double cq = p.coupling * Q;
    const double gap_half = std::sqrt(p.delta * p.delta + cq * cq);
    const double tilt = p.coupling * cq / gap_half; // d/dQ sqrt(delta^2+c^2Q^2)
    const double harmonic = -p.omega * p.omega * Q;
    return alpha == kUpperSurface ? harmonic - tilt : harmonic + tilt;
}

double mean_force(double Q, const AdiabaticPair& pair, const ModelParams& p) {
    if (pair.diagonal()) return hellmann_feynman_force(Q, pair.alpha, p);
    return 0.5 * (hellmann_feynman_force(Q, pair.alpha, p) +
                  hellmann_feynman_force(Q, pair.alpha_prime, p));
}

double coupling_vector(double Q, const ModelParams& p) {
    const double cq = p.coupling * Q;
    return p.coupling * p.delta / (2.0 * (p.delta * p.delta + cq * cq));
}

double momentum_shift(double Q, double P, const AdiabaticPair& pair,
                      const ModelParams& p) {
    // Off-diagonal coupling element with the antisymmetry C_21 = -C_12.
    double c_ab = coupling_vector(Q, p);
    if (pair.alpha > pair.alpha_prime) c_ab = -c_ab;
    const double denom = P * c_ab;
    if (denom == 0.0)
        throw DegenerateJump("momentum_shift: P * C vanishes, jump direction undefined");
    const double de = surface_energy(Q, pair.alpha, p) -
                      surface_energy(Q, pair.alpha_prime, p);
    return de * c_ab / denom;
}

double bohr_frequency(double Q, const AdiabaticPair& pair, const ModelParams& p) {
    if (pair.diagonal()) return 0.0;
    return surface_energy(Q, pair.alpha, p) -
           surface_energy(Q, pair.alpha_prime, p);
}

double decay_rate(const AdiabaticPair& pair, const ModelParams& p) {
    if (!p.decay_enabled) return 0.0;
    // Sink operator (gamma/2) diag(1,0): only the upper state decays.
    const double g1 = pair.alpha == kUpperSurface ? 0.5 * p.gamma : 0.0;
    const double g2 = pair.alpha_prime == kUpperSurface ? 0.5 * p.gamma : 0.0;
    return g1 + g2;
}

Mat2 sigma_z_adiabatic(double Q, const ModelParams& p) {
    const double theta = mixing_angle(Q, p);
    Mat2 sz;
    sz.m[0][0] = -std::cos(theta);
    sz.m[1][1] = std::cos(theta);
    sz.m[0][1] = sz.m[1][0] = -std::sin(theta);
    return sz;
}

} // namespace smj
