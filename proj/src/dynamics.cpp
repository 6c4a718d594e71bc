#include "smjdyn/dynamics.hpp"

#include <cmath>
#include <string>

namespace smj {

ExtendedPoint extended_vector_field(const ExtendedPoint& x, double mean_force,
                                    const ModelParams& p) {
    ExtendedPoint d;
    d.Q = x.P;
    if (!p.nhc_enabled) {
        d.P = mean_force;
        return d;
    }
    const double kT = p.kT();
    d.P = mean_force - x.P * x.Pi1 / p.mu1;
    d.Lambda1 = x.Pi1 / p.mu1;
    d.Lambda2 = x.Pi2 / p.mu2;
    d.Pi1 = x.P * x.P - kT - x.Pi1 * x.Pi2 / p.mu2;
    d.Pi2 = x.Pi1 * x.Pi1 / p.mu1 - kT;
    return d;
}

double compressibility(const ExtendedPoint& x, const ModelParams& p) {
    if (!p.nhc_enabled) return 0.0;
    return -x.Pi1 / p.mu1 - x.Pi2 / p.mu2;
}

namespace {

// Palindromic sweep of the thermostat variables over a time d, holding Q
// fixed: chain-momentum kicks and scalings wrap the Lambda drift and the
// scaling of the physical momentum. Every factor is the exact flow of one
// term of the chain Liouvillian, so the sweep is time-reversible.
void chain_sweep(ExtendedPoint& y, double d, const ModelParams& p) {
    const double kT = p.kT();
    y.Pi2 += 0.5 * d * (y.Pi1 * y.Pi1 / p.mu1 - kT);
    y.Pi1 *= std::exp(-0.25 * d * y.Pi2 / p.mu2);
    y.Pi1 += 0.5 * d * (y.P * y.P - kT);
    y.Pi1 *= std::exp(-0.25 * d * y.Pi2 / p.mu2);

    y.Lambda1 += d * y.Pi1 / p.mu1;
    y.Lambda2 += d * y.Pi2 / p.mu2;
    y.P *= std::exp(-d * y.Pi1 / p.mu1);

    y.Pi1 *= std::exp(-0.25 * d * y.Pi2 / p.mu2);
    y.Pi1 += 0.5 * d * (y.P * y.P - kT);
    y.Pi1 *= std::exp(-0.25 * d * y.Pi2 / p.mu2);
    y.Pi2 += 0.5 * d * (y.Pi1 * y.Pi1 / p.mu1 - kT);
}

// Fourth-order Suzuki fractal of the sweep, applied twice; the chain is the
// stiff part of the flow at high temperature, and this composition keeps the
// conserved-quantity error several orders below the step budget.
void thermostat_half(ExtendedPoint& y, double half, const ModelParams& p) {
    static const double s1 = 1.0 / (4.0 - std::pow(4.0, 1.0 / 3.0));
    const double w[5] = {s1, s1, 1.0 - 4.0 * s1, s1, s1};
    for (int cycle = 0; cycle < 2; ++cycle)
        for (double wk : w) chain_sweep(y, 0.5 * wk * half, p);
}

} // namespace

ExtendedPoint step(const ExtendedPoint& x, const AdiabaticPair& pair,
                   const ModelParams& p) {
    ExtendedPoint y = x;
    const double tau = p.tau;
    if (p.nhc_enabled) thermostat_half(y, 0.5 * tau, p);

    y.P += 0.5 * tau * mean_force(y.Q, pair, p);
    y.Q += tau * y.P;
    y.P += 0.5 * tau * mean_force(y.Q, pair, p);

    if (p.nhc_enabled) thermostat_half(y, 0.5 * tau, p);

    if (!y.finite())
        throw NonFiniteState("step: non-finite coordinate after integration");
    return y;
}

double conserved_energy(const ExtendedPoint& x, const AdiabaticPair& pair,
                        const ModelParams& p) {
    const double e_mean = 0.5 * (surface_energy(x.Q, pair.alpha, p) +
                                 surface_energy(x.Q, pair.alpha_prime, p));
    double h = 0.5 * x.P * x.P + e_mean;
    if (p.nhc_enabled) {
        const double kT = p.kT();
        h += 0.5 * x.Pi1 * x.Pi1 / p.mu1 + 0.5 * x.Pi2 * x.Pi2 / p.mu2;
        h += kT * (x.Lambda1 + x.Lambda2);
    }
    return h;
}

std::complex<double> weight_increment(const ExtendedPoint& x_mid,
                                      const AdiabaticPair& pair,
                                      const ModelParams& p) {
    const double w = bohr_frequency(x_mid.Q, pair, p);
    const double g = decay_rate(pair, p);
    const double k = compressibility(x_mid, p);
    return std::exp(std::complex<double>(-(g + k) * p.tau, -w * p.tau));
}

namespace {

std::vector<ElementTrajectory> propagate_impl(const ExtendedPoint& x0,
                                              const AdiabaticPair& pair,
                                              const ModelParams& p,
                                              std::int64_t record_stride,
                                              bool with_compressibility) {
    if (record_stride < 1) record_stride = 1;
    if (!x0.finite())
        throw NonFiniteState("propagate_element: non-finite initial point");

    const double g = decay_rate(pair, p);

    std::vector<ElementTrajectory> out;
    out.reserve(static_cast<std::size_t>(p.n_step / record_stride) + 2);
    ExtendedPoint x = x0;
    std::complex<double> weight = {1.0, 0.0};
    out.push_back({pair, x, weight, 0.0});

    for (std::int64_t j = 1; j <= p.n_step; ++j) {
        const ExtendedPoint x1 = step(x, pair, p);

        const double q_mid = 0.5 * (x.Q + x1.Q);
        const double w = bohr_frequency(q_mid, pair, p);
        weight *= std::exp(std::complex<double>(-g * p.tau, -w * p.tau));
        if (with_compressibility && p.nhc_enabled) {
            // exp(-integral kappa dt) over this step, taken exactly from the
            // thermostat drift so the weight telescopes with Lambda.
            weight *= std::exp((x1.Lambda1 - x.Lambda1) + (x1.Lambda2 - x.Lambda2));
        }

        x = x1;
        if (j % record_stride == 0 || j == p.n_step)
            out.push_back({pair, x, weight, static_cast<double>(j) * p.tau});
    }
    return out;
}

} // namespace

std::vector<ElementTrajectory> propagate_element(const ExtendedPoint& x0,
                                                 const AdiabaticPair& pair,
                                                 const ModelParams& p,
                                                 std::int64_t record_stride) {
    return propagate_impl(x0, pair, p, record_stride, true);
}

std::vector<ElementTrajectory> propagate_element_for_averages(
    const ExtendedPoint& x0, const AdiabaticPair& pair, const ModelParams& p,
    std::int64_t record_stride) {
    return propagate_impl(x0, pair, p, record_stride, false);
}

} // namespace smj
