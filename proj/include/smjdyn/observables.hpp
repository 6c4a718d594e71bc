#pragma once

// Ensemble estimators for the reported quantities: unnormalized and
// normalized reduced density matrices, trace, coherence, population
// difference, the trace-law residual and discrete Fourier spectra.
// All reductions run in sample-index order, so results do not depend on
// how the samples were produced.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "smjdyn/dynamics.hpp"
#include "smjdyn/model.hpp"
#include "smjdyn/quantum_matrix.hpp"

namespace smj {

// Snapshot of one element trajectory at a recorded time. The weight is the
// statistical one of initial-condition sampling (Bohr phase and decay; the
// compressibility factor of the density cancels against the flow Jacobian).
struct Snapshot {
    double Q = 0.0;
    double P = 0.0;
    std::complex<double> weight = {1.0, 0.0};
};

// Slot order of the three trajectories spawned per sample.
enum PairSlot : int {
    kSlotUpper = 0,      // element (1,1), upper-surface dynamics
    kSlotLower = 1,      // element (2,2), lower-surface dynamics
    kSlotCoherence = 2,  // element (1,2), mean-surface dynamics
};

struct SampleRecord {
    QuantumMatrix2 omega0;
    std::vector<Snapshot> traj[3];
};

struct Ensemble {
    ModelParams params;
    std::int64_t record_stride = 10;
    std::vector<double> times;          // recorded grid, strictly increasing
    std::vector<SampleRecord> samples;  // completed samples only
};

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

struct ComplexEstimate {
    std::complex<double> value = {0.0, 0.0};
    double stderr_ = 0.0;  // standard error of the real part
};

struct MatrixEstimate {
    QuantumMatrix2 mean;
    double stderr_[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    double se(int a, int ap) const { return stderr_[a - 1][ap - 1]; }
};

// Time grid with per-point statistics; complex series carry an imaginary
// part alongside the real one.
struct ObservableSeries {
    std::string label;
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> imag;  // empty for real series
    std::vector<double> stderr_;

    bool complex_valued() const { return !imag.empty(); }
};

// Unnormalized reduced density matrix at recorded time index k:
// element-wise sample mean of omega0_aa' * weight_aa'(t); the (2,1) entry is
// the conjugate of (1,2) by construction. Throws IncompleteEnsemble when a
// sample has no snapshot at that index.
MatrixEstimate estimate_unnormalized(const Ensemble& e, std::size_t k);

// Trace of the unnormalized matrix with its own sample-level error.
Estimate trace_omega(const Ensemble& e, std::size_t k);

// Normalized matrix; diagonal entries sum to one exactly. Throws
// VanishingTrace when the trace estimate is at or below the numerical floor.
MatrixEstimate estimate_normalized(const Ensemble& e, std::size_t k);

// Lead-basis population difference: each element's contribution is weighted
// by sigma_z rotated into the adiabatic basis at that trajectory's current Q,
// all divided by the trace.
Estimate population_difference(const Ensemble& e, std::size_t k);

// Normalized coherence, the (1,2) element of the normalized matrix.
ComplexEstimate coherence(const Ensemble& e, std::size_t k);

// Residual of d/dt Tr + gamma * Xi_11 on the interior of the recorded grid
// (central differences), formed per sample and then averaged so the quoted
// error accounts for correlations. Needs at least three grid points.
ObservableSeries trace_law_residual(const Ensemble& e);

// Mean of P^2 over samples and recorded times in [t_min, t_max], taken on
// the lower-surface trajectory; the error is the sample scatter of the
// per-sample time averages.
Estimate window_mean_p_squared(const Ensemble& e, double t_min, double t_max);

struct Spectrum {
    std::vector<double> omega;      // angular frequency bins
    std::vector<double> magnitude;  // DFT magnitude per bin
};

// Magnitude spectrum of the series restricted to t >= t_min: the mean over
// the window is removed, then a plain real DFT is taken (Hann window
// optional). Throws InsufficientData with fewer than 16 points.
Spectrum fourier_spectrum(const ObservableSeries& s, double t_min,
                          FftWindow window = FftWindow::none);

// Largest magnitude among bins with omega in (lo, hi].
double peak_magnitude(const Spectrum& sp, double lo, double hi);

} // namespace smj
