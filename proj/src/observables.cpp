#include "smjdyn/observables.hpp"

#include <algorithm>
#include <cmath>

namespace smj {

namespace {

constexpr double kTraceFloor = 1e-12;

void require_snapshot(const Ensemble& e, std::size_t k) {
    if (k >= e.times.size())
        throw IncompleteEnsemble("time index beyond recorded grid");
    for (const SampleRecord& s : e.samples)
        for (int slot = 0; slot < 3; ++slot)
            if (s.traj[slot].size() <= k)
                throw IncompleteEnsemble("sample lacks a snapshot at requested time");
}

Estimate mean_and_stderr(const std::vector<double>& v) {
    const std::size_t n = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)))};
}

// Standard error of mean(num)/mean(den) by linear error propagation with
// the sample covariance retained.
Estimate ratio_estimate(const std::vector<double>& num,
                        const std::vector<double>& den) {
    const std::size_t n = num.size();
    double mn = 0.0, md = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mn += num[i];
        md += den[i];
    }
    mn /= static_cast<double>(n);
    md /= static_cast<double>(n);
    const double r = mn / md;
    if (n < 2) return {r, 0.0};
    double vn = 0.0, vd = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dn = num[i] - mn;
        const double dd = den[i] - md;
        vn += dn * dn;
        vd += dd * dd;
        cov += dn * dd;
    }
    const double norm = static_cast<double>(n) * static_cast<double>(n - 1);
    const double var = (vn + r * r * vd - 2.0 * r * cov) / norm;
    return {r, var > 0.0 ? std::sqrt(var) / std::abs(md) : 0.0};
}

double xi11_sample(const SampleRecord& s, std::size_t k) {
    return s.omega0.at(1, 1).real() * s.traj[kSlotUpper][k].weight.real();
}

double xi22_sample(const SampleRecord& s, std::size_t k) {
    return s.omega0.at(2, 2).real() * s.traj[kSlotLower][k].weight.real();
}

std::complex<double> xi12_sample(const SampleRecord& s, std::size_t k) {
    return s.omega0.at(1, 2) * s.traj[kSlotCoherence][k].weight;
}

} // namespace

MatrixEstimate estimate_unnormalized(const Ensemble& e, std::size_t k) {
    require_snapshot(e, k);
    const std::size_t n = e.samples.size();
    std::vector<double> v11(n), v22(n), v12re(n), v12im(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SampleRecord& s = e.samples[i];
        v11[i] = xi11_sample(s, k);
        v22[i] = xi22_sample(s, k);
        const std::complex<double> c = xi12_sample(s, k);
        v12re[i] = c.real();
        v12im[i] = c.imag();
    }
    const Estimate e11 = mean_and_stderr(v11);
    const Estimate e22 = mean_and_stderr(v22);
    const Estimate e12 = mean_and_stderr(v12re);
    const Estimate e12i = mean_and_stderr(v12im);

    MatrixEstimate out;
    out.mean.at(1, 1) = e11.value;
    out.mean.at(2, 2) = e22.value;
    out.mean.at(1, 2) = {e12.value, e12i.value};
    out.mean.at(2, 1) = std::conj(out.mean.at(1, 2));
    out.stderr_[0][0] = e11.stderr_;
    out.stderr_[1][1] = e22.stderr_;
    out.stderr_[0][1] = out.stderr_[1][0] = e12.stderr_;
    return out;
}

Estimate trace_omega(const Ensemble& e, std::size_t k) {
    require_snapshot(e, k);
    std::vector<double> tr(e.samples.size());
    for (std::size_t i = 0; i < e.samples.size(); ++i)
        tr[i] = xi11_sample(e.samples[i], k) + xi22_sample(e.samples[i], k);
    return mean_and_stderr(tr);
}

MatrixEstimate estimate_normalized(const Ensemble& e, std::size_t k) {
    require_snapshot(e, k);
    const std::size_t n = e.samples.size();
    std::vector<double> v11(n), v12re(n), v12im(n), tr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SampleRecord& s = e.samples[i];
        v11[i] = xi11_sample(s, k);
        const std::complex<double> c = xi12_sample(s, k);
        v12re[i] = c.real();
        v12im[i] = c.imag();
        tr[i] = v11[i] + xi22_sample(s, k);
    }
    double tr_mean = 0.0;
    for (double t : tr) tr_mean += t;
    tr_mean /= static_cast<double>(n);
    if (!(tr_mean > kTraceFloor))
        throw VanishingTrace("estimate_normalized: ensemble trace at numerical floor");

    const Estimate r11 = ratio_estimate(v11, tr);
    const Estimate r12 = ratio_estimate(v12re, tr);
    const Estimate r12i = ratio_estimate(v12im, tr);

    MatrixEstimate out;
    out.mean.at(1, 1) = r11.value;
    out.mean.at(2, 2) = 1.0 - r11.value;  // unit trace by construction
    out.mean.at(1, 2) = {r12.value, r12i.value};
    out.mean.at(2, 1) = std::conj(out.mean.at(1, 2));
    out.stderr_[0][0] = out.stderr_[1][1] = r11.stderr_;
    out.stderr_[0][1] = out.stderr_[1][0] = r12.stderr_;
    return out;
}

Estimate population_difference(const Ensemble& e, std::size_t k) {
    require_snapshot(e, k);
    const std::size_t n = e.samples.size();
    std::vector<double> num(n), den(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SampleRecord& s = e.samples[i];
        const Mat2 sz_up = sigma_z_adiabatic(s.traj[kSlotUpper][k].Q, e.params);
        const Mat2 sz_lo = sigma_z_adiabatic(s.traj[kSlotLower][k].Q, e.params);
        const Mat2 sz_co = sigma_z_adiabatic(s.traj[kSlotCoherence][k].Q, e.params);
        num[i] = xi11_sample(s, k) * sz_up.at(1, 1) +
                 xi22_sample(s, k) * sz_lo.at(2, 2) +
                 2.0 * (xi12_sample(s, k) * sz_co.at(2, 1)).real();
        den[i] = xi11_sample(s, k) + xi22_sample(s, k);
    }
    double tr_mean = 0.0;
    for (double t : den) tr_mean += t;
    if (!(tr_mean / static_cast<double>(n) > kTraceFloor))
        throw VanishingTrace("population_difference: ensemble trace at numerical floor");
    return ratio_estimate(num, den);
}

ComplexEstimate coherence(const Ensemble& e, std::size_t k) {
    const MatrixEstimate x = estimate_normalized(e, k);
    return {x.mean.at(1, 2), x.se(1, 2)};
}

ObservableSeries trace_law_residual(const Ensemble& e) {
    if (e.times.size() < 3)
        throw InsufficientData("trace_law_residual: need at least 3 grid points");
    require_snapshot(e, e.times.size() - 1);
    const std::size_t n = e.samples.size();
    const double g = e.params.decay_enabled ? e.params.gamma : 0.0;

    ObservableSeries out;
    out.label = "trace_law_residual";
    std::vector<double> r(n);
    for (std::size_t k = 1; k + 1 < e.times.size(); ++k) {
        const double dt2 = e.times[k + 1] - e.times[k - 1];
        for (std::size_t i = 0; i < n; ++i) {
            const SampleRecord& s = e.samples[i];
            const double tr_next = xi11_sample(s, k + 1) + xi22_sample(s, k + 1);
            const double tr_prev = xi11_sample(s, k - 1) + xi22_sample(s, k - 1);
            r[i] = (tr_next - tr_prev) / dt2 + g * xi11_sample(s, k);
        }
        const Estimate est = mean_and_stderr(r);
        out.times.push_back(e.times[k]);
        out.mean.push_back(est.value);
        out.stderr_.push_back(est.stderr_);
    }
    return out;
}

Estimate window_mean_p_squared(const Ensemble& e, double t_min, double t_max) {
    require_snapshot(e, e.times.size() - 1);
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k < e.times.size(); ++k)
        if (e.times[k] >= t_min && e.times[k] <= t_max) ks.push_back(k);
    if (ks.empty())
        throw InsufficientData("window_mean_p_squared: empty time window");

    std::vector<double> v(e.samples.size());
    for (std::size_t i = 0; i < e.samples.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k : ks) {
            const double P = e.samples[i].traj[kSlotLower][k].P;
            acc += P * P;
        }
        v[i] = acc / static_cast<double>(ks.size());
    }
    return mean_and_stderr(v);
}

Spectrum fourier_spectrum(const ObservableSeries& s, double t_min, FftWindow window) {
    std::vector<double> x;
    double dt = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        if (s.times[k] < t_min - 1e-12) continue;
        if (!x.empty() && dt == 0.0) dt = s.times[k] - prev;
        prev = s.times[k];
        x.push_back(s.mean[k]);
    }
    const std::size_t n = x.size();
    if (n < 16)
        throw InsufficientData("fourier_spectrum: fewer than 16 points past t_min");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : x) v -= mean;

    if (window == FftWindow::hann) {
        for (std::size_t j = 0; j < n; ++j)
            x[j] *= 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(j) /
                                          static_cast<double>(n - 1)));
    }

    Spectrum sp;
    const std::size_t n_bins = n / 2 + 1;
    sp.omega.reserve(n_bins);
    sp.magnitude.reserve(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        double re = 0.0, im = 0.0;
        const double w = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double ph = w * static_cast<double>(j);
            re += x[j] * std::cos(ph);
            im -= x[j] * std::sin(ph);
        }
        sp.omega.push_back(w / dt);
        sp.magnitude.push_back(std::hypot(re, im));
    }
    return sp;
}

double peak_magnitude(const Spectrum& sp, double lo, double hi) {
    double peak = 0.0;
    for (std::size_t k = 0; k < sp.omega.size(); ++k)
        if (sp.omega[k] > lo && sp.omega[k] <= hi)
            peak = std::max(peak, sp.magnitude[k]);
    return peak;
}

} // namespace smj
