#pragma once

#include <complex>

namespace smj {

// 2x2 complex matrix in the adiabatic basis, indexed 1-based like the
// adiabatic pairs: at(1,1) is the upper-state population entry.
struct QuantumMatrix2 {
    std::complex<double> m[2][2] = {{{0.0, 0.0}, {0.0, 0.0}},
                                    {{0.0, 0.0}, {0.0, 0.0}}};

    std::complex<double>& at(int a, int ap) { return m[a - 1][ap - 1]; }
    std::complex<double> at(int a, int ap) const { return m[a - 1][ap - 1]; }

    std::complex<double> trace() const { return m[0][0] + m[1][1]; }

    QuantumMatrix2 multiply(const QuantumMatrix2& o) const {
        QuantumMatrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
        return r;
    }
};

} // namespace smj
