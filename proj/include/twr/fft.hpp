#pragma once

#include <complex>
#include <vector>

#include "twr/common.hpp"

namespace twr {

// In-place iterative radix-2 Cooley-Tukey. All transform sizes in the
// pipeline are powers of two (1024 fast-time, 128 STFT window).
inline void fft_inplace(std::complex<double>* x, std::size_t n, bool inverse = false) {
    if (n == 0 || (n & (n - 1)) != 0) throw ShapeError("fft: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) x[i] *= inv;
    }
}

inline std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x, bool inverse = false) {
    fft_inplace(x.data(), x.size(), inverse);
    return x;
}

}  // namespace twr
