#pragma once

// Thin wrapper over FFTW real transforms with per-thread plan caches.

#include <complex>
#include <span>
#include <vector>

namespace qlwave::detail {

/// Half spectrum c_0..c_K (K < n/2 + 1 not required; extra modes must be
/// zero-padded by the caller) to n real samples: x_k = Σ_j c_j e^{2πijk/n}
/// with c_{-j} = conj(c_j).
void half_spectrum_to_grid(std::span<const std::complex<double>> half, int n,
                           std::span<double> out);

/// n real samples to the half spectrum (1/n)·Σ_k x_k e^{-2πijk/n}, j = 0..n/2.
void grid_to_half_spectrum(std::span<const double> values, std::span<std::complex<double>> out);

}  // namespace qlwave::detail
