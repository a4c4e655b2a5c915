#pragma once

#include <complex>
#include <span>
#include <vector>

namespace predbound::detail {

/// Forward real-to-complex DFT of length `in.size()`; returns size/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> in);

/// Inverse of rfft for a length-`n` signal, scaled so irfft(rfft(x)) == x.
std::vector<double> irfft(std::span<const std::complex<double>> in, std::size_t n);

}  // namespace predbound::detail
