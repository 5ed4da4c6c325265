// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace semgtok::detail {

// In-place iterative radix-2 FFT. Size must be a power of two. Only small
// power-of-two transforms are needed here (periodograms of short windows),
// so this stays dependency-free and bit-reproducible.
void fft_radix2(std::vector<std::complex<double>>& data);

bool is_power_of_two(std::size_t n);

} // namespace semgtok::detail
