#pragma once

#include <complex>
#include <vector>

namespace gaplab::detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 transform.  Size must be a power of two.
/// Forward uses kernel exp(-i 2 pi j k / n); inverse applies the conjugate
/// kernel and the 1/n scale, so inverse(forward(x)) == x.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace gaplab::detail
