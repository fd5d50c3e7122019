#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rosctl::detail {

// Forward complex DFT of length data.size(), in place. Plans are cached per length and
// shared across threads; execution is re-entrant.
void fft_forward(std::vector<std::complex<double>>& data);

}  // namespace rosctl::detail
