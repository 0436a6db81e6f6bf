#pragma once

#include <complex>
#include <vector>

#include "nsv/fields/grid.hpp"

namespace nsv::fft {

using Complex = std::complex<double>;

// In-place transforms backed by FFTW. Plans are cached per shape and shared
// between threads. Forward uses e^{-2 pi i k j / n}.

// Row-major multi-dimensional transform, axis 0 slowest. The inverse is
// normalized by the total sample count so that inverse(forward(x)) == x.
void transform(std::vector<Complex>& data, const Index3& shape, int dims, bool inverse);

// Transform along a single axis only. The inverse is normalized by shape[axis].
void transform_axis(std::vector<Complex>& data, const Index3& shape, int axis, bool inverse);

// Signed integer wavenumber of FFT bin `index` on an axis of n samples.
// The Nyquist bin maps to -n/2.
inline int signed_mode(int index, int n) { return index < n / 2 ? index : index - n; }

}  // namespace nsv::fft
