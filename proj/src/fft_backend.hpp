// Thin RAII wrapper over FFTW complex transforms. Plan creation/destruction
// is serialized (FFTW's planner is not thread-safe); execution is not.
#pragma once

#include <complex>
#include <vector>

namespace tfld::fft {

// In-place c2c transform over a row-major array of the given dimensions.
// sign < 0: forward (e^{-i...}); sign > 0: backward (e^{+i...}), unnormalized.
void transform(std::vector<std::complex<double>>& data, const std::vector<int>& dims, int sign);

inline void forward(std::vector<std::complex<double>>& data, const std::vector<int>& dims) {
    transform(data, dims, -1);
}
inline void backward(std::vector<std::complex<double>>& data, const std::vector<int>& dims) {
    transform(data, dims, +1);
}

// 2-D real transforms in FFTW's half-spectrum layout: m1 rows of m2/2+1
// complex entries. backward_c2r consumes its input.
std::vector<std::complex<double>> forward_r2c(const std::vector<double>& data, int m1, int m2);
std::vector<double> backward_c2r(std::vector<std::complex<double>>& half, int m1, int m2);

// Smallest 5-smooth (factors 2, 3, 5) integer >= n; FFT-friendly padding.
int next_fast_size(int n);

}  // namespace tfld::fft
