#pragma once

#include <complex>
#include <vector>

namespace roughwave {

/// Forward DFT of a real signal, half spectrum of length n/2 + 1, unnormalized.
std::vector<std::complex<double>> RealFft(const std::vector<double>& x);

/// Inverse of RealFft, including the 1/n factor.
std::vector<double> InverseRealFft(const std::vector<std::complex<double>>& X,
                                   int n);

/// DCT-II and its exact transpose (FFTW REDFT10 / REDFT01), unnormalized.
std::vector<double> Dct2(const std::vector<double>& x);
std::vector<double> Dct3(const std::vector<double>& x);

}  // namespace roughwave
