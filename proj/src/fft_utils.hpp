#pragma once

#include <complex>
#include <cstddef>

// Thin wrapper over FFTW: cached in-place 2-D complex plans keyed by grid
// side, plus thread-local FFTW-aligned scratch. Plan creation/destruction is
// serialized internally (FFTW planning is not thread-safe); execution is.
namespace tvdeblur::fft {

// Unnormalized in-place transforms of an n*n complex grid.
void forward2d(int n, std::complex<double>* buf);
void inverse2d(int n, std::complex<double>* buf);

// Thread-local grow-only scratch with FFTW alignment; invalidated by the next
// call with a larger count on the same thread.
std::complex<double>* scratch(std::size_t count);
std::complex<double>* scratch2(std::size_t count);

}  // namespace tvdeblur::fft
