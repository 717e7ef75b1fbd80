#pragma once

// Thin RAII layer over FFTW. Plans are created once per shape and then
// only executed through the new-array interface, which FFTW guarantees
// to be thread safe; plan creation itself is serialized internally.

#include <complex>
#include <cstddef>
#include <span>

namespace dkg::fft {

using cplx = std::complex<double>;

/// Unnormalized DFT, out[k] = Σ_j in[j]·e^{∓2πijk/n}. In-place allowed.
void forward(std::span<const cplx> in, std::span<cplx> out);
void backward(std::span<const cplx> in, std::span<cplx> out);

/// Unnormalized 2D DFT over a row-major rows × cols array.
void forward_2d(std::size_t rows, std::size_t cols, std::span<const cplx> in, std::span<cplx> out);
void backward_2d(std::size_t rows, std::size_t cols, std::span<const cplx> in, std::span<cplx> out);

}  // namespace dkg::fft
