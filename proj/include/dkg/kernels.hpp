#pragma once

// Data-parallel inner loops shared by every module.
//
// Each kernel exists twice: `serial::` is the straightforward reference
// loop, `omp::` is the OpenMP version used by the library. The two must
// agree to roundoff; reductions in `omp::` use a fixed block decomposition
// so their result does not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace dkg::kernels {

using cplx = std::complex<double>;

/// Sets the OpenMP thread count used by `omp::` kernels and sweeps.
void set_threads(int count);
int threads();

namespace serial {

void scale(std::span<cplx> data, std::span<const double> symbol);
void scale_into(std::span<const cplx> in, std::span<const double> symbol, std::span<cplx> out);
void rotate(std::span<cplx> data, std::span<const cplx> phase);
void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void multiply_conj(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
/// Σ w[k]·|data[k]|²
double weighted_energy(std::span<const cplx> data, std::span<const double> weight);
/// Σ a[k]·conj(b[k])
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
/// Per-mode Klein–Gordon phase-space rotation by angle omega[k]·h.
void kg_rotate(std::span<cplx> z, std::span<cplx> z_t, std::span<const double> omega, double h);

}  // namespace serial

namespace omp {

void scale(std::span<cplx> data, std::span<const double> symbol);
void scale_into(std::span<const cplx> in, std::span<const double> symbol, std::span<cplx> out);
void rotate(std::span<cplx> data, std::span<const cplx> phase);
void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void multiply_conj(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double weighted_energy(std::span<const cplx> data, std::span<const double> weight);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
void kg_rotate(std::span<cplx> z, std::span<cplx> z_t, std::span<const double> omega, double h);

}  // namespace omp

}  // namespace dkg::kernels
