#include "dkg/kernels.hpp"

#include <omp.h>

#include <array>
#include <cassert>
#include <cmath>

namespace dkg::kernels {

namespace {

// Loops shorter than this stay on one thread; fork/join costs more.
constexpr std::ptrdiff_t kParallelMin = 1 << 14;
// Reductions always split into this many blocks, whatever the thread count.
constexpr std::ptrdiff_t kBlocks = 64;

int g_threads = 1;

}  // namespace

void set_threads(int count) {
  g_threads = count < 1 ? 1 : count;
  omp_set_num_threads(g_threads);
}

int threads() { return g_threads; }

namespace serial {

void scale(std::span<cplx> data, std::span<const double> symbol) {
  assert(data.size() == symbol.size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= symbol[k];
}

void scale_into(std::span<const cplx> in, std::span<const double> symbol, std::span<cplx> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] * symbol[k];
}

void rotate(std::span<cplx> data, std::span<const cplx> phase) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= phase[k];
}

void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
}

void multiply_conj(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * std::conj(b[k]);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

double weighted_energy(std::span<const cplx> data, std::span<const double> weight) {
  double acc = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) acc += weight[k] * std::norm(data[k]);
  return acc;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * std::conj(b[k]);
  return acc;
}

void kg_rotate(std::span<cplx> z, std::span<cplx> z_t, std::span<const double> omega, double h) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double w = omega[k];
    const double c = std::cos(w * h);
    const double s = std::sin(w * h);
    const cplx a = z[k];
    const cplx b = z_t[k];
    z[k] = c * a + (s / w) * b;
    z_t[k] = -w * s * a + c * b;
  }
}

}  // namespace serial

namespace omp {

namespace {

std::ptrdiff_t len(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

void scale(std::span<cplx> data, std::span<const double> symbol) {
  const auto n = len(data.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) data[k] *= symbol[k];
}

void scale_into(std::span<const cplx> in, std::span<const double> symbol, std::span<cplx> out) {
  const auto n = len(in.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = in[k] * symbol[k];
}

void rotate(std::span<cplx> data, std::span<const cplx> phase) {
  const auto n = len(data.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) data[k] *= phase[k];
}

void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  const auto n = len(a.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = a[k] * b[k];
}

void multiply_conj(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  const auto n = len(a.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = a[k] * std::conj(b[k]);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const auto n = len(x.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

double weighted_energy(std::span<const cplx> data, std::span<const double> weight) {
  const auto n = len(data.size());
  std::array<double, kBlocks> partial{};
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t b = 0; b < kBlocks; ++b) {
    const std::ptrdiff_t lo = n * b / kBlocks;
    const std::ptrdiff_t hi = n * (b + 1) / kBlocks;
    double acc = 0.0;
    for (std::ptrdiff_t k = lo; k < hi; ++k) acc += weight[k] * std::norm(data[k]);
    partial[b] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  const auto n = len(a.size());
  std::array<cplx, kBlocks> partial{};
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t blk = 0; blk < kBlocks; ++blk) {
    const std::ptrdiff_t lo = n * blk / kBlocks;
    const std::ptrdiff_t hi = n * (blk + 1) / kBlocks;
    cplx acc = 0.0;
    for (std::ptrdiff_t k = lo; k < hi; ++k) acc += a[k] * std::conj(b[k]);
    partial[blk] = acc;
  }
  cplx total = 0.0;
  for (const cplx& p : partial) total += p;
  return total;
}

void kg_rotate(std::span<cplx> z, std::span<cplx> z_t, std::span<const double> omega, double h) {
  const auto n = len(z.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const double w = omega[k];
    const double c = std::cos(w * h);
    const double s = std::sin(w * h);
    const cplx a = z[k];
    const cplx b = z_t[k];
    z[k] = c * a + (s / w) * b;
    z_t[k] = -w * s * a + c * b;
  }
}

}  // namespace omp

}  // namespace dkg::kernels
