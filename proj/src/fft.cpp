#include "dkg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace dkg::fft {

namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// (rows, cols, sign); rows == 0 marks a 1D plan.
using PlanKey = std::tuple<std::size_t, std::size_t, int>;

std::mutex g_plan_mutex;
std::map<PlanKey, Plan>& plan_cache() {
  static std::map<PlanKey, Plan> cache;
  return cache;
}

fftw_plan plan_for(std::size_t rows, std::size_t cols, int sign) {
  const PlanKey key{rows, cols, sign};
  std::lock_guard lock(g_plan_mutex);
  auto& cache = plan_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second.get();

  const std::size_t total = rows == 0 ? cols : rows * cols;
  std::vector<cplx> scratch_in(total), scratch_out(total);
  auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
  auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = rows == 0
                    ? fftw_plan_dft_1d(static_cast<int>(cols), in, out, sign, flags)
                    : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in, out, sign, flags);
  if (p == nullptr) throw std::runtime_error("fftw: plan creation failed");
  cache.emplace(key, Plan(p));
  return p;
}

void execute(fftw_plan p, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  // Plans are out-of-place; FFTW forbids mixing that with in-place execution.
  if (in.data() == out.data()) {
    std::vector<cplx> copy(in.begin(), in.end());
    execute(p, copy, out);
    return;
  }
  // FFTW takes a non-const input pointer but does not write through it for
  // out-of-place complex transforms.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) {
  execute(plan_for(0, in.size(), FFTW_FORWARD), in, out);
}

void backward(std::span<const cplx> in, std::span<cplx> out) {
  execute(plan_for(0, in.size(), FFTW_BACKWARD), in, out);
}

void forward_2d(std::size_t rows, std::size_t cols, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != rows * cols) throw std::invalid_argument("fft: 2d shape mismatch");
  execute(plan_for(rows, cols, FFTW_FORWARD), in, out);
}

void backward_2d(std::size_t rows, std::size_t cols, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != rows * cols) throw std::invalid_argument("fft: 2d shape mismatch");
  execute(plan_for(rows, cols, FFTW_BACKWARD), in, out);
}

}  // namespace dkg::fft
