#include <doctest.h>

#include <vector>

#include "dkg/kernels.hpp"
#include "dkg/rng.hpp"

using dkg::kernels::cplx;
namespace serial = dkg::kernels::serial;
namespace omp = dkg::kernels::omp;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t stream) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = {dkg::rng::uniform(5, stream, 2 * i, -1, 1), dkg::rng::uniform(5, stream, 2 * i + 1, -1, 1)};
  return v;
}

std::vector<double> random_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = dkg::rng::uniform(5, 9, i, 0.5, 2.0);
  return w;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("parallel kernels reproduce the serial reference") {
  for (std::size_t n : {std::size_t{100}, std::size_t{1} << 16}) {
    CAPTURE(n);
    const auto a = random_vec(n, 1), b = random_vec(n, 2);
    const auto w = random_weights(n);

    std::vector<cplx> s_out(n), p_out(n);
    serial::multiply(a, b, s_out);
    omp::multiply(a, b, p_out);
    CHECK(max_diff(s_out, p_out) == 0.0);

    serial::multiply_conj(a, b, s_out);
    omp::multiply_conj(a, b, p_out);
    CHECK(max_diff(s_out, p_out) == 0.0);

    serial::scale_into(a, w, s_out);
    omp::scale_into(a, w, p_out);
    CHECK(max_diff(s_out, p_out) == 0.0);

    auto s_y = b, p_y = b;
    serial::axpy({0.3, -0.7}, a, s_y);
    omp::axpy({0.3, -0.7}, a, p_y);
    CHECK(max_diff(s_y, p_y) == 0.0);

    auto s_z = a, s_zt = b, p_z = a, p_zt = b;
    serial::kg_rotate(s_z, s_zt, w, 0.01);
    omp::kg_rotate(p_z, p_zt, w, 0.01);
    CHECK(max_diff(s_z, p_z) == 0.0);
    CHECK(max_diff(s_zt, p_zt) == 0.0);

    const double se = serial::weighted_energy(a, w), pe = omp::weighted_energy(a, w);
    CHECK(pe == doctest::Approx(se).epsilon(1e-13));
    const cplx si = serial::inner(a, b), pi = omp::inner(a, b);
    CHECK(std::abs(si - pi) <= 1e-12 * std::abs(si));
  }
}

TEST_CASE("parallel reductions do not depend on the thread count") {
  const std::size_t n = std::size_t{1} << 17;
  const auto a = random_vec(n, 3);
  const auto w = random_weights(n);
  const int saved = dkg::kernels::threads();
  dkg::kernels::set_threads(1);
  const double one = omp::weighted_energy(a, w);
  const cplx one_inner = omp::inner(a, a);
  dkg::kernels::set_threads(4);
  const double four = omp::weighted_energy(a, w);
  const cplx four_inner = omp::inner(a, a);
  dkg::kernels::set_threads(saved);
  CHECK(one == four);
  CHECK(one_inner == four_inner);
}

TEST_CASE("kg_rotate is a phase-space rotation") {
  std::vector<cplx> z{1.0}, zt{0.0};
  const std::vector<double> omega{2.0};
  serial::kg_rotate(z, zt, omega, 0.3);
  CHECK(z[0].real() == doctest::Approx(std::cos(0.6)).epsilon(1e-15));
  CHECK(zt[0].real() == doctest::Approx(-2.0 * std::sin(0.6)).epsilon(1e-15));
}
