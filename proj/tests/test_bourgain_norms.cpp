#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dkg/bourgain_norms.hpp"
#include "dkg/rng.hpp"

using namespace dkg;
constexpr double kPi = std::numbers::pi;

namespace {

SpaceTimeBlock plane_wave(std::size_t n, double tau0, double xi0, double T, double L, cplx amp = 1.0) {
  std::vector<cplx> s(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double t = T * static_cast<double>(j) / static_cast<double>(n);
      const double x = L * static_cast<double>(k) / static_cast<double>(n);
      s[j * n + k] = amp * std::polar(1.0, tau0 * t + xi0 * x);
    }
  return SpaceTimeBlock(n, n, T, L, std::move(s));
}

SpaceTimeBlock random_block(std::size_t nt, std::size_t nx, std::uint64_t seed, TimeWindow w, double T = 3.0,
                            double L = 5.0) {
  std::vector<cplx> s(nt * nx);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = {rng::uniform(seed, 0, i, -1, 1), rng::uniform(seed, 1, i, -1, 1)};
  return SpaceTimeBlock(nt, nx, T, L, std::move(s), w);
}

// Smooth band-limited data on a 2π × 2π block.
SpaceTimeBlock smooth_block(std::size_t n, std::uint64_t seed) {
  std::vector<cplx> s(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 2 * kPi * static_cast<double>(j) / static_cast<double>(n);
      const double x = 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
      for (int m = -4; m <= 4; ++m) {
        const cplx c{rng::uniform(seed, 0, static_cast<std::uint64_t>(m + 4), -1, 1),
                     rng::uniform(seed, 1, static_cast<std::uint64_t>(m + 4), -1, 1)};
        s[j * n + k] += c * std::polar(1.0, m * x - std::abs(m) * t) / (1.0 + m * m);
      }
    }
  return SpaceTimeBlock(n, n, 2 * kPi, 2 * kPi, std::move(s));
}

}  // namespace

TEST_CASE("block invariants") {
  CHECK_THROWS_AS(SpaceTimeBlock(6, 8, 1, 1, std::vector<cplx>(48)), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeBlock(8, 8, 1, 1, std::vector<cplx>(10)), std::invalid_argument);
  for (auto w : {TimeWindow::none, TimeWindow::hann}) {
    const auto b = random_block(32, 16, 3, w);
    double spec = 0;
    for (const auto& c : b.transform()) spec += std::norm(c);
    spec /= b.period() * b.length();
    CHECK(std::abs(spec - b.tapered_l2_squared()) <= 1e-10 * spec);
    CHECK(spacetime_norm(b, NormKind::h, 0, 0) == doctest::Approx(std::sqrt(b.tapered_l2_squared())).epsilon(1e-10));
  }
}

TEST_CASE("plane waves") {
  const double T = 4 * kPi, L = 2 * kPi;
  const double tau0 = 3.5, xi0 = 5;  // on the lattice: τ_j = j/2, ξ_k = k
  const auto b = plane_wave(32, tau0, xi0, T, L);
  const double vol = std::sqrt(T * L);
  const double a = 0.7, bb = 0.6;
  CHECK(spacetime_norm(b, NormKind::x_plus, a, bb) ==
        doctest::Approx(vol * std::pow(bracket(xi0), a) * std::pow(bracket(tau0 + xi0), bb)).epsilon(1e-12));
  CHECK(spacetime_norm(b, NormKind::x_minus, a, bb) ==
        doctest::Approx(vol * std::pow(bracket(xi0), a) * std::pow(bracket(tau0 - xi0), bb)).epsilon(1e-12));
  CHECK(spacetime_norm(b, NormKind::h, a, bb) ==
        doctest::Approx(vol * std::pow(bracket(xi0), a) * std::pow(bracket(tau0 - xi0), bb)).epsilon(1e-12));
  const double calh = vol * std::pow(bracket(tau0 - xi0), bb) *
                      (std::pow(bracket(xi0), a) + tau0 * std::pow(bracket(xi0), a - 1));
  CHECK(spacetime_norm(b, NormKind::calh, a, bb) == doctest::Approx(calh).epsilon(1e-12));

  // On the + characteristic the modulation weight is 1 whatever b is.
  double prev = 0;
  for (double xi : {4.0, 8.0, 12.0}) {
    const auto w = plane_wave(32, -xi, xi, 2 * kPi, 2 * kPi);
    const double v = spacetime_norm(w, NormKind::x_plus, 0, 5.0);
    CHECK(v == doctest::Approx(2 * kPi).epsilon(1e-12));
    if (prev > 0) CHECK(v == doctest::Approx(prev).epsilon(1e-12));
    prev = v;
  }
}

TEST_CASE("norm properties") {
  const auto b = random_block(16, 16, 9, TimeWindow::hann);
  std::vector<cplx> scaled(b.samples());
  for (auto& c : scaled) c *= cplx(-2.0, 1.0);
  const SpaceTimeBlock b2(16, 16, b.period(), b.length(), scaled, TimeWindow::hann);
  for (auto kind : {NormKind::x_plus, NormKind::x_minus, NormKind::h, NormKind::calh}) {
    CHECK(spacetime_norm(b2, kind, 0.3, 0.4) == doctest::Approx(std::sqrt(5.0) * spacetime_norm(b, kind, 0.3, 0.4)).epsilon(1e-12));
    CHECK(spacetime_norm(b, kind, 0.1, 0.4) <= spacetime_norm(b, kind, 0.3, 0.4));
    CHECK(spacetime_norm(b, kind, 0.3, 0.2) <= spacetime_norm(b, kind, 0.3, 0.4));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = random_block(16, 32, seed, TimeWindow::hann);
    for (double alpha : {-0.5, -0.1, 0.0}) {
      const double hn = spacetime_norm(r, NormKind::h, 0, alpha);
      CHECK(spacetime_norm(r, NormKind::x_plus, 0, alpha) <= hn * (1 + 1e-14));
      CHECK(spacetime_norm(r, NormKind::x_minus, 0, alpha) <= hn * (1 + 1e-14));
    }
  }
}

TEST_CASE("estimate ratios") {
  const std::vector<cplx> zeros(64 * 64, 0.0);
  const SpaceTimeBlock z(64, 64, 2 * kPi, 2 * kPi, zeros);
  for (auto which : {EstimateSpec::Which::sobolev_product, EstimateSpec::Which::null_pp, EstimateSpec::Which::null_mp})
    CHECK(estimate_ratio({which, {1, 1, 0}, {0.2, 0.2, 0.2}, 0.505}, z, z).degenerate);

  // Sobolev product with (1,1,0): the ratio is resolution independent for
  // data the coarsest grid already resolves.
  const EstimateSpec sob{EstimateSpec::Which::sobolev_product, {1, 1, 0}};
  CHECK(sob.violations().empty());
  const double coarse = estimate_ratio(sob, smooth_block(32, 1), smooth_block(32, 2)).ratio;
  for (std::size_t n : {64, 128}) {
    const double fine = estimate_ratio(sob, smooth_block(n, 1), smooth_block(n, 2)).ratio;
    CHECK(fine == doctest::Approx(coarse).epsilon(1e-10));
  }
  CHECK(coarse < 1.0);

  const EstimateSpec wave{EstimateSpec::Which::wave_product, {0.5, 0.5, 0}, {0.3, 0.3, 0.0}};
  CHECK(wave.violations().empty());
  const auto wr = estimate_ratio(wave, smooth_block(32, 3), smooth_block(32, 4));
  CHECK_FALSE(wr.degenerate);
  CHECK(wr.ratio > 0);

  const EstimateSpec bad{EstimateSpec::Which::sobolev_product, {0.1, 0.1, 0.1}};
  CHECK(bad.violations().size() == 1);
  const EstimateSpec bad_null{EstimateSpec::Which::null_pm, {0.25, -0.25, -0.25}, {}, 0.505};
  CHECK(bad_null.violations().size() == 2);
}

// Exponents of the null estimate as used for the u·v̄ term with
// (s, r, ε) = (-0.1, 0.28, 0.005): (1 - r + 2s, 0, -1/2 + 2ε).
TEST_CASE("null pairing on characteristic packets") {
  const std::array<double, 3> usage{1 - 0.28 - 0.2, 0.0, -0.5 + 0.01};
  const double b = 0.505;
  CHECK(EstimateSpec{EstimateSpec::Which::null_pp, usage, {}, b}.violations().empty());

  std::vector<double> ratios;
  const std::size_t size = packet_block_size(64);
  for (std::size_t scale : {8, 16, 32, 64}) {
    const auto w = characteristic_packet(scale, PacketSign::plus, size);
    const auto z = characteristic_packet(scale, PacketSign::minus, size);
    ratios.push_back(estimate_ratio({EstimateSpec::Which::null_pp, usage, {}, b}, w, z).ratio);
  }
  // Bounded: never increases along the sweep.
  for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] <= ratios[i - 1]);
}

TEST_CASE("null probe") {
  CHECK_THROWS_AS(null_probe({0.5, 0, -0.49}, 0.505, {8}), std::invalid_argument);

  // Frozen from tests/oracles/derive_values.py.
  const auto usage = null_probe({1 - 0.28 - 0.2, 0.0, -0.49}, 0.505, {8, 16});
  CHECK(usage.violations.empty());
  const auto g_opp = NullProbeReport::growth(usage.opposite_sign_ratios)[0];
  const auto g_same = NullProbeReport::growth(usage.same_sign_ratios)[0];
  CHECK(g_opp == doctest::Approx(0.6859).epsilon(1e-3));
  CHECK(g_same == doctest::Approx(1.3789).epsilon(1e-3));
  CHECK(g_opp <= 1.3);
  CHECK(g_same > 1.3);

  const auto sharp = null_probe({0.25, -0.25, -0.25}, 0.505, {8, 16});
  CHECK(sharp.violations.size() == 2);
  CHECK(NullProbeReport::growth(sharp.opposite_sign_ratios)[0] == doctest::Approx(0.8378).epsilon(1e-3));
  CHECK(NullProbeReport::growth(sharp.same_sign_ratios)[0] == doctest::Approx(1.6841).epsilon(1e-3));
}

TEST_CASE("comparison bound") {
  CHECK_FALSE(comparison_ratio(0, 0, 0, 0).has_value());
  CHECK(*comparison_ratio(0, 2, -1, 1) == doctest::Approx(0.5));
  CHECK(*comparison_ratio(4.0 / 3, 2, -1.0 / 3, 1) == doctest::Approx(kComparisonSupremum).epsilon(1e-12));

  const auto rep = comparison_check(200000, 17);
  CHECK(rep.evaluated + rep.discarded == 200000);
  CHECK(rep.max_ratio <= kComparisonSupremum);
  CHECK(rep.max_ratio > 1.0);
  CHECK(comparison_check(200000, 17).max_ratio == rep.max_ratio);
}
