#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dkg/gwp_scheduler.hpp"

using namespace dkg;

TEST_CASE("regions") {
  CHECK(region_check(RegionKind::lwp, -0.2, 0.5));
  CHECK_FALSE(region_check(RegionKind::lwp, -0.25, 0.5));
  CHECK_FALSE(region_check(RegionKind::gwp, -0.125, 0.25));
  CHECK(region_check(RegionKind::reduced, -0.1, 0.28));
  CHECK_FALSE(region_check(RegionKind::reduced, -0.1, 0.3));   // upper bound is strict
  CHECK(region_check(RegionKind::gwp, -0.1, 0.9));              // r = 1+s allowed
  for (double r = 0.0; r <= 1.0; r += 0.001) CHECK_FALSE(region_check(RegionKind::gwp, -0.125, r));
}

TEST_CASE("boundary forms agree") {
  CHECK(boundary_equivalence(-0.1, 0.28));
  CHECK(lower_boundary_radical(-0.1, 0.28));
  const double root = -0.1 + std::sqrt(0.11);
  CHECK(root == doctest::Approx(0.2316624790).epsilon(1e-10));
  CHECK(boundary_equivalence(-0.1, root + 1e-9) == lower_boundary_radical(-0.1, root + 1e-9));
  CHECK(boundary_equivalence(-0.1, root - 1e-9) == lower_boundary_radical(-0.1, root - 1e-9));
  CHECK_FALSE(boundary_equivalence(-0.125, 0.25));
  CHECK_FALSE(lower_boundary_radical(-0.125, 0.25));
  CHECK_THROWS_AS(boundary_equivalence(0.1, 0.5), std::invalid_argument);
}

TEST_CASE("slab length") {
  SchedulerParams p{-0.1, 0.28, 0.01, 1024, 1, 1, 1, 10};
  const auto slab = slab_length(p);
  CHECK(slab.delta_T == doctest::Approx(0.190610).epsilon(1e-5));
  CHECK(slab.K == 53);
  p.eps = 0.02;
  CHECK(slab_length(p).delta_T == doctest::Approx(0.151011).epsilon(1e-5));
  CHECK(slab_length(p).delta_T < slab.delta_T);
  p.N = 1;
  p.T = 7.5;
  CHECK(slab_length(p).delta_T == 1.0);
  CHECK(slab_length(p).K == 8);
  p.r = 0.0;
  p.s = 0.0;
  CHECK_THROWS_AS(slab_length(p), std::invalid_argument);
}

TEST_CASE("bootstrap condition") {
  SchedulerParams p{-0.1, 0.28, 0.01, 1024, 1, 1, 1, 10};
  CHECK(bootstrap_ok(0, 0, p));
  CHECK_FALSE(bootstrap_ok(1, 1, p));
  const double value = 2 * (std::pow(1024.0, -0.02) + std::pow(1024.0, -0.26));
  CHECK(value == doctest::Approx(2.070978).epsilon(1e-6));
  p.N = 1;
  CHECK_FALSE(bootstrap_ok(0, 1, p));
}

TEST_CASE("induction step") {
  const SchedulerParams p{-0.1, 0.28, 0.005, std::pow(2.0, 20), 1, 1, 1, 10};
  const auto zero = induction_step(0, 3, p, 0.1);
  CHECK(zero.A == 0.0);
  CHECK(zero.B == 3.0);

  const double dT = slab_length(p).delta_T;
  const auto next = induction_step(1, 1, p, dT);
  const double d = std::pow(p.N, -p.r + 2 * p.eps);
  CHECK(next.A == doctest::Approx(std::sqrt(1 + 2 * d)).epsilon(1e-12));
  CHECK(next.B == doctest::Approx(1 + dT + 2 * dT * d + std::pow(p.N, -0.5 + 2 * p.eps)).epsilon(1e-12));
  CHECK(next.A >= 1.0);
  CHECK(next.B >= 1.0);

  SchedulerParams far = p;
  far.N = 1e300;
  const auto still = induction_step(1.3, 2.1, far, 0.0);
  CHECK(still.A == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(still.B == doctest::Approx(2.1).epsilon(1e-12));
}

TEST_CASE("exponent check") {
  CHECK(exponent_check(-0.1, 0.28, 0.005));
  CHECK(growth_exponents(-0.1, 0.28, 0.005).first == doctest::Approx(-0.046596).epsilon(1e-5));
  CHECK_FALSE(exponent_check(-0.1, 0.23, 0.001));
  CHECK(growth_exponents(-0.1, 0.23, 0.001).first == doctest::Approx(0.007981).epsilon(1e-4));
  // ε → 0: sign of the first exponent matches r² - 2sr + s > 0
  for (double r : {0.2, 0.23, 0.232, 0.25, 0.29})
    CHECK((growth_exponents(-0.1, r, 1e-12).first < 0) == boundary_equivalence(-0.1, r));
}

TEST_CASE("induction runs") {
  // With a small master constant the boot-strap closes for large N.
  SchedulerParams p{-0.1, 0.28, 0.005, 2, 0.1, 1, 1, 10};
  const auto found = find_cutoff(p);
  REQUIRE(found.N_star.has_value());
  CHECK(found.trace.sustained);
  CHECK(found.trace.steps.size() == found.trace.slab.K);
  for (const auto& st : found.trace.steps) {
    CHECK(st.bootstrap_ok);
    CHECK(st.A <= found.trace.rho);
    CHECK(st.B <= found.trace.sigma);
  }
  CHECK(found.trace.sufficient[3]);

  // Monotone growth along the trace and smaller totals for larger N.
  for (std::size_t i = 1; i < found.trace.steps.size(); ++i) {
    CHECK(found.trace.steps[i].A >= found.trace.steps[i - 1].A);
    CHECK(found.trace.steps[i].B >= found.trace.steps[i - 1].B);
  }
  double prev_B = INFINITY;
  for (double scale : {1.0, 2.0, 4.0}) {
    SchedulerParams q = p;
    q.N = *found.N_star * scale;
    const auto tr = run_induction(q);
    CHECK(tr.sustained);
    CHECK(tr.steps.back().B <= prev_B);
    prev_B = tr.steps.back().B;
  }

  SchedulerParams below = p;
  below.r = 0.23;
  const auto none = find_cutoff(below);
  CHECK_FALSE(none.trace.admissible);

  SchedulerParams tiny = p;
  tiny.N = 4;
  tiny.T = 1e-6;
  const auto one = run_induction(tiny);
  CHECK(one.slab.K == 1);

  SchedulerParams invalid = p;
  invalid.eps = 0.2;
  CHECK_THROWS_AS(run_induction(invalid), std::invalid_argument);
}

TEST_CASE("region dataset") {
  const auto rows = region_dataset(-0.25, 0, 100);
  CHECK(rows.size() == 100);
  CHECK(rows.front().s == doctest::Approx(-0.25 + 0.00125));
  for (const auto& r : rows) {
    CHECK(r.lower_gwp == doctest::Approx(r.s + std::sqrt(r.s * r.s - r.s)));
    CHECK(r.upper_reduced == doctest::Approx(0.5 + 2 * r.s));
  }
  CHECK_THROWS_AS(region_dataset(0, -0.1, 10), std::invalid_argument);
}
