#pragma once

// Slab-by-slab induction calculator for the modified-energy argument:
// admissible (s, r) regions, slab length, the A_n / B_n recursion and the
// search for a cutoff N that keeps the recursion bounded up to time T.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace dkg {

enum class RegionKind { lwp, gwp, reduced };

/// lwp:     s > -1/4, r > 0, |s| ≤ r ≤ 1+s
/// gwp:     -1/8 < s < 0, s+√(s²-s) < r ≤ 1+s
/// reduced: -1/8 < s < 0, s+√(s²-s) < r < 1/2+2s
bool region_check(RegionKind kind, double s, double r);

/// Quadratic form of the lower gwp boundary, r² - 2sr + s > 0. Requires s < 0.
bool boundary_equivalence(double s, double r);
/// Radical form of the same boundary, r > s+√(s²-s).
bool lower_boundary_radical(double s, double r);

struct SchedulerParams {
  double s = -0.1;
  double r = 0.28;
  double eps = 0.005;
  double N = 1024.0;
  double C = 1.0;
  double A = 1.0;
  double B = 1.0;
  double T = 10.0;

  /// Throws std::invalid_argument listing every violated precondition.
  void validate() const;
};

struct Slab {
  double delta_T = 0.0;
  std::uint64_t K = 0;
};

/// ΔT = N^{(s-ε)/(r-2s-2ε)}, K = ⌈T/ΔT⌉.
Slab slab_length(const SchedulerParams& p);

/// C(B+A²)(N^{-2ε} + N^{-r+2ε}); the step is admissible when this is ≤ 1.
double bootstrap_value(double A, double B, const SchedulerParams& p);
bool bootstrap_ok(double A, double B, const SchedulerParams& p);

struct AB {
  double A = 0.0;
  double B = 0.0;
};

AB induction_step(double A, double B, const SchedulerParams& p, double delta_T);

/// The two exponents that must be negative for the growth terms to vanish
/// as N → ∞.
struct ExponentPair {
  double first = 0.0;   // (-s+ε)/(r-2s-2ε) - r + 2ε
  double second = 0.0;  // (-s+ε)/(r-2s-2ε) - 1/2 + 2ε
};
ExponentPair growth_exponents(double s, double r, double eps);
bool exponent_check(double s, double r, double eps);

struct StepRecord {
  std::uint64_t n = 0;
  double A = 0.0;
  double B = 0.0;
  bool bootstrap_ok = false;
  bool within_bounds = false;  // A_n ≤ ρ and B_n ≤ σ
};

struct SchedulerTrace {
  std::vector<StepRecord> steps;
  Slab slab;
  double rho = 0.0;    // 2A₁
  double sigma = 0.0;  // 2B₁ + 4CTA₁²
  bool admissible = false;  // (s, r) inside the reduced region
  bool sustained = false;
  std::optional<std::uint64_t> first_failure;
  /// Closed-form sufficient conditions for the bounds, evaluated at N.
  std::array<bool, 4> sufficient{};
};

/// Runs the recursion for n = 1..K, stopping at the first step that breaks
/// the boot-strap condition or the ρ/σ bounds. Parameters outside the
/// reduced region still run; the trace flags them as not admissible.
SchedulerTrace run_induction(const SchedulerParams& p);

struct CutoffSearch {
  std::optional<double> N_star;
  SchedulerTrace trace;  // at N_star, or at the largest N tried
  std::uint64_t tried = 0;
};

/// Doubles N from `start` up to 2^max_log2 and returns the first sustained
/// cutoff.
CutoffSearch find_cutoff(SchedulerParams p, double start = 2.0, int max_log2 = 60);

struct RegionRow {
  double s = 0.0;
  double lower_gwp = 0.0;        // s+√(s²-s)
  double lower_bourgain = 0.0;   // -s+√(s²-s)
  double upper_strip = 0.0;      // 1+s
  double upper_reduced = 0.0;    // 1/2+2s
};

/// Boundary curves at `resolution` midpoints of (s_lo, s_hi).
std::vector<RegionRow> region_dataset(double s_lo, double s_hi, std::size_t resolution);

}  // namespace dkg
