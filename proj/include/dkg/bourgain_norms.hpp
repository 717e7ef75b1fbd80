#pragma once

// Discrete space-time Bourgain-type norms on sampled (t, x) blocks and the
// bilinear-estimate probes built on them.
//
// A block holds nt × nx samples on a periodic window [0, T_w) × [0, L).
// Its transform is ũ(τ_j, ξ_k) = dt·dx·Σ e^{-i(τ_j t + ξ_k x)} w(t) u(t, x)
// with w the optional time taper, so that
//   Σ|ũ|² / (T_w L) = dt dx Σ |w u|².
// Norms are weighted ℓ² sums of ũ with this normalization.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dkg/dkg_system.hpp"
#include "dkg/spectral_core.hpp"

namespace dkg {

enum class TimeWindow { none, hann };

class SpaceTimeBlock {
 public:
  /// samples are row-major, one row of nx values per time level.
  /// nt and nx must be powers of two.
  SpaceTimeBlock(std::size_t nt, std::size_t nx, double period, double length, std::vector<cplx> samples,
                 TimeWindow window = TimeWindow::none);

  enum class Component { u, v, phi };
  /// Uses every state of the trajectory as one time level (count must be a
  /// power of two); the window length is count·dt.
  static SpaceTimeBlock from_trajectory(const Trajectory& traj, Component which,
                                        TimeWindow window = TimeWindow::hann);

  std::size_t nt() const { return nt_; }
  std::size_t nx() const { return nx_; }
  double period() const { return period_; }
  double length() const { return length_; }
  TimeWindow window() const { return window_; }

  const std::vector<cplx>& samples() const { return samples_; }
  const std::vector<cplx>& transform() const { return transform_; }
  double tau(std::size_t j) const { return tau_[j]; }
  double xi(std::size_t k) const { return xi_[k]; }
  double window_weight(std::size_t j) const;

  /// dt·dx·Σ|w u|²
  double tapered_l2_squared() const;

 private:
  std::size_t nt_, nx_;
  double period_, length_;
  TimeWindow window_;
  std::vector<cplx> samples_;
  std::vector<cplx> transform_;
  std::vector<double> tau_, xi_;
};

/// Pointwise product of the raw samples with the 2/3 rule applied in both
/// directions; the result carries the first block's window.
SpaceTimeBlock dealiased_product(const SpaceTimeBlock& f, const SpaceTimeBlock& g, bool conj_second = false);

enum class NormKind {
  x_plus,   // ⟨ξ⟩^a ⟨τ+ξ⟩^b
  x_minus,  // ⟨ξ⟩^a ⟨τ−ξ⟩^b
  h,        // ⟨ξ⟩^a ⟨|τ|−|ξ|⟩^b
  calh      // ‖u‖_{H^{a,b}} + ‖∂_t u‖_{H^{a−1,b}}
};

double spacetime_norm(const SpaceTimeBlock& u, NormKind kind, double a, double b);

struct EstimateSpec {
  enum class Which { sobolev_product, wave_product, null_pp, null_mp, null_pm };
  Which which = Which::null_pp;
  /// (a₁,a₂,a₃) for the product estimates, (s₁,s₂,s₃) for the null forms.
  std::array<double, 3> exponents{0.0, 0.0, 0.0};
  /// (α,β,γ) for wave_product.
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  /// b for the null forms; ε = b − 1/2 enters their hypotheses.
  double b = 0.51;

  /// Violated hypotheses of the corresponding estimate, as readable strings.
  /// Empty when every hypothesis holds.
  std::vector<std::string> violations() const;
};

struct RatioResult {
  bool degenerate = false;  // right-hand side vanished
  double ratio = 0.0;
};

/// LHS-norm(f·g) / (RHS-norm(f) · RHS-norm(g)) for the selected estimate.
/// sobolev_product uses the first time level of each block.
RatioResult estimate_ratio(const EstimateSpec& spec, const SpaceTimeBlock& f, const SpaceTimeBlock& g);

enum class PacketSign { plus, minus };

/// Σ_{k=λ}^{2λ-1} e^{ik(x ∓ t)} on the 2π × 2π lattice with nt = nx = size:
/// a frequency-dyadic packet sitting exactly on the characteristic τ = ∓ξ.
SpaceTimeBlock characteristic_packet(std::size_t scale, PacketSign sign, std::size_t size);

/// Smallest power-of-two block size that keeps products of scale-λ packets
/// inside the 2/3 band.
std::size_t packet_block_size(std::size_t max_scale);

struct NullProbeReport {
  std::vector<std::size_t> scales;
  std::vector<double> opposite_sign_ratios;
  std::vector<double> same_sign_ratios;
  std::vector<std::string> violations;  // hypotheses of the null estimate not met

  /// Ratio between consecutive entries.
  static std::vector<double> growth(const std::vector<double>& ratios);
};

/// ‖wz‖_{H^{-s₁,b-1}} / (‖w‖_{X₊^{s₂,b}} ‖z‖_{X_∓^{s₃,b}}) for w a + packet
/// and z either the − packet (opposite signs, the null pairing) or another
/// + packet (same signs). Needs at least two scales.
NullProbeReport null_probe(const std::array<double, 3>& s_exponents, double b, const std::vector<std::size_t>& scales);

struct ComparisonReport {
  double max_ratio = 0.0;
  std::size_t evaluated = 0;
  std::size_t discarded = 0;  // tuples with max(|Γ|,|Θ₊|,|Σ₋|) = 0
};

/// min(|η|,|ξ−η|) / max(|Γ|,|Θ₊|,|Σ₋|) at one tuple; nullopt when the
/// denominator vanishes.
std::optional<double> comparison_ratio(double tau, double xi, double lambda, double eta);

/// Maximum of comparison_ratio over tuples drawn uniformly from [−10³,10³]⁴.
ComparisonReport comparison_check(std::size_t samples, std::uint64_t seed);

/// Supremum of comparison_ratio over all tuples.
inline constexpr double kComparisonSupremum = 1.5;

}  // namespace dkg
