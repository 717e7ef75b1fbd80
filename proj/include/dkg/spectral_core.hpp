#pragma once

// Periodic grids, spectral fields and Fourier multipliers.
//
// Normalization (used everywhere):
//   forward   f̂(ξ_k) = dx · Σ_j f(x_j) e^{-i ξ_k x_j}
//   inverse   f(x_j) = (1/L) · Σ_k f̂(ξ_k) e^{ i ξ_k x_j}
// so that dx·Σ|f_j|² = (1/L)·Σ|f̂_k|², the discrete form of Plancherel for
// f̂(ξ) = ∫ e^{-ixξ} f(x) dx.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace dkg {

using cplx = std::complex<double>;

struct Grid {
  std::size_t n = 0;
  double length = 0.0;
  double dx = 0.0;
  /// ξ_k = 2πk/L in FFT order (k = 0..n/2-1, then -n/2..-1).
  std::vector<double> freqs;
  /// 1 on modes kept by the 2/3 rule (3|k| < n), 0 elsewhere.
  std::vector<double> dealias_mask;

  double x(std::size_t j) const { return static_cast<double>(j) * dx; }
  /// Integer wavenumber k of FFT slot j.
  std::int64_t wavenumber(std::size_t j) const;
  /// FFT slot of integer wavenumber k (taken modulo n).
  std::size_t slot(std::int64_t k) const;
};

using GridPtr = std::shared_ptr<const Grid>;

/// n must be a power of two ≥ 8, L > 0.
GridPtr make_grid(std::size_t n, double length);

enum class Direction { to_spec, to_phys };

/// One complex field with a physical and a spectral representation.
/// Each representation carries a validity flag; reading an invalid one is a
/// programming error and throws std::logic_error.
class SpectralField {
 public:
  SpectralField() = default;
  /// Zero field; both representations valid.
  explicit SpectralField(GridPtr grid);

  static SpectralField from_phys(GridPtr grid, std::vector<cplx> values);
  static SpectralField from_spec(GridPtr grid, std::vector<cplx> coeffs);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return grid_ ? grid_->n : 0; }

  bool phys_valid() const { return phys_valid_; }
  bool spec_valid() const { return spec_valid_; }

  const std::vector<cplx>& phys() const;
  const std::vector<cplx>& spec() const;

  /// Write access; the other representation is invalidated.
  std::vector<cplx>& mutable_phys();
  std::vector<cplx>& mutable_spec();

  /// Recompute one representation from the other (no-op when valid).
  void sync_spec();
  void sync_phys();

 private:
  GridPtr grid_;
  std::vector<cplx> phys_;
  std::vector<cplx> spec_;
  bool phys_valid_ = false;
  bool spec_valid_ = false;
};

SpectralField transform(SpectralField f, Direction direction);

/// Real-valued Fourier symbol, evaluated on a grid's frequency lattice.
struct MultiplierSpec {
  enum class Kind { bracket, bracket_m, i_op, i_op_squared, i_op_inverse, derivative_power, custom };

  Kind kind = Kind::bracket;
  double a = 0.0;      // bracket exponent, or θ for derivative_power
  double mass = 1.0;   // bracket_m
  double cutoff = 1.0; // N for the I-operator kinds
  double s = -0.1;     // regularity for the I-operator kinds
  std::vector<double> table;  // custom: one value per FFT slot

  static MultiplierSpec bracket(double a);
  static MultiplierSpec bracket_m(double a, double m);
  static MultiplierSpec i_op(double N, double s);
  static MultiplierSpec i_op_squared(double N, double s);
  static MultiplierSpec i_op_inverse(double N, double s);
  static MultiplierSpec derivative_power(double theta);
  static MultiplierSpec custom(std::vector<double> table);

  /// Symbol value at frequency ξ (not available for custom tables).
  double operator()(double xi) const;
  /// Symbol on every FFT slot of the grid.
  std::vector<double> on(const Grid& grid) const;
};

/// ⟨ξ⟩ = √(1+ξ²)
inline double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }
/// ⟨ξ⟩_m = √(m²+ξ²)
inline double bracket_m(double xi, double m) { return std::sqrt(m * m + xi * xi); }

SpectralField apply_multiplier(SpectralField f, const MultiplierSpec& m);

/// q(ξ) = χ(|ξ|/N): 1 for σ ≤ 1, σ^s for σ ≥ 2, and
/// exp(s·H(σ-1)·log σ) with H(x) = 3x²-2x³ in between.
/// Requires N ≥ 1 and s < 0.
double i_symbol(double xi, double N, double s);

/// (Σ_k ⟨ξ_k⟩^{2a} |f̂_k|² / L)^{1/2}
double sobolev_norm(const SpectralField& f, double a);

/// (dx·Σ_j |f_j|²)^{1/2} from the physical representation.
double l2_norm_phys(const SpectralField& f);

/// Regularity offset δ in the rough-data profile.
inline constexpr double kRoughDelta = 0.01;

/// |f̂_k| = amplitude·⟨ξ_k⟩^{-s-1/2-δ} with independent uniform phases drawn
/// from the counter-based stream (seed, stream).
SpectralField sample_rough_data(const GridPtr& grid, double s, std::uint64_t seed, double amplitude,
                                std::uint64_t stream = 0);

/// Same profile with Hermitian-symmetric phases, so the field is real.
SpectralField sample_rough_real_data(const GridPtr& grid, double s, std::uint64_t seed, double amplitude,
                                     std::uint64_t stream = 0);

/// Zero every mode removed by the 2/3 rule.
void dealias(std::span<cplx> spec, const Grid& grid);

/// Dealiased pointwise product: both factors and the result are truncated
/// to the 2/3 band. `conj_second` multiplies by conj(g) instead of g.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, bool conj_second = false);

}  // namespace dkg
