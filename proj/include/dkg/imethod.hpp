#pragma once

// The smoothing operator I, its commutator with products, and the
// almost-conservation ledger for the modified charge ‖Iu‖² + ‖Iv‖².

#include <optional>
#include <span>
#include <vector>

#include "dkg/dkg_system.hpp"
#include "dkg/spectral_core.hpp"

namespace dkg {

struct IMethodParams {
  double N = 16.0;  // cutoff, ≥ 1
  double s = -0.1;  // regularity, < 0
  // Only used to report the predicted decay exponent −r + 2s + 2ε.
  double r = 0.28;
  double eps = 0.01;

  void validate() const;
  double predicted_exponent() const { return -r + 2.0 * s + 2.0 * eps; }
};

/// Applies q(ξ)^power for power ∈ {1, 2, −1}.
SpectralField apply_I(SpectralField f, const IMethodParams& p, int power = 1);

/// ‖u‖² + ‖v‖²
double charge(const DkgState& state);

/// ‖Iu‖² + ‖Iv‖²
double modified_charge(const DkgState& state, const IMethodParams& p);

/// Q_I(f, g) = I(fg) − If·Ig with dealiased products.
SpectralField commutator_QI(const SpectralField& f, const SpectralField& g, const IMethodParams& p);

/// Q_I from the bilinear symbol form,
///   Q̂(ξ) = (1/L) Σ_η [q(ξ) − q(η)q(ξ−η)] f̂(η) ĝ(ξ−η),
/// restricted to the same 2/3 band as the product form. O(n²); intended
/// as an independent check on small grids.
SpectralField commutator_QI_direct(const SpectralField& f, const SpectralField& g, const IMethodParams& p);

struct ChargeLedger {
  double q0 = 0.0;
  double qT = 0.0;
  double R = 0.0;
  double residual = 0.0;  // qT − q0 − R
};

/// Time derivative of the modified charge predicted by the commutator form:
///   2 Re ∫ i Q_I(φ,u) conj(Iv) dx + 2 Re ∫ i Q_I(φ,v) conj(Iu) dx.
double ledger_rate(const DkgState& state, const IMethodParams& p);

/// Streaming form of accumulate_R: feed equally spaced states in order.
class LedgerAccumulator {
 public:
  explicit LedgerAccumulator(IMethodParams p);
  void observe(const DkgState& state);
  ChargeLedger ledger() const;
  std::size_t count() const { return count_; }

 private:
  IMethodParams p_;
  std::size_t count_ = 0;
  double q0_ = 0.0;
  double q_last_ = 0.0;
  double t_last_ = 0.0;
  double rate_last_ = 0.0;
  double R_ = 0.0;
};

/// R over the trajectory by spectral quadrature in x and the trapezoid rule
/// in t, together with the modified charge at both ends.
ChargeLedger accumulate_R(const Trajectory& traj, const IMethodParams& p);

struct DecayReport {
  bool exact_zero = false;          // some |R| vanished; no slope fitted
  double fitted_slope = 0.0;        // least squares, log|R| against log N
  double predicted_exponent = 0.0;  // −r + 2s + 2ε, for reference
};

/// Requires at least three cutoffs.
DecayReport decay_report(std::span<const double> cutoffs, std::span<const ChargeLedger> ledgers,
                         double predicted_exponent);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace dkg
