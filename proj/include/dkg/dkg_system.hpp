#pragma once

// The 1D Dirac–Klein–Gordon system in characteristic form,
//
//   i(u_t + u_x) = Mv − φv
//   i(v_t − v_x) = Mu − φu
//   φ_tt − φ_xx + m²φ = 2 Re(u v̄)
//
// integrated with exact free propagators (transport for u, v; the
// Klein–Gordon rotation for φ) and an exponential midpoint rule for the
// coupling terms. The Dirac mass M couples u and v, so it is part of the
// forcing rather than the diagonal free flow.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dkg/spectral_core.hpp"

namespace dkg {

struct PhysicsParams {
  double M = 1.0;  // Dirac mass
  double m = 1.0;  // Klein–Gordon mass

  /// Throws std::invalid_argument unless both masses are positive.
  void validate() const;
};

/// Simulation state at one time. All four fields share one grid and are
/// kept with a valid spectral representation.
struct DkgState {
  double t = 0.0;
  SpectralField u;
  SpectralField v;
  SpectralField phi;
  SpectralField phi_t;

  const GridPtr& grid() const { return u.grid_ptr(); }
};

struct Trajectory {
  std::vector<DkgState> states;
  PhysicsParams params;
  double dt = 0.0;
};

/// A scalar field and its time derivative sampled at a list of times.
struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> field;
  std::vector<SpectralField> field_t;
};

enum class Chirality { plus, minus };

/// spec[k] ← e^{∓iξ_k h}·spec[k]; `plus` is the u (right-moving) sign.
SpectralField free_dirac_propagate(SpectralField f, double h, Chirality sign);

struct KgPair {
  SpectralField z;
  SpectralField z_t;
};

/// Exact free Klein–Gordon flow over time h ≥ 0.
KgPair free_kg_propagate(SpectralField z, SpectralField z_t, double h, double m);

struct Forcing {
  SpectralField u;    // −i(Mv − φv)
  SpectralField v;    // −i(Mu − φu)
  SpectralField phi;  // 2 Re(u v̄), the source in the φ_t equation
};

/// Coupling terms with every product dealiased by the 2/3 rule.
Forcing nonlinear_forcing(const DkgState& state, const PhysicsParams& params);

/// One exponential-midpoint step; 0 < h ≤ 0.1.
DkgState step(const DkgState& state, double h, const PhysicsParams& params);

using Observer = std::function<void(const DkgState&)>;

/// Steps from state0 to state0.t + T. Observers see the initial state and
/// every subsequent state; the returned trajectory keeps every `stride`-th
/// state (stride must divide T/h).
Trajectory evolve(const DkgState& state0, double T, double h, const PhysicsParams& params,
                  std::span<const Observer> observers = {}, std::size_t stride = 1);

/// φ = φ⁽⁰⁾ + Φ along a trajectory, with φ⁽⁰⁾ the free Klein–Gordon wave
/// launched from the trajectory's first state.
struct PhiSplit {
  ScalarTrajectory homogeneous;
  ScalarTrajectory inhomogeneous;
};

PhiSplit split_phi(const Trajectory& traj);

/// Free Klein–Gordon evolution of (Φ, ∂_tΦ) given at from_t, sampled at
/// `samples`+1 equally spaced times covering [from_t, from_t + horizon].
ScalarTrajectory cascade_free_wave(const SpectralField& Phi, const SpectralField& Phi_t, double from_t,
                                   double horizon, double m, std::size_t samples = 1);

/// Result of the boot-strap (Picard) iteration on a time slab.
struct PicardResult {
  Trajectory trajectory;              // final iterate
  std::vector<double> update_norms;   // max_t ‖(u,v)^{(n+1)} − (u,v)^{(n)}‖_{L²} per sweep
};

/// Iterates the Duhamel formulation starting from u⁽⁻¹⁾ = v⁽⁻¹⁾ = 0: each
/// sweep solves the Dirac equations with forcing built from the previous
/// iterate, then the Klein–Gordon equation sourced by the new spinor.
/// Time integrals use the trapezoid rule on the h-grid.
PicardResult picard_iterate(const DkgState& state0, double T, double h, const PhysicsParams& params,
                            std::size_t sweeps);

// ---------------------------------------------------------------------------
// Initial data

/// Smooth localized data centred in the box:
///   u₀ = A e^{-(x-c)²/4},  v₀ = ½A e^{-(x-c-2)²/4} e^{i(x-c)/2},
///   φ₀ = 0.8 A e^{-(x-c)²/8},  φ₁ = 0.
DkgState make_gaussian_state(const GridPtr& grid, double amplitude = 1.0);

/// Rough data: u₀, v₀ ∈ H^s (streams 0, 1), φ₀ ∈ H^r and φ₁ ∈ H^{r-1}
/// real-valued (streams 2, 3), all from one seed.
DkgState make_rough_state(const GridPtr& grid, double s, double r, std::uint64_t seed, double amplitude);

/// Zero state on the grid.
DkgState make_zero_state(const GridPtr& grid);

/// Throws std::runtime_error naming the field if any coefficient is not finite.
void check_finite(const DkgState& state);

}  // namespace dkg
