#include "dkg/dkg_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dkg/fft.hpp"
#include "dkg/kernels.hpp"

namespace dkg {

namespace {

constexpr double kMaxStep = 0.1;

using Spec = std::vector<cplx>;

// Free flow E(τ) on the full state, symbols precomputed for one τ.
struct FreeFlow {
  Spec u_phase;  // e^{-iξτ}
  Spec v_phase;  // e^{+iξτ}
  std::vector<double> omega;
  double tau = 0.0;

  FreeFlow(const Grid& grid, double tau_, double m) : u_phase(grid.n), v_phase(grid.n), omega(grid.n), tau(tau_) {
    for (std::size_t k = 0; k < grid.n; ++k) {
      const double xi = grid.freqs[k];
      u_phase[k] = std::polar(1.0, -xi * tau);
      v_phase[k] = std::polar(1.0, xi * tau);
      omega[k] = bracket_m(xi, m);
    }
  }

  void apply(Spec& u, Spec& v, Spec& phi, Spec& phi_t) const {
    kernels::omp::rotate(u, u_phase);
    kernels::omp::rotate(v, v_phase);
    kernels::omp::kg_rotate(phi, phi_t, omega, tau);
  }
};

// Spectral state arrays, the stepper's working representation.
struct Raw {
  Spec u, v, phi, phi_t;
};

Raw raw_of(const DkgState& s) { return {s.u.spec(), s.v.spec(), s.phi.spec(), s.phi_t.spec()}; }

DkgState state_of(const GridPtr& grid, double t, Raw r) {
  return {t, SpectralField::from_spec(grid, std::move(r.u)), SpectralField::from_spec(grid, std::move(r.v)),
          SpectralField::from_spec(grid, std::move(r.phi)), SpectralField::from_spec(grid, std::move(r.phi_t))};
}

// Forcing (F_u, F_v, F_φ) on spectral arrays; scratch reused between calls.
class ForcingEvaluator {
 public:
  ForcingEvaluator(const Grid& grid, const PhysicsParams& params)
      : grid_(grid), params_(params), pu_(grid.n), pv_(grid.n), pphi_(grid.n) {}

  void operator()(const Spec& u, const Spec& v, const Spec& phi, Spec& fu, Spec& fv, Spec& fphi) {
    const std::size_t n = grid_.n;
    to_phys_dealiased(u, pu_);
    to_phys_dealiased(v, pv_);
    to_phys_dealiased(phi, pphi_);
    fu.resize(n);
    fv.resize(n);
    fphi.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      fu[j] = pphi_[j] * pv_[j];
      fv[j] = pphi_[j] * pu_[j];
      fphi[j] = 2.0 * std::real(pu_[j] * std::conj(pv_[j]));
    }
    to_spec_dealiased(fu);
    to_spec_dealiased(fv);
    to_spec_dealiased(fphi);
    const cplx minus_i(0.0, -1.0);
    const double mass = params_.M;
    for (std::size_t k = 0; k < n; ++k) {
      fu[k] = minus_i * (mass * v[k] - fu[k]);
      fv[k] = minus_i * (mass * u[k] - fv[k]);
    }
  }

 private:
  void to_phys_dealiased(const Spec& in, Spec& out) {
    kernels::omp::scale_into(in, grid_.dealias_mask, out);
    fft::backward(out, out);
    const double inv_l = 1.0 / grid_.length;
    for (auto& c : out) c *= inv_l;
  }

  void to_spec_dealiased(Spec& data) {
    fft::forward(data, data);
    const double dx = grid_.dx;
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= dx * grid_.dealias_mask[k];
  }

  const Grid& grid_;
  PhysicsParams params_;
  Spec pu_, pv_, pphi_;
};

class Stepper {
 public:
  Stepper(const GridPtr& grid, double h, const PhysicsParams& params)
      : grid_(grid), h_(h), half_(*grid, 0.5 * h, params.m), forcing_(*grid, params) {}

  void advance(Raw& y) {
    const std::size_t n = grid_->n;
    // Predictor: y_mid = E(h/2)(y + h/2 · G(y)).
    forcing_(y.u, y.v, y.phi, fu_, fv_, fphi_);
    Raw mid = y;
    const double hh = 0.5 * h_;
    for (std::size_t k = 0; k < n; ++k) {
      mid.u[k] += hh * fu_[k];
      mid.v[k] += hh * fv_[k];
      mid.phi_t[k] += hh * fphi_[k];
    }
    half_.apply(mid.u, mid.v, mid.phi, mid.phi_t);

    // Corrector: y_next = E(h/2)(E(h/2) y + h · G(y_mid)).
    forcing_(mid.u, mid.v, mid.phi, fu_, fv_, fphi_);
    half_.apply(y.u, y.v, y.phi, y.phi_t);
    for (std::size_t k = 0; k < n; ++k) {
      y.u[k] += h_ * fu_[k];
      y.v[k] += h_ * fv_[k];
      y.phi_t[k] += h_ * fphi_[k];
    }
    half_.apply(y.u, y.v, y.phi, y.phi_t);
  }

 private:
  GridPtr grid_;
  double h_;
  FreeFlow half_;
  ForcingEvaluator forcing_;
  Spec fu_, fv_, fphi_;
};

void validate_step(double h) {
  if (!(h > 0.0) || h > kMaxStep) {
    throw std::invalid_argument("step: h must lie in (0, " + std::to_string(kMaxStep) + "]");
  }
}

bool all_finite(const Spec& s) {
  for (const auto& c : s) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

void check_finite_raw(const Raw& y, double t) {
  const char* bad = !all_finite(y.u) ? "u" : !all_finite(y.v) ? "v" : !all_finite(y.phi) ? "phi"
                                                                      : !all_finite(y.phi_t) ? "phi_t"
                                                                                             : nullptr;
  if (bad != nullptr) {
    throw std::runtime_error(std::string("dkg: non-finite values in field '") + bad + "' at t=" + std::to_string(t));
  }
}

std::size_t step_count(double T, double h) {
  if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  validate_step(h);
  const double ratio = T / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("evolve: T/h must be an integer");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

void PhysicsParams::validate() const {
  if (!(M > 0.0) || !(m > 0.0)) throw std::invalid_argument("PhysicsParams: masses M and m must be positive");
}

SpectralField free_dirac_propagate(SpectralField f, double h, Chirality sign) {
  if (h < 0.0) throw std::invalid_argument("free_dirac_propagate: h must be nonnegative");
  const Grid& g = f.grid();
  const double dir = sign == Chirality::plus ? -1.0 : 1.0;
  Spec phase(g.n);
  for (std::size_t k = 0; k < g.n; ++k) phase[k] = std::polar(1.0, dir * g.freqs[k] * h);
  kernels::omp::rotate(f.mutable_spec(), phase);
  return f;
}

KgPair free_kg_propagate(SpectralField z, SpectralField z_t, double h, double m) {
  if (h < 0.0) throw std::invalid_argument("free_kg_propagate: h must be nonnegative");
  const Grid& g = z.grid();
  std::vector<double> omega(g.n);
  for (std::size_t k = 0; k < g.n; ++k) omega[k] = bracket_m(g.freqs[k], m);
  kernels::omp::kg_rotate(z.mutable_spec(), z_t.mutable_spec(), omega, h);
  return {std::move(z), std::move(z_t)};
}

Forcing nonlinear_forcing(const DkgState& state, const PhysicsParams& params) {
  const GridPtr& grid = state.grid();
  ForcingEvaluator eval(*grid, params);
  Spec fu, fv, fphi;
  eval(state.u.spec(), state.v.spec(), state.phi.spec(), fu, fv, fphi);
  return {SpectralField::from_spec(grid, std::move(fu)), SpectralField::from_spec(grid, std::move(fv)),
          SpectralField::from_spec(grid, std::move(fphi))};
}

DkgState step(const DkgState& state, double h, const PhysicsParams& params) {
  validate_step(h);
  params.validate();
  Stepper stepper(state.grid(), h, params);
  Raw y = raw_of(state);
  stepper.advance(y);
  check_finite_raw(y, state.t + h);
  return state_of(state.grid(), state.t + h, std::move(y));
}

Trajectory evolve(const DkgState& state0, double T, double h, const PhysicsParams& params,
                  std::span<const Observer> observers, std::size_t stride) {
  params.validate();
  const std::size_t steps = step_count(T, h);
  if (stride == 0 || steps % stride != 0) throw std::invalid_argument("evolve: stride must divide T/h");

  Trajectory traj;
  traj.params = params;
  traj.dt = h * static_cast<double>(stride);
  traj.states.reserve(steps / stride + 1);
  traj.states.push_back(state0);
  for (const auto& obs : observers) obs(state0);

  Stepper stepper(state0.grid(), h, params);
  Raw y = raw_of(state0);
  for (std::size_t j = 1; j <= steps; ++j) {
    stepper.advance(y);
    const double t = state0.t + static_cast<double>(j) * h;
    check_finite_raw(y, t);
    const bool keep = j % stride == 0;
    if (keep || !observers.empty()) {
      DkgState snapshot = state_of(state0.grid(), t, y);
      for (const auto& obs : observers) obs(snapshot);
      if (keep) traj.states.push_back(std::move(snapshot));
    }
  }
  return traj;
}

PhiSplit split_phi(const Trajectory& traj) {
  if (traj.states.empty()) throw std::invalid_argument("split_phi: empty trajectory");
  const DkgState& first = traj.states.front();
  PhiSplit out;
  for (const DkgState& st : traj.states) {
    auto free = free_kg_propagate(first.phi, first.phi_t, st.t - first.t, traj.params.m);
    SpectralField rest = st.phi;
    SpectralField rest_t = st.phi_t;
    kernels::omp::axpy(-1.0, free.z.spec(), rest.mutable_spec());
    kernels::omp::axpy(-1.0, free.z_t.spec(), rest_t.mutable_spec());
    out.homogeneous.times.push_back(st.t);
    out.homogeneous.field.push_back(std::move(free.z));
    out.homogeneous.field_t.push_back(std::move(free.z_t));
    out.inhomogeneous.times.push_back(st.t);
    out.inhomogeneous.field.push_back(std::move(rest));
    out.inhomogeneous.field_t.push_back(std::move(rest_t));
  }
  return out;
}

ScalarTrajectory cascade_free_wave(const SpectralField& Phi, const SpectralField& Phi_t, double from_t,
                                   double horizon, double m, std::size_t samples) {
  if (horizon < 0.0) throw std::invalid_argument("cascade_free_wave: horizon must be nonnegative");
  if (samples == 0) throw std::invalid_argument("cascade_free_wave: need at least one sample interval");
  ScalarTrajectory out;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double dt = horizon * static_cast<double>(i) / static_cast<double>(samples);
    auto wave = free_kg_propagate(Phi, Phi_t, dt, m);
    wave.z.sync_spec();
    out.times.push_back(from_t + dt);
    out.field.push_back(std::move(wave.z));
    out.field_t.push_back(std::move(wave.z_t));
  }
  return out;
}

PicardResult picard_iterate(const DkgState& state0, double T, double h, const PhysicsParams& params,
                            std::size_t sweeps) {
  params.validate();
  const std::size_t steps = step_count(T, h);
  const GridPtr& grid = state0.grid();
  const std::size_t n = grid->n;
  const FreeFlow full(*grid, h, params.m);
  ForcingEvaluator forcing(*grid, params);

  // Iterate u⁽⁻¹⁾ = v⁽⁻¹⁾ = 0 with φ⁽⁻¹⁾ the free wave.
  std::vector<Raw> iterate(steps + 1);
  iterate[0] = raw_of(state0);
  std::fill(iterate[0].u.begin(), iterate[0].u.end(), cplx{});
  std::fill(iterate[0].v.begin(), iterate[0].v.end(), cplx{});
  for (std::size_t j = 1; j <= steps; ++j) {
    iterate[j] = iterate[j - 1];
    full.apply(iterate[j].u, iterate[j].v, iterate[j].phi, iterate[j].phi_t);
  }

  PicardResult result;
  Spec fu, fv, fphi, gu, gv, gphi;
  Spec zero(n);
  const std::vector<double> ones(n, 1.0);
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    std::vector<Raw> next(steps + 1);
    next[0] = raw_of(state0);

    // Dirac half: forcing from the previous iterate.
    forcing(iterate[0].u, iterate[0].v, iterate[0].phi, fu, fv, fphi);
    for (std::size_t j = 0; j < steps; ++j) {
      forcing(iterate[j + 1].u, iterate[j + 1].v, iterate[j + 1].phi, gu, gv, gphi);
      Raw& cur = next[j + 1];
      cur.u = next[j].u;
      cur.v = next[j].v;
      kernels::omp::axpy(0.5 * h, fu, cur.u);
      kernels::omp::axpy(0.5 * h, fv, cur.v);
      kernels::omp::rotate(cur.u, full.u_phase);
      kernels::omp::rotate(cur.v, full.v_phase);
      kernels::omp::axpy(0.5 * h, gu, cur.u);
      kernels::omp::axpy(0.5 * h, gv, cur.v);
      fu.swap(gu);
      fv.swap(gv);
    }

    // Klein–Gordon half: sourced by the new spinor.
    forcing(next[0].u, next[0].v, next[0].phi, gu, gv, fphi);
    for (std::size_t j = 0; j < steps; ++j) {
      Raw& cur = next[j + 1];
      cur.phi = next[j].phi;
      cur.phi_t = next[j].phi_t;
      kernels::omp::axpy(0.5 * h, fphi, cur.phi_t);
      kernels::omp::kg_rotate(cur.phi, cur.phi_t, full.omega, h);
      // The φ argument does not enter F_φ, so any field will do here.
      forcing(cur.u, cur.v, zero, gu, gv, gphi);
      kernels::omp::axpy(0.5 * h, gphi, cur.phi_t);
      fphi.swap(gphi);
    }

    double change = 0.0;
    for (std::size_t j = 0; j <= steps; ++j) {
      Spec du = next[j].u, dv = next[j].v;
      kernels::omp::axpy(-1.0, iterate[j].u, du);
      kernels::omp::axpy(-1.0, iterate[j].v, dv);
      const double e = (kernels::omp::weighted_energy(du, ones) + kernels::omp::weighted_energy(dv, ones)) /
                       grid->length;
      change = std::max(change, std::sqrt(e));
    }
    result.update_norms.push_back(change);
    iterate = std::move(next);
  }

  result.trajectory.params = params;
  result.trajectory.dt = h;
  for (std::size_t j = 0; j <= steps; ++j) {
    result.trajectory.states.push_back(state_of(grid, state0.t + static_cast<double>(j) * h, std::move(iterate[j])));
  }
  return result;
}

DkgState make_gaussian_state(const GridPtr& grid, double amplitude) {
  const std::size_t n = grid->n;
  const double c = 0.5 * grid->length;
  std::vector<cplx> u(n), v(n), phi(n), phi_t(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid->x(j) - c;
    u[j] = amplitude * std::exp(-x * x / 4.0);
    v[j] = 0.5 * amplitude * std::exp(-(x - 2.0) * (x - 2.0) / 4.0) * std::polar(1.0, 0.5 * x);
    phi[j] = 0.8 * amplitude * std::exp(-x * x / 8.0);
  }
  DkgState st{0.0, SpectralField::from_phys(grid, std::move(u)), SpectralField::from_phys(grid, std::move(v)),
              SpectralField::from_phys(grid, std::move(phi)), SpectralField::from_phys(grid, std::move(phi_t))};
  st.u.sync_spec();
  st.v.sync_spec();
  st.phi.sync_spec();
  st.phi_t.sync_spec();
  return st;
}

DkgState make_rough_state(const GridPtr& grid, double s, double r, std::uint64_t seed, double amplitude) {
  return {0.0, sample_rough_data(grid, s, seed, amplitude, 0), sample_rough_data(grid, s, seed, amplitude, 1),
          sample_rough_real_data(grid, r, seed, amplitude, 2),
          sample_rough_real_data(grid, r - 1.0, seed, amplitude, 3)};
}

DkgState make_zero_state(const GridPtr& grid) {
  return {0.0, SpectralField(grid), SpectralField(grid), SpectralField(grid), SpectralField(grid)};
}

void check_finite(const DkgState& state) { check_finite_raw(raw_of(state), state.t); }

}  // namespace dkg
