#include "dkg/imethod.hpp"

#include <cmath>
#include <stdexcept>

#include "dkg/kernels.hpp"

namespace dkg {

namespace {

double l2_squared(const SpectralField& f) {
  const std::vector<double> ones(f.size(), 1.0);
  return kernels::omp::weighted_energy(f.spec(), ones) / f.grid().length;
}

// ∫ a conj(b) dx by spectral quadrature.
cplx pairing(const SpectralField& a, const SpectralField& b) {
  return kernels::omp::inner(a.spec(), b.spec()) / a.grid().length;
}

}  // namespace

void IMethodParams::validate() const {
  if (!(N >= 1.0)) throw std::invalid_argument("IMethodParams: N must be >= 1");
  if (!(s < 0.0)) throw std::invalid_argument("IMethodParams: s must be negative");
}

SpectralField apply_I(SpectralField f, const IMethodParams& p, int power) {
  p.validate();
  switch (power) {
    case 1:
      return apply_multiplier(std::move(f), MultiplierSpec::i_op(p.N, p.s));
    case 2:
      return apply_multiplier(std::move(f), MultiplierSpec::i_op_squared(p.N, p.s));
    case -1:
      return apply_multiplier(std::move(f), MultiplierSpec::i_op_inverse(p.N, p.s));
    default:
      throw std::invalid_argument("apply_I: power must be 1, 2 or -1");
  }
}

double charge(const DkgState& state) { return l2_squared(state.u) + l2_squared(state.v); }

double modified_charge(const DkgState& state, const IMethodParams& p) {
  return l2_squared(apply_I(state.u, p)) + l2_squared(apply_I(state.v, p));
}

SpectralField commutator_QI(const SpectralField& f, const SpectralField& g, const IMethodParams& p) {
  SpectralField out = apply_I(dealiased_product(f, g), p);
  const SpectralField low = dealiased_product(apply_I(f, p), apply_I(g, p));
  kernels::omp::axpy(-1.0, low.spec(), out.mutable_spec());
  return out;
}

SpectralField commutator_QI_direct(const SpectralField& f, const SpectralField& g, const IMethodParams& p) {
  p.validate();
  const Grid& grid = f.grid();
  const auto n = static_cast<std::int64_t>(grid.n);
  const double dk = 2.0 * std::acos(-1.0) / grid.length;
  std::vector<cplx> out(grid.n);
  for (std::int64_t k = -n / 2; k < n / 2; ++k) {
    if (3 * std::abs(k) >= n) continue;
    const double xi = dk * static_cast<double>(k);
    const double q_xi = i_symbol(xi, p.N, p.s);
    cplx acc = 0.0;
    for (std::int64_t a = -n / 2; a < n / 2; ++a) {
      const std::int64_t b = k - a;
      if (3 * std::abs(a) >= n || 3 * std::abs(b) >= n) continue;
      const double weight = q_xi - i_symbol(dk * static_cast<double>(a), p.N, p.s) *
                                       i_symbol(dk * static_cast<double>(b), p.N, p.s);
      acc += weight * f.spec()[grid.slot(a)] * g.spec()[grid.slot(b)];
    }
    out[grid.slot(k)] = acc / grid.length;
  }
  return SpectralField::from_spec(f.grid_ptr(), std::move(out));
}

double ledger_rate(const DkgState& state, const IMethodParams& p) {
  const SpectralField Iu = apply_I(state.u, p);
  const SpectralField Iv = apply_I(state.v, p);
  const cplx i(0.0, 1.0);
  const cplx a = i * pairing(commutator_QI(state.phi, state.u, p), Iv);
  const cplx b = i * pairing(commutator_QI(state.phi, state.v, p), Iu);
  return 2.0 * (a.real() + b.real());
}

LedgerAccumulator::LedgerAccumulator(IMethodParams p) : p_(p) { p_.validate(); }

void LedgerAccumulator::observe(const DkgState& state) {
  const double rate = ledger_rate(state, p_);
  const double q = modified_charge(state, p_);
  if (count_ == 0) {
    q0_ = q;
  } else {
    R_ += 0.5 * (state.t - t_last_) * (rate + rate_last_);
  }
  q_last_ = q;
  t_last_ = state.t;
  rate_last_ = rate;
  ++count_;
}

ChargeLedger LedgerAccumulator::ledger() const {
  ChargeLedger out;
  out.q0 = q0_;
  out.qT = q_last_;
  out.R = R_;
  out.residual = out.qT - out.q0 - out.R;
  return out;
}

ChargeLedger accumulate_R(const Trajectory& traj, const IMethodParams& p) {
  if (traj.states.empty()) throw std::invalid_argument("accumulate_R: empty trajectory");
  LedgerAccumulator acc(p);
  for (const DkgState& st : traj.states) acc.observe(st);
  return acc.ledger();
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return sxy / sxx;
}

DecayReport decay_report(std::span<const double> cutoffs, std::span<const ChargeLedger> ledgers,
                         double predicted_exponent) {
  if (cutoffs.size() != ledgers.size()) throw std::invalid_argument("decay_report: size mismatch");
  if (cutoffs.size() < 3) throw std::invalid_argument("decay_report: need at least three cutoffs");
  DecayReport report;
  report.predicted_exponent = predicted_exponent;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (ledgers[i].R == 0.0) {
      report.exact_zero = true;
      return report;
    }
    lx.push_back(std::log(cutoffs[i]));
    ly.push_back(std::log(std::abs(ledgers[i].R)));
  }
  report.fitted_slope = fit_slope(lx, ly);
  return report;
}

}  // namespace dkg
