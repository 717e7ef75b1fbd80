#include "dkg/gwp_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dkg {

bool region_check(RegionKind kind, double s, double r) {
  switch (kind) {
    case RegionKind::lwp:
      return s > -0.25 && r > 0.0 && std::abs(s) <= r && r <= 1.0 + s;
    case RegionKind::gwp:
      return s > -0.125 && s < 0.0 && lower_boundary_radical(s, r) && r <= 1.0 + s;
    case RegionKind::reduced:
      return s > -0.125 && s < 0.0 && lower_boundary_radical(s, r) && r < 0.5 + 2.0 * s;
  }
  return false;
}

bool boundary_equivalence(double s, double r) {
  if (!(s < 0.0)) throw std::invalid_argument("boundary_equivalence requires s < 0");
  return r * r - 2.0 * s * r + s > 0.0;
}

bool lower_boundary_radical(double s, double r) { return r > s + std::sqrt(s * s - s); }

void SchedulerParams::validate() const {
  std::ostringstream errs;
  if (!(eps > 0.0 && eps <= 0.1)) errs << " eps must lie in (0, 0.1];";
  if (!(N >= 2.0)) errs << " N must be at least 2;";
  if (!(A > 0.0)) errs << " A must be positive;";
  if (!(B > 0.0)) errs << " B must be positive;";
  if (!(C > 0.0)) errs << " C must be positive;";
  if (!(T > 0.0)) errs << " T must be positive;";
  const auto msg = errs.str();
  if (!msg.empty()) throw std::invalid_argument("invalid scheduler parameters:" + msg);
}

Slab slab_length(const SchedulerParams& p) {
  const double denom = p.r - 2.0 * p.s - 2.0 * p.eps;
  if (!(denom > 0.0)) throw std::invalid_argument("slab_length requires r - 2s - 2eps > 0");
  if (!(p.N > 0.0)) throw std::invalid_argument("slab_length requires N > 0");
  Slab out;
  out.delta_T = std::pow(p.N, (p.s - p.eps) / denom);
  out.K = static_cast<std::uint64_t>(std::ceil(p.T / out.delta_T));
  return out;
}

double bootstrap_value(double A, double B, const SchedulerParams& p) {
  return p.C * (B + A * A) * (std::pow(p.N, -2.0 * p.eps) + std::pow(p.N, -p.r + 2.0 * p.eps));
}

bool bootstrap_ok(double A, double B, const SchedulerParams& p) { return bootstrap_value(A, B, p) <= 1.0; }

AB induction_step(double A, double B, const SchedulerParams& p, double delta_T) {
  if (A < 0.0 || B < 0.0) throw std::invalid_argument("induction_step requires nonnegative A and B");
  const double A2 = A * A;
  const double decay = std::pow(p.N, -p.r + 2.0 * p.eps);
  const double coupling = p.C * (B + A2) * A2 * decay;
  AB next;
  next.A = std::sqrt(A2 + coupling);
  next.B = B + p.C * A2 * delta_T + coupling * delta_T + p.C * A2 * std::pow(p.N, -0.5 + 2.0 * p.eps);
  return next;
}

ExponentPair growth_exponents(double s, double r, double eps) {
  const double denom = r - 2.0 * s - 2.0 * eps;
  if (!(denom > 0.0)) throw std::invalid_argument("exponent_check requires r - 2s - 2eps > 0");
  const double slab = (-s + eps) / denom;
  return {slab - r + 2.0 * eps, slab - 0.5 + 2.0 * eps};
}

bool exponent_check(double s, double r, double eps) {
  const auto e = growth_exponents(s, r, eps);
  return e.first < 0.0 && e.second < 0.0;
}

SchedulerTrace run_induction(const SchedulerParams& p) {
  p.validate();
  SchedulerTrace trace;
  trace.admissible = region_check(RegionKind::reduced, p.s, p.r);
  trace.slab = slab_length(p);
  trace.rho = 2.0 * p.A;
  trace.sigma = 2.0 * p.B + 4.0 * p.C * p.T * p.A * p.A;

  const auto e = growth_exponents(p.s, p.r, p.eps);
  const double rho2 = trace.rho * trace.rho;
  trace.sufficient[0] = p.C * trace.sigma * rho2 * std::pow(p.N, e.first) <= 3.0 * p.A * p.A;
  trace.sufficient[1] = p.C * p.T * trace.sigma * rho2 * std::pow(p.N, -p.r + 2.0 * p.eps) <= p.B / 2.0;
  trace.sufficient[2] = p.C * rho2 * std::pow(p.N, e.second) <= p.B / 2.0;
  trace.sufficient[3] = p.C * p.T * rho2 <= 4.0 * p.C * p.T * p.A * p.A;

  double A = p.A, B = p.B;
  trace.steps.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(trace.slab.K, 1u << 20)));
  for (std::uint64_t n = 1; n <= trace.slab.K; ++n) {
    StepRecord rec{n, A, B, bootstrap_ok(A, B, p), A <= trace.rho && B <= trace.sigma};
    trace.steps.push_back(rec);
    if (!rec.bootstrap_ok || !rec.within_bounds) {
      trace.first_failure = n;
      return trace;
    }
    const auto next = induction_step(A, B, p, trace.slab.delta_T);
    A = next.A;
    B = next.B;
  }
  trace.sustained = true;
  return trace;
}

CutoffSearch find_cutoff(SchedulerParams p, double start, int max_log2) {
  CutoffSearch out;
  const double limit = std::ldexp(1.0, max_log2);
  for (double N = start; N <= limit; N *= 2.0) {
    p.N = N;
    out.trace = run_induction(p);
    ++out.tried;
    if (out.trace.sustained) {
      out.N_star = N;
      break;
    }
  }
  return out;
}

std::vector<RegionRow> region_dataset(double s_lo, double s_hi, std::size_t resolution) {
  if (!(s_lo < s_hi)) throw std::invalid_argument("region s-range must be increasing");
  if (resolution == 0) throw std::invalid_argument("region resolution must be positive");
  std::vector<RegionRow> rows(resolution);
  const double step = (s_hi - s_lo) / static_cast<double>(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double s = s_lo + (static_cast<double>(i) + 0.5) * step;
    const double root = std::sqrt(s * s - s);
    rows[i] = {s, s + root, -s + root, 1.0 + s, 0.5 + 2.0 * s};
  }
  return rows;
}

}  // namespace dkg
