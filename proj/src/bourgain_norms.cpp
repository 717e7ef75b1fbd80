#include "dkg/bourgain_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dkg/fft.hpp"
#include "dkg/kernels.hpp"
#include "dkg/rng.hpp"

namespace dkg {

namespace {

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::int64_t signed_index(std::size_t j, std::size_t n) {
  return j < n / 2 ? static_cast<std::int64_t>(j) : static_cast<std::int64_t>(j) - static_cast<std::int64_t>(n);
}

std::vector<double> lattice(std::size_t n, double period) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = 2.0 * std::numbers::pi * static_cast<double>(signed_index(j, n)) / period;
  return out;
}

bool in_band(std::size_t j, std::size_t n) { return 3 * std::abs(signed_index(j, n)) < static_cast<std::int64_t>(n); }

void mask_2d(std::vector<cplx>& spec, std::size_t nt, std::size_t nx) {
  for (std::size_t j = 0; j < nt; ++j) {
    const bool keep_row = in_band(j, nt);
    for (std::size_t k = 0; k < nx; ++k)
      if (!keep_row || !in_band(k, nx)) spec[j * nx + k] = 0.0;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

SpaceTimeBlock::SpaceTimeBlock(std::size_t nt, std::size_t nx, double period, double length, std::vector<cplx> samples,
                               TimeWindow window)
    : nt_(nt), nx_(nx), period_(period), length_(length), window_(window), samples_(std::move(samples)) {
  if (!is_pow2(nt) || !is_pow2(nx)) throw std::invalid_argument("space-time block sizes must be powers of two");
  if (!(period > 0.0) || !(length > 0.0)) throw std::invalid_argument("space-time block extents must be positive");
  if (samples_.size() != nt * nx) throw std::invalid_argument("space-time block sample count does not match nt*nx");

  tau_ = lattice(nt, period);
  xi_ = lattice(nx, length);

  std::vector<cplx> tapered(samples_);
  if (window_ != TimeWindow::none)
    for (std::size_t j = 0; j < nt; ++j) {
      const double w = window_weight(j);
      for (std::size_t k = 0; k < nx; ++k) tapered[j * nx + k] *= w;
    }
  transform_.resize(tapered.size());
  fft::forward_2d(nt, nx, tapered, transform_);
  const double cell = (period / static_cast<double>(nt)) * (length / static_cast<double>(nx));
  for (auto& c : transform_) c *= cell;
}

double SpaceTimeBlock::window_weight(std::size_t j) const {
  if (window_ == TimeWindow::none) return 1.0;
  const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nt_));
  return 0.5 * (1.0 - c);
}

double SpaceTimeBlock::tapered_l2_squared() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < nt_; ++j) {
    const double w = window_weight(j);
    double row = 0.0;
    for (std::size_t k = 0; k < nx_; ++k) row += std::norm(samples_[j * nx_ + k]);
    sum += w * w * row;
  }
  return sum * (period_ / static_cast<double>(nt_)) * (length_ / static_cast<double>(nx_));
}

SpaceTimeBlock SpaceTimeBlock::from_trajectory(const Trajectory& traj, Component which, TimeWindow window) {
  const std::size_t nt = traj.states.size();
  if (nt == 0) throw std::invalid_argument("empty trajectory");
  const std::size_t nx = traj.states.front().u.size();
  std::vector<cplx> samples;
  samples.reserve(nt * nx);
  for (const auto& st : traj.states) {
    SpectralField f = which == Component::u ? st.u : which == Component::v ? st.v : st.phi;
    f.sync_phys();
    samples.insert(samples.end(), f.phys().begin(), f.phys().end());
  }
  return SpaceTimeBlock(nt, nx, static_cast<double>(nt) * traj.dt, traj.states.front().u.grid().length,
                        std::move(samples), window);
}

SpaceTimeBlock dealiased_product(const SpaceTimeBlock& f, const SpaceTimeBlock& g, bool conj_second) {
  const std::size_t nt = f.nt(), nx = f.nx();
  if (g.nt() != nt || g.nx() != nx || g.period() != f.period() || g.length() != f.length())
    throw std::invalid_argument("space-time blocks do not share a lattice");

  const double inv = 1.0 / static_cast<double>(nt * nx);
  auto band_limited = [&](const std::vector<cplx>& raw) {
    std::vector<cplx> spec(raw.size());
    fft::forward_2d(nt, nx, raw, spec);
    mask_2d(spec, nt, nx);
    fft::backward_2d(nt, nx, spec, spec);
    for (auto& c : spec) c *= inv;
    return spec;
  };
  const auto pf = band_limited(f.samples());
  const auto pg = band_limited(g.samples());
  std::vector<cplx> prod(pf.size());
  if (conj_second)
    kernels::omp::multiply_conj(pf, pg, prod);
  else
    kernels::omp::multiply(pf, pg, prod);
  return SpaceTimeBlock(nt, nx, f.period(), f.length(), band_limited(prod), f.window());
}

double spacetime_norm(const SpaceTimeBlock& u, NormKind kind, double a, double b) {
  const std::size_t nt = u.nt(), nx = u.nx();
  const double vol = u.period() * u.length();
  std::vector<double> w2(nt * nx);
  std::vector<double> w2_dt(kind == NormKind::calh ? nt * nx : 0);
  for (std::size_t j = 0; j < nt; ++j) {
    const double tau = u.tau(j);
    for (std::size_t k = 0; k < nx; ++k) {
      const double xi = u.xi(k);
      const double hyper = kind == NormKind::x_plus    ? tau + xi
                           : kind == NormKind::x_minus ? tau - xi
                                                       : std::abs(tau) - std::abs(xi);
      const double modulation = std::pow(bracket(hyper), 2.0 * b);
      w2[j * nx + k] = std::pow(bracket(xi), 2.0 * a) * modulation;
      if (kind == NormKind::calh) w2_dt[j * nx + k] = tau * tau * std::pow(bracket(xi), 2.0 * (a - 1.0)) * modulation;
    }
  }
  double norm = std::sqrt(kernels::omp::weighted_energy(u.transform(), w2) / vol);
  if (kind == NormKind::calh) norm += std::sqrt(kernels::omp::weighted_energy(u.transform(), w2_dt) / vol);
  return norm;
}

std::vector<std::string> EstimateSpec::violations() const {
  std::vector<std::string> out;
  const auto [e1, e2, e3] = exponents;
  auto product_conditions = [&] {
    if (!(e1 + e2 + e3 > 0.5)) out.push_back("a1+a2+a3 = " + fmt(e1 + e2 + e3) + " is not > 1/2");
    if (e1 + e2 < 0) out.push_back("a1+a2 < 0");
    if (e1 + e3 < 0) out.push_back("a1+a3 < 0");
    if (e2 + e3 < 0) out.push_back("a2+a3 < 0");
  };
  switch (which) {
    case Which::sobolev_product:
      product_conditions();
      break;
    case Which::wave_product: {
      product_conditions();
      const auto [al, be, ga] = weights;
      if (al < 0 || be < 0 || ga < 0) out.push_back("weights must be nonnegative");
      if (!(al + be + ga > 0.5)) out.push_back("alpha+beta+gamma = " + fmt(al + be + ga) + " is not > 1/2");
      break;
    }
    default: {
      const double eps = b - 0.5;
      if (!(eps > 0)) out.push_back("b = " + fmt(b) + " is not above 1/2");
      if (!(e1 + e2 + e3 > eps)) out.push_back("s1+s2+s3 = " + fmt(e1 + e2 + e3) + " is not > eps = " + fmt(eps));
      if (e2 + e3 < -0.5 + eps) out.push_back("s2+s3 = " + fmt(e2 + e3) + " is below -1/2+eps");
      if (e1 + e2 < 0) out.push_back("s1+s2 < 0");
      if (e1 + e3 < 0) out.push_back("s1+s3 < 0");
    }
  }
  return out;
}

namespace {

RatioResult make_ratio(double num, double den) {
  if (!(den > 0.0) || !std::isfinite(den)) return {true, 0.0};
  return {false, num / den};
}

SpectralField first_level(const SpaceTimeBlock& b, const GridPtr& grid) {
  std::vector<cplx> row(b.samples().begin(), b.samples().begin() + static_cast<std::ptrdiff_t>(b.nx()));
  auto field = SpectralField::from_phys(grid, std::move(row));
  field.sync_spec();
  return field;
}

}  // namespace

RatioResult estimate_ratio(const EstimateSpec& spec, const SpaceTimeBlock& f, const SpaceTimeBlock& g) {
  const auto [e1, e2, e3] = spec.exponents;
  const double b = spec.b;
  using W = EstimateSpec::Which;

  if (spec.which == W::sobolev_product) {
    if (g.nx() != f.nx() || g.length() != f.length()) throw std::invalid_argument("blocks do not share a lattice");
    const auto grid = make_grid(f.nx(), f.length());
    const auto f0 = first_level(f, grid), g0 = first_level(g, grid);
    const double den = sobolev_norm(f0, e1) * sobolev_norm(g0, e2);
    if (!(den > 0.0)) return {true, 0.0};
    return make_ratio(sobolev_norm(dealiased_product(f0, g0), -e3), den);
  }

  const SpaceTimeBlock prod = dealiased_product(f, g);
  switch (spec.which) {
    case W::wave_product: {
      const auto [al, be, ga] = spec.weights;
      return make_ratio(spacetime_norm(prod, NormKind::h, -e3, -ga),
                        spacetime_norm(f, NormKind::h, e1, al) * spacetime_norm(g, NormKind::h, e2, be));
    }
    case W::null_pp:
      return make_ratio(spacetime_norm(prod, NormKind::h, -e1, b - 1.0),
                        spacetime_norm(f, NormKind::x_plus, e2, b) * spacetime_norm(g, NormKind::x_minus, e3, b));
    case W::null_mp:
      return make_ratio(spacetime_norm(prod, NormKind::x_minus, -e3, b - 1.0),
                        spacetime_norm(f, NormKind::h, e1, b) * spacetime_norm(g, NormKind::x_plus, e2, b));
    case W::null_pm:
      return make_ratio(spacetime_norm(prod, NormKind::x_plus, -e3, b - 1.0),
                        spacetime_norm(f, NormKind::h, e1, b) * spacetime_norm(g, NormKind::x_minus, e2, b));
    default:
      throw std::logic_error("unhandled estimate");
  }
}

std::size_t packet_block_size(std::size_t max_scale) {
  if (max_scale == 0) throw std::invalid_argument("packet scale must be positive");
  // products reach |k| = 4λ-2 and must stay in the 2/3 band
  std::size_t n = 16;
  while (3 * (4 * max_scale - 2) >= n) n *= 2;
  return n;
}

SpaceTimeBlock characteristic_packet(std::size_t scale, PacketSign sign, std::size_t size) {
  if (scale == 0) throw std::invalid_argument("packet scale must be positive");
  if (2 * scale > size / 2) throw std::invalid_argument("packet does not fit the block");
  // Unit coefficients on the lattice points (τ, ξ) = (∓k, k); the
  // unnormalized inverse DFT then yields Σ e^{ik(x ∓ t)} exactly.
  const auto n = static_cast<std::int64_t>(size);
  std::vector<cplx> samples(size * size, 0.0);
  for (auto k = static_cast<std::int64_t>(scale); k < static_cast<std::int64_t>(2 * scale); ++k) {
    const std::int64_t tau = sign == PacketSign::plus ? -k : k;
    samples[static_cast<std::size_t>(((tau % n) + n) % n) * size + static_cast<std::size_t>(k)] = 1.0;
  }
  fft::backward_2d(size, size, samples, samples);
  const double two_pi = 2.0 * std::numbers::pi;
  return SpaceTimeBlock(size, size, two_pi, two_pi, std::move(samples), TimeWindow::none);
}

std::vector<double> NullProbeReport::growth(const std::vector<double>& ratios) {
  std::vector<double> out;
  for (std::size_t i = 1; i < ratios.size(); ++i) out.push_back(ratios[i] / ratios[i - 1]);
  return out;
}

NullProbeReport null_probe(const std::array<double, 3>& s_exponents, double b, const std::vector<std::size_t>& scales) {
  if (scales.size() < 2) throw std::invalid_argument("null_probe needs at least two packet scales");
  NullProbeReport report;
  report.scales = scales;
  report.violations = EstimateSpec{EstimateSpec::Which::null_pp, s_exponents, {}, b}.violations();

  const auto [s1, s2, s3] = s_exponents;
  const std::size_t size = packet_block_size(*std::max_element(scales.begin(), scales.end()));
  report.opposite_sign_ratios.resize(scales.size());
  report.same_sign_ratios.resize(scales.size());

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const auto w = characteristic_packet(scales[i], PacketSign::plus, size);
    const auto z = characteristic_packet(scales[i], PacketSign::minus, size);
    const double w_norm = spacetime_norm(w, NormKind::x_plus, s2, b);

    const auto opp = dealiased_product(w, z);
    report.opposite_sign_ratios[i] =
        spacetime_norm(opp, NormKind::h, -s1, b - 1.0) / (w_norm * spacetime_norm(z, NormKind::x_minus, s3, b));

    const auto same = dealiased_product(w, w);
    report.same_sign_ratios[i] =
        spacetime_norm(same, NormKind::h, -s1, b - 1.0) / (w_norm * spacetime_norm(w, NormKind::x_plus, s3, b));
  }
  return report;
}

std::optional<double> comparison_ratio(double tau, double xi, double lambda, double eta) {
  const double gamma = std::abs(tau) - std::abs(xi);
  const double theta = lambda + eta;
  const double sigma = tau - lambda - (xi - eta);
  const double den = std::max({std::abs(gamma), std::abs(theta), std::abs(sigma)});
  if (den == 0.0) return std::nullopt;
  return std::min(std::abs(eta), std::abs(xi - eta)) / den;
}

ComparisonReport comparison_check(std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("comparison_check needs at least one sample");
  double best = 0.0;
  std::size_t discarded = 0;
  const auto count = static_cast<std::int64_t>(samples);
#pragma omp parallel for reduction(max : best) reduction(+ : discarded) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto c = static_cast<std::uint64_t>(i);
    const auto r = comparison_ratio(rng::uniform(seed, 0, c, -1e3, 1e3), rng::uniform(seed, 1, c, -1e3, 1e3),
                                    rng::uniform(seed, 2, c, -1e3, 1e3), rng::uniform(seed, 3, c, -1e3, 1e3));
    if (r)
      best = std::max(best, *r);
    else
      ++discarded;
  }
  return {best, samples - discarded, discarded};
}

}  // namespace dkg
