#include "dkg/spectral_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dkg/fft.hpp"
#include "dkg/kernels.hpp"
#include "dkg/rng.hpp"

namespace dkg {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double smoothstep(double x) { return x * x * (3.0 - 2.0 * x); }

}  // namespace

std::int64_t Grid::wavenumber(std::size_t j) const {
  const auto nn = static_cast<std::int64_t>(n);
  const auto jj = static_cast<std::int64_t>(j);
  return jj < nn / 2 ? jj : jj - nn;
}

std::size_t Grid::slot(std::int64_t k) const {
  const auto nn = static_cast<std::int64_t>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

GridPtr make_grid(std::size_t n, double length) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("make_grid: n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("make_grid: length must be positive");
  }
  auto grid = std::make_shared<Grid>();
  grid->n = n;
  grid->length = length;
  grid->dx = length / static_cast<double>(n);
  grid->freqs.resize(n);
  grid->dealias_mask.resize(n);
  const double dk = 2.0 * std::numbers::pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t k = grid->wavenumber(j);
    grid->freqs[j] = dk * static_cast<double>(k);
    grid->dealias_mask[j] = 3 * std::abs(k) < static_cast<std::int64_t>(n) ? 1.0 : 0.0;
  }
  return grid;
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), phys_(grid_->n), spec_(grid_->n), phys_valid_(true), spec_valid_(true) {}

SpectralField SpectralField::from_phys(GridPtr grid, std::vector<cplx> values) {
  if (values.size() != grid->n) throw std::invalid_argument("SpectralField: sample count != grid size");
  SpectralField f;
  f.grid_ = std::move(grid);
  f.phys_ = std::move(values);
  f.spec_.resize(f.grid_->n);
  f.phys_valid_ = true;
  return f;
}

SpectralField SpectralField::from_spec(GridPtr grid, std::vector<cplx> coeffs) {
  if (coeffs.size() != grid->n) throw std::invalid_argument("SpectralField: coefficient count != grid size");
  SpectralField f;
  f.grid_ = std::move(grid);
  f.spec_ = std::move(coeffs);
  f.phys_.resize(f.grid_->n);
  f.spec_valid_ = true;
  return f;
}

const std::vector<cplx>& SpectralField::phys() const {
  if (!phys_valid_) throw std::logic_error("SpectralField: physical representation is stale");
  return phys_;
}

const std::vector<cplx>& SpectralField::spec() const {
  if (!spec_valid_) throw std::logic_error("SpectralField: spectral representation is stale");
  return spec_;
}

std::vector<cplx>& SpectralField::mutable_phys() {
  sync_phys();
  spec_valid_ = false;
  return phys_;
}

std::vector<cplx>& SpectralField::mutable_spec() {
  sync_spec();
  phys_valid_ = false;
  return spec_;
}

void SpectralField::sync_spec() {
  if (spec_valid_) return;
  if (!phys_valid_) throw std::logic_error("SpectralField: no valid representation");
  fft::forward(phys_, spec_);
  for (auto& c : spec_) c *= grid_->dx;
  spec_valid_ = true;
}

void SpectralField::sync_phys() {
  if (phys_valid_) return;
  if (!spec_valid_) throw std::logic_error("SpectralField: no valid representation");
  fft::backward(spec_, phys_);
  const double inv_l = 1.0 / grid_->length;
  for (auto& c : phys_) c *= inv_l;
  phys_valid_ = true;
}

SpectralField transform(SpectralField f, Direction direction) {
  if (direction == Direction::to_spec) {
    f.sync_spec();
  } else {
    f.sync_phys();
  }
  return f;
}

// ---------------------------------------------------------------------------
// Multipliers

MultiplierSpec MultiplierSpec::bracket(double a) {
  MultiplierSpec m;
  m.kind = Kind::bracket;
  m.a = a;
  return m;
}

MultiplierSpec MultiplierSpec::bracket_m(double a, double mass) {
  MultiplierSpec m;
  m.kind = Kind::bracket_m;
  m.a = a;
  m.mass = mass;
  return m;
}

MultiplierSpec MultiplierSpec::i_op(double N, double s) {
  MultiplierSpec m;
  m.kind = Kind::i_op;
  m.cutoff = N;
  m.s = s;
  i_symbol(0.0, N, s);  // validates N and s
  return m;
}

MultiplierSpec MultiplierSpec::i_op_squared(double N, double s) {
  MultiplierSpec m = i_op(N, s);
  m.kind = Kind::i_op_squared;
  return m;
}

MultiplierSpec MultiplierSpec::i_op_inverse(double N, double s) {
  MultiplierSpec m = i_op(N, s);
  m.kind = Kind::i_op_inverse;
  return m;
}

MultiplierSpec MultiplierSpec::derivative_power(double theta) {
  MultiplierSpec m;
  m.kind = Kind::derivative_power;
  m.a = theta;
  return m;
}

MultiplierSpec MultiplierSpec::custom(std::vector<double> table) {
  MultiplierSpec m;
  m.kind = Kind::custom;
  m.table = std::move(table);
  return m;
}

double MultiplierSpec::operator()(double xi) const {
  switch (kind) {
    case Kind::bracket:
      return std::pow(dkg::bracket(xi), a);
    case Kind::bracket_m:
      return std::pow(dkg::bracket_m(xi, mass), a);
    case Kind::i_op:
      return i_symbol(xi, cutoff, s);
    case Kind::i_op_squared: {
      const double q = i_symbol(xi, cutoff, s);
      return q * q;
    }
    case Kind::i_op_inverse:
      return 1.0 / i_symbol(xi, cutoff, s);
    case Kind::derivative_power:
      if (xi == 0.0) return a == 0.0 ? 1.0 : 0.0;
      return std::pow(std::abs(xi), a);
    case Kind::custom:
      break;
  }
  throw std::logic_error("MultiplierSpec: custom tables have no pointwise symbol");
}

std::vector<double> MultiplierSpec::on(const Grid& grid) const {
  if (kind == Kind::custom) {
    if (table.size() != grid.n) throw std::invalid_argument("MultiplierSpec: custom table size != grid size");
    return table;
  }
  std::vector<double> out(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) out[j] = (*this)(grid.freqs[j]);
  return out;
}

SpectralField apply_multiplier(SpectralField f, const MultiplierSpec& m) {
  const auto symbol = m.on(f.grid());
  kernels::omp::scale(f.mutable_spec(), symbol);
  return f;
}

double i_symbol(double xi, double N, double s) {
  if (!(s < 0.0)) throw std::invalid_argument("i_symbol: regularity s must be negative");
  if (!(N >= 1.0)) throw std::invalid_argument("i_symbol: cutoff N must be >= 1");
  const double sigma = std::abs(xi) / N;
  if (sigma <= 1.0) return 1.0;
  if (sigma >= 2.0) return std::pow(sigma, s);
  return std::exp(s * smoothstep(sigma - 1.0) * std::log(sigma));
}

double sobolev_norm(const SpectralField& f, double a) {
  const Grid& g = f.grid();
  std::vector<double> weight(g.n);
  for (std::size_t j = 0; j < g.n; ++j) weight[j] = std::pow(1.0 + g.freqs[j] * g.freqs[j], a);
  return std::sqrt(kernels::omp::weighted_energy(f.spec(), weight) / g.length);
}

double l2_norm_phys(const SpectralField& f) {
  const std::vector<double> ones(f.size(), 1.0);
  return std::sqrt(f.grid().dx * kernels::omp::weighted_energy(f.phys(), ones));
}

SpectralField sample_rough_data(const GridPtr& grid, double s, std::uint64_t seed, double amplitude,
                                std::uint64_t stream) {
  std::vector<cplx> coeffs(grid->n);
  const double exponent = -s - 0.5 - kRoughDelta;
  for (std::size_t j = 0; j < grid->n; ++j) {
    const double mag = amplitude * std::pow(bracket(grid->freqs[j]), exponent);
    const double phase = 2.0 * std::numbers::pi * rng::uniform01(seed, stream, j);
    coeffs[j] = std::polar(mag, phase);
  }
  return SpectralField::from_spec(grid, std::move(coeffs));
}

SpectralField sample_rough_real_data(const GridPtr& grid, double s, std::uint64_t seed, double amplitude,
                                     std::uint64_t stream) {
  const std::size_t n = grid->n;
  std::vector<cplx> coeffs(n);
  const double exponent = -s - 0.5 - kRoughDelta;
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double mag = amplitude * std::pow(bracket(grid->freqs[j]), exponent);
    if (j == 0 || j == n / 2) {
      // Self-conjugate slots carry a real coefficient; pick the sign at random.
      coeffs[j] = rng::uniform01(seed, stream, j) < 0.5 ? mag : -mag;
      continue;
    }
    const double phase = 2.0 * std::numbers::pi * rng::uniform01(seed, stream, j);
    coeffs[j] = std::polar(mag, phase);
    coeffs[n - j] = std::conj(coeffs[j]);
  }
  return SpectralField::from_spec(grid, std::move(coeffs));
}

void dealias(std::span<cplx> spec, const Grid& grid) { kernels::omp::scale(spec, grid.dealias_mask); }

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, bool conj_second) {
  const GridPtr& grid = f.grid_ptr();
  if (grid.get() != g.grid_ptr().get() && (f.size() != g.size() || f.grid().length != g.grid().length)) {
    throw std::invalid_argument("dealiased_product: fields live on different grids");
  }
  const std::size_t n = grid->n;
  std::vector<cplx> a(n), b(n), out(n);
  kernels::omp::scale_into(f.spec(), grid->dealias_mask, a);
  kernels::omp::scale_into(g.spec(), grid->dealias_mask, b);
  fft::backward(a, a);
  fft::backward(b, b);
  // Two 1/L inverse factors and one dx forward factor: dx/L².
  if (conj_second) {
    kernels::omp::multiply_conj(a, b, out);
  } else {
    kernels::omp::multiply(a, b, out);
  }
  fft::forward(out, out);
  const double norm = grid->dx / (grid->length * grid->length);
  for (std::size_t j = 0; j < n; ++j) out[j] *= norm * grid->dealias_mask[j];
  return SpectralField::from_spec(grid, std::move(out));
}

}  // namespace dkg
