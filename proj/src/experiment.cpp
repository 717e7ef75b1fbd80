#include "dkg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dkg/bourgain_norms.hpp"
#include "dkg/dkg_system.hpp"
#include "dkg/gwp_scheduler.hpp"
#include "dkg/imethod.hpp"
#include "dkg/kernels.hpp"

namespace dkg {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

// Reads typed fields from one JSON object, collecting problems instead of
// stopping at the first, and flags keys it was never asked about.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errs)
      : obj_(obj), path_(std::move(path)), errs_(errs) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void fail(const std::string& key, const std::string& msg) const {
    errs_.push_back((key.empty() ? path_ : at(key)) + ": " + msg);
  }
  bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

  void number(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      if (v->is_number())
        out = v->get<double>();
      else
        fail(key, "expected a number");
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = take(key)) {
      if (v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0))
        out = static_cast<Int>(v->get<std::uint64_t>());
      else
        fail(key, "expected a nonnegative integer");
    }
  }

  void signed_integer(const std::string& key, int& out) {
    if (const json* v = take(key)) {
      if (v->is_number_integer())
        out = v->get<int>();
      else
        fail(key, "expected an integer");
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = take(key)) {
      if (v->is_string())
        out = v->get<std::string>();
      else
        fail(key, "expected a string");
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) return fail(key, "expected an array of numbers");
      std::vector<double> tmp;
      for (const auto& e : *v) {
        if (!e.is_number()) return fail(key, "expected an array of numbers");
        tmp.push_back(e.get<double>());
      }
      out = std::move(tmp);
    }
  }

  void integers(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) return fail(key, "expected an array of positive integers");
      std::vector<std::size_t> tmp;
      for (const auto& e : *v) {
        if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0))
          return fail(key, "expected an array of positive integers");
        tmp.push_back(e.get<std::size_t>());
      }
      out = std::move(tmp);
    }
  }

  std::optional<Reader> child(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_object()) {
      fail(key, "expected an object");
      return std::nullopt;
    }
    return Reader(*v, at(key), errs_);
  }

  /// Reports every key that no accessor consumed.
  void finish() const {
    if (!obj_.is_object()) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) fail(it.key(), "unknown key");
  }

 private:
  const json* take(const std::string& key) {
    seen_.push_back(key);
    if (!has(key)) return nullptr;
    return &obj_.at(key);
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string>& errs_;
  std::vector<std::string> seen_;
};

bool is_pow2(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

// Fields shared by simulate and ledger; `own_norms` is false for ledger,
// whose s/r/N keys mean the I-method parameters instead.
void read_run(Reader& rd, SimulateConfig& c, bool own_norms) {
  rd.integer("n", c.n);
  rd.number("L", c.L);
  rd.number("M", c.M);
  rd.number("m", c.m);
  rd.number("h", c.h);
  rd.number("T", c.T);
  rd.integer("stride", c.stride);
  if (own_norms) {
    rd.number("s", c.s);
    rd.number("r", c.r);
    rd.number("N", c.N);
  }
  if (auto d = rd.child("data")) {
    std::string kind = "gaussian";
    d->text("kind", kind);
    d->number("amplitude", c.data.amplitude);
    if (kind == "gaussian") {
      c.data.kind = DataSpec::Kind::gaussian;
    } else if (kind == "rough") {
      c.data.kind = DataSpec::Kind::rough;
      d->number("s", c.data.s);
      d->number("r", c.data.r);
      d->integer("seed", c.data.seed);
    } else {
      d->fail("kind", "must be \"gaussian\" or \"rough\"");
    }
    d->finish();
  }
}

void check_run(const Reader& rd, const SimulateConfig& c, bool own_norms) {
  if (!is_pow2(c.n)) rd.fail("n", "must be a power of two >= 8");
  if (!(c.L > 0)) rd.fail("L", "must be positive");
  if (!(c.M > 0)) rd.fail("M", "must be positive");
  if (!(c.m > 0)) rd.fail("m", "must be positive");
  if (!(c.h > 0 && c.h <= 0.1)) rd.fail("h", "must lie in (0, 0.1]");
  if (!(c.T > 0)) rd.fail("T", "must be positive");
  if (c.h > 0 && c.T > 0) {
    const double ratio = c.T / c.h;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9 * ratio) {
      rd.fail("T", "must be an integer multiple of h");
    } else if (c.stride == 0 || static_cast<std::uint64_t>(steps) % c.stride != 0) {
      rd.fail("stride", "must be positive and divide the step count T/h");
    }
  }
  if (!(c.data.amplitude >= 0)) rd.fail("data.amplitude", "must be nonnegative");
  if (c.data.kind == DataSpec::Kind::rough && !(c.data.s < 0))
    rd.fail("data.s", "rough data needs s < 0 for the I-method");
  if (own_norms) {
    if (!(c.s < 0)) rd.fail("s", "must be negative");
    if (!(c.N >= 1)) rd.fail("N", "must be at least 1");
  }
}

SimulateConfig parse_simulate(Reader& rd) {
  SimulateConfig c;
  read_run(rd, c, true);
  rd.finish();
  check_run(rd, c, true);
  return c;
}

LedgerConfig parse_ledger(Reader& rd) {
  LedgerConfig c;
  read_run(rd, c.run, false);
  rd.numbers("N", c.cutoffs);
  rd.number("s", c.s);
  rd.number("r", c.r);
  rd.number("eps", c.eps);
  rd.finish();
  check_run(rd, c.run, false);
  if (c.cutoffs.size() < 3) rd.fail("N", "needs at least three cutoffs for the slope fit");
  for (double N : c.cutoffs)
    if (!(N >= 1)) {
      rd.fail("N", "every cutoff must be at least 1");
      break;
    }
  if (!(c.s < 0)) rd.fail("s", "must be negative");
  if (!(c.eps > 0 && c.eps <= 0.1)) rd.fail("eps", "must lie in (0, 0.1]");
  c.run.s = c.s;
  c.run.r = c.r;
  c.run.N = c.cutoffs.empty() ? 1.0 : c.cutoffs.front();
  return c;
}

ProbeConfig parse_probe(Reader& rd) {
  ProbeConfig c;
  std::string kind = "null";
  rd.text("kind", kind);
  rd.integers("scales", c.scales);
  rd.numbers("exponents", c.exponents);
  rd.number("b", c.b);
  rd.integer("seed", c.seed);
  rd.integer("samples", c.samples);
  rd.finish();
  if (kind == "null")
    c.kind = ProbeConfig::Kind::null_form;
  else if (kind == "comparison")
    c.kind = ProbeConfig::Kind::comparison;
  else
    rd.fail("kind", "must be \"null\" or \"comparison\"");
  if (c.scales.size() < 2) rd.fail("scales", "needs at least two scales");
  for (auto sc : c.scales)
    if (sc == 0 || sc > 128) {
      rd.fail("scales", "every scale must lie in [1, 128]");
      break;
    }
  if (c.exponents.size() != 3) rd.fail("exponents", "needs exactly three entries");
  if (c.samples == 0) rd.fail("samples", "must be positive");
  return c;
}

RegionConfig parse_region(Reader& rd) {
  RegionConfig c;
  std::vector<double> range{c.s_lo, c.s_hi};
  rd.numbers("s_range", range);
  rd.integer("resolution", c.resolution);
  rd.finish();
  if (range.size() != 2 || !(range[0] < range[1])) {
    rd.fail("s_range", "must be an increasing pair [lo, hi]");
  } else {
    c.s_lo = range[0];
    c.s_hi = range[1];
    if (c.s_lo < -0.25 || c.s_hi > 0) rd.fail("s_range", "must lie inside [-0.25, 0]");
  }
  if (c.resolution == 0) rd.fail("resolution", "must be positive");
  return c;
}

ScheduleConfig parse_schedule(Reader& rd) {
  ScheduleConfig c;
  rd.number("s", c.s);
  rd.number("r", c.r);
  rd.number("eps", c.eps);
  rd.number("C", c.C);
  rd.number("A", c.A);
  rd.number("B", c.B);
  rd.number("T", c.T);
  const bool fixed_cutoff = rd.has("N");
  double N = 0;
  rd.number("N", N);
  if (fixed_cutoff) c.N = N;
  if (auto s = rd.child("search")) {
    s->number("start", c.search_start);
    s->signed_integer("max_log2", c.search_max_log2);
    s->finish();
  }
  rd.finish();
  if (!(c.eps > 0 && c.eps <= 0.1)) rd.fail("eps", "must lie in (0, 0.1]");
  if (!(c.C > 0)) rd.fail("C", "must be positive");
  if (!(c.A > 0)) rd.fail("A", "must be positive");
  if (!(c.B > 0)) rd.fail("B", "must be positive");
  if (!(c.T > 0)) rd.fail("T", "must be positive");
  if (!(c.r - 2 * c.s - 2 * c.eps > 0)) rd.fail("r", "needs r - 2s - 2eps > 0");
  if (c.N && !(*c.N >= 2)) rd.fail("N", "must be at least 2");
  if (!(c.search_start >= 2)) rd.fail("search.start", "must be at least 2");
  if (c.search_max_log2 < 1 || c.search_max_log2 > 60) rd.fail("search.max_log2", "must lie in [1, 60]");
  return c;
}

json run_json(const SimulateConfig& c, bool own_norms) {
  json data{{"kind", c.data.kind == DataSpec::Kind::gaussian ? "gaussian" : "rough"}, {"amplitude", c.data.amplitude}};
  if (c.data.kind == DataSpec::Kind::rough) {
    data["s"] = c.data.s;
    data["r"] = c.data.r;
    data["seed"] = c.data.seed;
  }
  json j{{"n", c.n}, {"L", c.L}, {"M", c.M}, {"m", c.m}, {"h", c.h}, {"T", c.T}, {"stride", c.stride}, {"data", data}};
  if (own_norms) {
    j["s"] = c.s;
    j["r"] = c.r;
    j["N"] = c.N;
  }
  return j;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DkgState initial_state(const SimulateConfig& c) {
  auto grid = make_grid(c.n, c.L);
  if (c.data.kind == DataSpec::Kind::gaussian) return make_gaussian_state(grid, c.data.amplitude);
  return make_rough_state(grid, c.data.s, c.data.r, c.data.seed, c.data.amplitude);
}

std::size_t step_count(const SimulateConfig& c) { return static_cast<std::size_t>(std::llround(c.T / c.h)); }

std::string csv_simulate(const SimulateConfig& c, json& summary) {
  const PhysicsParams physics{c.M, c.m};
  const IMethodParams ip{c.N, c.s, c.r, 0.01};
  std::ostringstream out;
  out << "t,charge,modified_charge,h_s_norm_u,h_s_norm_v,h_r_norm_phi\n";
  std::size_t seen = 0;
  double first = 0.0, last = 0.0;
  const Observer row = [&](const DkgState& st) {
    const double q = charge(st);
    if (seen == 0) first = q;
    last = q;
    if (seen++ % c.stride != 0) return;
    out << num(st.t) << ',' << num(q) << ',' << num(modified_charge(st, ip)) << ',' << num(sobolev_norm(st.u, c.s))
        << ',' << num(sobolev_norm(st.v, c.s)) << ',' << num(sobolev_norm(st.phi, c.r)) << '\n';
  };
  evolve(initial_state(c), c.T, c.h, physics, std::span(&row, 1), step_count(c));
  summary = {{"steps", step_count(c)},
             {"charge_initial", first},
             {"charge_final", last},
             {"relative_charge_drift", first > 0 ? std::abs(last - first) / first : 0.0}};
  return out.str();
}

std::string csv_ledger(const LedgerConfig& c, json& summary) {
  const PhysicsParams physics{c.run.M, c.run.m};
  std::vector<LedgerAccumulator> accs;
  for (double N : c.cutoffs) accs.emplace_back(IMethodParams{N, c.s, c.r, c.eps});
  const Observer feed = [&](const DkgState& st) {
    for (auto& a : accs) a.observe(st);
  };
  evolve(initial_state(c.run), c.run.T, c.run.h, physics, std::span(&feed, 1), step_count(c.run));

  const IMethodParams ref{c.cutoffs.front(), c.s, c.r, c.eps};
  const double predicted = ref.predicted_exponent();
  std::vector<ChargeLedger> ledgers;
  std::ostringstream out;
  out << "N,s,r,eps,q0,qT,R,residual,predicted_exponent\n";
  for (std::size_t i = 0; i < accs.size(); ++i) {
    const auto l = accs[i].ledger();
    ledgers.push_back(l);
    out << num(c.cutoffs[i]) << ',' << num(c.s) << ',' << num(c.r) << ',' << num(c.eps) << ',' << num(l.q0) << ','
        << num(l.qT) << ',' << num(l.R) << ',' << num(l.residual) << ',' << num(predicted) << '\n';
  }
  const auto report = decay_report(c.cutoffs, ledgers, predicted);
  out << "fitted_slope," << num(c.s) << ',' << num(c.r) << ',' << num(c.eps) << ",,,"
      << (report.exact_zero ? std::string("exact_zero") : num(report.fitted_slope)) << ",," << num(predicted) << '\n';
  summary = {{"exact_zero", report.exact_zero},
             {"fitted_slope", report.exact_zero ? json(nullptr) : json(report.fitted_slope)},
             {"predicted_exponent", predicted}};
  return out.str();
}

std::string csv_probe(const ProbeConfig& c, json& summary) {
  std::ostringstream out;
  out << "probe,scale,ratio\n";
  if (c.kind == ProbeConfig::Kind::comparison) {
    const auto rep = comparison_check(c.samples, c.seed);
    out << "comparison," << c.samples << ',' << num(rep.max_ratio) << '\n';
    summary = {{"max_ratio", rep.max_ratio}, {"evaluated", rep.evaluated}, {"discarded", rep.discarded}};
    return out.str();
  }
  const auto rep = null_probe({c.exponents[0], c.exponents[1], c.exponents[2]}, c.b, c.scales);
  for (std::size_t i = 0; i < rep.scales.size(); ++i)
    out << "opposite_sign," << rep.scales[i] << ',' << num(rep.opposite_sign_ratios[i]) << '\n';
  for (std::size_t i = 0; i < rep.scales.size(); ++i)
    out << "same_sign," << rep.scales[i] << ',' << num(rep.same_sign_ratios[i]) << '\n';
  summary = {{"opposite_sign_growth", NullProbeReport::growth(rep.opposite_sign_ratios)},
             {"same_sign_growth", NullProbeReport::growth(rep.same_sign_ratios)},
             {"hypothesis_violations", rep.violations}};
  return out.str();
}

std::string csv_region(const RegionConfig& c, json& summary) {
  std::ostringstream out;
  out << "s,lower_gwp,lower_bourgain,upper_strip,upper_reduced\n";
  const auto rows = region_dataset(c.s_lo, c.s_hi, c.resolution);
  for (const auto& r : rows)
    out << num(r.s) << ',' << num(r.lower_gwp) << ',' << num(r.lower_bourgain) << ',' << num(r.upper_strip) << ','
        << num(r.upper_reduced) << '\n';
  summary = {{"rows", rows.size()}};
  return out.str();
}

std::string csv_schedule(const ScheduleConfig& c, json& summary) {
  SchedulerParams p{c.s, c.r, c.eps, c.N.value_or(c.search_start), c.C, c.A, c.B, c.T};
  SchedulerTrace trace;
  std::optional<double> n_star;
  if (c.N) {
    trace = run_induction(p);
    if (trace.sustained) n_star = *c.N;
  } else {
    auto search = find_cutoff(p, c.search_start, c.search_max_log2);
    trace = std::move(search.trace);
    n_star = search.N_star;
  }
  std::ostringstream out;
  out << "n,A_n,B_n,bootstrap_ok\n";
  for (const auto& st : trace.steps)
    out << st.n << ',' << num(st.A) << ',' << num(st.B) << ',' << (st.bootstrap_ok ? 1 : 0) << '\n';
  summary = {{"N_star", n_star ? json(*n_star) : json(nullptr)},
             {"verdict", trace.sustained ? "sustained" : "infeasible"},
             {"admissible", trace.admissible},
             {"exponent_check", exponent_check(c.s, c.r, c.eps)},
             {"delta_T", trace.slab.delta_T},
             {"K", trace.slab.K},
             {"rho", trace.rho},
             {"sigma", trace.sigma},
             {"sufficient_conditions", trace.sufficient},
             {"first_failure", trace.first_failure ? json(*trace.first_failure) : json(nullptr)}};
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)), problems_(std::move(problems)) {}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  return config_from_json(doc);
}

ExperimentConfig config_from_json(const json& doc) {
  std::vector<std::string> errs;
  if (!doc.is_object() || doc.size() != 1)
    throw ConfigError({"config must be an object with exactly one of simulate, ledger, probe, region, schedule"});
  const auto it = doc.begin();
  const std::string key = it.key();
  const json& body = it.value();
  Reader rd(body, key, errs);
  ExperimentConfig out;
  if (key == "simulate")
    out = parse_simulate(rd);
  else if (key == "ledger")
    out = parse_ledger(rd);
  else if (key == "probe")
    out = parse_probe(rd);
  else if (key == "region")
    out = parse_region(rd);
  else if (key == "schedule")
    out = parse_schedule(rd);
  else
    errs.push_back(key + ": unknown key");
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return out;
}

json to_json(const ExperimentConfig& config) {
  return std::visit(
      [](const auto& c) -> json {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SimulateConfig>) {
          return {{"simulate", run_json(c, true)}};
        } else if constexpr (std::is_same_v<C, LedgerConfig>) {
          json j = run_json(c.run, false);
          j["N"] = c.cutoffs;
          j["s"] = c.s;
          j["r"] = c.r;
          j["eps"] = c.eps;
          return {{"ledger", j}};
        } else if constexpr (std::is_same_v<C, ProbeConfig>) {
          return {{"probe",
                   {{"kind", c.kind == ProbeConfig::Kind::null_form ? "null" : "comparison"},
                    {"scales", c.scales},
                    {"exponents", c.exponents},
                    {"b", c.b},
                    {"seed", c.seed},
                    {"samples", c.samples}}}};
        } else if constexpr (std::is_same_v<C, RegionConfig>) {
          return {{"region", {{"s_range", {c.s_lo, c.s_hi}}, {"resolution", c.resolution}}}};
        } else {
          json j{{"s", c.s},
                 {"r", c.r},
                 {"eps", c.eps},
                 {"C", c.C},
                 {"A", c.A},
                 {"B", c.B},
                 {"T", c.T},
                 {"search", {{"start", c.search_start}, {"max_log2", c.search_max_log2}}}};
          if (c.N) j["N"] = *c.N;
          return {{"schedule", j}};
        }
      },
      config);
}

std::string subcommand_of(const ExperimentConfig& config) {
  static constexpr const char* names[] = {"simulate", "ledger", "probe", "region", "schedule"};
  return names[config.index()];
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
  if (auto* c = std::get_if<SimulateConfig>(&config)) c->data.seed = seed;
  if (auto* c = std::get_if<LedgerConfig>(&config)) c->run.data.seed = seed;
  if (auto* c = std::get_if<ProbeConfig>(&config)) c->seed = seed;
}

std::uint64_t seed_of(const ExperimentConfig& config) {
  if (auto* c = std::get_if<SimulateConfig>(&config)) return c->data.seed;
  if (auto* c = std::get_if<LedgerConfig>(&config)) return c->run.data.seed;
  if (auto* c = std::get_if<ProbeConfig>(&config)) return c->seed;
  return 0;
}

std::string run_to_csv(const ExperimentConfig& config, json* summary) {
  json local;
  json& sink = summary ? *summary : local;
  return std::visit(
      [&](const auto& c) -> std::string {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SimulateConfig>)
          return csv_simulate(c, sink);
        else if constexpr (std::is_same_v<C, LedgerConfig>)
          return csv_ledger(c, sink);
        else if constexpr (std::is_same_v<C, ProbeConfig>)
          return csv_probe(c, sink);
        else if constexpr (std::is_same_v<C, RegionConfig>)
          return csv_region(c, sink);
        else
          return csv_schedule(c, sink);
      },
      config);
}

RunResult run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const auto started = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  RunResult result;
  const std::string body = run_to_csv(config, &result.summary);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
  };

  result.csv = out_dir / (subcommand_of(config) + ".csv");
  result.manifest = out_dir / "manifest.json";
  write(result.csv, body);
  const json manifest{{"config", to_json(config)},
                      {"version", kVersion},
                      {"seed", seed_of(config)},
                      {"threads", kernels::threads()},
                      {"wall_time_s", wall},
                      {"csv", result.csv.filename().string()},
                      {"summary", result.summary}};
  write(result.manifest, manifest.dump(2) + "\n");
  return result;
}

}  // namespace dkg
