#include "ier/risk_harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ier/errors.hpp"
#include "ier/frobenius_test.hpp"
#include "ier/lower_bounds.hpp"
#include "ier/operator_test.hpp"
#include "ier/permutation.hpp"

namespace ier {

namespace {

// Substream index of a trial's (seed, 2t) stream reserved for permutation
// draws; population graphs use substreams 0..m-1.
constexpr std::uint64_t kPermutationBranch = 0x8000000000000000ULL;

unsigned resolve_threads(const ExecutionPolicy& policy) {
  if (policy.threads > 0) return policy.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

using Json = nlohmann::json;

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ConfigError("missing config field '" + where + key + "'");
  return obj.at(key);
}

template <class T>
T get_as(const Json& value, const std::string& field) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("malformed config field '" + field + "'");
  }
}

template <class T>
std::vector<T> get_axis(const Json& axes, const std::string& key) {
  const Json& v = require(axes, key, "axes.");
  if (!v.is_array() || v.empty())
    throw ConfigError("config field 'axes." + key + "' must be a non-empty array");
  return get_as<std::vector<T>>(v, "axes." + key);
}

FamilyKind parse_family_kind(const std::string& s) {
  if (s == "er_shift") return FamilyKind::kErShift;
  if (s == "planted_partition") return FamilyKind::kPlantedPartition;
  if (s == "sign_flip") return FamilyKind::kSignFlip;
  throw ConfigError("unknown family.kind '" + s +
                    "' (expected er_shift, planted_partition or sign_flip)");
}

SeparationScale parse_scale(const std::string& s) {
  if (s == "gamma") return SeparationScale::kGamma;
  if (s == "s2") return SeparationScale::kOperator;
  if (s == "s2_sqrt_m") return SeparationScale::kOperatorTimesSqrtM;
  if (s == "s1") return SeparationScale::kFrobenius;
  throw ConfigError("unknown family.scale '" + s + "' (expected gamma, s2, s2_sqrt_m or s1)");
}

ModelFamily parse_family(const Json& root) {
  const Json& f = require(root, "family", "");
  ModelFamily family;
  family.kind = parse_family_kind(get_as<std::string>(require(f, "kind", "family."), "family.kind"));
  if (f.contains("scale"))
    family.scale = parse_scale(get_as<std::string>(f.at("scale"), "family.scale"));
  if (f.contains("seed")) family.seed = get_as<std::uint64_t>(f.at("seed"), "family.seed");
  return family;
}

SpectralConfig parse_spectral(const Json& root) {
  SpectralConfig cfg;
  if (!root.contains("spectral")) return cfg;
  const Json& s = root.at("spectral");
  if (s.contains("exact_cutoff")) cfg.exact_cutoff = get_as<int>(s.at("exact_cutoff"), "spectral.exact_cutoff");
  if (s.contains("tol")) cfg.tol = get_as<double>(s.at("tol"), "spectral.tol");
  if (s.contains("max_iter")) cfg.max_iter = get_as<int>(s.at("max_iter"), "spectral.max_iter");
  try {
    cfg.check();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("malformed config field 'spectral': ") + e.what());
  }
  return cfg;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

std::string param_name(const ModelFamily& family, double p) {
  return to_string(family.scale) + "@p=" + format_double(p);
}

double gamma_cap(const ModelFamily& family, double p) {
  return family.kind == FamilyKind::kErShift ? 1.0 - p : std::min(p, 1.0 - p);
}

ModelPair member_from_gamma(const ModelFamily& family, int n, double p, double gamma) {
  switch (family.kind) {
    case FamilyKind::kErShift: {
      if (!(p >= 0.0 && gamma >= 0.0 && p + gamma <= 1.0 + kSymmetryTolerance))
        throw ConfigError("er_shift family needs p >= 0, gamma >= 0, p + gamma <= 1");
      return {ProbabilityMatrix::constant(n, p),
              ProbabilityMatrix::constant(n, std::min(1.0, p + gamma))};
    }
    case FamilyKind::kPlantedPartition: {
      std::vector<int> labels(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) labels[i] = i < (n + 1) / 2 ? 1 : -1;
      try {
        return planted_partition_alternative({n, p, gamma}, labels);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("planted_partition family: ") + e.what());
      }
    }
    case FamilyKind::kSignFlip: {
      RngStream rng(family.seed, 0);
      try {
        return sample_sign_flip_alternative({n, p, gamma}, rng);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("sign_flip family: ") + e.what());
      }
    }
  }
  throw ConfigError("unknown family kind");
}

double separation_of(const ModelFamily& family, const ModelPair& pair) {
  return family.scale == SeparationScale::kFrobenius ? frobenius_separation(pair)
                                                     : operator_separation(pair);
}

}  // namespace

void parallel_for_index(std::size_t count, const ExecutionPolicy& policy,
                        const std::function<void(std::size_t)>& body) {
  parallel_for(count, resolve_threads(policy), body);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string to_string(TestId id) {
  switch (id) {
    case TestId::kThm1: return "thm1";
    case TestId::kThm3: return "thm3";
    case TestId::kThm4: return "thm4";
    case TestId::kThm6: return "thm6";
    case TestId::kPermT1: return "perm_t1";
    case TestId::kPermT2: return "perm_t2";
  }
  return "unknown";
}

TestId parse_test_id(const std::string& name) {
  if (name == "thm1") return TestId::kThm1;
  if (name == "thm3") return TestId::kThm3;
  if (name == "thm4") return TestId::kThm4;
  if (name == "thm6") return TestId::kThm6;
  if (name == "perm_t1" || name == "perm-t1") return TestId::kPermT1;
  if (name == "perm_t2" || name == "perm-t2") return TestId::kPermT2;
  throw ConfigError("unknown test id '" + name +
                    "' (expected thm1, thm3, thm4, thm6, perm_t1 or perm_t2)");
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::kErShift: return "er_shift";
    case FamilyKind::kPlantedPartition: return "planted_partition";
    case FamilyKind::kSignFlip: return "sign_flip";
  }
  return "unknown";
}

std::string to_string(SeparationScale s) {
  switch (s) {
    case SeparationScale::kGamma: return "gamma";
    case SeparationScale::kOperator: return "s2";
    case SeparationScale::kOperatorTimesSqrtM: return "s2_sqrt_m";
    case SeparationScale::kFrobenius: return "s1";
  }
  return "unknown";
}

TestOutcome run_test(TestId id, const GraphPopulation& g, const GraphPopulation& h,
                     double eta, int permutations, const RngStream& rng,
                     const SpectralConfig& spectral) {
  switch (id) {
    case TestId::kThm1: return frobenius_test(g, h, eta);
    case TestId::kThm3: return sparse_frobenius_test(g, h, eta);
    case TestId::kThm4: {
      OperatorTestOptions options;
      options.spectral = spectral;
      return operator_test(g, h, eta, options);
    }
    case TestId::kThm6: return sparse_operator_test(g, h, eta, spectral);
    case TestId::kPermT1:
    case TestId::kPermT2: {
      PermutationOptions options;
      options.spectral = spectral;
      const auto stat = id == TestId::kPermT1 ? PermutationStatistic::kFrobenius
                                              : PermutationStatistic::kOperator;
      return permutation_test(g, h, stat, eta, permutations, rng, options);
    }
  }
  throw ConfigError("unknown test id");
}

void TrialSpec::check() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  if (m < 1) throw ConfigError("m must be >= 1");
  if ((test == TestId::kThm1 || test == TestId::kThm3 || test == TestId::kPermT1) && m < 2)
    throw ConfigError(to_string(test) + " needs m >= 2");
  if ((test == TestId::kPermT1 || test == TestId::kPermT2) && permutations < 1)
    throw ConfigError("permutations must be >= 1");
  spectral.check();
}

TrialResult run_trial(const TrialSpec& spec, int t) {
  const auto base = static_cast<std::uint64_t>(t) * 2;
  const RngStream g_stream(spec.master_seed, base);
  const RngStream h_stream(spec.master_seed, base + 1);
  const GraphPopulation g = sample_population(spec.pair.p(), spec.m, g_stream);
  const GraphPopulation h = sample_population(spec.pair.q(), spec.m, h_stream);
  const TestOutcome outcome = run_test(spec.test, g, h, spec.eta, spec.permutations,
                                       g_stream.substream(kPermutationBranch),
                                       spec.spectral);
  if (outcome.flagged) return TrialResult::kFailure;
  return outcome.reject ? TrialResult::kReject : TrialResult::kAccept;
}

RiskEstimate empirical_rejection_rate(const TrialSpec& spec,
                                      const ExecutionPolicy& policy) {
  spec.check();
  std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
  parallel_for(results.size(), resolve_threads(policy),
               [&](std::size_t t) { results[t] = run_trial(spec, static_cast<int>(t)); });

  RiskEstimate est;
  est.trials = spec.trials;
  est.seed = spec.master_seed;
  for (const TrialResult r : results) {
    if (r == TrialResult::kReject) ++est.rejections;
    if (r == TrialResult::kFailure) ++est.failures;
  }
  est.rejection_rate = static_cast<double>(est.rejections) / est.trials;
  est.std_error =
      std::sqrt(est.rejection_rate * (1.0 - est.rejection_rate) / est.trials);
  return est;
}

RiskSummary empirical_risk(TestId test, const std::vector<ModelPair>& null_grid,
                           const std::vector<ModelPair>& alt_grid, int m, double eta,
                           int trials, std::uint64_t seed,
                           const ExecutionPolicy& policy, int permutations) {
  RiskSummary out;
  auto estimate = [&](const ModelPair& pair) {
    TrialSpec spec{test, pair, m, eta, trials, seed, permutations, {}};
    return empirical_rejection_rate(spec, policy);
  };
  for (const auto& pair : null_grid) {
    out.null_estimates.push_back(estimate(pair));
    out.type1_max = std::max(out.type1_max, out.null_estimates.back().rejection_rate);
  }
  for (const auto& pair : alt_grid) {
    out.alt_estimates.push_back(estimate(pair));
    out.type2_max = std::max(out.type2_max, 1.0 - out.alt_estimates.back().rejection_rate);
  }
  out.risk = out.type1_max + out.type2_max;
  return out;
}

double family_gamma(const ModelFamily& family, int n, double p, int m, double value) {
  if (!(value >= 0.0)) throw ConfigError("separation values must be nonnegative");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (family.scale == SeparationScale::kGamma) return value;

  const double target = family.scale == SeparationScale::kOperatorTimesSqrtM
                            ? value / std::sqrt(static_cast<double>(m))
                            : value;
  if (target == 0.0) return 0.0;
  double lo = 0.0;
  double hi = gamma_cap(family, p);
  const double reach = separation_of(family, member_from_gamma(family, n, p, hi));
  if (reach < target) {
    std::ostringstream os;
    os << "separation target " << target << " exceeds the family maximum " << reach
       << " at n=" << n << ", p=" << p;
    throw ConfigError(os.str());
  }
  // The separation functionals of these families are increasing in gamma.
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (separation_of(family, member_from_gamma(family, n, p, mid)) < target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

ModelPair family_member(const ModelFamily& family, int n, double p, int m, double value) {
  return member_from_gamma(family, n, p, family_gamma(family, n, p, m, value));
}

std::size_t SweepConfig::cell_count() const {
  return tests.size() * ns.size() * ms.size() * etas.size() * ps.size() *
         separations.size();
}

void SweepConfig::check() const {
  if (cell_count() == 0) throw ConfigError("every sweep axis must be non-empty");
  if (trials < 1) throw ConfigError("malformed config field 'trials': must be >= 1");
  for (int n : ns)
    if (n < 2) throw ConfigError("malformed config field 'axes.n': values must be >= 2");
  for (int m : ms)
    if (m < 1) throw ConfigError("malformed config field 'axes.m': values must be >= 1");
  for (double e : etas)
    if (!(e > 0.0 && e < 1.0))
      throw ConfigError("malformed config field 'axes.eta': values must lie in (0, 1)");
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("malformed config field 'axes.p': values must lie in [0, 1]");
  if (permutations < 1) throw ConfigError("malformed config field 'permutations'");
  spectral.check();
}

SweepConfig parse_sweep_config(const std::string& json_text) {
  const Json root = parse_json(json_text);
  if (!root.is_object()) throw ConfigError("sweep config must be a JSON object");
  SweepConfig cfg;
  const Json& axes = require(root, "axes", "");
  for (const auto& name : get_axis<std::string>(axes, "test"))
    cfg.tests.push_back(parse_test_id(name));
  cfg.ns = get_axis<int>(axes, "n");
  cfg.ms = get_axis<int>(axes, "m");
  cfg.etas = get_axis<double>(axes, "eta");
  cfg.ps = get_axis<double>(axes, "p");
  cfg.separations = get_axis<double>(axes, "separation");
  cfg.family = parse_family(root);
  cfg.trials = get_as<int>(require(root, "trials", ""), "trials");
  if (root.contains("seed")) cfg.seed = get_as<std::uint64_t>(root.at("seed"), "seed");
  if (root.contains("permutations"))
    cfg.permutations = get_as<int>(root.at("permutations"), "permutations");
  cfg.spectral = parse_spectral(root);
  cfg.check();
  return cfg;
}

TrialSpec sweep_cell_spec(const SweepConfig& config, std::size_t cell) {
  if (cell >= config.cell_count()) throw ConfigError("sweep cell index out of range");
  std::size_t rest = cell;
  const double sep = config.separations[rest % config.separations.size()];
  rest /= config.separations.size();
  const double p = config.ps[rest % config.ps.size()];
  rest /= config.ps.size();
  const double eta = config.etas[rest % config.etas.size()];
  rest /= config.etas.size();
  const int m = config.ms[rest % config.ms.size()];
  rest /= config.ms.size();
  const int n = config.ns[rest % config.ns.size()];
  rest /= config.ns.size();
  const TestId test = config.tests[rest];

  TrialSpec spec{test,
                 family_member(config.family, n, p, m, sep),
                 m,
                 eta,
                 config.trials,
                 config.seed,
                 config.permutations,
                 config.spectral};
  return spec;
}

SweepRow sweep_cell(const SweepConfig& config, std::size_t cell,
                    const ExecutionPolicy& policy) {
  const TrialSpec spec = sweep_cell_spec(config, cell);
  const double p = config.ps[(cell / config.separations.size()) % config.ps.size()];
  SweepRow row;
  row.test = spec.test;
  row.n = spec.pair.n();
  row.m = spec.m;
  row.eta = spec.eta;
  row.p = p;
  row.param_name = param_name(config.family, p);
  row.param_value = config.separations[cell % config.separations.size()];
  row.estimate = empirical_rejection_rate(spec, policy);
  return row;
}

std::vector<SweepRow> sweep(const SweepConfig& config, const ExecutionPolicy& policy,
                            std::size_t first_cell,
                            const std::function<void(const SweepRow&)>& on_row) {
  config.check();
  std::vector<SweepRow> rows;
  for (std::size_t cell = first_cell; cell < config.cell_count(); ++cell) {
    rows.push_back(sweep_cell(config, cell, policy));
    if (on_row) on_row(rows.back());
  }
  return rows;
}

std::string sweep_csv_header() {
  return "test,n,m,eta,param_name,param_value,trials,rejections,failures,rate,"
         "std_error,seed";
}

std::string to_csv_line(const SweepRow& row) {
  std::ostringstream os;
  os << to_string(row.test) << ',' << row.n << ',' << row.m << ','
     << format_double(row.eta) << ',' << row.param_name << ','
     << format_double(row.param_value) << ',' << row.estimate.trials << ','
     << row.estimate.rejections << ',' << row.estimate.failures << ','
     << format_double(row.estimate.rejection_rate) << ','
     << format_double(row.estimate.std_error) << ',' << row.estimate.seed;
  return os.str();
}

void PowerCurveSpec::check() const {
  if (grid.empty()) throw ConfigError("malformed config field 'grid': must be non-empty");
  if (trials < 1) throw ConfigError("malformed config field 'trials': must be >= 1");
  if (n < 2) throw ConfigError("malformed config field 'n': must be >= 2");
  if (m < 1) throw ConfigError("malformed config field 'm': must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("malformed config field 'eta'");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("malformed config field 'p'");
  spectral.check();
}

PowerCurveSpec parse_power_config(const std::string& json_text) {
  const Json root = parse_json(json_text);
  if (!root.is_object()) throw ConfigError("power config must be a JSON object");
  PowerCurveSpec spec;
  spec.test = parse_test_id(get_as<std::string>(require(root, "test", ""), "test"));
  spec.n = get_as<int>(require(root, "n", ""), "n");
  spec.m = get_as<int>(require(root, "m", ""), "m");
  spec.eta = get_as<double>(require(root, "eta", ""), "eta");
  spec.p = get_as<double>(require(root, "p", ""), "p");
  spec.family = parse_family(root);
  spec.grid = get_as<std::vector<double>>(require(root, "grid", ""), "grid");
  spec.trials = get_as<int>(require(root, "trials", ""), "trials");
  if (root.contains("seed")) spec.seed = get_as<std::uint64_t>(root.at("seed"), "seed");
  if (root.contains("permutations"))
    spec.permutations = get_as<int>(root.at("permutations"), "permutations");
  spec.spectral = parse_spectral(root);
  spec.check();
  return spec;
}

std::vector<PowerRow> power_curve(const PowerCurveSpec& spec, const ExecutionPolicy& policy) {
  spec.check();
  const double rho = sparse_operator_test_region(spec.n, spec.m, spec.eta).rho_min;
  std::vector<PowerRow> rows;
  for (const double value : spec.grid) {
    const ModelPair pair = family_member(spec.family, spec.n, spec.p, spec.m, value);
    TrialSpec trial{spec.test, pair,        spec.m,           spec.eta, spec.trials,
                    spec.seed, spec.permutations, spec.spectral};
    PowerRow out;
    out.row.test = spec.test;
    out.row.n = spec.n;
    out.row.m = spec.m;
    out.row.eta = spec.eta;
    out.row.p = spec.p;
    out.row.param_name = param_name(spec.family, spec.p);
    out.row.param_value = value;
    out.row.estimate = empirical_rejection_rate(trial, policy);
    out.s2 = operator_separation(pair);
    out.bound = power_lower_bound(spec.n, spec.m, out.s2);
    out.condition_met = out.s2 >= rho;
    rows.push_back(std::move(out));
  }
  return rows;
}

std::string power_csv_header() {
  return sweep_csv_header() + ",s2,power_lower_bound,condition_met";
}

std::string to_csv_line(const PowerRow& row) {
  return to_csv_line(row.row) + ',' + format_double(row.s2) + ',' +
         format_double(row.bound) + ',' + (row.condition_met ? "1" : "0");
}

}  // namespace ier
