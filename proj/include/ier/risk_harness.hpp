#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ier/model.hpp"
#include "ier/rng.hpp"
#include "ier/spectral.hpp"
#include "ier/test_outcome.hpp"

namespace ier {

/// Decision rules the harness can run. String ids: thm1 (dense Frobenius),
/// thm3 (sparse Frobenius), thm4 (dense operator), thm6 (sparse operator),
/// perm_t1, perm_t2 (permutation-calibrated T1 / T2).
enum class TestId { kThm1, kThm3, kThm4, kThm6, kPermT1, kPermT2 };

std::string to_string(TestId id);
/// Accepts the ids above; "perm-t1"/"perm-t2" are accepted as aliases.
/// Throws ConfigError otherwise.
TestId parse_test_id(const std::string& name);

/// Runs one decision rule on two populations. eta is alpha for the
/// permutation tests; `permutations` and `rng` are used only by those.
TestOutcome run_test(TestId id, const GraphPopulation& g, const GraphPopulation& h,
                     double eta, int permutations, const RngStream& rng,
                     const SpectralConfig& spectral = {});

struct ExecutionPolicy {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Calls body(i) for every i in [0, count) on up to policy.threads workers.
/// Each index runs exactly once; the first exception is rethrown after all
/// workers stop. Callers that write results by index get schedule-independent
/// output.
void parallel_for_index(std::size_t count, const ExecutionPolicy& policy,
                        const std::function<void(std::size_t)>& body);

struct TrialSpec {
  TestId test = TestId::kThm1;
  ModelPair pair{ProbabilityMatrix::zeros(1), ProbabilityMatrix::zeros(1)};
  int m = 2;
  double eta = 0.05;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int permutations = 99;
  SpectralConfig spectral;

  /// Throws ConfigError.
  void check() const;
};

struct RiskEstimate {
  double rejection_rate = 0.0;  // rejections / trials
  int trials = 0;
  int rejections = 0;
  int failures = 0;  // flagged outcomes, counted neither as reject nor accept
  double std_error = 0.0;  // sqrt(r (1 - r) / trials)
  std::uint64_t seed = 0;

  friend bool operator==(const RiskEstimate&, const RiskEstimate&) = default;
};

enum class TrialResult : std::uint8_t { kAccept, kReject, kFailure };

/// Trial t samples G from P with stream (seed, 2t) and H from Q with stream
/// (seed, 2t + 1); permutation draws use a dedicated substream of (seed, 2t).
TrialResult run_trial(const TrialSpec& spec, int t);

/// Deterministic in spec.master_seed for every thread count.
RiskEstimate empirical_rejection_rate(const TrialSpec& spec,
                                      const ExecutionPolicy& policy = {});

struct RiskSummary {
  double type1_max = 0.0;
  double type2_max = 0.0;
  double risk = 0.0;
  std::vector<RiskEstimate> null_estimates;
  std::vector<RiskEstimate> alt_estimates;
};

/// Maximum empirical risk over finite stand-ins for the null and alternative
/// classes: max over nulls of the rejection rate plus max over alternatives of
/// 1 - rejection rate. A max over an empty grid is 0.
RiskSummary empirical_risk(TestId test, const std::vector<ModelPair>& null_grid,
                           const std::vector<ModelPair>& alt_grid, int m, double eta,
                           int trials, std::uint64_t seed,
                           const ExecutionPolicy& policy = {}, int permutations = 99);

// ---------------------------------------------------------------------------
// Parameterized model families for sweeps and power curves.

enum class FamilyKind {
  kErShift,           // P = p, Q = p + gamma off the diagonal
  kPlantedPartition,  // P = p, Q = p + gamma v_i v_j, balanced fixed labels
  kSignFlip,          // P = p, Q = p +- gamma, signs fixed by the family seed
};

/// How the swept parameter is interpreted.
enum class SeparationScale {
  kGamma,                // the perturbation gamma itself
  kOperator,             // target operator separation S2
  kOperatorTimesSqrtM,   // target S2 = value / sqrt(m)
  kFrobenius,            // target Frobenius separation S1
};

struct ModelFamily {
  FamilyKind kind = FamilyKind::kPlantedPartition;
  SeparationScale scale = SeparationScale::kGamma;
  std::uint64_t seed = 0;
};

std::string to_string(FamilyKind k);
std::string to_string(SeparationScale s);

/// Family member on n vertices with base probability p. For separation
/// targets, gamma is found by bisection on the exact separation functional;
/// a target beyond the family's reach throws ConfigError.
ModelPair family_member(const ModelFamily& family, int n, double p, int m,
                        double value);
/// The gamma family_member uses for the given target.
double family_gamma(const ModelFamily& family, int n, double p, int m, double value);

// ---------------------------------------------------------------------------
// Sweeps.

/// Cartesian product of axes; cells are ordered test, n, m, eta, p,
/// separation with separation varying fastest. Every cell runs with the
/// config seed.
struct SweepConfig {
  std::vector<TestId> tests;
  std::vector<int> ns;
  std::vector<int> ms;
  std::vector<double> etas;
  std::vector<double> ps;
  std::vector<double> separations;
  ModelFamily family;
  int trials = 0;
  std::uint64_t seed = 0;
  int permutations = 99;
  SpectralConfig spectral;

  std::size_t cell_count() const;
  void check() const;
};

/// Parses the JSON sweep document. Throws ConfigError naming the missing or
/// malformed field.
SweepConfig parse_sweep_config(const std::string& json_text);

struct SweepRow {
  TestId test = TestId::kThm1;
  int n = 0;
  int m = 0;
  double eta = 0.0;
  double p = 0.0;
  std::string param_name;
  double param_value = 0.0;
  RiskEstimate estimate;
};

TrialSpec sweep_cell_spec(const SweepConfig& config, std::size_t cell);
SweepRow sweep_cell(const SweepConfig& config, std::size_t cell,
                    const ExecutionPolicy& policy = {});

/// Runs cells first_cell.. in order; `on_row` (if set) sees each row as soon
/// as it is computed, which lets callers persist partial progress.
std::vector<SweepRow> sweep(const SweepConfig& config, const ExecutionPolicy& policy = {},
                            std::size_t first_cell = 0,
                            const std::function<void(const SweepRow&)>& on_row = {});

/// test,n,m,eta,param_name,param_value,trials,rejections,failures,rate,std_error,seed
std::string sweep_csv_header();
std::string to_csv_line(const SweepRow& row);

// ---------------------------------------------------------------------------
// Power curves.

struct PowerCurveSpec {
  TestId test = TestId::kThm6;
  ModelFamily family;
  int n = 0;
  double p = 0.0;
  int m = 1;
  double eta = 0.05;
  std::vector<double> grid;
  int trials = 0;
  std::uint64_t seed = 0;
  int permutations = 99;
  SpectralConfig spectral;

  void check() const;
};

PowerCurveSpec parse_power_config(const std::string& json_text);

struct PowerRow {
  SweepRow row;
  double s2 = 0.0;          // operator separation of the family member
  double bound = 0.0;       // power_lower_bound(n, m, s2)
  bool condition_met = false;  // s2 >= sparse operator region rho_min
};

std::vector<PowerRow> power_curve(const PowerCurveSpec& spec,
                                  const ExecutionPolicy& policy = {});

/// sweep header + ,s2,power_lower_bound,condition_met
std::string power_csv_header();
std::string to_csv_line(const PowerRow& row);

/// Shortest round-trip decimal rendering used in every CSV the harness writes.
std::string format_double(double x);

}  // namespace ier
