#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "ier/errors.hpp"
#include "ier/io.hpp"
#include "ier/lower_bounds.hpp"
#include "ier/risk_harness.hpp"

namespace ier::cli {

namespace fs = std::filesystem;

namespace {

struct SampleArgs {
  std::string model;
  int m = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct TestArgs {
  std::string test;
  std::string pop_g;
  std::string pop_h;
  double eta = 0.0;
  int B = 99;
  std::uint64_t seed = 0;
  bool json = false;
};

struct LbArgs {
  std::string family;
  int n = 0;
  int m = 0;
  double p = 0.0;
  double gamma = 0.0;
  double eta = 0.05;
  bool brute_force = false;
};

struct SweepArgs {
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool resume = false;
};

std::string num(double x) { return format_double(x); }

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  ValidationNotes notes;
  const ProbabilityMatrix p = read_probability_matrix(a.model, &notes);
  const GraphPopulation pop = sample_population(p, a.m, RngStream(a.seed, 0));
  write_population(a.out, pop, a.seed);
  for (const auto& msg : notes.messages) out << "note: " << msg << '\n';
  out << "wrote " << pop.m() << " graphs on " << pop.n() << " vertices to " << a.out
      << '\n';
  return kAccept;
}

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
  const TestId id = parse_test_id(a.test);
  const GraphPopulation g = read_population(a.pop_g);
  const GraphPopulation h = read_population(a.pop_h);
  const TestOutcome o = run_test(id, g, h, a.eta, a.B, RngStream(a.seed, 0));
  if (a.json) {
    out << to_json(o) << '\n';
  } else {
    out << "test: " << o.test << '\n' << "statistic: " << num(o.statistic) << '\n';
    for (const auto& t : o.thresholds) out << t.name << ": " << num(t.value) << '\n';
    for (const auto& f : o.indicators)
      out << f.name << ": " << (f.value ? "true" : "false") << '\n';
    out << "decision: " << (o.reject ? "reject" : "accept") << '\n';
  }
  if (o.flagged) {
    err << "error: " << o.flag_reason << '\n';
    return kRuntime;
  }
  return o.reject ? kReject : kAccept;
}

int cmd_lb(const LbArgs& a, std::ostream& out) {
  if (a.family != "thm2" && a.family != "thm5")
    throw ConfigError("--family must be thm2 or thm5");
  const bool sign_flip = a.family == "thm2";
  if (sign_flip)
    SignFlipConstruction{a.n, a.p, a.gamma}.check();
  else
    PlantedPartitionConstruction{a.n, a.p, a.gamma}.check();

  out << std::setprecision(17);
  double chi = 0.0;
  if (sign_flip) {
    chi = sign_flip_chi_square(a.n, a.m, a.p, a.gamma);
    out << "chi_square: " << num(chi) << '\n';
  } else {
    chi = planted_partition_chi_square_bound(a.n, a.m, a.p, a.gamma);
    out << "chi_square_bound: " << num(chi) << '\n';
    out << "bound_valid: "
        << (planted_partition_bound_valid(a.n, a.m, a.p, a.gamma) ? "true" : "false")
        << '\n';
  }
  out << "risk_lower_bound: " << num(risk_lower_bound_from_chi(chi)) << '\n';
  const double crit = sign_flip ? sign_flip_critical_gamma(a.n, a.m, a.p, a.eta)
                                : planted_partition_critical_gamma(a.n, a.m, a.p, a.eta);
  out << "critical_gamma: " << num(crit) << '\n';

  if (a.brute_force) {
    try {
      std::vector<ModelPair> family =
          sign_flip ? sign_flip_family({a.n, a.p, a.gamma})
                    : planted_partition_family({a.n, a.p, a.gamma});
      const double bf = brute_force_chi_square(er_null_pair(a.n, a.p), family, a.m);
      out << "brute_force_chi_square: " << num(bf) << '\n';
    } catch (const TooLargeToEnumerate& e) {
      out << "brute_force_chi_square: skipped (" << e.what() << ")\n";
    }
  }
  return kAccept;
}

// Number of data rows already present in a sweep CSV with the given header.
std::size_t completed_rows(const fs::path& path, const std::string& header) {
  if (!fs::exists(path)) return 0;
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) return 0;
  if (line != header)
    throw ConfigError("cannot resume: '" + path.string() + "' has a different header");
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  return rows;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const SweepConfig cfg = parse_sweep_config(read_text_file(a.config));
  const std::string header = sweep_csv_header();
  const std::size_t first = a.resume ? completed_rows(a.out, header) : 0;
  if (first > cfg.cell_count())
    throw ConfigError("cannot resume: output has more rows than the config has cells");

  std::ofstream csv(a.out, first > 0 ? std::ios::binary | std::ios::app
                                     : std::ios::binary | std::ios::trunc);
  if (!csv) throw IoError("cannot open '" + a.out + "' for writing");
  if (first == 0) csv << header << '\n' << std::flush;
  sweep(cfg, ExecutionPolicy{a.threads}, first, [&](const SweepRow& row) {
    csv << to_csv_line(row) << '\n' << std::flush;
    if (!csv) throw IoError("failed writing '" + a.out + "'");
  });
  out << "wrote " << cfg.cell_count() - first << " rows to " << a.out;
  if (first > 0) out << " (resumed after " << first << ")";
  out << '\n';
  return kAccept;
}

int cmd_power(const SweepArgs& a, std::ostream& out) {
  const PowerCurveSpec spec = parse_power_config(read_text_file(a.config));
  std::string text = power_csv_header() + '\n';
  const auto rows = power_curve(spec, ExecutionPolicy{a.threads});
  for (const auto& row : rows) text += to_csv_line(row) + '\n';
  write_text_file(a.out, text);
  out << "wrote " << rows.size() << " rows to " << a.out << '\n';
  return kAccept;
}

// Maps library errors to the exit-code contract.
int report(const std::exception& e, int code, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sample tests for inhomogeneous Erdős–Rényi graph populations",
               "iertest"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* sub_sample = app.add_subcommand("sample", "Sample a graph population from P");
  sub_sample->add_option("--model", sample.model, "probability matrix CSV")->required();
  sub_sample->add_option("--m", sample.m, "number of graphs")->required()
      ->check(CLI::PositiveNumber);
  sub_sample->add_option("--seed", sample.seed, "master seed (default 0)");
  sub_sample->add_option("--out", sample.out, "output directory")->required();

  TestArgs test;
  auto* sub_test = app.add_subcommand("test", "Run a two-sample test on two populations");
  sub_test->add_option("--test", test.test, "thm1|thm3|thm4|thm6|perm-t1|perm-t2")
      ->required();
  sub_test->add_option("--pop-g", test.pop_g, "population directory G")->required();
  sub_test->add_option("--pop-h", test.pop_h, "population directory H")->required();
  sub_test->add_option("--eta", test.eta, "level (alpha for permutation tests)")
      ->required();
  sub_test->add_option("--B", test.B, "permutations (default 99)");
  sub_test->add_option("--seed", test.seed, "permutation seed (default 0)");
  sub_test->add_flag("--json", test.json, "emit the full outcome as JSON");

  LbArgs lb;
  auto* sub_lb = app.add_subcommand("lb", "Chi-square minimax lower bounds");
  sub_lb->add_option("--family", lb.family, "thm2 (sign flip) or thm5 (planted partition)")
      ->required();
  sub_lb->add_option("--n", lb.n)->required();
  sub_lb->add_option("--m", lb.m)->required();
  sub_lb->add_option("--p", lb.p)->required();
  sub_lb->add_option("--gamma", lb.gamma)->required();
  sub_lb->add_option("--eta", lb.eta, "level for the critical gamma (default 0.05)");
  sub_lb->add_flag("--brute-force", lb.brute_force, "also enumerate when small enough");

  SweepArgs sweep_args;
  auto* sub_sweep = app.add_subcommand("sweep", "Monte Carlo sweep over a JSON grid");
  sub_sweep->add_option("--config", sweep_args.config)->required();
  sub_sweep->add_option("--out", sweep_args.out)->required();
  sub_sweep->add_option("--threads", sweep_args.threads, "worker cap (0 = all cores)");
  sub_sweep->add_flag("--resume", sweep_args.resume, "continue a partial output CSV");

  SweepArgs power_args;
  auto* sub_power = app.add_subcommand("power", "Empirical power curve");
  sub_power->add_option("--config", power_args.config)->required();
  sub_power->add_option("--out", power_args.out)->required();
  sub_power->add_option("--threads", power_args.threads, "worker cap (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAccept;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sub_sample->parsed()) return cmd_sample(sample, out);
    if (sub_test->parsed()) return cmd_test(test, out, err);
    if (sub_lb->parsed()) return cmd_lb(lb, out);
    if (sub_sweep->parsed()) return cmd_sweep(sweep_args, out);
    if (sub_power->parsed()) return cmd_power(power_args, out);
  } catch (const IoError& e) {
    return report(e, kRuntime, err);
  } catch (const NoConvergence& e) {
    return report(e, kRuntime, err);
  } catch (const ConvergenceError& e) {
    return report(e, kRuntime, err);
  } catch (const DegenerateDenominator& e) {
    return report(e, kRuntime, err);
  } catch (const DivergentChiSquare& e) {
    return report(e, kRuntime, err);
  } catch (const Error& e) {
    // Config, parse, validation, size and domain errors.
    return report(e, kUsage, err);
  } catch (const std::exception& e) {
    return report(e, kRuntime, err);
  }
  return kUsage;
}

}  // namespace ier::cli
