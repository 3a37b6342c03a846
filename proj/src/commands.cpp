#include "twolevel/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twolevel/ensemble.hpp"
#include "twolevel/io.hpp"
#include "twolevel/oracle.hpp"
#include "twolevel/spectral_core.hpp"
#include "twolevel/sweep.hpp"

namespace twolevel::cli {

namespace {

using nlohmann::json;
using io::format_number;

constexpr double kOracleTolerance = 1e-12;

// Pair and perturbation probed by the validity scan in `verify`.
const UnperturbedPair<double> kVerifyPair{0.0, 1.0};
const PerturbationBlock<double> kVerifyBlock{0.1, -0.1, {0.2, 0.0}};
const std::vector<double> kVerifySpectators{-10.0, 11.0};

struct CommonFlags {
  CLI::Option* tol_rel_opt = nullptr;
  CLI::Option* tol_abs_opt = nullptr;
  double tol_rel = Tolerance<double>::kDefaultRel;
  double tol_abs = 0.0;
  std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& flags, const std::string& default_format) {
  flags.format = default_format;
  flags.tol_rel_opt = cmd->add_option("--tol-rel", flags.tol_rel, "relative comparison tolerance");
  flags.tol_abs_opt = cmd->add_option("--tol-abs", flags.tol_abs, "absolute comparison tolerance");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"structured", "tabular"}))
      ->capture_default_str();
}

// Command-line flags override tolerances given in the document.
Tolerance<double> resolve_tolerance(const CommonFlags& flags, const io::ProblemDocument* doc) {
  double rel = Tolerance<double>::kDefaultRel;
  double abs = 0.0;
  if (doc != nullptr) {
    rel = doc->tol_rel.value_or(rel);
    abs = doc->tol_abs.value_or(abs);
  }
  if (flags.tol_rel_opt->count() > 0) rel = flags.tol_rel;
  if (flags.tol_abs_opt->count() > 0) abs = flags.tol_abs;
  return {rel, abs};
}

io::ProblemDocument read_problem(const std::string& path, std::istream& in) {
  std::stringstream buffer;
  if (path == "-") {
    buffer << in.rdbuf();
  } else {
    std::ifstream file(path);
    if (!file) throw InputError("cannot read file " + path);
    buffer << file.rdbuf();
  }
  return io::parse_problem(buffer.str());
}

bool structured(const CommonFlags& flags) { return flags.format == "structured"; }

int cmd_analyze(const std::string& path, const CommonFlags& flags, std::istream& in,
                std::ostream& out) {
  const auto problem = read_problem(path, in);
  const auto result = io::analyze(problem, resolve_tolerance(flags, &problem));
  if (structured(flags)) {
    out << io::to_json(result).dump(2) << '\n';
  } else {
    out << "e1,e2,gap,epsilon,case\n"
        << format_number(result.e1) << ',' << format_number(result.e2) << ','
        << format_number(result.gap) << ',' << io::epsilon_label(result.epsilon) << ','
        << to_string(result.level_case) << '\n';
  }
  return kSuccess;
}

int cmd_sweep(const std::string& path, int k_steps, const CommonFlags& flags, std::istream& in,
              std::ostream& out) {
  if (k_steps < 2) throw InputError("--k-steps must be >= 2");
  const auto problem = read_problem(path, in);
  const SweepConfig<double> cfg{problem.pair, problem.v,
                                uniform_k_grid<double>(static_cast<std::size_t>(k_steps))};
  const auto points = degeneracy_restoration_sweep(cfg, resolve_tolerance(flags, &problem));

  if (structured(flags)) {
    json rows = json::array();
    for (const auto& p : points) {
      rows.push_back({{"k", p.k},
                      {"e1", p.e1},
                      {"e2", p.e2},
                      {"gap", p.gap},
                      {"case", std::string(to_string(p.level_case))}});
    }
    out << json{{"points", rows}}.dump(2) << '\n';
  } else {
    out << "k,e1,e2,gap,case\n";
    for (const auto& p : points) {
      out << format_number(p.k) << ',' << format_number(p.e1) << ',' << format_number(p.e2) << ','
          << format_number(p.gap) << ',' << to_string(p.level_case) << '\n';
    }
  }
  return kSuccess;
}

struct CensusFlags {
  CLI::Option* sigma_opt = nullptr;
  double sigma = 0.0;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 20240101;
  double e0_lower = 0.0;
  double e0_upper = 1.0;
  unsigned threads = 1;
};

int cmd_census(const CensusFlags& flags, const CommonFlags& common, std::ostream& out) {
  const UnperturbedPair<double> pair(flags.e0_lower, flags.e0_upper);
  EnsembleSpec spec;
  spec.pair = pair;
  spec.sigma = flags.sigma_opt->count() > 0 ? flags.sigma : 0.5 * pair.gap();
  spec.samples = flags.samples;
  spec.seed = flags.seed;
  spec.tol = resolve_tolerance(common, nullptr);
  const auto census = case_census(spec, flags.threads);

  if (structured(common)) {
    json doc = io::to_json(census);
    doc["e0_lower"] = pair.lower();
    doc["e0_upper"] = pair.upper();
    doc["sigma"] = spec.sigma;
    doc["samples"] = spec.samples;
    doc["seed"] = spec.seed;
    out << doc.dump(2) << '\n';
  } else {
    out << "case,count,frequency\n";
    for (LevelCase c : kAllLevelCases) {
      out << to_string(c) << ',' << census.count(c) << ',' << format_number(census.frequency(c))
          << '\n';
    }
  }
  return kSuccess;
}

struct VerifyFlags {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 20240101;
  std::vector<double> scales{10.0, 100.0, 1000.0};
  double coupling = 0.05;
};

// Largest disagreement between the closed-form energies and the Jacobi oracle
// over random blocks on the pair (0, 1), relative to each block's scale.
double oracle_deviation(const VerifyFlags& flags) {
  EnsembleSpec spec;
  spec.samples = flags.samples;
  spec.seed = flags.seed;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const auto h = effective_hamiltonian(spec.pair, sample_perturbation(spec, i));
    const auto closed = solve_two_level(h);
    const auto oracle = jacobi_diagonalize(HermitianMatrix<double>::from(h));
    const double scale = std::max(h.magnitude(), std::numeric_limits<double>::min());
    worst = std::max({worst, std::abs(closed.e1 - oracle.eigenvalues(0)) / scale,
                      std::abs(closed.e2 - oracle.eigenvalues(1)) / scale});
  }
  return worst;
}

// With coupling the error must shrink strictly; without it, every error is zero.
bool validity_ok(const std::vector<ValidityPoint<double>>& points, double coupling) {
  if (coupling == 0.0) {
    return std::all_of(points.begin(), points.end(), [](const auto& p) { return p.max_error == 0.0; });
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].max_error < points[i - 1].max_error)) return false;
  }
  return true;
}

int cmd_verify(const VerifyFlags& flags, const CommonFlags& common, std::ostream& out) {
  if (flags.samples < 1) throw InputError("--samples must be >= 1");
  const auto points =
      validity_scan(kVerifyPair, kVerifyBlock, kVerifySpectators, flags.coupling, flags.scales);
  const double deviation = oracle_deviation(flags);
  const bool oracle_pass = deviation <= kOracleTolerance;
  const bool validity_pass = validity_ok(points, flags.coupling);

  if (structured(common)) {
    json rows = json::array();
    for (const auto& p : points) rows.push_back({{"scale", p.scale}, {"max_error", p.max_error}});
    const json doc = {{"oracle",
                       {{"samples", flags.samples},
                        {"seed", flags.seed},
                        {"max_relative_deviation", deviation},
                        {"tolerance", kOracleTolerance},
                        {"pass", oracle_pass}}},
                      {"validity",
                       {{"coupling", flags.coupling}, {"points", rows}, {"pass", validity_pass}}},
                      {"pass", oracle_pass && validity_pass}};
    out << doc.dump(2) << '\n';
  } else {
    out << "quantity,scale,value\n";
    out << "oracle_max_relative_deviation,," << format_number(deviation) << '\n';
    for (const auto& p : points) {
      out << "validity_max_error," << format_number(p.scale) << ',' << format_number(p.max_error)
          << '\n';
    }
  }
  return oracle_pass && validity_pass ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Two close levels under a Hermitian perturbation", "twolevel"};
  app.require_subcommand(1);

  CommonFlags analyze_common, sweep_common, census_common, verify_common;

  std::string analyze_path = "-";
  auto* analyze = app.add_subcommand("analyze", "exact spectrum, indicator energy and case");
  analyze->add_option("file", analyze_path, "problem document (\"-\" for stdin)");
  add_common(analyze, analyze_common, "structured");

  std::string sweep_path = "-";
  int k_steps = 101;
  auto* sweep = app.add_subcommand("sweep", "degeneracy restoration over k in [0, 1]");
  sweep->add_option("file", sweep_path, "problem document (\"-\" for stdin)");
  sweep->add_option("--k-steps", k_steps, "number of uniform k grid points")->capture_default_str();
  add_common(sweep, sweep_common, "tabular");

  CensusFlags census_flags;
  auto* census = app.add_subcommand("census", "case frequencies over random perturbations");
  census_flags.sigma_opt =
      census->add_option("--sigma", census_flags.sigma, "Gaussian scale (default: half the gap)");
  census->add_option("--samples", census_flags.samples)->capture_default_str();
  census->add_option("--seed", census_flags.seed)->capture_default_str();
  census->add_option("--e0-lower", census_flags.e0_lower)->capture_default_str();
  census->add_option("--e0-upper", census_flags.e0_upper)->capture_default_str();
  census->add_option("--threads", census_flags.threads)->capture_default_str();
  add_common(census, census_common, "structured");

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "oracle equivalence and two-level validity scan");
  verify->add_option("--samples", verify_flags.samples)->capture_default_str();
  verify->add_option("--seed", verify_flags.seed)->capture_default_str();
  verify->add_option("--scales", verify_flags.scales, "ascending spectator distance scales")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--coupling", verify_flags.coupling)->capture_default_str();
  add_common(verify, verify_common, "structured");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_path, analyze_common, in, out);
    if (*sweep) return cmd_sweep(sweep_path, k_steps, sweep_common, in, out);
    if (*census) return cmd_census(census_flags, census_common, out);
    if (*verify) return cmd_verify(verify_flags, verify_common, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace twolevel::cli
