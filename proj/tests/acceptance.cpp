// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twolevel/commands.hpp"
#include "twolevel/ensemble.hpp"
#include "twolevel/io.hpp"
#include "twolevel/oracle.hpp"
#include "twolevel/spectral_core.hpp"
#include "twolevel/sweep.hpp"

using namespace twolevel;
using C = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240101;
const UnperturbedPair<double> kPair{0.0, 1.0};

// Repulsion probability for sigma = 0.5 on the pair (0, 1), from a 1e7-sample
// numpy Monte Carlo (0.7792875) and 1-D quadrature over V11 - V22 (0.7792669).
constexpr double kExpectedRepulsion = 0.7792669;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

EnsembleSpec ensemble(std::uint64_t samples, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.pair = kPair;
  spec.sigma = 0.5;
  spec.samples = samples;
  spec.seed = seed;
  return spec;
}

Outcome exactness() {
  const auto start = Clock::now();
  const auto spec = ensemble(10000, kSeed);
  double worst = 0;
  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const auto h = effective_hamiltonian(kPair, sample_perturbation(spec, i));
    const auto closed = solve_two_level(h);
    const auto oracle = jacobi_diagonalize(HermitianMatrix<double>::from(h));
    const double scale = h.magnitude();
    worst = std::max({worst, std::abs(closed.e1 - oracle.eigenvalues(0)) / scale,
                      std::abs(closed.e2 - oracle.eigenvalues(1)) / scale});
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "max relative deviation " << worst << " (<= 1e-12), " << elapsed << " s (< 5 s)";
  return {worst <= 1e-12 && elapsed < 5.0, os.str()};
}

Outcome gap_identity() {
  const auto spec = ensemble(10000, kSeed);
  double worst = 0;
  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const auto v = sample_perturbation(spec, i);
    const auto h = effective_hamiltonian(kPair, v);
    const auto solved = solve_two_level(h);
    const double scale = std::max(h.magnitude(), comparison_scale(kPair, v));
    worst = std::max(worst, std::abs(perturbed_gap(kPair, v) - (solved.e2 - solved.e1)) / scale);
  }
  std::ostringstream os;
  os << "max relative deviation " << worst << " (<= 1e-12)";
  return {worst <= 1e-12, os.str()};
}

Outcome classification_identity() {
  struct Input {
    UnperturbedPair<double> pair;
    PerturbationBlock<double> v;
  };
  std::vector<Input> inputs = {
      {kPair, {1.0, -1.0}},              // epsilon = gap0, V12 = 0
      {kPair, {0.5, -0.5, C(0.5)}},      // epsilon = gap0, V12 != 0
      {kPair, {0.5, -0.5, C(0, 0.5)}},
      {kPair, {0.3, 0.3}},               // equal diagonal shift
      {kPair, {}},                       // null case
      {kPair, {0.5, -0.5}},              // superimposition
      {kPair, {0.75, -0.25}},
      {{-3.0, 1.0}, {2.0, -2.0}},
      {{0.0, 0.0}, {0.2, -0.2, C(0.15)}},
  };
  const auto spec = ensemble(100000, kSeed + 1);
  for (std::uint64_t i = 0; i < spec.samples; ++i) inputs.push_back({kPair, sample_perturbation(spec, i)});

  std::uint64_t disagreements = 0;
  double worst = 0;
  for (const auto& [pair, v] : inputs) {
    if (classify_by_indicator(pair, v).level_case != classify_by_gap(pair, v)) ++disagreements;
    const auto eps = indicator_energy(v);
    if (!is_finite(eps)) continue;
    const double gap = perturbed_gap(pair, v);
    const double gap0 = pair.gap();
    const double lhs = gap * gap - gap0 * gap0;
    const double rhs = 2 * (v.v11() - v.v22()) * (std::get<double>(eps) - gap0);
    const double scale = comparison_scale(pair, v);
    worst = std::max(worst, std::abs(lhs - rhs) / (scale * scale));
  }
  std::ostringstream os;
  os << inputs.size() << " inputs, " << disagreements
     << " disagreements, identity max relative deviation " << worst << " (<= 1e-12)";
  return {disagreements == 0 && worst <= 1e-12, os.str()};
}

Outcome superimposition() {
  const PerturbationBlock<double> v(0.5, -0.5);
  const auto solved = solve_two_level(effective_hamiltonian(kPair, v));
  const double gap = perturbed_gap(kPair, v);
  const auto result = classify_by_indicator(kPair, v);
  const bool eps_ok = is_finite(result.epsilon) && std::get<double>(result.epsilon) == 0.5;
  std::ostringstream os;
  os << "gap " << gap << " / " << solved.gap << ", epsilon "
     << (eps_ok ? "0.5" : "wrong") << ", case " << to_string(result.level_case);
  return {std::abs(gap) <= 1e-15 && std::abs(solved.gap) <= 1e-15 && eps_ok &&
              result.level_case == LevelCase::Superimposition,
          os.str()};
}

Outcome degeneracy_restoration() {
  const SweepConfig<double> cfg{{0.0, 0.0}, {0.2, -0.2, C(0.15)}, uniform_k_grid<double>(101)};
  const auto points = degeneracy_restoration_sweep(cfg);
  double worst = 0;
  for (const auto& p : points) worst = std::max(worst, std::abs(p.gap - (1 - p.k) * 0.5));
  std::ostringstream os;
  os << points.size() << " points, max |gap - (1-k) 0.5| " << worst << " (<= 1e-12), gap(1) "
     << points.back().gap;
  return {points.size() == 101 && worst <= 1e-12 && points.back().k == 1.0 &&
              points.back().gap == 0.0,
          os.str()};
}

// Per-level monotonicity in t is checked as stated. It does not hold for every
// block: a first-order shift t*V_kk can nearly cancel the second-order term
// t^2 |V12|^2 / gap0 at t = 0.1, so the first counterexample is reported.
Outcome limit_condition() {
  const auto spec = ensemble(200, kSeed + 2);
  std::uint64_t non_monotone = 0;
  std::string counterexample;
  double worst_final = 0;
  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const auto v = sample_perturbation(spec, i);
    double prev1 = INFINITY, prev2 = INFINITY;
    bool monotone = true;
    for (int exponent = 1; exponent <= 8; ++exponent) {
      const auto solved = solve_two_level(effective_hamiltonian(kPair, std::pow(10.0, -exponent) * v));
      const double d1 = std::abs(solved.e1 - kPair.lower());
      const double d2 = std::abs(solved.e2 - kPair.upper());
      if ((d1 > prev1 || d2 > prev2) && monotone) {
        monotone = false;
        if (counterexample.empty()) {
          std::ostringstream os;
          os << "sample " << i << " (v11=" << v.v11() << ", v22=" << v.v22()
             << ", |v12|=" << std::abs(v.v12()) << ") grows from t=1e-" << exponent - 1
             << " to t=1e-" << exponent;
          counterexample = os.str();
        }
      }
      prev1 = d1;
      prev2 = d2;
    }
    if (!monotone) ++non_monotone;
    worst_final = std::max({worst_final, prev1, prev2});
  }
  std::ostringstream os;
  os << spec.samples << " blocks, " << non_monotone << " not monotone in t"
     << (counterexample.empty() ? "" : " [first: " + counterexample + "]")
     << ", max |E_k - E0_k| at t=1e-8: " << worst_final << " (< 1e-7)";
  return {non_monotone == 0 && worst_final < 1e-7, os.str()};
}

Outcome closeness() {
  const PerturbationBlock<double> v(0.1, -0.1, C(0.2));
  const std::vector<double> spectators{-10.0, 11.0};
  const std::vector<double> scales{10.0, 100.0, 1000.0};
  const auto coupled = validity_scan(kPair, v, spectators, 0.05, scales);
  const auto decoupled = validity_scan(kPair, v, spectators, 0.0, scales);

  bool decreasing = true;
  for (std::size_t i = 1; i < coupled.size(); ++i) {
    decreasing = decreasing && coupled[i].max_error < coupled[i - 1].max_error;
  }
  bool zero = true;
  for (const auto& p : decoupled) zero = zero && p.max_error == 0.0;

  std::ostringstream os;
  os << "w=0.05 errors";
  for (const auto& p : coupled) os << ' ' << p.max_error;
  os << "; w=0 all exactly zero: " << std::boolalpha << zero;
  return {decreasing && zero, os.str()};
}

Outcome census() {
  const auto start = Clock::now();
  const auto spec = ensemble(100000, kSeed);
  const auto result = case_census(spec);
  const double elapsed = seconds_since(start);

  const double n = static_cast<double>(spec.samples);
  const double repulsion = result.frequency(LevelCase::Repulsion);
  const double threshold = 0.5 + 3 / std::sqrt(n);
  const double binomial_sd = std::sqrt(kExpectedRepulsion * (1 - kExpectedRepulsion) / n);
  const bool matches_expected = std::abs(repulsion - kExpectedRepulsion) <= 5 * binomial_sd;

  std::ostringstream os;
  os << "repulsion " << repulsion << " (> " << threshold << ", expected " << kExpectedRepulsion
     << " +- " << 5 * binomial_sd << "), rapprochement "
     << result.frequency(LevelCase::Rapprochement) << ", " << elapsed << " s (< 10 s)";
  return {repulsion > threshold && result.count(LevelCase::Rapprochement) > 0 && matches_expected &&
              elapsed < 10.0,
          os.str()};
}

Outcome mixing_residuals() {
  const auto spec = ensemble(10000, kSeed + 3);
  double worst_residual = 0, worst_norm = 0;
  for (std::uint64_t i = 0; i < spec.samples; ++i) {
    const auto h = effective_hamiltonian(kPair, sample_perturbation(spec, i));
    const auto p = solve_two_level(h);
    const auto& m = p.mixing;
    const double scale = h.magnitude();
    auto residual = [&](double e, C x, C y) {
      return std::max(std::abs((h.h11 - e) * x + h.h12 * y),
                      std::abs(std::conj(h.h12) * x + (h.h22 - e) * y)) / scale;
    };
    worst_residual = std::max({worst_residual, residual(p.e1, m.a, m.b), residual(p.e2, m.c, m.d)});
    worst_norm = std::max({worst_norm, std::abs(std::norm(m.a) + std::norm(m.b) - 1),
                           std::abs(std::norm(m.c) + std::norm(m.d) - 1),
                           std::abs(std::conj(m.a) * m.c + std::conj(m.b) * m.d)});
  }
  std::ostringstream os;
  os << "max residual " << worst_residual << " (<= 1e-10), max normalization/orthogonality error "
     << worst_norm << " (<= 1e-12)";
  return {worst_residual <= 1e-10 && worst_norm <= 1e-12, os.str()};
}

Outcome cli_contract() {
  std::vector<std::string> failures;
  auto run = [](const std::vector<std::string>& args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return std::pair{code, out.str()};
  };
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  const std::string doc =
      R"({"e0_lower":0,"e0_upper":1,"v11":0.123456789012345,"v22":-0.3,"v12_re":0.1,"v12_im":-0.07})";
  const std::string degenerate =
      R"({"e0_lower":0,"e0_upper":0,"v11":0.2,"v22":-0.2,"v12_re":0.15,"v12_im":0})";

  // analyze
  const auto [code_a, out_a] = run({"analyze"}, doc);
  expect(code_a == 0, "analyze exit 0");
  if (code_a == 0) {
    const auto parsed = io::result_from_json(nlohmann::json::parse(out_a));
    const auto direct = io::analyze(io::parse_problem(doc), Tolerance<double>{});
    expect(parsed.e1 == direct.e1 && parsed.e2 == direct.e2 && parsed.gap == direct.gap &&
               parsed.epsilon == direct.epsilon && parsed.mixing.b == direct.mixing.b,
           "analyze round-trip");
    expect(io::to_json(parsed).dump(2) + "\n" == out_a, "analyze re-serialization");
  }
  expect(run({"analyze"}, doc).second == out_a, "analyze determinism");
  expect(run({"analyze"}, R"({"e0_lower":0})").first == 2, "analyze missing field exit 2");

  // sweep
  const auto [code_s, out_s] = run({"sweep", "--k-steps", "3"}, degenerate);
  expect(code_s == 0, "sweep exit 0");
  expect(out_s.find("0.25,") != std::string::npos, "sweep midpoint gap 0.25");
  expect(run({"sweep", "--k-steps", "3"}, degenerate).second == out_s, "sweep determinism");
  expect(run({"sweep", "--k-steps", "1"}, degenerate).first == 2, "sweep k_steps=1 exit 2");

  // census
  const auto [code_c, out_c] = run({"census", "--samples", "5000", "--seed", "7"});
  expect(code_c == 0, "census exit 0");
  expect(run({"census", "--samples", "5000", "--seed", "7", "--threads", "4"}).second == out_c,
         "census determinism");
  expect(run({"census", "--samples", "0"}).first == 2, "census samples=0 exit 2");

  // verify
  const auto [code_v, out_v] = run({"verify", "--samples", "2000"});
  expect(code_v == 0, "verify exit 0");
  expect(run({"verify", "--samples", "2000"}).second == out_v, "verify determinism");
  expect(run({"verify", "--scales", "100,10"}).first == 2, "verify descending scales exit 2");
  const auto [code_z, out_z] = run({"verify", "--samples", "100", "--coupling", "0"});
  expect(code_z == 0 && out_z.find("\"max_error\": 0.0") != std::string::npos, "verify w=0 zeros");

  std::string detail = "all subcommand checks passed";
  if (!failures.empty()) {
    detail = "failed:";
    for (const auto& f : failures) detail += " [" + f + "]";
  }
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 exactness against the Jacobi oracle", exactness},
      {"2 gap identity", gap_identity},
      {"3 classification identity", classification_identity},
      {"4 superimposition reconstruction", superimposition},
      {"5 degeneracy restoration sweep", degeneracy_restoration},
      {"6 zero-perturbation limit", limit_condition},
      {"7 closeness of spectator levels", closeness},
      {"8 repulsion census", census},
      {"9 mixing-coefficient residuals", mixing_residuals},
      {"10 command-line contract", cli_contract},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome{false, ""};
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << ": " << outcome.detail << '\n';
    if (!outcome.pass) ++failed;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
