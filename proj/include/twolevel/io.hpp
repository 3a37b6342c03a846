#pragma once

// JSON problem/result documents and CSV formatting for the command-line tool.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "twolevel/ensemble.hpp"
#include "twolevel/types.hpp"

namespace twolevel::io {

/// Input document. Fields: e0_lower, e0_upper, v11, v22, v12_re, v12_im and
/// optionally tol_rel, tol_abs. Anything else is rejected.
struct ProblemDocument {
  UnperturbedPair<double> pair;
  PerturbationBlock<double> v;
  std::optional<double> tol_rel;
  std::optional<double> tol_abs;
};

ProblemDocument parse_problem(std::string_view text);

struct ResultDocument {
  double e1 = 0;
  double e2 = 0;
  double gap = 0;
  Epsilon<double> epsilon = NullCase{};
  LevelCase level_case = LevelCase::Unchanged;
  MixingCoefficients<double> mixing;
};

ResultDocument analyze(const ProblemDocument& problem, const Tolerance<double>& tol);

nlohmann::json to_json(const ResultDocument& result);
ResultDocument result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CaseFrequencies& census);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

std::string epsilon_label(const Epsilon<double>& eps);

}  // namespace twolevel::io
