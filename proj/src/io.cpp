#include "twolevel/io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <system_error>

#include "twolevel/spectral_core.hpp"

namespace twolevel::io {

namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kProblemFields = {
    "e0_lower", "e0_upper", "v11", "v22", "v12_re", "v12_im", "tol_rel", "tol_abs"};

double number_field(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw InputError(std::string("missing field \"") + name + "\"");
  if (!it->is_number()) throw InputError(std::string("field \"") + name + "\" must be a number");
  const double x = it->get<double>();
  if (!std::isfinite(x)) throw InputError(std::string("non-finite value for \"") + name + "\"");
  return x;
}

std::optional<double> optional_number_field(const json& doc, const char* name) {
  if (!doc.contains(name)) return std::nullopt;
  return number_field(doc, name);
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::complex<double> complex_from_json(const json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

ProblemDocument parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kProblemFields.contains(key)) throw InputError("unknown field \"" + key + "\"");
  }

  const double lower = number_field(doc, "e0_lower");
  const double upper = number_field(doc, "e0_upper");
  if (upper < lower) throw InputError("field \"e0_upper\" must be >= \"e0_lower\"");

  return {UnperturbedPair<double>(lower, upper),
          PerturbationBlock<double>(number_field(doc, "v11"), number_field(doc, "v22"),
                                    {number_field(doc, "v12_re"), number_field(doc, "v12_im")}),
          optional_number_field(doc, "tol_rel"), optional_number_field(doc, "tol_abs")};
}

ResultDocument analyze(const ProblemDocument& problem, const Tolerance<double>& tol) {
  const auto solved = solve_two_level(effective_hamiltonian(problem.pair, problem.v));
  const auto indicator = classify_by_indicator(problem.pair, problem.v, tol);
  return {solved.e1, solved.e2, solved.gap, indicator.epsilon, indicator.level_case, solved.mixing};
}

std::string epsilon_label(const Epsilon<double>& eps) {
  if (std::holds_alternative<Unbounded>(eps)) return "unbounded";
  if (std::holds_alternative<NullCase>(eps)) return "null-case";
  return format_number(std::get<double>(eps));
}

json to_json(const ResultDocument& r) {
  json eps;
  if (is_finite(r.epsilon)) {
    eps = std::get<double>(r.epsilon);
  } else {
    eps = epsilon_label(r.epsilon);
  }
  return {{"e1", r.e1},
          {"e2", r.e2},
          {"gap", r.gap},
          {"epsilon", eps},
          {"case", std::string(to_string(r.level_case))},
          {"mixing",
           {{"a", complex_json(r.mixing.a)},
            {"b", complex_json(r.mixing.b)},
            {"c", complex_json(r.mixing.c)},
            {"d", complex_json(r.mixing.d)}}}};
}

ResultDocument result_from_json(const json& j) {
  try {
    ResultDocument r;
    r.e1 = j.at("e1").get<double>();
    r.e2 = j.at("e2").get<double>();
    r.gap = j.at("gap").get<double>();
    const json& eps = j.at("epsilon");
    if (eps.is_number()) {
      r.epsilon = eps.get<double>();
    } else if (eps == "unbounded") {
      r.epsilon = Unbounded{};
    } else if (eps == "null-case") {
      r.epsilon = NullCase{};
    } else {
      throw InputError("bad epsilon value");
    }
    r.level_case = parse_level_case(j.at("case").get<std::string>());
    const json& m = j.at("mixing");
    r.mixing = {complex_from_json(m.at("a")), complex_from_json(m.at("b")),
                complex_from_json(m.at("c")), complex_from_json(m.at("d"))};
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed result document: ") + e.what());
  }
}

json to_json(const CaseFrequencies& census) {
  json counts = json::object();
  json frequencies = json::object();
  for (LevelCase c : kAllLevelCases) {
    counts[std::string(to_string(c))] = census.count(c);
    frequencies[std::string(to_string(c))] = census.frequency(c);
  }
  return {{"total", census.total}, {"counts", counts}, {"frequencies", frequencies}};
}

std::string format_number(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw ComputationError("number formatting failed");
  return {buf, end};
}

}  // namespace twolevel::io
