#include "twolevel/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "twolevel/spectral_core.hpp"

namespace twolevel {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in the open interval (0, 1) from the top 53 bits.
double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::array<double, 2> box_muller(double u1, double u2) {
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

void validate(const EnsembleSpec& spec) {
  if (!std::isfinite(spec.sigma) || !(spec.sigma > 0)) {
    throw InputError("sigma must be finite and > 0");
  }
  if (spec.samples < 1) throw InputError("samples must be >= 1");
}

PerturbationBlock<double> sample_perturbation(const EnsembleSpec& spec, std::uint64_t index) {
  validate(spec);
  if (index >= spec.samples) throw InputError("sample index out of range");

  const std::uint64_t key = mix64(spec.seed ^ mix64(index + kGolden));
  std::array<double, 4> u{};
  for (std::uint64_t j = 0; j < u.size(); ++j) u[j] = to_open_unit(mix64(key + (j + 1) * kGolden));

  const auto diag = box_muller(u[0], u[1]);
  const auto off = box_muller(u[2], u[3]);
  const double off_sigma = spec.sigma / std::numbers::sqrt2;
  return {spec.sigma * diag[0], spec.sigma * diag[1],
          {off_sigma * off[0], off_sigma * off[1]}};
}

CaseFrequencies case_census(const EnsembleSpec& spec, unsigned threads) {
  validate(spec);
  threads = std::max(1u, threads);
  const std::uint64_t chunk = (spec.samples + threads - 1) / threads;

  std::vector<std::array<std::uint64_t, 4>> partial(threads);
  auto work = [&](unsigned t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(spec.samples, begin + chunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto v = sample_perturbation(spec, i);
      ++partial[t][static_cast<std::size_t>(classify_by_indicator(spec.pair, v, spec.tol).level_case)];
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  CaseFrequencies out;
  for (const auto& counts : partial) {
    for (std::size_t c = 0; c < counts.size(); ++c) out.counts[c] += counts[c];
  }
  out.total = spec.samples;
  for (std::size_t c = 0; c < out.counts.size(); ++c) {
    out.frequencies[c] = static_cast<double>(out.counts[c]) / static_cast<double>(out.total);
  }
  return out;
}

}  // namespace twolevel
