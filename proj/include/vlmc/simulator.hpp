#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "model.hpp"

namespace vlmc {

/// Name of the generator recorded alongside experiment output.
inline constexpr const char* kRngName = "mt19937_64";

/// Uniform double in [0, 1) from the top 53 bits of one draw. Written out so
/// streams replay identically across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF draw from a discrete distribution.
inline symbol_t draw_symbol(std::span<const double> dist, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] <= 0.0) continue;
    acc += dist[a];
    last_positive = a;
    if (u < acc) return static_cast<symbol_t>(a);
  }
  return static_cast<symbol_t>(last_positive);  // rounding slack at the top of the CDF
}

inline std::size_t default_burn_in(const VlmcModel& model) {
  return std::max<std::size_t>(1000, 10 * model.height());
}

struct SimulationSpec {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Discarded steps after the uniform initial history; defaults to default_burn_in().
  std::optional<std::size_t> burn_in;
};

/// Draws x_1..x_n from the model. Deterministic in (model, n, seed, burn_in).
///
/// The first h(τ) symbols of history are uniform, then burn_in steps are run and
/// discarded before the n emitted symbols.
inline std::vector<symbol_t> simulate(const VlmcModel& model, const SimulationSpec& spec) {
  if (spec.n < 1) throw input_error("sample length must be at least 1");
  const auto h = model.height();
  const auto burn = spec.burn_in.value_or(default_burn_in(model));
  if (burn < h) throw input_error("burn-in must be at least the height of the context tree");

  std::mt19937_64 rng(spec.seed);
  const auto k = model.alphabet_size();
  std::vector<symbol_t> path;
  path.reserve(h + burn + spec.n);
  for (std::size_t i = 0; i < h; ++i)
    path.push_back(static_cast<symbol_t>(std::min<std::size_t>(
        k - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k)))));

  for (std::size_t t = 0; t < burn + spec.n; ++t) {
    const auto ci = model.context_index(std::span<const symbol_t>(path).subspan(t, h));
    path.push_back(draw_symbol(model.distribution(ci), rng));
  }
  return {path.end() - static_cast<std::ptrdiff_t>(spec.n), path.end()};
}

}  // namespace vlmc
