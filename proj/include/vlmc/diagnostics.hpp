#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "counts.hpp"
#include "model.hpp"
#include "penalty.hpp"

namespace vlmc {

namespace detail {

inline void check_distribution(std::span<const double> p, const char* name) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw not_normalized(std::string(name) + " has a negative or NaN entry");
    s += v;
  }
  if (std::abs(s - 1.0) > kNormalizationTolerance)
    throw not_normalized(std::string(name) + " does not sum to 1");
}

}  // namespace detail

/// D(p‖q) = Σ_a p(a) log(p(a)/q(a)) in nats; +∞ when p puts mass where q has none.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw input_error("distributions have different sizes");
  detail::check_distribution(p, "p");
  detail::check_distribution(q, "q");
  double d = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] == 0.0) continue;
    if (q[a] == 0.0) return std::numeric_limits<double>::infinity();
    d += p[a] * std::log(p[a] / q[a]);
  }
  return std::max(d, 0.0);
}

/// Σ_a (p(a) - q(a))² / q(a), an upper bound on D(p‖q).
inline double chi2_bound(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw input_error("distributions have different sizes");
  detail::check_distribution(p, "p");
  detail::check_distribution(q, "q");
  double s = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double diff = p[a] - q[a];
    if (q[a] == 0.0) {
      if (p[a] > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    s += diff * diff / q[a];
  }
  return s;
}

/// δ_τ(w) = Σ_a [ Σ_{u∈τ} p(ua) log p(a|u) - p(wa) log p(a|w) ], with stationary
/// cylinder probabilities. Every u in `refinement` must have w as a suffix.
inline double delta_gap(const StationaryDistribution& law, std::size_t alphabet_size,
                        const ContextString& w, std::span<const ContextString> refinement) {
  if (refinement.empty()) throw bad_refinement("refinement is empty");
  if (!has_suffix_property(refinement))
    throw bad_refinement("refinement violates the suffix property");
  for (const auto& u : refinement)
    if (!w.is_suffix_or_equal(u)) throw bad_refinement("refinement element does not extend w");

  auto term = [&](const ContextString& s, symbol_t a) {
    const double joint = law.probability(s.append(a));
    if (joint == 0.0) return 0.0;
    return joint * std::log(joint / law.probability(s));
  };
  double delta = 0.0;
  for (std::size_t a = 0; a < alphabet_size; ++a) {
    const auto sym = static_cast<symbol_t>(a);
    for (const auto& u : refinement) delta += term(u, sym);
    delta -= term(w, sym);
  }
  return delta;
}

inline double delta_gap(const VlmcModel& model, const ContextString& w,
                        std::span<const ContextString> refinement) {
  return delta_gap(StationaryDistribution(model), model.alphabet_size(), w, refinement);
}

/// L_n(w) = Σ_a [ p(wa) log p(a|w) - N_n(w,a)/(n-d) · log p̂_n(a|w) ].
inline double l_n(const CountTrie& trie, const StationaryDistribution& law, const ContextString& w) {
  auto id = trie.find(w);
  if (!id) throw unseen_context("string does not occur in the sample");
  const auto counts = trie.counts(*id);
  const double total = static_cast<double>(trie.total(*id));
  const double windows = static_cast<double>(trie.windows());
  const double pw = law.probability(w);
  double s = 0.0;
  for (std::size_t a = 0; a < trie.alphabet_size(); ++a) {
    const double joint = law.probability(w.append(static_cast<symbol_t>(a)));
    if (joint > 0.0) s += joint * std::log(joint / pw);
    if (counts[a] > 0) {
      const double c = static_cast<double>(counts[a]);
      s -= c / windows * std::log(c / total);
    }
  }
  return s;
}

inline double l_n(const CountTrie& trie, const VlmcModel& model, const ContextString& w) {
  return l_n(trie, StationaryDistribution(model), w);
}

struct BoundConstants {
  double alpha0 = 0.0;
  double alpha = 0.0;
  double C = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  std::size_t alphabet_size = 0;
  std::size_t depth = 0;
};

/// C = α₀/(8e(α+α₀)), c₃ = 2e^{1/e}|A|², c₄ = α₀²/(32e(α+α₀)|A|³).
inline BoundConstants bound_constants(double alpha0, double alpha, std::size_t alphabet_size,
                                      std::size_t depth) {
  if (!(alpha0 > 0.0)) throw invalid_model("bound constants need alpha0 > 0");
  if (!std::isfinite(alpha) || alpha < 0.0) throw invalid_model("bound constants need finite alpha");
  constexpr double e = std::numbers::e;
  const double a = static_cast<double>(alphabet_size);
  BoundConstants out;
  out.alpha0 = alpha0;
  out.alpha = alpha;
  out.alphabet_size = alphabet_size;
  out.depth = depth;
  out.C = alpha0 / (8.0 * e * (alpha + alpha0));
  out.c3 = 2.0 * std::exp(1.0 / e) * a * a;
  out.c4 = alpha0 * alpha0 / (32.0 * e * (alpha + alpha0) * a * a * a);
  return out;
}

inline BoundConstants bound_constants(const VlmcModel& model, std::size_t depth,
                                      bool include_k0 = true) {
  const auto alphas = alpha_coefficients(model, model.height(), include_k0);
  return bound_constants(alphas.alpha0, alphas.alpha_sum, model.alphabet_size(), depth);
}

struct BoundValue {
  double raw = 0.0;
  double clipped = 0.0;  // raw clipped to [0, 1]
};

/// c₃ |A|^d exp(-c₄ f(n) (α₀²/|A|)^d / d).
inline BoundValue overestimation_bound(const BoundConstants& k, double penalty_value,
                                       std::size_t depth) {
  if (depth < 1) throw input_error("depth must be at least 1");
  const double a = static_cast<double>(k.alphabet_size);
  const double d = static_cast<double>(depth);
  const double shrink = std::pow(k.alpha0 * k.alpha0 / a, d);
  const double raw = k.c3 * std::pow(a, d) * std::exp(-k.c4 * penalty_value * shrink / d);
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

inline BoundValue overestimation_bound(const BoundConstants& k, const PenaltySpec& penalty,
                                       std::size_t n, std::size_t depth) {
  if (n <= depth) throw input_error("n must exceed the depth");
  return overestimation_bound(k, penalty(n, k.alphabet_size), depth);
}

/// Depth as a function of sample size: constant K, or floor(γ log n).
struct DepthRule {
  enum class Kind { constant, logarithmic };
  Kind kind = Kind::constant;
  double value = 4.0;

  static DepthRule constant(std::size_t k) { return {Kind::constant, static_cast<double>(k)}; }
  static DepthRule logarithmic(double gamma) { return {Kind::logarithmic, gamma}; }

  /// Parses "const:D" or "log:gamma".
  static DepthRule parse(const std::string& text) {
    try {
      if (text.starts_with("const:")) {
        const auto v = std::stol(text.substr(6));
        if (v < 1) throw input_error("constant depth must be at least 1");
        return constant(static_cast<std::size_t>(v));
      }
      if (text.starts_with("log:")) {
        const double g = std::stod(text.substr(4));
        if (!(g > 0.0)) throw input_error("log depth factor must be positive");
        return logarithmic(g);
      }
    } catch (const std::logic_error&) {
    }
    throw input_error("bad depth rule \"" + text + "\" (want const:D or log:gamma)");
  }

  /// d(n), never below 1.
  std::size_t operator()(std::size_t n) const {
    if (kind == Kind::constant) return static_cast<std::size_t>(value);
    const double d = std::floor(value * std::log(static_cast<double>(n)));
    return d < 1.0 ? 1 : static_cast<std::size_t>(d);
  }

  std::string to_string() const {
    if (kind == Kind::constant) return "const:" + std::to_string(static_cast<std::size_t>(value));
    std::string s = std::to_string(value);
    return "log:" + s;
  }
};

enum class Verdict { converging, inconclusive };

inline const char* to_string(Verdict v) {
  return v == Verdict::converging ? "converging" : "inconclusive";
}

struct SummabilityReport {
  /// (n, Σ_{m=2}^{n} term(m)) at n = 2, 4, 8, ... and at n_max.
  std::vector<std::pair<std::size_t, double>> partial_sums;
  Verdict verdict = Verdict::inconclusive;
  /// Largest condensed-term ratio seen over the last decade.
  double worst_ratio = 0.0;
};

/// Numeric look at Σ_n |A|^{d(n)} exp(-f(n) c^{d(n)} / d(n)).
///
/// Heuristic, not a proof. The verdict uses Cauchy condensation: the series of
/// b_k = 2^k · term(2^k) must shrink geometrically (every ratio b_{k+1}/b_k < 1)
/// for all 2^k in the last decade [n_max/10, n_max].
inline SummabilityReport summability_check(const PenaltySpec& penalty, const DepthRule& depth,
                                           double c, std::size_t n_max,
                                           std::size_t alphabet_size) {
  if (!(c > 0.0 && c <= 1.0)) throw input_error("c must lie in (0, 1]");
  if (n_max < 20) throw input_error("n_max must be at least 20");
  const double a = static_cast<double>(alphabet_size);
  auto term = [&](std::size_t n) {
    const auto d = depth(n);
    const double dd = static_cast<double>(d);
    return std::pow(a, dd) * std::exp(-penalty(n, alphabet_size) * std::pow(c, dd) / dd);
  };

  SummabilityReport out;
  double sum = 0.0;
  std::size_t next_checkpoint = 2;
  for (std::size_t n = 2; n <= n_max; ++n) {
    sum += term(n);
    if (n == next_checkpoint || n == n_max) {
      out.partial_sums.emplace_back(n, sum);
      if (n == next_checkpoint) next_checkpoint *= 2;
    }
  }

  std::vector<double> condensed;
  for (std::size_t n = 1; n <= n_max; n *= 2)
    if (10 * n >= n_max) condensed.push_back(static_cast<double>(n) * term(n));
  bool geometric = condensed.size() >= 3;
  for (std::size_t i = 1; i < condensed.size(); ++i) {
    const double ratio = condensed[i - 1] > 0.0 ? condensed[i] / condensed[i - 1] : 0.0;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (!(ratio < 1.0)) geometric = false;
  }
  if (!std::isfinite(sum)) geometric = false;
  out.verdict = geometric ? Verdict::converging : Verdict::inconclusive;
  return out;
}

/// Bound curve rows "n,bound_raw,bound_clipped" for overlays.
inline void write_bounds_csv(std::ostream& out, const BoundConstants& k, const PenaltySpec& penalty,
                             std::span<const std::size_t> ns, std::size_t depth) {
  out << "n,bound_raw,bound_clipped\n";
  out.precision(17);
  for (auto n : ns) {
    const auto b = overestimation_bound(k, penalty, n, depth);
    out << n << ',' << b.raw << ',' << b.clipped << '\n';
  }
}

}  // namespace vlmc
