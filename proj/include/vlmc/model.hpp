#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "context.hpp"
#include "tree.hpp"

namespace vlmc {

/// Tolerance on Σ_a p(a|w) = 1 when a model is constructed.
inline constexpr double kNormalizationTolerance = 1e-9;

/// A variable-length Markov chain: a complete context tree with one next-symbol
/// distribution per context.
class VlmcModel {
 public:
  /// `conditionals[i][a]` is p(a | tree.contexts()[i]).
  VlmcModel(Alphabet alphabet, ContextTree tree, std::vector<std::vector<double>> conditionals)
      : alphabet_(std::move(alphabet)), tree_(std::move(tree)), probs_(std::move(conditionals)) {
    const auto k = alphabet_.size();
    if (k == 0) throw invalid_model("empty alphabet");
    if (probs_.size() != tree_.size())
      throw invalid_model("expected one distribution per context");
    for (const auto& w : tree_)
      for (auto s : w.symbols())
        if (s >= k) throw invalid_model("context uses a symbol outside the alphabet");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const auto& row = probs_[i];
      const auto name = to_display(alphabet_, tree_.contexts()[i]);
      if (row.size() != k) throw invalid_model("distribution of context " + name + " has wrong size");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0))
          throw invalid_model("probability outside [0,1] in context " + name);
        sum += p;
      }
      if (std::abs(sum - 1.0) > kNormalizationTolerance)
        throw invalid_model("distribution of context " + name + " does not sum to 1");
    }
    if (!is_complete(tree_, k)) throw invalid_model("context tree is not complete");
    build_lookup();
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const ContextTree& tree() const noexcept { return tree_; }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  std::size_t height() const noexcept { return height_; }

  /// p(· | tree().contexts()[index]).
  std::span<const double> distribution(std::size_t index) const { return probs_.at(index); }

  double conditional(std::size_t index, symbol_t a) const { return probs_.at(index).at(a); }

  /// Index of the unique context that is a suffix of `history`, if any.
  std::optional<std::size_t> find_context(std::span<const symbol_t> history) const noexcept {
    std::size_t node = 0;
    std::size_t pos = history.size();
    while (true) {
      if (lookup_[node].leaf >= 0) return static_cast<std::size_t>(lookup_[node].leaf);
      if (pos == 0) return std::nullopt;
      int next = lookup_[node].children[history[--pos]];
      if (next < 0) return std::nullopt;
      node = static_cast<std::size_t>(next);
    }
  }

  std::size_t context_index(std::span<const symbol_t> history) const {
    if (auto i = find_context(history)) return *i;
    throw no_context("no suffix of history \"" + alphabet_.decode(history) +
                     "\" is a context of the model");
  }

  /// The context w ⪯ history.
  const ContextString& context_of(const ContextString& history) const {
    return tree_.contexts()[context_index(history.symbols())];
  }

  /// min over contexts and symbols of p(a|w).
  double min_conditional() const noexcept {
    double m = 1.0;
    for (const auto& row : probs_)
      for (double p : row) m = std::min(m, p);
    return m;
  }

 private:
  struct LookupNode {
    std::vector<int> children;
    int leaf = -1;
  };

  void build_lookup() {
    const auto k = alphabet_.size();
    lookup_.assign(1, LookupNode{std::vector<int>(k, -1), -1});
    height_ = 0;
    const auto& ctx = tree_.contexts();
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      height_ = std::max(height_, ctx[i].length());
      std::size_t node = 0;
      auto sym = ctx[i].symbols();
      for (auto it = sym.rbegin(); it != sym.rend(); ++it) {
        int next = lookup_[node].children[*it];
        if (next < 0) {
          next = static_cast<int>(lookup_.size());
          lookup_[node].children[*it] = next;
          lookup_.push_back(LookupNode{std::vector<int>(k, -1), -1});
        }
        node = static_cast<std::size_t>(next);
      }
      lookup_[node].leaf = static_cast<int>(i);
    }
  }

  Alphabet alphabet_;
  ContextTree tree_;
  std::vector<std::vector<double>> probs_;
  std::vector<LookupNode> lookup_;
  std::size_t height_ = 0;
};

struct AlphaCoefficients {
  double alpha0 = 0.0;
  /// alphas[k-1] is α_k for k = 1..k_max.
  std::vector<double> alphas;
  /// (1-α₀)·[include_k0] + Σ_{k=1}^{k_max} (1-α_k).
  double alpha_sum = 0.0;
};

/// Continuity coefficients of a finite model.
///
/// α₀ is the smallest conditional. For k ≥ 1, α_k is the minimum over u ∈ A^k of
/// Σ_a min{p(a|w) : w a context strictly extending u}; when u already has a context
/// c as suffix the inner minimum is p(a|c), so α_k = 1 for every k ≥ h(τ).
inline AlphaCoefficients alpha_coefficients(const VlmcModel& model, std::size_t k_max,
                                            bool include_k0 = true) {
  if (k_max < model.height())
    throw input_error("k_max must be at least the height of the context tree");
  const auto asize = model.alphabet_size();
  const auto& contexts = model.tree().contexts();

  AlphaCoefficients out;
  out.alpha0 = model.min_conditional();
  out.alpha_sum = include_k0 ? 1.0 - out.alpha0 : 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double alpha_k = 1.0;
    if (k < model.height()) {
      for (const auto& u : all_strings(asize, k)) {
        if (model.find_context(u.symbols())) continue;  // covered branch contributes 1
        double total = 0.0;
        for (std::size_t a = 0; a < asize; ++a) {
          double inf = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < contexts.size(); ++i)
            if (u.is_strict_suffix_of(contexts[i]))
              inf = std::min(inf, model.conditional(i, static_cast<symbol_t>(a)));
          total += inf;
        }
        alpha_k = std::min(alpha_k, total);
      }
    }
    out.alphas.push_back(alpha_k);
    out.alpha_sum += 1.0 - alpha_k;
  }
  return out;
}

struct StationaryOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 1'000'000;
  std::size_t max_states = std::size_t{1} << 22;
};

/// Stationary law of a model, obtained by power iteration on the embedded
/// order-h(τ) Markov chain with state space A^{h(τ)}.
class StationaryDistribution {
 public:
  explicit StationaryDistribution(const VlmcModel& model, StationaryOptions opts = {})
      : model_(model) {
    const auto k = model.alphabet_size();
    const auto h = model.height();
    std::size_t states = 1;
    for (std::size_t i = 0; i < h; ++i) {
      if (states > opts.max_states / k) throw invalid_model("embedded chain is too large");
      states *= k;
    }
    state_count_ = states;

    // next_prob[s*k + a] = p(a | context of state s)
    std::vector<double> next_prob(states * k);
    std::vector<symbol_t> buf(h);
    for (std::size_t s = 0; s < states; ++s) {
      decode_state(s, buf);
      auto ci = model.context_index(buf);
      for (std::size_t a = 0; a < k; ++a)
        next_prob[s * k + a] = model.conditional(ci, static_cast<symbol_t>(a));
    }

    pi_.assign(states, 1.0 / static_cast<double>(states));
    if (states == 1) return;
    std::vector<double> next(states);
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t s = 0; s < states; ++s) {
        const double mass = pi_[s];
        if (mass == 0.0) continue;
        const std::size_t base = (s * k) % states;
        for (std::size_t a = 0; a < k; ++a) next[base + a] += mass * next_prob[s * k + a];
      }
      double diff = 0.0, total = 0.0;
      for (std::size_t s = 0; s < states; ++s) {
        diff += std::abs(next[s] - pi_[s]);
        total += next[s];
      }
      for (auto& v : next) v /= total;
      pi_.swap(next);
      if (diff < opts.tolerance) return;
    }
    throw not_ergodic("stationary power iteration did not converge");
  }

  std::size_t state_count() const noexcept { return state_count_; }

  /// Stationary probability of the embedded state (oldest symbol most significant).
  double state_probability(std::size_t s) const { return pi_.at(s); }

  /// p(w): stationary probability of the cylinder w.
  double probability(const ContextString& w) const {
    const auto k = model_.alphabet_size();
    const auto h = model_.height();
    for (auto s : w.symbols())
      if (s >= k) throw unknown_symbol("string contains a symbol outside the alphabet");
    if (w.length() <= h) {
      // Sum over states whose most recent symbols equal w.
      const std::size_t free = h - w.length();
      std::size_t tail = 0;
      for (auto s : w.symbols()) tail = tail * k + s;
      std::size_t block = 1;
      for (std::size_t i = 0; i < w.length(); ++i) block *= k;
      double p = 0.0;
      std::size_t heads = 1;
      for (std::size_t i = 0; i < free; ++i) heads *= k;
      for (std::size_t head = 0; head < heads; ++head) p += pi_[head * block + tail];
      return p;
    }
    double p = probability(ContextString(w.symbols().first(h)));
    for (std::size_t i = h; i < w.length(); ++i) {
      auto ci = model_.context_index(w.symbols().first(i));
      p *= model_.conditional(ci, w[i]);
    }
    return p;
  }

  /// p(a|w) = p(wa) / p(w).
  double conditional(const ContextString& w, symbol_t a) const {
    const double pw = probability(w);
    if (pw <= 0.0) throw invalid_model("conditional on a string of zero stationary probability");
    return probability(w.append(a)) / pw;
  }

 private:
  void decode_state(std::size_t s, std::vector<symbol_t>& out) const {
    const auto k = model_.alphabet_size();
    for (std::size_t i = out.size(); i > 0; --i) {
      out[i - 1] = static_cast<symbol_t>(s % k);
      s /= k;
    }
  }

  VlmcModel model_;
  std::size_t state_count_ = 1;
  std::vector<double> pi_;
};

inline double stationary_probability(const VlmcModel& model, const ContextString& w) {
  if (w.empty()) return 1.0;
  return StationaryDistribution(model).probability(w);
}

}  // namespace vlmc
