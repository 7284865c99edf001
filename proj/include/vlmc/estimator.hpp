#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "counts.hpp"
#include "model_io.hpp"
#include "penalty.hpp"
#include "tree.hpp"

namespace vlmc {

/// Absolute slack on the log scale when deciding whether refining a node beats
/// keeping it as a leaf. Near-ties resolve toward the coarser tree.
inline constexpr double kTieSlack = 1e-12;

/// Per-node output of the context-tree maximizing recursion:
///
///   log V_w = -f + log P̂_ML,w                        if ℓ(w) = d
///   log V_w = max(-f + log P̂_ML,w, Σ_a log V_aw)     otherwise
///
/// with X_w = 1 iff the child sum strictly exceeds the leaf term. Children
/// that never occur in the sample are left out of the sum.
class CtmState {
 public:
  CtmState(const CountTrie& trie, double penalty_value)
      : penalty_(penalty_value),
        log_v_(trie.node_count()),
        leaf_(trie.node_count()),
        x_(trie.node_count(), 0) {
    // Children always have larger ids than their parent.
    for (std::size_t i = trie.node_count(); i > 0; --i) {
      const auto w = static_cast<CountTrie::node_id>(i - 1);
      leaf_[w] = -penalty_value + log_ml(trie.counts(w));
      if (trie.length(w) == trie.depth()) {
        log_v_[w] = leaf_[w];
        continue;
      }
      double children = 0.0;
      for (std::size_t a = 0; a < trie.alphabet_size(); ++a) {
        auto c = trie.child(w, static_cast<symbol_t>(a));
        if (c != CountTrie::kNone) children += log_v_[c];
      }
      x_[w] = children > leaf_[w] + kTieSlack ? 1 : 0;
      log_v_[w] = std::max(children, leaf_[w]);
    }
  }

  double penalty() const noexcept { return penalty_; }
  std::size_t size() const noexcept { return log_v_.size(); }

  /// log V_w.
  double log_v(CountTrie::node_id w) const { return log_v_.at(w); }
  /// -f(n) + log P̂_ML,w.
  double leaf_term(CountTrie::node_id w) const { return leaf_.at(w); }
  /// X_w.
  bool refine(CountTrie::node_id w) const { return x_.at(w) != 0; }

 private:
  double penalty_;
  std::vector<double> log_v_;
  std::vector<double> leaf_;
  std::vector<std::uint8_t> x_;
};

inline CtmState ctm_state(const CountTrie& trie, double penalty_value) {
  return CtmState(trie, penalty_value);
}

inline CtmState ctm_state(const CountTrie& trie, const PenaltySpec& penalty) {
  return CtmState(trie, penalty(trie.sample_size(), trie.alphabet_size()));
}

/// τ_w: the maximizing tree assigned to node w.
inline ContextTree maximizing_tree(const CountTrie& trie, const CtmState& state,
                                   CountTrie::node_id from = 0) {
  std::vector<ContextString> leaves;
  std::vector<CountTrie::node_id> stack{from};
  while (!stack.empty()) {
    auto w = stack.back();
    stack.pop_back();
    if (!state.refine(w)) {
      leaves.push_back(trie.string_of(w));
      continue;
    }
    for (std::size_t a = 0; a < trie.alphabet_size(); ++a) {
      auto c = trie.child(w, static_cast<symbol_t>(a));
      if (c != CountTrie::kNone) stack.push_back(c);
    }
  }
  return ContextTree(std::move(leaves));
}

/// Penalized-likelihood context tree estimate, τ̂ = τ_λ.
inline ContextTree ctm_fit(const CountTrie& trie, double penalty_value) {
  return maximizing_tree(trie, ctm_state(trie, penalty_value));
}

inline ContextTree ctm_fit(const CountTrie& trie, const PenaltySpec& penalty) {
  return maximizing_tree(trie, ctm_state(trie, penalty));
}

/// -Σ_{w∈τ} log P̂_ML,w + |τ|·f. Throws unseen_context for leaves absent from the sample.
inline double pl_objective(const CountTrie& trie, const ContextTree& tree, double penalty_value) {
  double s = 0.0;
  for (const auto& w : tree) s -= log_ml(trie, w);
  return s + static_cast<double>(tree.size()) * penalty_value;
}

/// True iff the tree is feasible for the sample: height ≤ d, every context occurs,
/// and every occurring string is a context, a strict suffix of one, or has one as suffix.
inline bool is_feasible(const CountTrie& trie, const ContextTree& tree) {
  if (tree.height() > trie.depth()) return false;
  for (const auto& w : tree)
    if (trie.total(w) == 0) return false;
  const auto inner = interior(tree);
  bool ok = true;
  trie.for_each([&](CountTrie::node_id id) {
    if (!ok) return;
    const auto w = trie.string_of(id);
    if (tree.contains(w) || inner.contains(w)) return;
    for (std::size_t k = 0; k < w.length(); ++k)
      if (tree.contains(w.suffix(k))) return;
    ok = false;
  });
  return ok;
}

inline constexpr std::size_t kBruteForceMaxAlphabet = 3;
inline constexpr std::size_t kBruteForceMaxDepth = 4;
inline constexpr std::uint64_t kBruteForceMaxTrees = 2'000'000;

namespace detail {

inline std::uint64_t feasible_tree_count(const CountTrie& trie, CountTrie::node_id w) {
  if (trie.length(w) == trie.depth()) return 1;
  std::uint64_t product = 1;
  for (std::size_t a = 0; a < trie.alphabet_size(); ++a) {
    auto c = trie.child(w, static_cast<symbol_t>(a));
    if (c == CountTrie::kNone) continue;
    product *= feasible_tree_count(trie, c);
    if (product > kBruteForceMaxTrees) return kBruteForceMaxTrees + 1;
  }
  return std::min<std::uint64_t>(product + 1, kBruteForceMaxTrees + 1);
}

struct Candidate {
  std::vector<CountTrie::node_id> leaves;
  double log_lik = 0.0;
};

inline std::vector<Candidate> enumerate_subtrees(const CountTrie& trie, CountTrie::node_id w) {
  std::vector<Candidate> out{Candidate{{w}, log_ml(trie.counts(w))}};
  if (trie.length(w) == trie.depth()) return out;
  std::vector<Candidate> partial{Candidate{}};
  for (std::size_t a = 0; a < trie.alphabet_size(); ++a) {
    auto c = trie.child(w, static_cast<symbol_t>(a));
    if (c == CountTrie::kNone) continue;
    const auto options = enumerate_subtrees(trie, c);
    std::vector<Candidate> next;
    next.reserve(partial.size() * options.size());
    for (const auto& p : partial)
      for (const auto& o : options) {
        Candidate merged = p;
        merged.leaves.insert(merged.leaves.end(), o.leaves.begin(), o.leaves.end());
        merged.log_lik += o.log_lik;
        next.push_back(std::move(merged));
      }
    partial = std::move(next);
  }
  out.insert(out.end(), partial.begin(), partial.end());
  return out;
}

}  // namespace detail

/// Number of feasible trees for the sample (saturates above kBruteForceMaxTrees).
inline std::uint64_t feasible_tree_count(const CountTrie& trie) {
  return detail::feasible_tree_count(trie, trie.root());
}

/// Direct argmin of the penalized-likelihood objective over every feasible tree.
///
/// Ties (within kTieSlack) go to the tree with fewer contexts, then to the one
/// with the smaller total context length, then to the lexicographically smallest
/// sorted context list. A node with a single occurring child ties exactly with
/// that child, so the length rule is what keeps such chains unsplit.
inline ContextTree brute_force_fit(const CountTrie& trie, double penalty_value) {
  if (trie.alphabet_size() > kBruteForceMaxAlphabet || trie.depth() > kBruteForceMaxDepth)
    throw too_large("brute-force search is limited to |A| <= 3 and d <= 4");
  if (feasible_tree_count(trie) > kBruteForceMaxTrees)
    throw too_large("too many feasible trees to enumerate");

  const auto candidates = detail::enumerate_subtrees(trie, trie.root());
  auto contexts_of = [&](const detail::Candidate& c) {
    std::vector<ContextString> out;
    for (auto id : c.leaves) out.push_back(trie.string_of(id));
    std::sort(out.begin(), out.end());
    return out;
  };

  auto depth_sum = [&](const detail::Candidate& c) {
    std::size_t s = 0;
    for (auto id : c.leaves) s += trie.length(id);
    return s;
  };

  const detail::Candidate* best = nullptr;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double score = -c.log_lik + static_cast<double>(c.leaves.size()) * penalty_value;
    bool better = false;
    if (best == nullptr || score < best_score - kTieSlack) {
      better = true;
    } else if (score <= best_score + kTieSlack) {
      if (c.leaves.size() != best->leaves.size())
        better = c.leaves.size() < best->leaves.size();
      else if (depth_sum(c) != depth_sum(*best))
        better = depth_sum(c) < depth_sum(*best);
      else
        better = contexts_of(c) < contexts_of(*best);
    }
    if (better) {
      best = &c;
      best_score = score;
    }
  }
  return ContextTree(contexts_of(*best));
}

inline ContextTree brute_force_fit(const CountTrie& trie, const PenaltySpec& penalty) {
  return brute_force_fit(trie, penalty(trie.sample_size(), trie.alphabet_size()));
}

/// Largest d with n - d ≥ n/2 and |A|^d ≤ n (at least 1).
inline std::size_t suggested_depth(std::size_t n, std::size_t alphabet_size) {
  std::size_t d = 1;
  double power = static_cast<double>(alphabet_size);
  while (true) {
    const std::size_t next = d + 1;
    power *= static_cast<double>(alphabet_size);
    if (2 * (n - std::min(n, next)) < n || power > static_cast<double>(n)) break;
    d = next;
  }
  return d;
}

/// Fitted tree in the model JSON format, with empirical conditionals and N_n(w).
inline nlohmann::json fitted_tree_json(const CountTrie& trie, const ContextTree& tree,
                                       const Alphabet& alphabet) {
  std::vector<std::vector<double>> probs;
  std::vector<std::uint64_t> counts;
  for (const auto& w : tree) {
    std::vector<double> row(alphabet.size());
    for (std::size_t a = 0; a < row.size(); ++a)
      row[a] = empirical_conditional(trie, w, static_cast<symbol_t>(a));
    probs.push_back(std::move(row));
    counts.push_back(trie.total(w));
  }
  return tree_to_json(alphabet, tree, probs, counts);
}

/// Flat dump: "context<TAB>count<TAB>p(a1),p(a2),..." per context; λ prints as "".
inline void write_tree_text(std::ostream& out, const CountTrie& trie, const ContextTree& tree,
                            const Alphabet& alphabet) {
  for (const auto& w : tree) {
    out << alphabet.decode(w.symbols()) << '\t' << trie.total(w) << '\t';
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      if (a) out << ',';
      out << empirical_conditional(trie, w, static_cast<symbol_t>(a));
    }
    out << '\n';
  }
}

}  // namespace vlmc
