#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "context.hpp"

namespace vlmc {

/// Sparse suffix trie of the counts N_n(w,a) for every string w with
/// 0 ≤ ℓ(w) ≤ d that occurs in the sample, counted over t = d+1..n:
///
///   N_n(w,a) = #{ t in [d+1, n] : x_{t-ℓ(w)}^{t-1} = w, x_t = a }.
///
/// Node 0 is λ. The child of node w along symbol a is the string a w, so
/// walking from the root reads a history backwards from its most recent symbol.
/// Only strings with N_n(w) ≥ 1 get a node.
class CountTrie {
 public:
  using node_id = std::uint32_t;
  static constexpr node_id kNone = static_cast<node_id>(-1);

  CountTrie(std::span<const symbol_t> data, std::size_t alphabet_size, std::size_t depth)
      : alphabet_size_(alphabet_size), depth_(depth), n_(data.size()) {
    if (alphabet_size < 1 || alphabet_size > kMaxAlphabetSize)
      throw input_error("alphabet size must be in [1, 256]");
    if (depth < 1) throw input_error("maximum depth must be at least 1");
    if (data.size() <= depth)
      throw data_too_short("sample of length " + std::to_string(data.size()) +
                           " is too short for depth " + std::to_string(depth));
    for (auto s : data)
      if (s >= alphabet_size)
        throw unknown_symbol("sample contains symbol index " + std::to_string(s) +
                             " outside the alphabet");

    add_node(0);
    for (std::size_t t = depth; t < data.size(); ++t) {  // 0-based t is position t+1
      const auto next = data[t];
      node_id node = 0;
      counts_[next] += 1;
      for (std::size_t l = 1; l <= depth; ++l) {
        const auto sym = data[t - l];
        auto& child = children_[static_cast<std::size_t>(node) * alphabet_size_ + sym];
        if (child == kNone) {
          const auto id = add_node(l);
          children_[static_cast<std::size_t>(node) * alphabet_size_ + sym] = id;
          parent_.back() = node;
          symbol_.back() = sym;
          node = id;
        } else {
          node = child;
        }
        counts_[static_cast<std::size_t>(node) * alphabet_size_ + next] += 1;
      }
    }
  }

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t sample_size() const noexcept { return n_; }
  std::size_t node_count() const noexcept { return length_.size(); }

  /// N_n(λ) = n - d.
  std::uint64_t windows() const noexcept { return n_ - depth_; }

  node_id root() const noexcept { return 0; }

  /// Node of the string a·w, or kNone if it never occurs.
  node_id child(node_id w, symbol_t a) const {
    return children_[static_cast<std::size_t>(w) * alphabet_size_ + a];
  }

  std::size_t length(node_id w) const { return length_.at(w); }

  /// N_n(w, ·).
  std::span<const std::uint64_t> counts(node_id w) const {
    return {counts_.data() + static_cast<std::size_t>(w) * alphabet_size_, alphabet_size_};
  }

  std::uint64_t total(node_id w) const {
    std::uint64_t s = 0;
    for (auto c : counts(w)) s += c;
    return s;
  }

  std::optional<node_id> find(const ContextString& w) const {
    if (w.length() > depth_) return std::nullopt;
    node_id node = 0;
    auto sym = w.symbols();
    for (auto it = sym.rbegin(); it != sym.rend(); ++it) {
      if (*it >= alphabet_size_) return std::nullopt;
      node = child(node, *it);
      if (node == kNone) return std::nullopt;
    }
    return node;
  }

  /// N_n(w,a); zero for strings that never occur.
  std::uint64_t count(const ContextString& w, symbol_t a) const {
    auto id = find(w);
    return id ? counts(*id)[a] : 0;
  }

  /// N_n(w); zero for strings that never occur.
  std::uint64_t total(const ContextString& w) const {
    auto id = find(w);
    return id ? total(*id) : 0;
  }

  /// Reconstructs the string a node stands for.
  ContextString string_of(node_id w) const {
    std::vector<symbol_t> out;
    while (w != 0) {
      out.push_back(symbol_[w]);
      w = parent_[w];
    }
    return ContextString(std::move(out));
  }

  node_id parent(node_id w) const { return parent_.at(w); }

  /// Visits every node in depth-first pre-order, children by symbol.
  void for_each(const std::function<void(node_id)>& visit) const {
    std::vector<node_id> stack{0};
    while (!stack.empty()) {
      auto w = stack.back();
      stack.pop_back();
      visit(w);
      for (std::size_t a = alphabet_size_; a > 0; --a) {
        auto c = child(w, static_cast<symbol_t>(a - 1));
        if (c != kNone) stack.push_back(c);
      }
    }
  }

 private:
  node_id add_node(std::size_t len) {
    const auto id = static_cast<node_id>(length_.size());
    length_.push_back(len);
    parent_.push_back(kNone);
    symbol_.push_back(0);
    children_.resize(children_.size() + alphabet_size_, kNone);
    counts_.resize(counts_.size() + alphabet_size_, 0);
    return id;
  }

  std::size_t alphabet_size_;
  std::size_t depth_;
  std::size_t n_;
  std::vector<std::size_t> length_;
  std::vector<node_id> parent_;
  std::vector<symbol_t> symbol_;
  std::vector<node_id> children_;
  std::vector<std::uint64_t> counts_;
};

inline CountTrie build_counts(std::span<const symbol_t> data, std::size_t alphabet_size,
                              std::size_t depth) {
  return CountTrie(data, alphabet_size, depth);
}

/// Σ_a N(a)·log(N(a)/N) with 0·log 0 = 0; the log maximum likelihood of one node.
inline double log_ml(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw unseen_context("log-likelihood of a string that never occurs");
  const double log_total = std::log(static_cast<double>(total));
  double s = 0.0;
  for (auto c : counts)
    if (c > 0) s += static_cast<double>(c) * (std::log(static_cast<double>(c)) - log_total);
  return s;
}

inline double log_ml(const CountTrie& trie, const ContextString& w) {
  auto id = trie.find(w);
  if (!id) throw unseen_context("string does not occur in the sample");
  return log_ml(trie.counts(*id));
}

/// p̂_n(a|w) = N_n(w,a) / N_n(w).
inline double empirical_conditional(const CountTrie& trie, const ContextString& w, symbol_t a) {
  auto id = trie.find(w);
  if (!id) throw unseen_context("string does not occur in the sample");
  if (a >= trie.alphabet_size()) throw unknown_symbol("symbol outside the alphabet");
  return static_cast<double>(trie.counts(*id)[a]) / static_cast<double>(trie.total(*id));
}

/// Debug dump: one "w,a,count" row per stored string and symbol with a nonzero count.
inline void write_counts_csv(std::ostream& out, const CountTrie& trie, const Alphabet& alphabet) {
  out << "w,a,count\n";
  trie.for_each([&](CountTrie::node_id id) {
    const auto w = alphabet.decode(trie.string_of(id).symbols());
    auto c = trie.counts(id);
    for (std::size_t a = 0; a < c.size(); ++a)
      if (c[a] > 0) out << w << ',' << alphabet.labels()[a] << ',' << c[a] << '\n';
  });
}

}  // namespace vlmc
