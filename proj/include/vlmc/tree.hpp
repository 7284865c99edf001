#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "context.hpp"

namespace vlmc {

/// True iff no string in the set is a strict suffix of another.
inline bool has_suffix_property(std::span<const ContextString> contexts) {
  for (std::size_t i = 0; i < contexts.size(); ++i)
    for (std::size_t j = 0; j < contexts.size(); ++j)
      if (i != j && contexts[i].is_strict_suffix_of(contexts[j])) return false;
  return true;
}

/// A finite set of strings with the suffix property, kept sorted.
class ContextTree {
 public:
  /// The single-leaf tree {λ}.
  ContextTree() : contexts_{ContextString{}} {}

  explicit ContextTree(std::vector<ContextString> contexts) : contexts_(std::move(contexts)) {
    std::sort(contexts_.begin(), contexts_.end());
    contexts_.erase(std::unique(contexts_.begin(), contexts_.end()), contexts_.end());
    if (contexts_.empty()) throw invalid_tree("a context tree needs at least one context");
    if (!has_suffix_property(contexts_))
      throw invalid_tree("context set violates the suffix property");
  }

  const std::vector<ContextString>& contexts() const noexcept { return contexts_; }
  std::size_t size() const noexcept { return contexts_.size(); }

  std::size_t height() const noexcept {
    std::size_t h = 0;
    for (const auto& w : contexts_) h = std::max(h, w.length());
    return h;
  }

  bool contains(const ContextString& w) const {
    return std::binary_search(contexts_.begin(), contexts_.end(), w);
  }

  auto begin() const noexcept { return contexts_.begin(); }
  auto end() const noexcept { return contexts_.end(); }

  bool operator==(const ContextTree&) const = default;

 private:
  std::vector<ContextString> contexts_;
};

/// Int(τ): every string (λ included) that is a strict suffix of some context.
inline std::set<ContextString> interior(const ContextTree& tree) {
  std::set<ContextString> out;
  for (const auto& w : tree)
    for (std::size_t k = 0; k < w.length(); ++k) out.insert(w.suffix(k));
  return out;
}

/// True iff every semi-infinite past has a suffix in the tree.
///
/// For a bounded tree it suffices to check that the root is covered, where a node is
/// covered if it is a context or all of its one-symbol extensions are covered.
inline bool is_complete(const ContextTree& tree, std::size_t alphabet_size) {
  const auto inner = interior(tree);
  std::function<bool(const ContextString&)> covered = [&](const ContextString& w) {
    if (tree.contains(w)) return true;
    if (!inner.contains(w)) return false;
    for (std::size_t a = 0; a < alphabet_size; ++a)
      if (!covered(w.prepend(static_cast<symbol_t>(a)))) return false;
    return true;
  };
  return covered(ContextString{});
}

/// τ|_K: contexts of length ≤ K, plus the length-K suffixes of longer contexts.
inline ContextTree truncate(const ContextTree& tree, std::size_t depth) {
  if (depth < 1) throw input_error("truncation level must be at least 1");
  std::set<ContextString> out;
  for (const auto& w : tree) out.insert(w.length() <= depth ? w : w.suffix(depth));
  return ContextTree(std::vector<ContextString>(out.begin(), out.end()));
}

}  // namespace vlmc
