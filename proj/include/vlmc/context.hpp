#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace vlmc {

using symbol_t = std::uint8_t;

/// Maximum alphabet size; symbols are stored as 8-bit indices.
inline constexpr std::size_t kMaxAlphabetSize = 256;

/// Finite alphabet of single-character labels. Index i <-> labels()[i].
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::string_view labels) : labels_(labels) {
    if (labels_.empty()) throw input_error("alphabet must contain at least one symbol");
    if (labels_.size() > kMaxAlphabetSize) throw input_error("alphabet has more than 256 symbols");
    std::fill(std::begin(index_), std::end(index_), -1);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      auto key = static_cast<unsigned char>(labels_[i]);
      if (index_[key] != -1)
        throw input_error(std::string("duplicate alphabet symbol '") + labels_[i] + "'");
      index_[key] = static_cast<int>(i);
    }
  }

  /// Alphabet {'0', '1', ..., } of the given size (digits, then letters).
  static Alphabet with_size(std::size_t size) {
    static constexpr std::string_view pool =
        "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if (size == 0 || size > pool.size())
      throw input_error("no default labels for alphabet of size " + std::to_string(size));
    return Alphabet(pool.substr(0, size));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& labels() const noexcept { return labels_; }
  char label(symbol_t s) const { return labels_.at(s); }

  std::optional<symbol_t> find(char label) const noexcept {
    if (labels_.empty()) return std::nullopt;
    int i = index_[static_cast<unsigned char>(label)];
    if (i < 0) return std::nullopt;
    return static_cast<symbol_t>(i);
  }

  symbol_t index_of(char label) const {
    if (auto s = find(label)) return *s;
    throw unknown_symbol(std::string("symbol '") + label + "' is not in the alphabet \"" + labels_ +
                         "\"");
  }

  /// Labels to symbol indices; throws unknown_symbol.
  std::vector<symbol_t> encode(std::string_view text) const {
    std::vector<symbol_t> out;
    out.reserve(text.size());
    for (char c : text) out.push_back(index_of(c));
    return out;
  }

  std::string decode(std::span<const symbol_t> symbols) const {
    std::string out;
    out.reserve(symbols.size());
    for (auto s : symbols) out.push_back(label(s));
    return out;
  }

  bool operator==(const Alphabet& other) const noexcept { return labels_ == other.labels_; }

 private:
  std::string labels_;
  int index_[256]{};
};

/// A finite string w = (w_{-l}, ..., w_{-1}) stored oldest-first.
///
/// "Suffix" always means a trailing segment, i.e. the most recent symbols.
/// The empty string is the root context (lambda).
class ContextString {
 public:
  ContextString() = default;
  explicit ContextString(std::vector<symbol_t> symbols) : symbols_(std::move(symbols)) {}
  ContextString(std::initializer_list<symbol_t> symbols) : symbols_(symbols) {}
  explicit ContextString(std::span<const symbol_t> symbols)
      : symbols_(symbols.begin(), symbols.end()) {}

  std::size_t length() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::span<const symbol_t> symbols() const noexcept { return symbols_; }
  symbol_t operator[](std::size_t i) const noexcept { return symbols_[i]; }

  /// The last k symbols.
  ContextString suffix(std::size_t k) const {
    k = std::min(k, symbols_.size());
    return ContextString(std::span<const symbol_t>(symbols_).last(k));
  }

  /// The string a w (a is older than every symbol of w).
  ContextString prepend(symbol_t a) const {
    std::vector<symbol_t> out;
    out.reserve(symbols_.size() + 1);
    out.push_back(a);
    out.insert(out.end(), symbols_.begin(), symbols_.end());
    return ContextString(std::move(out));
  }

  /// The string w a (a is the most recent symbol).
  ContextString append(symbol_t a) const {
    auto out = symbols_;
    out.push_back(a);
    return ContextString(std::move(out));
  }

  /// this ⪯ w: this string is a trailing segment of w (or equal to it).
  bool is_suffix_or_equal(const ContextString& w) const noexcept { return ends_with(w.symbols_); }

  /// this ≺ w: this string is a strict trailing segment of w.
  bool is_strict_suffix_of(const ContextString& w) const noexcept {
    return symbols_.size() < w.length() && ends_with(w.symbols_);
  }

  /// True if this string is a trailing segment of the given history.
  bool ends_with(std::span<const symbol_t> history) const noexcept {
    if (symbols_.size() > history.size()) return false;
    return std::equal(symbols_.begin(), symbols_.end(), history.end() - symbols_.size());
  }

  auto operator<=>(const ContextString&) const = default;
  bool operator==(const ContextString&) const = default;

 private:
  std::vector<symbol_t> symbols_;
};

/// Human-readable rendering; the empty string prints as "λ".
inline std::string to_display(const Alphabet& alphabet, const ContextString& w) {
  if (w.empty()) return "λ";
  return alphabet.decode(w.symbols());
}

/// All strings of length k over an alphabet of the given size, in lexicographic order.
inline std::vector<ContextString> all_strings(std::size_t alphabet_size, std::size_t k) {
  std::vector<ContextString> out;
  std::vector<symbol_t> cur(k, 0);
  while (true) {
    out.emplace_back(cur);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++cur[i] < alphabet_size) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

}  // namespace vlmc
