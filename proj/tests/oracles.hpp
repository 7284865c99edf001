#pragma once

// Test-only reference computations. Nothing here calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "vlmc/vlmc.hpp"

namespace oracle {

using vlmc::ContextString;
using vlmc::symbol_t;

inline ContextString str(const char* digits) {
  std::vector<symbol_t> out;
  for (const char* p = digits; *p; ++p) out.push_back(static_cast<symbol_t>(*p - '0'));
  return ContextString(std::move(out));
}

inline std::vector<symbol_t> seq(const char* digits) {
  std::vector<symbol_t> out;
  for (const char* p = digits; *p; ++p) out.push_back(static_cast<symbol_t>(*p - '0'));
  return out;
}

/// M1: τ = {1, 10, 00}, p(1|1)=0.3, p(1|10)=0.8, p(1|00)=0.2.
inline vlmc::VlmcModel m1() {
  return vlmc::VlmcModel(vlmc::Alphabet("01"), vlmc::ContextTree({str("00"), str("1"), str("10")}),
                         {{0.8, 0.2}, {0.7, 0.3}, {0.2, 0.8}});
}

inline vlmc::ContextTree m1_tree() { return vlmc::ContextTree({str("1"), str("10"), str("00")}); }

/// Direct recount: N(w,a) = Σ_{t=d+1}^{n} 1{x_{t-ℓ}^{t-1} = w, x_t = a} (1-based t).
inline std::uint64_t naive_count(const std::vector<symbol_t>& x, std::size_t d,
                                 const ContextString& w, symbol_t a) {
  std::uint64_t c = 0;
  const std::size_t l = w.length();
  for (std::size_t t = d + 1; t <= x.size(); ++t) {
    if (x[t - 1] != a) continue;
    bool match = true;
    for (std::size_t i = 0; i < l && match; ++i) match = x[t - 1 - l + i] == w[i];
    c += match;
  }
  return c;
}

/// Context of a history by scanning every context (no lookup structure).
inline int scan_context(const vlmc::VlmcModel& m, const std::vector<symbol_t>& history) {
  const auto& ctx = m.tree().contexts();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& w = ctx[i];
    if (w.length() > history.size()) continue;
    if (std::equal(w.symbols().begin(), w.symbols().end(), history.end() - w.length()))
      return static_cast<int>(i);
  }
  return -1;
}

/// Stationary law of the embedded order-h chain by Gaussian elimination on
/// (Pᵀ - I)π = 0 with the last row replaced by Σπ = 1. Returns p(w) for any w.
class DirectStationary {
 public:
  explicit DirectStationary(const vlmc::VlmcModel& m) : m_(m) {
    k_ = m.alphabet_size();
    h_ = m.height();
    std::size_t s = 1;
    for (std::size_t i = 0; i < h_; ++i) s *= k_;
    states_ = s;
    std::vector<std::vector<double>> a(s, std::vector<double>(s + 1, 0.0));
    for (std::size_t from = 0; from < s; ++from) {
      auto hist = decode(from);
      const int ci = scan_context(m, hist);
      for (std::size_t sym = 0; sym < k_; ++sym) {
        std::vector<symbol_t> next(hist.begin() + (h_ ? 1 : 0), hist.end());
        if (h_) next.push_back(static_cast<symbol_t>(sym));
        const auto to = encode(next);
        a[to][from] += m.conditional(static_cast<std::size_t>(ci), static_cast<symbol_t>(sym));
      }
    }
    for (std::size_t i = 0; i < s; ++i) a[i][i] -= 1.0;
    for (std::size_t j = 0; j <= s; ++j) a[s - 1][j] = 1.0;
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < s; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < s; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      std::swap(a[col], a[piv]);
      for (std::size_t r = 0; r < s; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (std::size_t j = col; j <= s; ++j) a[r][j] -= f * a[col][j];
      }
    }
    pi_.resize(s);
    for (std::size_t i = 0; i < s; ++i) pi_[i] = a[i][s] / a[i][i];
  }

  double state(const std::vector<symbol_t>& h) const { return pi_[encode(h)]; }

  /// p(w) by summing the joint law of h + ℓ(w) consecutive symbols.
  double probability(const ContextString& w) const {
    double total = 0.0;
    const std::size_t l = w.length();
    // enumerate initial states, then extend symbol by symbol along w
    for (std::size_t s = 0; s < states_; ++s) {
      auto hist = decode(s);
      if (l <= h_) {
        if (std::equal(w.symbols().begin(), w.symbols().end(), hist.end() - l)) total += pi_[s];
        continue;
      }
      // the first h symbols of w must equal the state
      if (!std::equal(hist.begin(), hist.end(), w.symbols().begin())) continue;
      double p = pi_[s];
      std::vector<symbol_t> path = hist;
      for (std::size_t i = h_; i < l; ++i) {
        const int ci = scan_context(m_, path);
        p *= m_.conditional(static_cast<std::size_t>(ci), w[i]);
        path.push_back(w[i]);
      }
      total += p;
    }
    return total;
  }

 private:
  std::vector<symbol_t> decode(std::size_t s) const {
    std::vector<symbol_t> out(h_);
    for (std::size_t i = h_; i > 0; --i) {
      out[i - 1] = static_cast<symbol_t>(s % k_);
      s /= k_;
    }
    return out;
  }
  std::size_t encode(const std::vector<symbol_t>& h) const {
    std::size_t s = 0;
    for (auto v : h) s = s * k_ + v;
    return s;
  }

  vlmc::VlmcModel m_;
  std::size_t k_ = 0, h_ = 0, states_ = 1;
  std::vector<double> pi_;
};

/// Uniform random string of the given length.
inline std::vector<symbol_t> random_sequence(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<int> sym(0, static_cast<int>(k) - 1);
  std::vector<symbol_t> out(n);
  for (auto& s : out) s = static_cast<symbol_t>(sym(rng));
  return out;
}

/// Sample with some structure: a random sparse Markov source of order ≤ 3.
inline std::vector<symbol_t> structured_sequence(std::mt19937_64& rng, std::size_t n,
                                                 std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::vector<symbol_t>, std::vector<double>> table;
  const std::size_t order = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
  auto out = random_sequence(rng, order, k);
  while (out.size() < n) {
    std::vector<symbol_t> key(out.end() - static_cast<std::ptrdiff_t>(order), out.end());
    auto& row = table[key];
    if (row.empty()) {
      row.resize(k);
      double s = 0.0;
      for (auto& v : row) s += (v = std::pow(u(rng), 3.0));
      for (auto& v : row) v /= s;
    }
    double r = u(rng), acc = 0.0;
    std::size_t pick = k - 1;
    for (std::size_t a = 0; a < k; ++a)
      if (r < (acc += row[a])) {
        pick = a;
        break;
      }
    out.push_back(static_cast<symbol_t>(pick));
  }
  return out;
}

/// Random complete tree over k symbols with height ≤ max_height.
inline vlmc::ContextTree random_complete_tree(std::mt19937_64& rng, std::size_t k,
                                              std::size_t max_height) {
  std::vector<ContextString> leaves;
  std::bernoulli_distribution split(0.55);
  std::vector<ContextString> stack{ContextString{}};
  while (!stack.empty()) {
    auto w = stack.back();
    stack.pop_back();
    if (w.length() < max_height && split(rng)) {
      for (std::size_t a = 0; a < k; ++a) stack.push_back(w.prepend(static_cast<symbol_t>(a)));
    } else {
      leaves.push_back(w);
    }
  }
  return vlmc::ContextTree(leaves);
}

inline vlmc::VlmcModel random_model(std::mt19937_64& rng, std::size_t k, std::size_t max_height) {
  auto tree = random_complete_tree(rng, k, max_height);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> probs;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    std::vector<double> row(k);
    double s = 0.0;
    for (auto& v : row) s += (v = u(rng));
    for (auto& v : row) v /= s;
    probs.push_back(row);
  }
  return vlmc::VlmcModel(vlmc::Alphabet::with_size(k), tree, probs);
}

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t k,
                                               bool allow_zeros) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(allow_zeros ? 0.2 : 0.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) s += (v = zero(rng) ? 0.0 : u(rng) + 1e-3);
  if (s == 0.0) {
    p[0] = 1.0;
    return p;
  }
  for (auto& v : p) v /= s;
  return p;
}

/// Every string of length 1..d over k symbols that occurs in the sample,
/// found by scanning all windows (independent of the trie).
inline std::set<ContextString> observed_strings(const std::vector<symbol_t>& x, std::size_t d) {
  std::set<ContextString> out{ContextString{}};
  for (std::size_t t = d; t < x.size(); ++t)
    for (std::size_t l = 1; l <= d; ++l)
      out.insert(ContextString(std::vector<symbol_t>(x.begin() + static_cast<std::ptrdiff_t>(t - l),
                                                     x.begin() + static_cast<std::ptrdiff_t>(t))));
  return out;
}

}  // namespace oracle
