#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vlmc/counts.hpp"

using namespace vlmc;
using oracle::seq;
using oracle::str;
using Catch::Approx;

TEST_CASE("hand counts on 00101", "[counts]") {
  const auto trie = build_counts(seq("00101"), 2, 2);
  CHECK(trie.count(str("00"), 1) == 1);
  CHECK(trie.count(str("0"), 1) == 2);
  CHECK(trie.count(str("01"), 0) == 1);
  CHECK(trie.total(ContextString{}) == 3);
  CHECK(trie.windows() == 3);
  CHECK(trie.total(str("11")) == 0);
  CHECK_FALSE(trie.find(str("11")).has_value());
  CHECK_FALSE(trie.find(str("000")).has_value());

  // p̂(1|λ) = 2/3; "0" is always followed by 1 in the counted windows.
  CHECK(empirical_conditional(trie, ContextString{}, 1) == Approx(2.0 / 3));
  CHECK(empirical_conditional(trie, str("0"), 1) == 1.0);
  CHECK(empirical_conditional(trie, str("0"), 0) == 0.0);
  CHECK_THROWS_AS(empirical_conditional(trie, str("11"), 0), unseen_context);
}

TEST_CASE("constant data", "[counts]") {
  const auto trie = build_counts(seq("1111"), 2, 1);
  CHECK(trie.count(str("1"), 1) == 3);
  CHECK(trie.count(str("1"), 0) == 0);
  CHECK(empirical_conditional(trie, str("1"), 1) == 1.0);
  CHECK(log_ml(trie, str("1")) == 0.0);
}

TEST_CASE("input errors", "[counts]") {
  CHECK_THROWS_AS(build_counts(seq("01"), 2, 2), data_too_short);
  CHECK_THROWS_AS(build_counts(seq("012"), 2, 1), unknown_symbol);
  CHECK_THROWS_AS(build_counts(seq("0101"), 2, 0), input_error);
}

TEST_CASE("log maximum likelihood", "[counts]") {
  const std::uint64_t even[] = {2, 2};
  CHECK(log_ml(even) == Approx(4 * std::log(0.5)).epsilon(1e-12));
  CHECK(log_ml(even) == Approx(-2.77259).margin(1e-5));
  const std::uint64_t pure[] = {7, 0};
  CHECK(log_ml(pure) == 0.0);
  const std::uint64_t skew[] = {1, 2};
  CHECK(log_ml(skew) == Approx(std::log(1.0 / 3) + 2 * std::log(2.0 / 3)).epsilon(1e-12));
  CHECK(log_ml(skew) == Approx(-1.90954).margin(1e-5));
  const std::uint64_t none[] = {0, 0};
  CHECK_THROWS_AS(log_ml(none), unseen_context);
}

TEST_CASE("counts agree with a naive recount", "[counts][property]") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 3;
    const std::size_t d = 1 + trial % 4;
    const std::size_t n = d + 1 + rng() % 150;
    const auto x = oracle::random_sequence(rng, n, k);
    const auto trie = build_counts(x, k, d);
    for (std::size_t l = 0; l <= d; ++l) {
      std::uint64_t layer = 0;
      for (const auto& w : all_strings(k, l)) {
        for (std::size_t a = 0; a < k; ++a)
          REQUIRE(trie.count(w, static_cast<symbol_t>(a)) ==
                  oracle::naive_count(x, d, w, static_cast<symbol_t>(a)));
        layer += trie.total(w);
        if (l < d && trie.total(w) > 0) {
          std::uint64_t children = 0;
          for (std::size_t a = 0; a < k; ++a) children += trie.total(w.prepend(static_cast<symbol_t>(a)));
          CHECK(children == trie.total(w));
        }
      }
      CHECK(layer == n - d);
    }
    // Only occurring strings are stored.
    std::size_t stored = 0;
    trie.for_each([&](CountTrie::node_id id) {
      ++stored;
      CHECK(trie.total(id) >= 1);
      CHECK(trie.find(trie.string_of(id)) == id);
    });
    CHECK(stored == oracle::observed_strings(x, d).size());
  }
}

TEST_CASE("maximum likelihood dominates any fixed distribution", "[counts][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 4;
    std::vector<std::uint64_t> c(k);
    for (auto& v : c) v = rng() % 20;
    c[0] += 1;
    const auto q = oracle::random_distribution(rng, k, false);
    double fixed = 0.0;
    for (std::size_t a = 0; a < k; ++a) fixed += static_cast<double>(c[a]) * std::log(q[a]);
    CHECK(log_ml(c) >= fixed - 1e-9);
    CHECK(log_ml(c) <= 0.0);
  }
}

TEST_CASE("empirical conditionals are normalized", "[counts][property]") {
  std::mt19937_64 rng(17);
  const auto x = oracle::random_sequence(rng, 400, 3);
  const auto trie = build_counts(x, 3, 3);
  trie.for_each([&](CountTrie::node_id id) {
    const auto w = trie.string_of(id);
    double s = 0.0;
    for (symbol_t a = 0; a < 3; ++a) s += empirical_conditional(trie, w, a);
    CHECK(s == Approx(1.0).margin(1e-12));
  });
}

TEST_CASE("count dump", "[counts]") {
  const auto trie = build_counts(seq("00101"), 2, 2);
  std::ostringstream out;
  write_counts_csv(out, trie, Alphabet("01"));
  CHECK(out.str() ==
        "w,a,count\n"
        ",0,1\n,1,2\n"
        "0,1,2\n00,1,1\n10,1,1\n"
        "1,0,1\n01,0,1\n");
}
