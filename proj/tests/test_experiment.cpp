#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oracles.hpp"
#include "vlmc/experiment.hpp"

using namespace vlmc;
using oracle::str;

namespace {

ExperimentSpec m1_spec(std::size_t reps, std::vector<std::size_t> ns) {
  ExperimentSpec s{oracle::m1()};
  s.K = 2;
  s.reps = reps;
  s.ns = std::move(ns);
  s.depth = DepthRule::constant(4);
  s.penalty = PenaltySpec::bic();
  s.seed = 0;
  return s;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("classification of estimates", "[experiment]") {
  const auto truth = oracle::m1_tree();
  auto c = classify(truth, truth, 2);
  CHECK_FALSE(c.under);
  CHECK_FALSE(c.over);
  CHECK(c.exact);

  c = classify(ContextTree({str("1"), str("0")}), truth, 2);
  CHECK(c.under);
  CHECK_FALSE(c.over);
  CHECK_FALSE(c.exact);

  const ContextTree deeper({str("1"), str("010"), str("110"), str("00")});
  c = classify(deeper, truth, 3);
  CHECK(c.over);
  CHECK_FALSE(c.under);
  // "10" has length 2, so at K = 2 the extension does not count
  c = classify(deeper, truth, 2);
  CHECK_FALSE(c.over);
  CHECK(c.exact);

  c = classify(ContextTree(), truth, 1);
  CHECK(c.under);
  CHECK_FALSE(c.exact);

  c = classify(ContextTree({str("01"), str("11"), str("10"), str("00")}), truth, 2);
  CHECK(c.over);
  CHECK_FALSE(c.under);
  CHECK_FALSE(c.exact);
}

TEST_CASE("exact matches are never underestimates", "[experiment][property]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto truth = oracle::random_complete_tree(rng, 2, 4);
    const auto est = oracle::random_complete_tree(rng, 2, 4);
    for (std::size_t K = 1; K <= 4; ++K) {
      const auto c = classify(est, truth, K);
      if (c.exact) CHECK_FALSE(c.under);
      CHECK(classify(truth, truth, K).exact);
    }
  }
}

TEST_CASE("replication seeds", "[experiment]") {
  CHECK(replication_seed(5, 256, 0) != replication_seed(5, 256, 1));
  CHECK(replication_seed(5, 256, 0) != replication_seed(5, 512, 0));
  CHECK(replication_seed(5, 256, 3) - replication_seed(0, 256, 3) == 5);
}

TEST_CASE("experiments are deterministic", "[experiment]") {
  auto spec = m1_spec(1, {256, 512});
  spec.seed = 99;
  const auto a = csv(run_experiment(spec));
  CHECK(a == csv(run_experiment(spec)));

  auto wide = m1_spec(20, {256, 1024});
  const auto serial = csv(run_experiment(wide));
  wide.threads = 4;
  CHECK(csv(run_experiment(wide)) == serial);
}

TEST_CASE("results CSV layout", "[experiment]") {
  const auto r = run_experiment(m1_spec(10, {256}));
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  CHECK(row.d == 4);
  CHECK(row.reps == 10);
  CHECK(row.freq_exact == static_cast<double>(row.count_exact) / 10);
  CHECK(row.bound_over_raw > 1.0);
  CHECK(row.bound_over_clipped == 1.0);
  std::istringstream in(csv(r));
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header ==
        "n,d,reps,count_under,count_over,count_exact,freq_under,freq_over,freq_exact,bound_over_raw");
  CHECK(line.starts_with("256,4,10,"));

  const auto meta = result_metadata(r);
  CHECK(meta["rng"] == "mt19937_64");
  CHECK(meta["penalty"] == "bic");
  CHECK(meta["depth_rule"] == "const:4");
}

TEST_CASE("experiment spec validation", "[experiment]") {
  auto spec = m1_spec(10, {256});
  spec.K = 0;
  CHECK_THROWS_AS(run_experiment(spec), input_error);
  spec = m1_spec(0, {256});
  CHECK_THROWS_AS(run_experiment(spec), input_error);
  spec = m1_spec(1, {4});
  CHECK_THROWS_AS(run_experiment(spec), input_error);
  spec = m1_spec(1, {});
  CHECK_THROWS_AS(run_experiment(spec), input_error);
}

TEST_CASE("a heavier penalty underestimates at least as often", "[experiment]") {
  auto base = m1_spec(50, {256, 1024, 4096});
  auto heavy = base;
  heavy.penalty = base.penalty.scaled(100, 2);
  const auto a = run_experiment(base);
  const auto b = run_experiment(heavy);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(b.rows[i].freq_under >= a.rows[i].freq_under);
}

TEST_CASE("underestimation decays on a weak-signal model", "[experiment]") {
  // p(1|10) = 0.6 and p(1|00) = 0.4: the split of "0" is hard to see at small n.
  ExperimentSpec spec{VlmcModel(Alphabet("01"), oracle::m1_tree(),
                                {{0.6, 0.4}, {0.7, 0.3}, {0.4, 0.6}})};
  spec.K = 2;
  spec.reps = 100;
  spec.depth = DepthRule::constant(4);
  spec.ns = {256, 1024, 4096, 16384};
  const auto r = run_experiment(spec);
  CHECK(r.rows.front().freq_under > 0.1);
  CHECK(r.rows.back().freq_under == 0.0);
  CHECK(underestimation_decay_slope(r) < 0.0);
}

TEST_CASE("replication failures carry their context", "[experiment]") {
  // A burn-in below the tree height makes every replication throw.
  auto spec = m1_spec(1, {256});
  spec.burn_in = 1;  // below the tree height
  try {
    run_experiment(spec);
    FAIL("expected a failure");
  } catch (const error& e) {
    const std::string what = e.what();
    CHECK(what.find("n=256") != std::string::npos);
    CHECK(what.find("seed=") != std::string::npos);
  }
}
