#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "counts.hpp"
#include "diagnostics.hpp"
#include "estimator.hpp"
#include "model.hpp"
#include "penalty.hpp"
#include "simulator.hpp"
#include "tree.hpp"

namespace vlmc {

struct Classification {
  bool under = false;
  bool over = false;
  bool exact = false;
};

/// Compares an estimate with the true tree at truncation level K.
///
///   under: some w ∈ Int(truth|_K) is a context of the estimate
///   over:  some context of the estimate strictly extends a true context v with ℓ(v) < K
///   exact: estimate|_K = truth|_K
inline Classification classify(const ContextTree& estimate, const ContextTree& truth,
                               std::size_t K) {
  Classification out;
  const auto truth_k = truncate(truth, K);
  for (const auto& w : interior(truth_k))
    if (estimate.contains(w)) {
      out.under = true;
      break;
    }
  for (const auto& w : estimate) {
    for (const auto& v : truth)
      if (v.length() < K && v.is_strict_suffix_of(w)) {
        out.over = true;
        break;
      }
    if (out.over) break;
  }
  out.exact = truncate(estimate, K) == truth_k;
  return out;
}

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of replication r at sample size n: base + hash(n, r).
inline std::uint64_t replication_seed(std::uint64_t base, std::size_t n, std::size_t r) {
  return base + mix64(mix64(static_cast<std::uint64_t>(n)) ^ static_cast<std::uint64_t>(r));
}

struct ExperimentSpec {
  explicit ExperimentSpec(VlmcModel m) : model(std::move(m)) {}

  VlmcModel model;
  std::size_t K = 1;
  std::vector<std::size_t> ns;
  std::size_t reps = 1;
  DepthRule depth = DepthRule::constant(4);
  PenaltySpec penalty = PenaltySpec::bic();
  std::uint64_t seed = 0;
  std::optional<std::size_t> burn_in;
  /// Worker threads; results do not depend on it.
  std::size_t threads = 1;
};

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t reps = 0;
  std::size_t count_under = 0;
  std::size_t count_over = 0;
  std::size_t count_exact = 0;
  double freq_under = 0.0;
  double freq_over = 0.0;
  double freq_exact = 0.0;
  /// Theoretical overestimation bound, unclipped; NaN if α₀ = 0.
  double bound_over_raw = 0.0;
  double bound_over_clipped = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::uint64_t seed = 0;
  std::string penalty;
  std::string depth_rule;
  std::string rng = kRngName;
  std::size_t K = 0;
};

inline void validate(const ExperimentSpec& spec) {
  if (spec.K < 1) throw input_error("K must be at least 1");
  if (spec.reps < 1) throw input_error("reps must be at least 1");
  if (spec.ns.empty()) throw input_error("no sample sizes given");
  for (auto n : spec.ns)
    if (n <= spec.depth(n))
      throw input_error("sample size " + std::to_string(n) + " does not exceed its depth");
}

/// Single replication: simulate, count, fit, classify.
inline Classification run_replication(const ExperimentSpec& spec, std::size_t n, std::size_t d,
                                      std::uint64_t seed) {
  const auto sample = simulate(spec.model, {n, seed, spec.burn_in});
  const CountTrie trie(sample, spec.model.alphabet_size(), d);
  return classify(ctm_fit(trie, spec.penalty), spec.model.tree(), spec.K);
}

/// Monte Carlo estimate of the under/over/exact frequencies at each n.
/// Deterministic given the spec, whatever the thread count.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);

  std::optional<BoundConstants> constants;
  if (spec.model.min_conditional() > 0.0)
    constants = bound_constants(spec.model, spec.depth(spec.ns.front()));

  const std::size_t jobs = spec.ns.size() * spec.reps;
  std::vector<Classification> outcomes(jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_message;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const auto n = spec.ns[job / spec.reps];
      const auto r = job % spec.reps;
      const auto seed = replication_seed(spec.seed, n, r);
      try {
        outcomes[job] = run_replication(spec, n, spec.depth(n), seed);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed.exchange(true))
          error_message = "replication failed (n=" + std::to_string(n) + ", r=" +
                          std::to_string(r) + ", seed=" + std::to_string(seed) + "): " + e.what();
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(spec.threads, 1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failed) throw error(error_message);

  ExperimentResult result;
  result.seed = spec.seed;
  result.penalty = spec.penalty.to_string();
  result.depth_rule = spec.depth.to_string();
  result.K = spec.K;
  const double reps = static_cast<double>(spec.reps);
  for (std::size_t i = 0; i < spec.ns.size(); ++i) {
    ExperimentRow row;
    row.n = spec.ns[i];
    row.d = spec.depth(row.n);
    row.reps = spec.reps;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      const auto& o = outcomes[i * spec.reps + r];
      row.count_under += o.under;
      row.count_over += o.over;
      row.count_exact += o.exact;
    }
    row.freq_under = static_cast<double>(row.count_under) / reps;
    row.freq_over = static_cast<double>(row.count_over) / reps;
    row.freq_exact = static_cast<double>(row.count_exact) / reps;
    if (constants) {
      const auto b = overestimation_bound(*constants, spec.penalty, row.n, row.d);
      row.bound_over_raw = b.raw;
      row.bound_over_clipped = b.clipped;
    } else {
      row.bound_over_raw = row.bound_over_clipped = std::numeric_limits<double>::quiet_NaN();
    }
    result.rows.push_back(row);
  }
  return result;
}

inline void write_results_csv(std::ostream& out, const ExperimentResult& result) {
  out << "n,d,reps,count_under,count_over,count_exact,freq_under,freq_over,freq_exact,"
         "bound_over_raw\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : result.rows)
    out << r.n << ',' << r.d << ',' << r.reps << ',' << r.count_under << ',' << r.count_over << ','
        << r.count_exact << ',' << r.freq_under << ',' << r.freq_over << ',' << r.freq_exact << ','
        << r.bound_over_raw << '\n';
  out.precision(old_precision);
}

inline nlohmann::json result_metadata(const ExperimentResult& result) {
  nlohmann::json meta;
  meta["seed"] = result.seed;
  meta["penalty"] = result.penalty;
  meta["depth_rule"] = result.depth_rule;
  meta["rng"] = result.rng;
  meta["K"] = result.K;
  return meta;
}

/// Least-squares slope of log(freq_under + 1/reps) against n.
inline double underestimation_decay_slope(const ExperimentResult& result) {
  const auto& rows = result.rows;
  if (rows.size() < 2) throw input_error("slope needs at least two sample sizes");
  double mx = 0.0, my = 0.0;
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(std::log(r.freq_under + 1.0 / static_cast<double>(r.reps)));
    mx += xs.back();
    my += ys.back();
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace vlmc
