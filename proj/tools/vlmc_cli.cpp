// Command-line front end: simulate, fit, experiment, bounds, kl.
//
// Exit codes: 0 success, 2 input error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlmc/vlmc.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw vlmc::input_error("bad number \"" + s + "\"");
  return v;
}

std::size_t parse_size(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw vlmc::input_error("bad sample size \"" + s + "\"");
  return std::stoull(s);
}

/// "256,512,1024" or "256,512,...,16384" (the step is read from the first two
/// values: a ratio when the second is a multiple of the first, else a difference).
std::vector<std::size_t> parse_ns(const std::string& text) {
  const auto parts = split(text, ',');
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] != "...") {
      out.push_back(parse_size(parts[i]));
      continue;
    }
    if (out.size() < 2 || i + 1 != parts.size() - 1)
      throw vlmc::input_error("\"...\" needs two values before it and one after");
    const auto a = out[out.size() - 2], b = out.back(), last = parse_size(parts[i + 1]);
    if (b <= a) throw vlmc::input_error("sample sizes before \"...\" must increase");
    const bool ratio = a > 0 && b % a == 0;
    for (auto v = ratio ? b * (b / a) : b + (b - a); v < last; v = ratio ? v * (b / a) : v + (b - a))
      out.push_back(v);
    out.push_back(last);
    break;
  }
  if (out.empty()) throw vlmc::input_error("no sample sizes given");
  return out;
}

std::vector<double> parse_distribution(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_double(p));
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vlmc::input_error("cannot write " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-length Markov chain context tree estimation"};
  app.require_subcommand(1);

  // simulate
  std::string sim_model, sim_out, sim_format = "text";
  std::size_t sim_n = 0;
  std::uint64_t sim_seed = 0;
  std::optional<std::size_t> sim_burn;
  auto* sim = app.add_subcommand("simulate", "Draw a sample path from a model");
  sim->add_option("--model", sim_model, "Model JSON")->required();
  sim->add_option("--n", sim_n, "Sample length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--burn-in", sim_burn, "Discarded warm-up steps");
  sim->add_option("--format", sim_format, "Output format")->check(CLI::IsMember({"text", "bin"}));
  sim->add_option("--out", sim_out, "Output path")->required();

  // fit
  std::string fit_data, fit_alphabet, fit_penalty = "bic", fit_out, fit_dump, fit_text;
  std::size_t fit_depth = 0;
  auto* fit = app.add_subcommand("fit", "Estimate the context tree of a sample");
  fit->add_option("--data", fit_data, "Sample in text or binary format")->required();
  fit->add_option("--alphabet", fit_alphabet, "Symbol labels, e.g. \"01\"");
  fit->add_option("--max-depth", fit_depth, "Maximal context length d")->required()->check(CLI::PositiveNumber);
  fit->add_option("--penalty", fit_penalty, "bic | log:c | pow:c,beta");
  fit->add_option("--out", fit_out, "Fitted tree JSON")->required();
  fit->add_option("--dump-counts", fit_dump, "Write w,a,count rows to this CSV");
  fit->add_option("--text", fit_text, "Write context<TAB>count<TAB>probs lines to this file");

  // experiment
  std::string exp_model, exp_ns, exp_penalty = "bic", exp_depth = "const:4", exp_out;
  std::size_t exp_k = 0, exp_reps = 0, exp_threads = 1;
  std::uint64_t exp_seed = 0;
  std::optional<std::size_t> exp_burn;
  auto* exp = app.add_subcommand("experiment", "Monte Carlo under/over-estimation frequencies");
  exp->add_option("--model", exp_model, "Model JSON")->required();
  exp->add_option("--K", exp_k, "Truncation level")->required()->check(CLI::PositiveNumber);
  exp->add_option("--ns", exp_ns, "Sample sizes, e.g. 256,512,...,16384")->required();
  exp->add_option("--reps", exp_reps, "Replications per sample size")->required()->check(CLI::PositiveNumber);
  exp->add_option("--penalty", exp_penalty, "bic | log:c | pow:c,beta");
  exp->add_option("--depth", exp_depth, "const:D | log:gamma");
  exp->add_option("--seed", exp_seed, "Base seed");
  exp->add_option("--burn-in", exp_burn, "Discarded warm-up steps per replication");
  exp->add_option("--threads", exp_threads, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber);
  exp->add_option("--out", exp_out, "Results CSV (metadata goes to <out>.meta.json)")->required();

  // bounds
  std::string b_model, b_penalty = "bic", b_ns, b_out;
  std::size_t b_depth = 0;
  auto* bounds = app.add_subcommand("bounds", "Theoretical overestimation bound curve");
  bounds->add_option("--model", b_model, "Model JSON")->required();
  bounds->add_option("--max-depth", b_depth, "Depth d")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--penalty", b_penalty, "bic | log:c | pow:c,beta");
  bounds->add_option("--ns", b_ns, "Sample sizes")->required();
  bounds->add_option("--out", b_out, "Output CSV")->required();

  // kl
  std::string kl_p, kl_q;
  auto* kl = app.add_subcommand("kl", "KL divergence and its chi-square upper bound");
  kl->add_option("--p", kl_p, "Distribution p, comma separated")->required();
  kl->add_option("--q", kl_q, "Distribution q, comma separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*sim) {
      const auto model = vlmc::load_model(sim_model);
      const auto x = vlmc::simulate(model, {sim_n, sim_seed, sim_burn});
      const auto bytes = sim_format == "bin" ? vlmc::encode_binary(model.alphabet_size(), x)
                                             : vlmc::encode_text(model.alphabet(), x);
      vlmc::write_file(sim_out, bytes);
    } else if (*fit) {
      std::optional<vlmc::Alphabet> alphabet;
      if (!fit_alphabet.empty()) alphabet.emplace(fit_alphabet);
      const auto data = vlmc::read_sequence(fit_data, alphabet);
      if (!alphabet) alphabet = vlmc::Alphabet::with_size(data.alphabet_size);
      const auto penalty = vlmc::PenaltySpec::parse(fit_penalty);
      const vlmc::CountTrie trie(data.symbols, alphabet->size(), fit_depth);
      const auto tree = vlmc::ctm_fit(trie, penalty);
      open_out(fit_out) << vlmc::fitted_tree_json(trie, tree, *alphabet).dump(2) << '\n';
      if (!fit_dump.empty()) {
        auto out = open_out(fit_dump);
        vlmc::write_counts_csv(out, trie, *alphabet);
      }
      if (!fit_text.empty()) {
        auto out = open_out(fit_text);
        vlmc::write_tree_text(out, trie, tree, *alphabet);
      }
    } else if (*exp) {
      vlmc::ExperimentSpec spec{vlmc::load_model(exp_model)};
      spec.K = exp_k;
      spec.ns = parse_ns(exp_ns);
      spec.reps = exp_reps;
      spec.depth = vlmc::DepthRule::parse(exp_depth);
      spec.penalty = vlmc::PenaltySpec::parse(exp_penalty);
      spec.seed = exp_seed;
      spec.burn_in = exp_burn;
      spec.threads = exp_threads;
      const auto result = vlmc::run_experiment(spec);
      {
        auto out = open_out(exp_out);
        vlmc::write_results_csv(out, result);
      }
      open_out(exp_out + ".meta.json") << vlmc::result_metadata(result).dump(2) << '\n';
    } else if (*bounds) {
      const auto model = vlmc::load_model(b_model);
      const auto penalty = vlmc::PenaltySpec::parse(b_penalty);
      const auto ns = parse_ns(b_ns);
      const auto constants = vlmc::bound_constants(model, b_depth);
      auto out = open_out(b_out);
      vlmc::write_bounds_csv(out, constants, penalty, ns, b_depth);
    } else if (*kl) {
      const auto p = parse_distribution(kl_p);
      const auto q = parse_distribution(kl_q);
      const double divergence = vlmc::kl_divergence(p, q);
      const double bound = vlmc::chi2_bound(p, q);
      std::cout.precision(12);
      std::cout << "D(p||q) = " << divergence << '\n' << "chi2 bound = " << bound << '\n';
    }
  } catch (const vlmc::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
