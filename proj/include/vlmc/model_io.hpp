#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"

namespace vlmc {

/// Parses the JSON model format
///
///   {"alphabet": ["0","1"],
///    "contexts": [{"context": "10", "probs": {"0": 0.2, "1": 0.8}}, ...]}
///
/// Context strings are labels concatenated oldest-first; "" is the root context.
/// Symbols missing from "probs" get probability 0.
inline VlmcModel model_from_json(const nlohmann::json& doc) {
  try {
    std::string labels;
    for (const auto& item : doc.at("alphabet")) {
      auto label = item.get<std::string>();
      if (label.size() != 1)
        throw invalid_model("alphabet labels must be single characters, got \"" + label + "\"");
      labels += label;
    }
    Alphabet alphabet(labels);

    std::vector<ContextString> contexts;
    std::vector<std::vector<double>> probs;
    for (const auto& entry : doc.at("contexts")) {
      contexts.emplace_back(alphabet.encode(entry.at("context").get<std::string>()));
      std::vector<double> row(alphabet.size(), 0.0);
      for (const auto& [key, value] : entry.at("probs").items()) {
        if (key.size() != 1) throw unknown_symbol("probability key \"" + key + "\" is not a symbol");
        row[alphabet.index_of(key[0])] = value.get<double>();
      }
      probs.push_back(std::move(row));
    }

    // Duplicates would be silently merged by ContextTree.
    std::vector<ContextString> sorted = contexts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw invalid_tree("duplicate context in model");

    ContextTree tree(contexts);
    std::vector<std::vector<double>> ordered(contexts.size());
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      auto pos = std::lower_bound(tree.begin(), tree.end(), contexts[i]) - tree.begin();
      ordered[static_cast<std::size_t>(pos)] = std::move(probs[i]);
    }
    return VlmcModel(std::move(alphabet), std::move(tree), std::move(ordered));
  } catch (const nlohmann::json::exception& e) {
    throw invalid_model(std::string("malformed model JSON: ") + e.what());
  }
}

inline VlmcModel model_from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw invalid_model(std::string("malformed model JSON: ") + e.what());
  }
  return model_from_json(doc);
}

inline VlmcModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open model file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json_string(buf.str());
}

/// Writes a tree and per-context distributions in the model JSON format.
/// `counts`, when non-empty, adds a "count" field per context.
inline nlohmann::json tree_to_json(const Alphabet& alphabet, const ContextTree& tree,
                                   const std::vector<std::vector<double>>& probs,
                                   const std::vector<std::uint64_t>& counts = {}) {
  nlohmann::json doc;
  doc["alphabet"] = nlohmann::json::array();
  for (char c : alphabet.labels()) doc["alphabet"].push_back(std::string(1, c));
  doc["contexts"] = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    nlohmann::json entry;
    entry["context"] = alphabet.decode(tree.contexts()[i].symbols());
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      row[std::string(1, alphabet.labels()[a])] = probs.at(i).at(a);
    entry["probs"] = std::move(row);
    if (!counts.empty()) entry["count"] = counts.at(i);
    doc["contexts"].push_back(std::move(entry));
  }
  return doc;
}

inline nlohmann::json model_to_json(const VlmcModel& model) {
  std::vector<std::vector<double>> probs;
  for (std::size_t i = 0; i < model.tree().size(); ++i) {
    auto d = model.distribution(i);
    probs.emplace_back(d.begin(), d.end());
  }
  return tree_to_json(model.alphabet(), model.tree(), probs);
}

}  // namespace vlmc
