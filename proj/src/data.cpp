#include "cst/data.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cst/error.hpp"
#include "json.hpp"

namespace cst {

using nlohmann::json;

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  throw Error("unknown split '" + s + "' (expected train|dev|test)");
}

int LabelSpace::index_of(const std::string& name) const {
  for (size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == name) return static_cast<int>(i);
  return kAbstain;
}

int LabelSpace::others_index() const {
  return others ? index_of(*others) : kAbstain;
}

void LabelSpace::validate() const {
  require(classes.size() >= 2, "label space needs at least 2 classes");
  std::unordered_set<std::string> seen;
  for (const auto& c : classes) {
    require(!c.empty(), "empty class name");
    require(seen.insert(c).second, "duplicate class name '" + c + "'");
  }
  if (others)
    require(index_of(*others) != kAbstain,
            "others class '" + *others + "' is not a member of the label space");
}

std::string rule_text(const Sample& s) {
  switch (s.kind) {
    case TaskKind::kSequence:
      return s.text;
    case TaskKind::kPair:
      return s.text_a + " " + s.text_b;
    case TaskKind::kToken: {
      std::string out;
      for (size_t i = 0; i < s.window.size(); ++i) {
        if (i) out += ' ';
        out += s.window[i];
      }
      return out;
    }
  }
  return s.text;
}

namespace {

int class_index_or_throw(const LabelSpace& labels, const json& v, const std::string& field,
                         const std::string& id) {
  if (v.is_null()) return kAbstain;
  require(v.is_string(), "sample '" + id + "': field '" + field + "' must be a class name or null");
  int idx = labels.index_of(v.get<std::string>());
  require(idx != kAbstain,
          "sample '" + id + "': unknown class '" + v.get<std::string>() + "' in field '" + field + "'");
  return idx;
}

}  // namespace

Dataset parse_dataset(const std::string& jsonl, const LabelSpace& labels, int token_window) {
  require(token_window >= 0, "token_window must be >= 0");
  Dataset out;
  std::unordered_set<std::string> ids;
  std::istringstream in(jsonl);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
    require(j.is_object() && j.contains("id") && j["id"].is_string(),
            "dataset line " + std::to_string(lineno) + ": missing string field 'id'");
    std::string id = j["id"].get<std::string>();
    require(j.contains("split"), "sample '" + id + "': missing field 'split'");
    Split split = parse_split(j["split"].get<std::string>());
    bool clean = j.value("clean", false);

    if (j.contains("tokens")) {
      // Token-classification line: one sample per token.
      require(j["tokens"].is_array(), "sample '" + id + "': 'tokens' must be an array");
      std::vector<std::string> tokens = j["tokens"].get<std::vector<std::string>>();
      require(!tokens.empty(), "sample '" + id + "': empty token list");
      std::vector<json> golds(tokens.size(), json());
      if (j.contains("labels") && !j["labels"].is_null()) {
        require(j["labels"].is_array() && j["labels"].size() == tokens.size(),
                "sample '" + id + "': 'labels' length must match 'tokens'");
        golds.assign(j["labels"].begin(), j["labels"].end());
      }
      int n = static_cast<int>(tokens.size());
      for (int i = 0; i < n; ++i) {
        Sample s;
        s.kind = TaskKind::kToken;
        s.id = id + "#" + std::to_string(i);
        require(ids.insert(s.id).second, "duplicate sample id '" + s.id + "'");
        int lo = std::max(0, i - token_window);
        int hi = std::min(n, i + token_window + 1);
        s.window.assign(tokens.begin() + lo, tokens.begin() + hi);
        s.center = i - lo;
        s.gold = class_index_or_throw(labels, golds[i], "labels", s.id);
        s.split = split;
        s.clean = clean;
        out.push_back(std::move(s));
      }
      continue;
    }

    Sample s;
    s.id = id;
    require(ids.insert(s.id).second, "duplicate sample id '" + s.id + "'");
    s.split = split;
    s.clean = clean;
    if (j.contains("window")) {
      s.kind = TaskKind::kToken;
      s.window = j["window"].get<std::vector<std::string>>();
      require(!s.window.empty(), "sample '" + id + "': empty window");
      s.center = j.value("center", 0);
      require(s.center >= 0 && s.center < static_cast<int>(s.window.size()),
              "sample '" + id + "': center outside window");
    } else if (j.contains("text_a") || j.contains("text_b")) {
      require(j.contains("text_a") && j.contains("text_b"),
              "sample '" + id + "': pair samples need both text_a and text_b");
      s.kind = TaskKind::kPair;
      s.text_a = j["text_a"].get<std::string>();
      s.text_b = j["text_b"].get<std::string>();
    } else {
      require(j.contains("text"), "sample '" + id + "': missing 'text'");
      s.kind = TaskKind::kSequence;
      s.text = j["text"].get<std::string>();
    }
    if (j.contains("gold")) s.gold = class_index_or_throw(labels, j["gold"], "gold", id);
    if (j.contains("weak")) s.weak = class_index_or_throw(labels, j["weak"], "weak", id);
    require(!s.clean || s.gold != kAbstain, "sample '" + id + "': clean sample without gold label");
    out.push_back(std::move(s));
  }
  require(!out.empty(), "empty dataset");
  return out;
}

Dataset load_dataset(const std::string& path, const LabelSpace& labels, int token_window) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open dataset file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), labels, token_window);
}

std::string dataset_to_jsonl(const Dataset& data, const LabelSpace& labels) {
  std::string out;
  for (const auto& s : data) {
    json j;
    j["id"] = s.id;
    switch (s.kind) {
      case TaskKind::kSequence:
        j["text"] = s.text;
        break;
      case TaskKind::kPair:
        j["text_a"] = s.text_a;
        j["text_b"] = s.text_b;
        break;
      case TaskKind::kToken:
        j["window"] = s.window;
        j["center"] = s.center;
        break;
    }
    j["gold"] = s.gold == kAbstain ? json() : json(labels.classes[s.gold]);
    j["weak"] = s.weak == kAbstain ? json() : json(labels.classes[s.weak]);
    if (s.clean) j["clean"] = true;
    j["split"] = split_name(s.split);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const std::string& path, const Dataset& data, const LabelSpace& labels) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write dataset file '" + path + "'");
  out << dataset_to_jsonl(data, labels);
}

std::vector<int> split_indices(const Dataset& data, Split split) {
  std::vector<int> idx;
  for (size_t i = 0; i < data.size(); ++i)
    if (data[i].split == split) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace cst
