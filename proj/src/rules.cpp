#include "cst/rules.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cst/error.hpp"
#include "cst/rng.hpp"
#include "json.hpp"

namespace cst {

using nlohmann::json;

namespace {

bool is_token_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Case-insensitive search for `needle` in `hay` with token boundaries on both
// sides, so a keyword never fires inside a longer identifier-like token.
bool contains_keyword(const std::string& hay, const std::string& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  size_t n = needle.size();
  for (size_t i = 0; i + n <= hay.size(); ++i) {
    bool hit = true;
    for (size_t k = 0; k < n; ++k) {
      if (fold(hay[i + k]) != fold(needle[k])) {
        hit = false;
        break;
      }
    }
    if (!hit) continue;
    bool left_ok = i == 0 || !is_token_char(hay[i - 1]) || !is_token_char(needle.front());
    bool right_ok = i + n == hay.size() || !is_token_char(hay[i + n]) || !is_token_char(needle.back());
    if (left_ok && right_ok) return true;
  }
  return false;
}

}  // namespace

RuleFile parse_rules(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("rule file: ") + e.what());
  }
  require(j.is_object() && j.contains("classes"), "rule file: missing 'classes'");
  RuleFile rf;
  rf.labels.classes = j["classes"].get<std::vector<std::string>>();
  if (j.contains("others") && !j["others"].is_null())
    rf.labels.others = j["others"].get<std::string>();
  rf.labels.validate();
  if (j.contains("rules")) {
    require(j["rules"].is_array(), "rule file: 'rules' must be an array");
    for (const auto& rj : j["rules"]) {
      Rule r;
      std::string kind = rj.value("kind", "");
      require(rj.contains("target") && rj["target"].is_string(), "rule: missing string 'target'");
      r.target = rf.labels.index_of(rj["target"].get<std::string>());
      require(r.target != kAbstain,
              "rule: unknown target class '" + rj["target"].get<std::string>() + "'");
      if (kind == "keyword") {
        r.kind = Rule::Kind::kKeyword;
        require(rj.contains("payload") && rj["payload"].is_array(),
                "keyword rule: 'payload' must be an array of strings");
        r.keywords = rj["payload"].get<std::vector<std::string>>();
        require(!r.keywords.empty(), "keyword rule: empty keyword list");
        for (const auto& k : r.keywords) require(!k.empty(), "keyword rule: empty keyword");
      } else if (kind == "pattern") {
        r.kind = Rule::Kind::kPattern;
        require(rj.contains("payload") && rj["payload"].is_string(),
                "pattern rule: 'payload' must be a string");
        r.pattern_src = rj["payload"].get<std::string>();
        try {
          r.pattern = std::regex(r.pattern_src, std::regex::extended);
        } catch (const std::regex_error& e) {
          throw Error("pattern rule '" + r.pattern_src + "': " + e.what());
        }
      } else {
        throw Error("rule: unknown kind '" + kind + "' (expected keyword|pattern)");
      }
      rf.rules.push_back(std::move(r));
    }
  }
  return rf;
}

RuleFile load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open rule file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str());
}

std::string rules_to_json(const RuleFile& rf) {
  json j;
  j["classes"] = rf.labels.classes;
  j["others"] = rf.labels.others ? json(*rf.labels.others) : json();
  j["rules"] = json::array();
  for (const auto& r : rf.rules) {
    json rj;
    if (r.kind == Rule::Kind::kKeyword) {
      rj["kind"] = "keyword";
      rj["payload"] = r.keywords;
    } else {
      rj["kind"] = "pattern";
      rj["payload"] = r.pattern_src;
    }
    rj["target"] = rf.labels.classes[r.target];
    j["rules"].push_back(rj);
  }
  return j.dump(2) + "\n";
}

std::optional<int> apply_rule(const Rule& rule, const std::string& text) {
  if (rule.kind == Rule::Kind::kKeyword) {
    for (const auto& k : rule.keywords)
      if (contains_keyword(text, k)) return rule.target;
    return std::nullopt;
  }
  if (std::regex_search(text, rule.pattern)) return rule.target;
  return std::nullopt;
}

int vote(const std::vector<int>& votes, int n_classes) {
  std::vector<int> counts(n_classes, 0);
  for (int v : votes) {
    if (v >= 0 && v < n_classes) ++counts[v];
  }
  int best = kAbstain, best_count = 0;
  bool tie = false;
  for (int c = 0; c < n_classes; ++c) {
    if (counts[c] > best_count) {
      best = c;
      best_count = counts[c];
      tie = false;
    } else if (counts[c] == best_count && counts[c] > 0) {
      tie = true;
    }
  }
  return (best_count == 0 || tie) ? kAbstain : best;
}

CoverageStats label_dataset(const RuleSet& rules, const LabelSpace& labels, Dataset& data) {
  CoverageStats st;
  st.per_rule_hits.assign(rules.size(), 0);
  st.total = static_cast<long>(data.size());
  for (auto& s : data) {
    std::string text = rule_text(s);
    std::vector<int> votes;
    for (size_t r = 0; r < rules.size(); ++r) {
      if (auto v = apply_rule(rules[r], text)) {
        votes.push_back(*v);
        ++st.per_rule_hits[r];
      }
    }
    s.weak = vote(votes, labels.size());
    if (s.weak != kAbstain) {
      ++st.covered;
      if (s.gold != kAbstain) {
        ++st.gold_covered;
        if (s.weak == s.gold) ++st.correct_covered;
      }
    }
  }
  return st;
}

std::vector<int> corrupt_labels(const std::vector<int>& labels, double ratio, int n_classes,
                                uint64_t seed) {
  require(ratio >= 0.0 && ratio <= 1.0, "corruption ratio must lie in [0, 1]");
  require(n_classes >= 2, "corruption needs at least 2 classes");
  Rng rng = Rng::stream(seed, 5);
  std::vector<int> out = labels;
  for (auto& y : out) {
    if (y == kAbstain) continue;
    if (rng.next_double() < ratio) {
      // Draw uniformly among the other classes.
      int shift = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(n_classes - 1)));
      y = (y + shift) % n_classes;
    }
  }
  return out;
}

}  // namespace cst
