#pragma once

#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "cst/data.hpp"

namespace cst {

// A single labeling rule: either a keyword list (any token-bounded,
// case-insensitive hit fires) or a regex searched anywhere in the text.
struct Rule {
  enum class Kind { kKeyword, kPattern };
  Kind kind = Kind::kKeyword;
  std::vector<std::string> keywords;  // kKeyword payload
  std::string pattern_src;            // kPattern payload (POSIX extended)
  std::regex pattern;                 // compiled form of pattern_src
  int target = 0;                     // class index the rule votes for
};

using RuleSet = std::vector<Rule>;

struct RuleFile {
  LabelSpace labels;
  RuleSet rules;
};

RuleFile parse_rules(const std::string& text);
RuleFile load_rules(const std::string& path);
std::string rules_to_json(const RuleFile& rf);

// Vote of one rule on a text, or nullopt when the rule does not fire.
std::optional<int> apply_rule(const Rule& rule, const std::string& text);

// Strict-plurality vote over per-rule votes; ties and empty input abstain.
int vote(const std::vector<int>& votes, int n_classes);

struct CoverageStats {
  long total = 0;            // samples considered
  long covered = 0;          // samples with a non-abstain vote
  long gold_covered = 0;     // covered samples that also carry a gold label
  long correct_covered = 0;  // of those, how many votes match gold
  std::vector<long> per_rule_hits;
  double coverage() const { return total ? static_cast<double>(covered) / total : 0.0; }
  std::optional<double> precision() const {
    if (!gold_covered) return std::nullopt;
    return static_cast<double>(correct_covered) / gold_covered;
  }
};

// Fills sample.weak for every sample in place and reports coverage stats.
CoverageStats label_dataset(const RuleSet& rules, const LabelSpace& labels, Dataset& data);

// Reassigns each label to a different uniformly drawn class with the given
// probability. kAbstain entries pass through untouched.
std::vector<int> corrupt_labels(const std::vector<int>& labels, double ratio, int n_classes,
                                uint64_t seed);

}  // namespace cst
