#pragma once

#include <cstdint>
#include <string>

#include "cst/data.hpp"
#include "cst/rules.hpp"

namespace cst {

// Parameters of the synthetic text benchmark. Every sample carries one or two
// perfectly class-indicative plain keywords plus noise words; rule keywords
// are injected into a `coverage` fraction of samples and point at the true
// class only with probability `precision`, so rule matches are exact but the
// labels they produce are noisy in a feature-correlated way.
struct GenSpec {
  int n_classes = 4;
  long n_train = 2000;
  long n_dev = 500;
  long n_test = 500;
  double coverage = 0.6;
  double precision = 0.75;
  int keywords_per_class = 4;  // split between rule keywords and plain ones
  int noise_vocab = 50;
  int noise_min = 8;
  int noise_max = 12;
  bool pattern_rules = true;  // odd classes get regex rules, even keyword lists
  uint64_t seed = 1;

  void validate() const;
};

GenSpec parse_gen_spec(const std::string& text);
GenSpec load_gen_spec(const std::string& path);

struct Generated {
  RuleFile rules;
  Dataset data;
};

Generated generate(const GenSpec& spec);

}  // namespace cst
