#include <set>
#include <string>
#include <vector>

#include "cst/error.hpp"
#include "cst/rules.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cst;
using cst::testing::sequence_sample;

namespace {

RuleFile two_class_rules() {
  return parse_rules(R"json({
    "classes": ["pos", "neg"],
    "others": null,
    "rules": [
      {"kind": "keyword", "payload": ["good", "great"], "target": "pos"},
      {"kind": "keyword", "payload": ["bad"], "target": "neg"},
      {"kind": "pattern", "payload": "terr(ible|ific)", "target": "neg"}
    ]
  })json");
}

}  // namespace

TEST_CASE("keyword matching is case-insensitive with token boundaries") {
  Rule r;
  r.kind = Rule::Kind::kKeyword;
  r.keywords = {"k1"};
  r.target = 0;
  CHECK(apply_rule(r, "a k1 b") == 0);
  CHECK(apply_rule(r, "K1") == 0);
  CHECK(apply_rule(r, "k1.") == 0);        // punctuation is a boundary
  CHECK(apply_rule(r, "(k1)") == 0);
  CHECK(!apply_rule(r, "k1_23"));          // underscore continues the token
  CHECK(!apply_rule(r, "xk1"));
  CHECK(!apply_rule(r, "k12"));
  CHECK(!apply_rule(r, ""));
}

TEST_CASE("multi-word keywords match across spaces") {
  Rule r;
  r.kind = Rule::Kind::kKeyword;
  r.keywords = {"new york"};
  r.target = 1;
  CHECK(apply_rule(r, "I love New York a lot") == 1);
  CHECK(!apply_rule(r, "newyork"));
}

TEST_CASE("pattern rules search anywhere, case-sensitively") {
  RuleFile rf = two_class_rules();
  const Rule& pat = rf.rules[2];
  CHECK(apply_rule(pat, "that was terrible indeed") == 1);
  CHECK(apply_rule(pat, "terrific") == 1);
  CHECK(!apply_rule(pat, "Terrible"));  // patterns keep case
  CHECK(!apply_rule(pat, "terror"));
}

TEST_CASE("invalid regex fails at parse time") {
  CHECK_THROWS_AS(parse_rules(R"({
    "classes": ["a", "b"],
    "rules": [{"kind": "pattern", "payload": "([bad", "target": "a"}]
  })"),
                  Error);
}

TEST_CASE("rule file validation rejects broken inputs") {
  CHECK_THROWS_AS(parse_rules(R"({"classes": ["only"]})"), Error);
  CHECK_THROWS_AS(parse_rules(R"({"classes": ["a", "a"]})"), Error);
  CHECK_THROWS_AS(parse_rules(R"({"classes": ["a", "b"], "others": "c"})"), Error);
  CHECK_THROWS_AS(parse_rules(R"({
    "classes": ["a", "b"],
    "rules": [{"kind": "keyword", "payload": ["x"], "target": "missing"}]
  })"),
                  Error);
  CHECK_THROWS_AS(parse_rules(R"({
    "classes": ["a", "b"],
    "rules": [{"kind": "nonsense", "payload": ["x"], "target": "a"}]
  })"),
                  Error);
}

TEST_CASE("vote takes strict plurality and abstains on ties") {
  CHECK(vote({0, 0, 1}, 3) == 0);
  CHECK(vote({2}, 3) == 2);
  CHECK(vote({0, 1}, 3) == kAbstain);
  CHECK(vote({0, 0, 1, 1, 2}, 3) == kAbstain);
  CHECK(vote({}, 3) == kAbstain);
}

TEST_CASE("labeling fills weak labels and reports coverage") {
  RuleFile rf = two_class_rules();
  Dataset data;
  data.push_back(sequence_sample("1", "a good day"));          // pos
  data.push_back(sequence_sample("2", "bad and terrible"));    // neg + neg
  data.push_back(sequence_sample("3", "good but bad"));        // tie -> abstain
  data.push_back(sequence_sample("4", "nothing fires here"));  // abstain
  data[0].gold = 0;
  data[1].gold = 0;  // weak label will be wrong
  CoverageStats st = label_dataset(rf.rules, rf.labels, data);

  CHECK(data[0].weak == 0);
  CHECK(data[1].weak == 1);
  CHECK(data[2].weak == kAbstain);
  CHECK(data[3].weak == kAbstain);
  CHECK(st.total == 4);
  CHECK(st.covered == 2);
  CHECK(st.gold_covered == 2);
  CHECK(st.correct_covered == 1);
  CHECK(st.coverage() == doctest::Approx(0.5));
  REQUIRE(st.precision());
  CHECK(*st.precision() == doctest::Approx(0.5));
  CHECK(st.per_rule_hits == std::vector<long>{2, 2, 1});
}

TEST_CASE("rule serialization round-trips") {
  RuleFile rf = two_class_rules();
  RuleFile back = parse_rules(rules_to_json(rf));
  REQUIRE(back.rules.size() == rf.rules.size());
  CHECK(back.labels.classes == rf.labels.classes);
  for (size_t i = 0; i < rf.rules.size(); ++i) {
    CHECK(back.rules[i].kind == rf.rules[i].kind);
    CHECK(back.rules[i].keywords == rf.rules[i].keywords);
    CHECK(back.rules[i].pattern_src == rf.rules[i].pattern_src);
    CHECK(back.rules[i].target == rf.rules[i].target);
  }
}

TEST_CASE("corruption flips the requested fraction to other classes") {
  std::vector<int> labels(10000, 2);
  labels[17] = kAbstain;

  SUBCASE("ratio zero is the identity") {
    CHECK(corrupt_labels(labels, 0.0, 4, 9) == labels);
  }
  SUBCASE("ratio one changes every label to a different class") {
    std::vector<int> out = corrupt_labels(labels, 1.0, 4, 9);
    CHECK(out[17] == kAbstain);
    for (size_t i = 0; i < out.size(); ++i) {
      if (i == 17) continue;
      CHECK(out[i] != 2);
      CHECK(out[i] >= 0);
      CHECK(out[i] < 4);
    }
  }
  SUBCASE("intermediate ratio lands near its expectation and repeats by seed") {
    std::vector<int> out = corrupt_labels(labels, 0.3, 4, 9);
    long changed = 0;
    for (size_t i = 0; i < out.size(); ++i)
      if (out[i] != labels[i]) ++changed;
    CHECK(changed > 2700);
    CHECK(changed < 3300);
    CHECK(corrupt_labels(labels, 0.3, 4, 9) == out);
    CHECK(corrupt_labels(labels, 0.3, 4, 10) != out);
  }
}
