#include "cst/features.hpp"

#include <algorithm>
#include <cctype>

#include "cst/error.hpp"

namespace cst {

namespace {
// Separator token between the two texts of a pair sample. Never produced by
// the tokenizer, so crossing n-grams cannot collide with in-text grams.
const std::string kPairSep = "\x1f";
}  // namespace

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

void add_ngrams(const std::vector<std::string>& tokens, const std::vector<int>& orders,
                std::vector<std::string>& units) {
  for (int n : orders) {
    if (n <= 0 || static_cast<size_t>(n) > tokens.size()) continue;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
      if (n == 1 && tokens[i] == kPairSep) continue;  // the bare separator carries no signal
      std::string gram = tokens[i];
      for (int k = 1; k < n; ++k) {
        gram += ' ';
        gram += tokens[i + k];
      }
      units.push_back(std::move(gram));
    }
  }
}

}  // namespace

std::vector<std::string> feature_units(const Sample& s, const FeatureConfig& cfg) {
  std::vector<std::string> units;
  switch (s.kind) {
    case TaskKind::kSequence:
      add_ngrams(tokenize(s.text), cfg.ngram_orders, units);
      break;
    case TaskKind::kPair: {
      std::vector<std::string> tokens = tokenize(s.text_a);
      tokens.push_back(kPairSep);
      for (auto& t : tokenize(s.text_b)) tokens.push_back(std::move(t));
      add_ngrams(tokens, cfg.ngram_orders, units);
      break;
    }
    case TaskKind::kToken: {
      // Position-tagged window so "dog at -1" and "dog at +1" stay distinct.
      for (size_t i = 0; i < s.window.size(); ++i) {
        int off = static_cast<int>(i) - s.center;
        std::string tok = s.window[i];
        for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        units.push_back(std::to_string(off) + "=" + tok);
      }
      break;
    }
  }
  return units;
}

Features featurize(const Sample& s, const FeatureConfig& cfg) {
  require(cfg.hash_buckets > 0, "hash_buckets must be positive");
  Features f;
  for (const auto& u : feature_units(s, cfg)) {
    uint32_t bucket = static_cast<uint32_t>(fnv1a64(u) % cfg.hash_buckets);
    f.counts.emplace_back(bucket, 1.0);
  }
  std::sort(f.counts.begin(), f.counts.end());
  size_t w = 0;
  for (size_t i = 0; i < f.counts.size(); ++i) {
    if (w > 0 && f.counts[w - 1].first == f.counts[i].first) {
      f.counts[w - 1].second += f.counts[i].second;
    } else {
      f.counts[w++] = f.counts[i];
    }
  }
  f.counts.resize(w);
  for (const auto& [bucket, count] : f.counts) f.total += count;
  return f;
}

}  // namespace cst
