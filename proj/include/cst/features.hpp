#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cst/data.hpp"

namespace cst {

// 64-bit FNV-1a over the bytes of `s`.
uint64_t fnv1a64(const std::string& s);

// ASCII-lowercased whitespace tokens.
std::vector<std::string> tokenize(const std::string& text);

struct FeatureConfig {
  uint32_t hash_buckets = 4096;
  std::vector<int> ngram_orders = {1, 2};
};

// Sparse hashed bag: (bucket, count) pairs sorted by bucket, duplicates
// merged. `total` is the sum of counts; an empty text yields total == 0.
struct Features {
  std::vector<std::pair<uint32_t, double>> counts;
  double total = 0.0;
};

// The textual units a sample hashes into buckets: word n-grams for sequence
// and sentence-pair samples, position-tagged window tokens for token samples.
std::vector<std::string> feature_units(const Sample& s, const FeatureConfig& cfg);

Features featurize(const Sample& s, const FeatureConfig& cfg);

}  // namespace cst
