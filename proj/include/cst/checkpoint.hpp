#pragma once

#include <string>

#include "cst/data.hpp"
#include "cst/features.hpp"
#include "cst/model.hpp"
#include "cst/vec.hpp"

namespace cst {

// Self-contained trained-model file: label space, featurizer settings, model
// shape, and the flat parameter vector. Binary layout is a fixed magic, a
// little-endian u64 manifest length, the JSON manifest, then the parameter
// doubles in declaration order (embedding, w1, b1, w2, b2).
struct Checkpoint {
  LabelSpace labels;
  ModelConfig model;
  FeatureConfig features;
  int token_window = 2;
  Vec params;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace cst
