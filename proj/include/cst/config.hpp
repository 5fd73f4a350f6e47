#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cst/objectives.hpp"

namespace cst {

enum class PairMode { kSampled, kExhaustive };

// Which labels seed stage 1 and which samples join the self-training pool:
//  kWeak:         rule-covered train samples; pool = all train samples.
//  kSemi:         covered train samples plus gold labels of clean-flagged
//                 ones (kept frozen during self-training); pool = all train.
//  kTransductive: covered samples of every split; pool = every split. Gold
//                 labels of dev/test are never read.
enum class TrainMode { kWeak, kSemi, kTransductive };

struct TrainConfig {
  // Stage lengths: t1 init steps, t2 self-training steps, refresh every t3.
  long t1 = 160;
  long t2 = 3000;
  long t3 = 250;
  double xi = 0.6;      // confidence threshold
  double lambda = 0.1;  // confidence-regularizer weight
  double gamma = 1.0;   // contrastive margin
  double beta = 10.0;   // kl_soft similarity sharpness
  Distance distance = Distance::kScaledEuclidean;
  Similarity similarity = Similarity::kHard;
  PairMode pair_mode = PairMode::kSampled;
  double learning_rate = 1e-5;
  double weight_decay = 1e-4;
  double warmup_ratio = 0.1;
  long batch_size = 32;
  uint64_t seed = 1;
  bool use_soft_labels = true;
  bool use_r1 = true;
  bool use_r2 = true;
  bool use_reweighting = true;
  TrainMode mode = TrainMode::kWeak;
  double corruption_ratio = 0.0;  // applied to the stage-1 labels
  uint32_t hash_buckets = 4096;
  int embed_dim = 16;
  int repr_dim = 16;
  double dropout_rate = 0.1;
  std::vector<int> ngram_orders = {1, 2};
  int token_window = 2;

  void validate() const;
};

std::string distance_name(Distance d);
std::string similarity_name(Similarity s);
std::string pair_mode_name(PairMode m);
std::string train_mode_name(TrainMode m);

// Flat "key = value" lines; '#' starts a comment; unknown keys are rejected.
TrainConfig parse_config(const std::string& text);
TrainConfig load_config(const std::string& path);

// Applies one "key=value" override in the same syntax as a config line.
void apply_override(TrainConfig& cfg, const std::string& assignment);

// Full round-trippable dump of every key.
std::string config_to_string(const TrainConfig& cfg);

}  // namespace cst
