#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cst/checkpoint.hpp"
#include "cst/config.hpp"
#include "cst/data.hpp"
#include "cst/features.hpp"
#include "cst/model.hpp"
#include "cst/rng.hpp"

namespace cst {

struct StepRecord {
  long step = 0;  // global step: stage 1 covers [0, t1), stage 2 [t1, t1+t2)
  int stage = 1;
  double lr = 0.0;
  double lc = 0.0, r1 = 0.0, r2 = 0.0, total = 0.0;
  long n_confident = 0;  // batch members at or above the confidence threshold
};

struct EvalRecord {
  long step = 0;
  std::string split;
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  long n = 0;
};

struct TrainResult {
  Checkpoint init_checkpoint;   // after the stage-1 fine-tune
  Checkpoint final_checkpoint;  // after self-training
  std::vector<StepRecord> steps;
  std::vector<EvalRecord> evals;
  long refreshes = 0;
  long skipped_steps = 0;  // stage-2 batches whose confident set was empty
};

// Draws fixed-size batches from shuffled passes over an index set; reshuffles
// whenever fewer than a full batch remains.
class EpochSampler {
 public:
  EpochSampler(std::vector<int> indices, Rng rng);
  std::vector<int> next(long k);

 private:
  std::vector<int> indices_;
  Rng rng_;
  size_t pos_;
};

// Runs stage-1 init fine-tuning on the resolved weak labels, then confidence-
// reweighted contrastive self-training with a pseudo-label refresh every
// cfg.t3 steps (plus one final refresh). `data` must already carry weak
// labels where rules fire.
TrainResult train(const TrainConfig& cfg, const LabelSpace& labels, const Dataset& data);

// Eval-mode pass over one split's gold-labeled samples; nullopt when none.
std::optional<EvalRecord> evaluate_split(const Model& model, const std::vector<Features>& feats,
                                         const Dataset& data, Split split, int exclude_class);

std::string steps_to_jsonl(const std::vector<StepRecord>& steps);
std::string evals_to_jsonl(const std::vector<EvalRecord>& evals);

}  // namespace cst
