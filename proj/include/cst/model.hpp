#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cst/features.hpp"
#include "cst/rng.hpp"
#include "cst/vec.hpp"

namespace cst {

struct ModelConfig {
  uint32_t hash_buckets = 4096;
  int embed_dim = 16;
  int repr_dim = 16;
  int n_classes = 0;
  double dropout_rate = 0.1;
};

// Everything backward needs from one forward pass.
struct ForwardCache {
  Features feats;
  Vec x_emb;       // count-weighted mean embedding
  Vec v_pre;       // tanh hidden output, before dropout
  Vec mask_scale;  // inverted-dropout scales (empty when dropout was off)
  Vec v;           // representation the head and contrastive term consume
  Vec probs;       // softmax output
};

// Hashed bag-of-ngrams embedding -> tanh hidden layer -> dropout -> linear
// softmax head. All math in doubles with hand-derived reverse-mode gradients.
class Model {
 public:
  explicit Model(const ModelConfig& cfg);

  void init_params(Rng& rng);

  // `train` enables dropout when dropout_rate > 0; `dropout_rng` must then be
  // non-null. Eval mode is deterministic and uses no RNG.
  ForwardCache forward(const Features& f, bool train, Rng* dropout_rng = nullptr) const;

  // Accumulates dL/dparams into `grad` given upstream gradients dL/dprobs and
  // dL/dv (either may be empty, meaning zero).
  void backward(const ForwardCache& cache, const Vec& dprobs, const Vec& dv_extra,
                Vec& grad) const;

  const ModelConfig& config() const { return cfg_; }
  size_t n_params() const { return params.size(); }
  // Weight matrices decay under AdamW; biases and nothing else do not.
  bool decayable(size_t i) const;

  size_t emb_offset() const { return 0; }
  size_t w1_offset() const { return w1_off_; }
  size_t b1_offset() const { return b1_off_; }
  size_t w2_offset() const { return w2_off_; }
  size_t b2_offset() const { return b2_off_; }

  Vec params;

 private:
  ModelConfig cfg_;
  size_t w1_off_, b1_off_, w2_off_, b2_off_;
};

// A batch loss expressed through per-sample upstream gradients, so any
// objective over probabilities and representations can be gradient-checked.
struct BatchLoss {
  double value = 0.0;
  std::vector<Vec> dprobs;  // one entry per sample; empty vectors mean zero
  std::vector<Vec> dv;
};
using BatchLossFn = std::function<BatchLoss(const std::vector<ForwardCache>&)>;

struct GradCheckResult {
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
  size_t checked = 0;
};

// Central-difference check of the analytic gradient over every parameter.
// With `train` set, dropout masks are regenerated from `dropout_seed` for
// each evaluation, so all perturbed passes see identical masks.
GradCheckResult grad_check(Model& model, const std::vector<Features>& batch,
                           const BatchLossFn& fn, double epsilon = 1e-5, bool train = false,
                           uint64_t dropout_seed = 0);

}  // namespace cst
