#pragma once

#include <cstdint>
#include <vector>

#include "cst/vec.hpp"

namespace cst {

// Linear warmup to `base` over round(warmup_ratio * total) steps, then linear
// decay to zero at `step == total`. Steps are zero-based.
double lr_schedule(long step, long total, double base, double warmup_ratio);

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

// AdamW with bias correction and decoupled weight decay. Entries whose
// decay_mask is 0 (biases) are exempt from decay.
class AdamW {
 public:
  AdamW(size_t n, const AdamWConfig& cfg);

  void step(Vec& params, const Vec& grad, const std::vector<uint8_t>& decay_mask, double lr);
  long steps_taken() const { return t_; }

 private:
  AdamWConfig cfg_;
  Vec m_, v_;
  long t_ = 0;
};

}  // namespace cst
