#include "cst/optimizer.hpp"

#include <cmath>

#include "cst/error.hpp"

namespace cst {

double lr_schedule(long step, long total, double base, double warmup_ratio) {
  require(total > 0, "schedule needs a positive total step count");
  require(warmup_ratio >= 0.0 && warmup_ratio <= 1.0, "warmup_ratio must lie in [0, 1]");
  long warmup = static_cast<long>(std::llround(warmup_ratio * static_cast<double>(total)));
  if (warmup > 0 && step < warmup)
    return base * static_cast<double>(step) / static_cast<double>(warmup);
  if (total <= warmup) return 0.0;
  double frac = static_cast<double>(total - step) / static_cast<double>(total - warmup);
  return base * std::max(0.0, frac);
}

AdamW::AdamW(size_t n, const AdamWConfig& cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

void AdamW::step(Vec& params, const Vec& grad, const std::vector<uint8_t>& decay_mask, double lr) {
  require(params.size() == m_.size() && grad.size() == m_.size() &&
              decay_mask.size() == m_.size(),
          "optimizer size mismatch");
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    double mhat = m_[i] / bc1;
    double vhat = v_[i] / bc2;
    double update = mhat / (std::sqrt(vhat) + cfg_.eps);
    if (decay_mask[i]) update += cfg_.weight_decay * params[i];
    params[i] -= lr * update;
  }
}

}  // namespace cst
