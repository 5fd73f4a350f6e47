#include "cst/model.hpp"

#include <algorithm>
#include <cmath>

#include "cst/error.hpp"

namespace cst {

Model::Model(const ModelConfig& cfg) : cfg_(cfg) {
  require(cfg.hash_buckets > 0, "hash_buckets must be positive");
  require(cfg.embed_dim > 0 && cfg.repr_dim > 0, "embed_dim and repr_dim must be positive");
  require(cfg.n_classes >= 2, "model needs at least 2 classes");
  require(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0, "dropout_rate must lie in [0, 1)");
  size_t emb = static_cast<size_t>(cfg.hash_buckets) * cfg.embed_dim;
  w1_off_ = emb;
  b1_off_ = w1_off_ + static_cast<size_t>(cfg.repr_dim) * cfg.embed_dim;
  w2_off_ = b1_off_ + cfg.repr_dim;
  size_t b2_off = w2_off_ + static_cast<size_t>(cfg.n_classes) * cfg.repr_dim;
  params.assign(b2_off + cfg.n_classes, 0.0);
}

void Model::init_params(Rng& rng) {
  double emb_limit = 0.1;
  double w1_limit = 1.0 / std::sqrt(static_cast<double>(cfg_.embed_dim));
  double w2_limit = 1.0 / std::sqrt(static_cast<double>(cfg_.repr_dim));
  for (size_t i = 0; i < w1_off_; ++i) params[i] = rng.next_symmetric(emb_limit);
  for (size_t i = w1_off_; i < b1_off_; ++i) params[i] = rng.next_symmetric(w1_limit);
  for (size_t i = b1_off_; i < w2_off_; ++i) params[i] = 0.0;
  size_t b2_off = w2_off_ + static_cast<size_t>(cfg_.n_classes) * cfg_.repr_dim;
  for (size_t i = w2_off_; i < b2_off; ++i) params[i] = rng.next_symmetric(w2_limit);
  for (size_t i = b2_off; i < params.size(); ++i) params[i] = 0.0;
}

bool Model::decayable(size_t i) const {
  size_t b2_off = w2_off_ + static_cast<size_t>(cfg_.n_classes) * cfg_.repr_dim;
  bool is_b1 = i >= b1_off_ && i < w2_off_;
  bool is_b2 = i >= b2_off;
  return !(is_b1 || is_b2);
}

ForwardCache Model::forward(const Features& f, bool train, Rng* dropout_rng) const {
  const int E = cfg_.embed_dim, R = cfg_.repr_dim, C = cfg_.n_classes;
  ForwardCache cache;
  cache.feats = f;

  cache.x_emb.assign(E, 0.0);
  if (f.total > 0.0) {
    for (const auto& [bucket, count] : f.counts) {
      double w = count / f.total;
      const double* row = &params[emb_offset() + static_cast<size_t>(bucket) * E];
      for (int e = 0; e < E; ++e) cache.x_emb[e] += w * row[e];
    }
  }

  cache.v_pre.assign(R, 0.0);
  for (int k = 0; k < R; ++k) {
    double h = params[b1_off_ + k];
    const double* row = &params[w1_off_ + static_cast<size_t>(k) * E];
    for (int e = 0; e < E; ++e) h += row[e] * cache.x_emb[e];
    cache.v_pre[k] = std::tanh(h);
  }

  bool drop = train && cfg_.dropout_rate > 0.0;
  if (drop) {
    require(dropout_rng != nullptr, "training forward needs a dropout RNG");
    cache.mask_scale.assign(R, 0.0);
    double keep = 1.0 - cfg_.dropout_rate;
    for (int k = 0; k < R; ++k)
      cache.mask_scale[k] = dropout_rng->next_double() < cfg_.dropout_rate ? 0.0 : 1.0 / keep;
  }
  cache.v = cache.v_pre;
  if (drop)
    for (int k = 0; k < R; ++k) cache.v[k] *= cache.mask_scale[k];

  size_t b2_off = w2_off_ + static_cast<size_t>(C) * R;
  Vec logits(C, 0.0);
  double max_logit = -1e300;
  for (int c = 0; c < C; ++c) {
    logits[c] = params[b2_off + c];
    const double* row = &params[w2_off_ + static_cast<size_t>(c) * R];
    for (int k = 0; k < R; ++k) logits[c] += row[k] * cache.v[k];
    max_logit = std::max(max_logit, logits[c]);
  }
  cache.probs.assign(C, 0.0);
  double z = 0.0;
  for (int c = 0; c < C; ++c) {
    cache.probs[c] = std::exp(logits[c] - max_logit);
    z += cache.probs[c];
  }
  for (int c = 0; c < C; ++c) cache.probs[c] /= z;
  return cache;
}

void Model::backward(const ForwardCache& cache, const Vec& dprobs, const Vec& dv_extra,
                     Vec& grad) const {
  const int E = cfg_.embed_dim, R = cfg_.repr_dim, C = cfg_.n_classes;
  require(grad.size() == params.size(), "gradient buffer size mismatch");
  size_t b2_off = w2_off_ + static_cast<size_t>(C) * R;

  // Through softmax: dL/dz_c = p_c * (g_c - sum_j g_j p_j).
  Vec dlogit(C, 0.0);
  if (!dprobs.empty()) {
    double s = 0.0;
    for (int c = 0; c < C; ++c) s += dprobs[c] * cache.probs[c];
    for (int c = 0; c < C; ++c) dlogit[c] = cache.probs[c] * (dprobs[c] - s);
  }

  Vec dv(R, 0.0);
  for (int c = 0; c < C; ++c) {
    grad[b2_off + c] += dlogit[c];
    const double* row = &params[w2_off_ + static_cast<size_t>(c) * R];
    double* grow = &grad[w2_off_ + static_cast<size_t>(c) * R];
    for (int k = 0; k < R; ++k) {
      grow[k] += dlogit[c] * cache.v[k];
      dv[k] += dlogit[c] * row[k];
    }
  }
  if (!dv_extra.empty())
    for (int k = 0; k < R; ++k) dv[k] += dv_extra[k];

  Vec dh(R, 0.0);
  for (int k = 0; k < R; ++k) {
    double dpre = cache.mask_scale.empty() ? dv[k] : dv[k] * cache.mask_scale[k];
    dh[k] = dpre * (1.0 - cache.v_pre[k] * cache.v_pre[k]);
  }

  Vec dx(E, 0.0);
  for (int k = 0; k < R; ++k) {
    grad[b1_off_ + k] += dh[k];
    const double* row = &params[w1_off_ + static_cast<size_t>(k) * E];
    double* grow = &grad[w1_off_ + static_cast<size_t>(k) * E];
    for (int e = 0; e < E; ++e) {
      grow[e] += dh[k] * cache.x_emb[e];
      dx[e] += dh[k] * row[e];
    }
  }

  if (cache.feats.total > 0.0) {
    for (const auto& [bucket, count] : cache.feats.counts) {
      double w = count / cache.feats.total;
      double* grow = &grad[emb_offset() + static_cast<size_t>(bucket) * E];
      for (int e = 0; e < E; ++e) grow[e] += w * dx[e];
    }
  }
}

GradCheckResult grad_check(Model& model, const std::vector<Features>& batch, const BatchLossFn& fn,
                           double epsilon, bool train, uint64_t dropout_seed) {
  auto run = [&]() {
    Rng rng = Rng::stream(dropout_seed, 3);
    std::vector<ForwardCache> caches;
    caches.reserve(batch.size());
    for (const auto& f : batch) caches.push_back(model.forward(f, train, &rng));
    return caches;
  };

  std::vector<ForwardCache> caches = run();
  BatchLoss loss = fn(caches);
  Vec grad(model.n_params(), 0.0);
  for (size_t i = 0; i < batch.size(); ++i) {
    const Vec& dp = i < loss.dprobs.size() ? loss.dprobs[i] : Vec{};
    const Vec& dv = i < loss.dv.size() ? loss.dv[i] : Vec{};
    model.backward(caches[i], dp, dv, grad);
  }

  GradCheckResult res;
  res.checked = model.n_params();
  for (size_t i = 0; i < model.n_params(); ++i) {
    double saved = model.params[i];
    model.params[i] = saved + epsilon;
    double up = fn(run()).value;
    model.params[i] = saved - epsilon;
    double down = fn(run()).value;
    model.params[i] = saved;
    double numeric = (up - down) / (2.0 * epsilon);
    double abs_err = std::fabs(grad[i] - numeric);
    double rel_err = abs_err / std::max({1.0, std::fabs(grad[i]), std::fabs(numeric)});
    res.max_abs_err = std::max(res.max_abs_err, abs_err);
    res.max_rel_err = std::max(res.max_rel_err, rel_err);
  }
  return res;
}

}  // namespace cst
