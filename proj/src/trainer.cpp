#include "cst/trainer.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "cst/error.hpp"
#include "cst/evaluation.hpp"
#include "cst/objectives.hpp"
#include "cst/optimizer.hpp"
#include "cst/rules.hpp"
#include "json.hpp"

namespace cst {

EpochSampler::EpochSampler(std::vector<int> indices, Rng rng)
    : indices_(std::move(indices)), rng_(rng), pos_(indices_.size()) {}

std::vector<int> EpochSampler::next(long k) {
  require(!indices_.empty(), "sampler over an empty index set");
  size_t kk = std::min<size_t>(static_cast<size_t>(k), indices_.size());
  if (indices_.size() - pos_ < kk) {
    rng_.shuffle(indices_);
    pos_ = 0;
  }
  std::vector<int> out(indices_.begin() + pos_, indices_.begin() + pos_ + kk);
  pos_ += kk;
  return out;
}

namespace {

Vec one_hot(int c, int n) {
  Vec v(n, 0.0);
  v[c] = 1.0;
  return v;
}

std::vector<int> iota_positions(size_t n) {
  std::vector<int> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = static_cast<int>(i);
  return out;
}

}  // namespace

std::optional<EvalRecord> evaluate_split(const Model& model, const std::vector<Features>& feats,
                                         const Dataset& data, Split split, int exclude_class) {
  std::vector<int> golds, preds;
  for (size_t i = 0; i < data.size(); ++i) {
    if (data[i].split != split || data[i].gold == kAbstain) continue;
    golds.push_back(data[i].gold);
    preds.push_back(argmax(model.forward(feats[i], false).probs));
  }
  if (golds.empty()) return std::nullopt;
  EvalRecord e;
  e.split = split_name(split);
  e.accuracy = accuracy(golds, preds);
  e.micro_f1 = micro_f1(golds, preds, exclude_class);
  e.n = static_cast<long>(golds.size());
  return e;
}

TrainResult train(const TrainConfig& cfg, const LabelSpace& labels, const Dataset& data) {
  cfg.validate();
  labels.validate();
  const int C = labels.size();

  FeatureConfig fcfg;
  fcfg.hash_buckets = cfg.hash_buckets;
  fcfg.ngram_orders = cfg.ngram_orders;
  ModelConfig mcfg;
  mcfg.hash_buckets = cfg.hash_buckets;
  mcfg.embed_dim = cfg.embed_dim;
  mcfg.repr_dim = cfg.repr_dim;
  mcfg.n_classes = C;
  mcfg.dropout_rate = cfg.dropout_rate;

  std::vector<Features> feats(data.size());
  for (size_t i = 0; i < data.size(); ++i) feats[i] = featurize(data[i], fcfg);

  // Resolve stage-1 supervision and the self-training pool for the mode.
  std::vector<int> stage1_idx, pool_idx;
  std::vector<int> stage1_y;
  for (size_t i = 0; i < data.size(); ++i) {
    const Sample& s = data[i];
    if (cfg.mode != TrainMode::kTransductive && s.split != Split::kTrain) continue;
    pool_idx.push_back(static_cast<int>(i));
    if (cfg.mode == TrainMode::kSemi && s.clean && s.gold != kAbstain) {
      stage1_idx.push_back(static_cast<int>(i));
      stage1_y.push_back(s.gold);
    } else if (s.weak != kAbstain) {
      stage1_idx.push_back(static_cast<int>(i));
      stage1_y.push_back(s.weak);
    }
  }
  if (cfg.corruption_ratio > 0.0)
    stage1_y = corrupt_labels(stage1_y, cfg.corruption_ratio, C, cfg.seed);

  // Clean-flagged labels stay frozen as one-hot targets during self-training
  // (mirroring any corruption applied to them above).
  std::unordered_map<int, int> frozen;
  if (cfg.mode == TrainMode::kSemi) {
    for (size_t k = 0; k < stage1_idx.size(); ++k) {
      const Sample& s = data[stage1_idx[k]];
      if (s.clean && s.gold != kAbstain) frozen[stage1_idx[k]] = stage1_y[k];
    }
  }

  require(cfg.t1 == 0 || !stage1_idx.empty(), "stage 1 has no labeled samples");
  require(cfg.t2 == 0 || !pool_idx.empty(), "self-training pool is empty");

  Model model(mcfg);
  {
    Rng init_rng = Rng::stream(cfg.seed, 6);
    model.init_params(init_rng);
  }
  std::vector<uint8_t> decay_mask(model.n_params());
  for (size_t i = 0; i < decay_mask.size(); ++i) decay_mask[i] = model.decayable(i) ? 1 : 0;

  AdamWConfig ocfg;
  ocfg.weight_decay = cfg.weight_decay;

  Rng dropout_rng = Rng::stream(cfg.seed, 3);
  TrainResult res;

  // ---------- Stage 1: fine-tune on the resolved weak labels.
  if (cfg.t1 > 0) {
    AdamW opt(model.n_params(), ocfg);
    EpochSampler sampler(iota_positions(stage1_idx.size()), Rng::stream(cfg.seed, 1));
    Vec grad(model.n_params(), 0.0);
    for (long t = 0; t < cfg.t1; ++t) {
      double lr = lr_schedule(t, cfg.t1, cfg.learning_rate, cfg.warmup_ratio);
      std::vector<int> batch = sampler.next(cfg.batch_size);
      size_t n = batch.size();
      std::vector<ForwardCache> caches;
      std::vector<Vec> targets, probs;
      caches.reserve(n);
      for (int pos : batch) {
        caches.push_back(model.forward(feats[stage1_idx[pos]], true, &dropout_rng));
        targets.push_back(one_hot(stage1_y[pos], C));
        probs.push_back(caches.back().probs);
      }
      std::vector<Vec> dprobs(n, Vec(C, 0.0));
      double lc = weighted_kl_loss(targets, probs, Vec(n, 1.0), &dprobs);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (size_t b = 0; b < n; ++b) model.backward(caches[b], dprobs[b], {}, grad);
      opt.step(model.params, grad, decay_mask, lr);
      res.steps.push_back({t, 1, lr, lc, 0.0, 0.0, lc, static_cast<long>(n)});
    }
  }
  res.init_checkpoint = Checkpoint{labels, mcfg, fcfg, cfg.token_window, model.params};

  // ---------- Stage 2: contrastive self-training over the pool.
  std::vector<Vec> targets_pool;
  Vec omega_pool;
  auto refresh = [&]() {
    std::vector<Vec> probs(pool_idx.size());
    for (size_t k = 0; k < pool_idx.size(); ++k)
      probs[k] = model.forward(feats[pool_idx[k]], false).probs;
    if (cfg.use_soft_labels) {
      targets_pool = soft_pseudo_labels(probs);
    } else {
      targets_pool.assign(probs.size(), Vec());
      for (size_t k = 0; k < probs.size(); ++k) targets_pool[k] = one_hot(argmax(probs[k]), C);
    }
    for (size_t k = 0; k < pool_idx.size(); ++k) {
      auto it = frozen.find(pool_idx[k]);
      if (it != frozen.end()) targets_pool[k] = one_hot(it->second, C);
    }
    omega_pool.resize(targets_pool.size());
    for (size_t k = 0; k < targets_pool.size(); ++k)
      omega_pool[k] = confidence_weight(targets_pool[k]);
    ++res.refreshes;
  };
  auto eval_at = [&](long step) {
    int excl = labels.others_index();
    if (auto e = evaluate_split(model, feats, data, Split::kDev, excl)) {
      e->step = step;
      res.evals.push_back(*e);
    }
    if (auto e = evaluate_split(model, feats, data, Split::kTest, excl)) {
      e->step = step;
      res.evals.push_back(*e);
    }
  };

  if (cfg.t2 > 0) {
    AdamW opt(model.n_params(), ocfg);
    EpochSampler sampler(iota_positions(pool_idx.size()), Rng::stream(cfg.seed, 2));
    Rng pair_rng = Rng::stream(cfg.seed, 4);
    Vec grad(model.n_params(), 0.0);
    for (long t = 0; t < cfg.t2; ++t) {
      if (t % cfg.t3 == 0) {
        refresh();
        eval_at(cfg.t1 + t);
      }
      double lr = lr_schedule(t, cfg.t2, cfg.learning_rate, cfg.warmup_ratio);
      std::vector<int> batch = sampler.next(cfg.batch_size);
      std::vector<int> sel;
      for (int pos : batch)
        if (omega_pool[pos] >= cfg.xi) sel.push_back(pos);
      long n_sel = static_cast<long>(sel.size());
      if (n_sel == 0) {
        ++res.skipped_steps;
        res.steps.push_back({cfg.t1 + t, 2, lr, 0.0, 0.0, 0.0, 0.0, 0});
        continue;
      }

      std::vector<ForwardCache> caches;
      std::vector<Vec> targets, probs, reps;
      Vec weights;
      caches.reserve(n_sel);
      for (int pos : sel) {
        caches.push_back(model.forward(feats[pool_idx[pos]], true, &dropout_rng));
        targets.push_back(targets_pool[pos]);
        probs.push_back(caches.back().probs);
        reps.push_back(caches.back().v);
        weights.push_back(cfg.use_reweighting ? omega_pool[pos] : 1.0);
      }

      std::vector<Vec> dprobs(n_sel, Vec(C, 0.0));
      double lc = weighted_kl_loss(targets, probs, weights, &dprobs);

      double r2 = 0.0;
      if (cfg.use_r2) {
        double inv = 1.0 / static_cast<double>(n_sel);
        for (long b = 0; b < n_sel; ++b) {
          r2 += inv * uniform_kl(probs[b]);
          uniform_kl_backward(probs[b], cfg.lambda * inv, dprobs[b]);
        }
      }

      double r1 = 0.0;
      std::vector<Vec> dreps;
      if (cfg.use_r1 && n_sel >= 2) {
        std::vector<std::pair<int, int>> pairs;
        for (long a = 0; a < n_sel; ++a)
          for (long b = a + 1; b < n_sel; ++b) pairs.emplace_back(a, b);
        if (cfg.pair_mode == PairMode::kSampled && static_cast<long>(pairs.size()) > n_sel) {
          for (long i = 0; i < n_sel; ++i) {
            size_t j = i + pair_rng.next_below(pairs.size() - i);
            std::swap(pairs[i], pairs[j]);
          }
          pairs.resize(n_sel);
        }
        dreps.assign(n_sel, Vec(cfg.repr_dim, 0.0));
        r1 = contrastive_loss(reps, targets, pairs, cfg.distance, cfg.similarity, cfg.beta,
                              cfg.gamma, &dreps);
      }

      double total = total_loss(lc, r1, r2, cfg.lambda);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (long b = 0; b < n_sel; ++b)
        model.backward(caches[b], dprobs[b], dreps.empty() ? Vec() : dreps[b], grad);
      opt.step(model.params, grad, decay_mask, lr);
      res.steps.push_back({cfg.t1 + t, 2, lr, lc, r1, r2, total, n_sel});
    }
  }
  if (!pool_idx.empty()) refresh();
  eval_at(cfg.t1 + cfg.t2);
  res.final_checkpoint = Checkpoint{labels, mcfg, fcfg, cfg.token_window, model.params};
  return res;
}

std::string steps_to_jsonl(const std::vector<StepRecord>& steps) {
  std::string out;
  for (const auto& s : steps) {
    nlohmann::json j;
    j["step"] = s.step;
    j["stage"] = s.stage;
    j["lr"] = s.lr;
    j["lc"] = s.lc;
    j["r1"] = s.r1;
    j["r2"] = s.r2;
    j["total"] = s.total;
    j["n_confident"] = s.n_confident;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string evals_to_jsonl(const std::vector<EvalRecord>& evals) {
  std::string out;
  for (const auto& e : evals) {
    nlohmann::json j;
    j["step"] = e.step;
    j["split"] = e.split;
    j["accuracy"] = e.accuracy;
    j["micro_f1"] = e.micro_f1;
    j["n"] = e.n;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace cst
