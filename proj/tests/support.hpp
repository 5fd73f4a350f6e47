#pragma once

// Shared fixtures for the unit and acceptance suites: random inputs built on
// the library RNG and batch-loss builders that mirror the training objective
// for gradient checking.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cst/data.hpp"
#include "cst/features.hpp"
#include "cst/model.hpp"
#include "cst/objectives.hpp"
#include "cst/rng.hpp"

namespace cst::testing {

inline Sample sequence_sample(const std::string& id, const std::string& text,
                              Split split = Split::kTrain) {
  Sample s;
  s.id = id;
  s.kind = TaskKind::kSequence;
  s.text = text;
  s.split = split;
  return s;
}

inline std::string random_text(Rng& rng, int vocab, int min_len, int max_len) {
  int n = min_len + static_cast<int>(rng.next_below(max_len - min_len + 1));
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += "t" + std::to_string(rng.next_below(vocab));
  }
  return out;
}

// Move a freshly initialized model to a representative operating point for
// finite-difference checks. Right at init the representations sit near zero,
// where the cosine distance's curvature (~1/||v||^3) swamps a central
// difference at eps=1e-5 with truncation error; trained models never live
// there. Scaling the weights up keeps the check meaningful and well
// conditioned.
inline void inflate_params(Model& model, double scale = 4.0) {
  for (double& p : model.params) p *= scale;
}

inline Vec random_probs(Rng& rng, int c) {
  Vec p(c);
  double z = 0.0;
  for (int j = 0; j < c; ++j) {
    p[j] = 0.05 + rng.next_double();
    z += p[j];
  }
  for (int j = 0; j < c; ++j) p[j] /= z;
  return p;
}

// Plain cross-entropy against integer labels, expressed as a BatchLossFn.
inline BatchLossFn ce_loss_fn(std::vector<int> labels, int c) {
  return [labels = std::move(labels), c](const std::vector<ForwardCache>& caches) {
    BatchLoss out;
    double inv = 1.0 / static_cast<double>(caches.size());
    out.dprobs.assign(caches.size(), Vec(c, 0.0));
    for (size_t i = 0; i < caches.size(); ++i) {
      Vec target(c, 0.0);
      target[labels[i]] = 1.0;
      out.value += inv * kl_divergence(target, caches[i].probs);
      kl_backward_q(target, caches[i].probs, inv, out.dprobs[i]);
    }
    return out;
  };
}

struct FullLossSpec {
  std::vector<Vec> targets;  // fixed soft targets, one row per batch member
  Vec weights;               // confidence weights
  double lambda = 0.1;
  std::vector<std::pair<int, int>> pairs;  // fixed contrastive pair set
  Distance dist = Distance::kScaledEuclidean;
  Similarity sim = Similarity::kHard;
  double beta = 10.0;
  double gamma = 1.0;
};

// The full self-training step objective over a fixed batch: weighted KL to
// the targets, the uniform-KL confidence term, and the contrastive term over
// a frozen pair set. Matches the trainer's composition exactly.
inline BatchLossFn full_loss_fn(FullLossSpec spec) {
  return [spec = std::move(spec)](const std::vector<ForwardCache>& caches) {
    size_t n = caches.size();
    int c = static_cast<int>(caches.front().probs.size());
    int r = static_cast<int>(caches.front().v.size());
    BatchLoss out;
    out.dprobs.assign(n, Vec(c, 0.0));
    out.dv.assign(n, Vec(r, 0.0));

    std::vector<Vec> probs, reps;
    for (const auto& cache : caches) {
      probs.push_back(cache.probs);
      reps.push_back(cache.v);
    }
    double lc = weighted_kl_loss(spec.targets, probs, spec.weights, &out.dprobs);
    double r2 = 0.0;
    double inv = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      r2 += inv * uniform_kl(probs[i]);
      uniform_kl_backward(probs[i], spec.lambda * inv, out.dprobs[i]);
    }
    double r1 = contrastive_loss(reps, spec.targets, spec.pairs, spec.dist, spec.sim, spec.beta,
                                 spec.gamma, &out.dv);
    out.value = total_loss(lc, r1, r2, spec.lambda);
    return out;
  };
}

}  // namespace cst::testing
