#include "cst/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "cst/error.hpp"

namespace cst {

int argmax(const Vec& p) {
  require(!p.empty(), "argmax of empty vector");
  int best = 0;
  for (size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = static_cast<int>(i);
  return best;
}

double entropy(const Vec& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

double confidence_weight(const Vec& p) {
  require(p.size() >= 2, "confidence weight needs at least 2 classes");
  double w = 1.0 - entropy(p) / std::log(static_cast<double>(p.size()));
  return std::clamp(w, 0.0, 1.0);
}

double kl_divergence(const Vec& p, const Vec& q) {
  require(p.size() == q.size(), "KL divergence size mismatch");
  double kl = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) kl += p[j] * (std::log(p[j]) - std::log(std::max(q[j], kProbFloor)));
  }
  return kl;
}

void kl_backward_q(const Vec& p, const Vec& q, double scale, Vec& dq) {
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) dq[j] -= scale * p[j] / std::max(q[j], kProbFloor);
  }
}

double uniform_kl(const Vec& p) {
  double u = 1.0 / static_cast<double>(p.size());
  double kl = 0.0;
  for (double x : p) kl += u * (std::log(u) - std::log(std::max(x, kProbFloor)));
  return kl;
}

void uniform_kl_backward(const Vec& p, double scale, Vec& dp) {
  double u = 1.0 / static_cast<double>(p.size());
  for (size_t j = 0; j < p.size(); ++j) dp[j] -= scale * u / std::max(p[j], kProbFloor);
}

std::vector<Vec> soft_pseudo_labels(const std::vector<Vec>& probs) {
  require(!probs.empty(), "soft labels need a non-empty batch");
  size_t c = probs.front().size();
  Vec freq(c, 0.0);
  for (const auto& p : probs) {
    require(p.size() == c, "ragged probability batch");
    for (size_t j = 0; j < c; ++j) freq[j] += p[j] * p[j];
  }
  std::vector<Vec> out(probs.size(), Vec(c, 0.0));
  for (size_t i = 0; i < probs.size(); ++i) {
    double z = 0.0;
    for (size_t j = 0; j < c; ++j) {
      double t = freq[j] > 0.0 ? probs[i][j] * probs[i][j] / freq[j] : 0.0;
      out[i][j] = t;
      z += t;
    }
    z = std::max(z, kProbFloor);
    for (size_t j = 0; j < c; ++j) out[i][j] /= z;
  }
  return out;
}

double distance(const Vec& a, const Vec& b, Distance kind) {
  require(a.size() == b.size() && !a.empty(), "distance size mismatch");
  if (kind == Distance::kScaledEuclidean) {
    double s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
      double d = a[k] - b[k];
      s += d * d;
    }
    return s / static_cast<double>(a.size());
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  double denom = std::max(std::sqrt(na) * std::sqrt(nb), kProbFloor);
  return 1.0 - dot / denom;
}

void distance_backward(const Vec& a, const Vec& b, Distance kind, double dout, Vec& da, Vec& db) {
  size_t n = a.size();
  if (kind == Distance::kScaledEuclidean) {
    double scale = 2.0 * dout / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k) {
      double d = a[k] - b[k];
      da[k] += scale * d;
      db[k] -= scale * d;
    }
    return;
  }
  double dot = 0.0, na2 = 0.0, nb2 = 0.0;
  for (size_t k = 0; k < n; ++k) {
    dot += a[k] * b[k];
    na2 += a[k] * a[k];
    nb2 += b[k] * b[k];
  }
  double na = std::sqrt(na2), nb = std::sqrt(nb2);
  double denom = std::max(na * nb, kProbFloor);
  // d(1 - cos)/da_k = -(b_k / (|a||b|) - cos * a_k / |a|^2)
  double cosv = dot / denom;
  for (size_t k = 0; k < n; ++k) {
    da[k] += dout * (cosv * a[k] / std::max(na2, kProbFloor) - b[k] / denom);
    db[k] += dout * (cosv * b[k] / std::max(nb2, kProbFloor) - a[k] / denom);
  }
}

double similarity_weight(const Vec& ya, const Vec& yb, Similarity kind, double beta) {
  switch (kind) {
    case Similarity::kHard:
      return argmax(ya) == argmax(yb) ? 1.0 : 0.0;
    case Similarity::kKlSoft:
      return std::exp(-beta * 0.5 * (kl_divergence(ya, yb) + kl_divergence(yb, ya)));
    case Similarity::kL2Soft: {
      double s = 0.0;
      for (size_t j = 0; j < ya.size(); ++j) {
        double d = ya[j] - yb[j];
        s += d * d;
      }
      return 1.0 - 0.5 * s;
    }
  }
  return 0.0;
}

double pair_loss(double w, double d, double gamma) {
  double hinge = std::max(0.0, gamma - d);
  return w * d * d + (1.0 - w) * hinge * hinge;
}

double pair_loss_ddist(double w, double d, double gamma) {
  double hinge = std::max(0.0, gamma - d);
  return 2.0 * w * d - 2.0 * (1.0 - w) * hinge;
}

double contrastive_loss(const std::vector<Vec>& reps, const std::vector<Vec>& targets,
                        const std::vector<std::pair<int, int>>& pairs, Distance dist,
                        Similarity sim, double beta, double gamma, std::vector<Vec>* dreps) {
  if (pairs.empty()) return 0.0;
  require(reps.size() == targets.size(), "contrastive loss size mismatch");
  double inv = 1.0 / static_cast<double>(pairs.size());
  double loss = 0.0;
  for (const auto& [i, j] : pairs) {
    double w = similarity_weight(targets[i], targets[j], sim, beta);
    double d = distance(reps[i], reps[j], dist);
    loss += inv * pair_loss(w, d, gamma);
    if (dreps) {
      double dd = inv * pair_loss_ddist(w, d, gamma);
      distance_backward(reps[i], reps[j], dist, dd, (*dreps)[i], (*dreps)[j]);
    }
  }
  return loss;
}

double weighted_kl_loss(const std::vector<Vec>& targets, const std::vector<Vec>& probs,
                        const Vec& weights, std::vector<Vec>* dprobs) {
  require(targets.size() == probs.size() && targets.size() == weights.size(),
          "weighted KL size mismatch");
  if (targets.empty()) return 0.0;
  double inv = 1.0 / static_cast<double>(targets.size());
  double loss = 0.0;
  for (size_t i = 0; i < targets.size(); ++i) {
    loss += inv * weights[i] * kl_divergence(targets[i], probs[i]);
    if (dprobs) kl_backward_q(targets[i], probs[i], inv * weights[i], (*dprobs)[i]);
  }
  return loss;
}

double total_loss(double lc, double r1, double r2, double lambda) {
  return lc + r1 + lambda * r2;
}

}  // namespace cst
