#pragma once

#include <utility>
#include <vector>

#include "cst/vec.hpp"

namespace cst {

// Probabilities are clamped to this floor inside logs and divisions.
constexpr double kProbFloor = 1e-12;

// Index of the largest entry; earliest index wins ties.
int argmax(const Vec& p);

// Natural-log entropy with 0*log(0) = 0.
double entropy(const Vec& p);

// 1 - H(p)/log(C), clamped into [0, 1].
double confidence_weight(const Vec& p);

// D_KL(p || q) = sum_j p_j log(p_j / q_j).
double kl_divergence(const Vec& p, const Vec& q);
// Adds scale * d KL(p||q) / dq into dq.
void kl_backward_q(const Vec& p, const Vec& q, double scale, Vec& dq);

// D_KL(uniform || p) and its gradient in p.
double uniform_kl(const Vec& p);
void uniform_kl_backward(const Vec& p, double scale, Vec& dp);

// Sharpened batch targets: t_ij ~ p_ij^2 / f_j with f_j = sum_i p_ij^2,
// renormalized per row.
std::vector<Vec> soft_pseudo_labels(const std::vector<Vec>& probs);

enum class Distance { kScaledEuclidean, kCosine };
enum class Similarity { kHard, kKlSoft, kL2Soft };

// kScaledEuclidean: ||a-b||^2 / dim. kCosine: 1 - cos(a, b).
double distance(const Vec& a, const Vec& b, Distance kind);
// Adds dout * dd/da into da and dout * dd/db into db.
void distance_backward(const Vec& a, const Vec& b, Distance kind, double dout, Vec& da, Vec& db);

// Pairwise agreement weight from two target rows.
double similarity_weight(const Vec& ya, const Vec& yb, Similarity kind, double beta);

// W d^2 + (1 - W) max(0, gamma - d)^2 and its d-derivative.
double pair_loss(double w, double d, double gamma);
double pair_loss_ddist(double w, double d, double gamma);

// Mean over pairs of pair_loss(W_ij, d(rep_i, rep_j)); optionally accumulates
// representation gradients. Pair weights come from the target rows.
double contrastive_loss(const std::vector<Vec>& reps, const std::vector<Vec>& targets,
                        const std::vector<std::pair<int, int>>& pairs, Distance dist,
                        Similarity sim, double beta, double gamma,
                        std::vector<Vec>* dreps = nullptr);

// (1/N) sum_i weights_i * KL(targets_i || probs_i); optionally accumulates
// probability gradients. N = targets.size().
double weighted_kl_loss(const std::vector<Vec>& targets, const std::vector<Vec>& probs,
                        const Vec& weights, std::vector<Vec>* dprobs = nullptr);

double total_loss(double lc, double r1, double r2, double lambda);

}  // namespace cst
