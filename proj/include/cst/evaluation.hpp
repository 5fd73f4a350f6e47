#pragma once

#include <vector>

#include "cst/vec.hpp"

namespace cst {

// Fraction of positions where pred == gold.
double accuracy(const std::vector<int>& golds, const std::vector<int>& preds);

// Micro-averaged F1 with one class index optionally excluded from both the
// predicted and the gold side (pass a negative index to exclude nothing).
double micro_f1(const std::vector<int>& golds, const std::vector<int>& preds, int exclude_class);

struct BinStat {
  double lo = 0.0, hi = 0.0;
  long n = 0;
  double mean_conf = 0.0;
  double accuracy = 0.0;
};

// Equal-width bins over [0, 1] of confidence values with per-bin accuracy.
// A confidence of exactly 1.0 lands in the last bin.
std::vector<BinStat> confidence_bins(const Vec& confidences, const std::vector<bool>& correct,
                                     int n_bins);

// Regularized incomplete beta function I_x(a, b), continued-fraction form.
double regularized_incomplete_beta(double a, double b, double x);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Two-sided Welch two-sample t-test with Welch-Satterthwaite degrees of
// freedom. Both samples need at least two values.
TTest welch_t_test(const Vec& a, const Vec& b);

}  // namespace cst
