#include "cst/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cst/error.hpp"

namespace cst {

double accuracy(const std::vector<int>& golds, const std::vector<int>& preds) {
  require(golds.size() == preds.size(), "accuracy size mismatch");
  require(!golds.empty(), "accuracy of empty prediction list");
  long hit = 0;
  for (size_t i = 0; i < golds.size(); ++i)
    if (golds[i] == preds[i]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(golds.size());
}

double micro_f1(const std::vector<int>& golds, const std::vector<int>& preds, int exclude_class) {
  require(golds.size() == preds.size(), "micro F1 size mismatch");
  long tp = 0, pred_n = 0, gold_n = 0;
  for (size_t i = 0; i < golds.size(); ++i) {
    bool gold_in = golds[i] != exclude_class;
    bool pred_in = preds[i] != exclude_class;
    if (gold_in) ++gold_n;
    if (pred_in) ++pred_n;
    if (gold_in && pred_in && golds[i] == preds[i]) ++tp;
  }
  if (pred_n + gold_n == 0) return 1.0;  // nothing to predict, nothing predicted
  return 2.0 * static_cast<double>(tp) / static_cast<double>(pred_n + gold_n);
}

std::vector<BinStat> confidence_bins(const Vec& confidences, const std::vector<bool>& correct,
                                     int n_bins) {
  require(confidences.size() == correct.size(), "confidence bin size mismatch");
  require(n_bins > 0, "need at least one bin");
  std::vector<BinStat> bins(n_bins);
  double width = 1.0 / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    bins[b].lo = b * width;
    bins[b].hi = (b + 1) * width;
  }
  for (size_t i = 0; i < confidences.size(); ++i) {
    double c = std::clamp(confidences[i], 0.0, 1.0);
    int b = std::min(n_bins - 1, static_cast<int>(c / width));
    ++bins[b].n;
    bins[b].mean_conf += c;
    if (correct[i]) bins[b].accuracy += 1.0;
  }
  for (auto& bin : bins) {
    if (bin.n) {
      bin.mean_conf /= bin.n;
      bin.accuracy /= bin.n;
    }
  }
  return bins;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double sample_mean(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_var(const Vec& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, "incomplete beta needs positive shape parameters");
  require(x >= 0.0 && x <= 1.0, "incomplete beta argument outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  double front = std::exp(lbeta + a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TTest welch_t_test(const Vec& a, const Vec& b) {
  require(a.size() >= 2 && b.size() >= 2, "t-test needs at least 2 values per sample");
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double ma = sample_mean(a), mb = sample_mean(b);
  double va = sample_var(a, ma), vb = sample_var(b, mb);
  double sa = va / na, sb = vb / nb;
  TTest res;
  if (sa + sb == 0.0) {
    // Two constant samples: equal means are a perfect null, unequal means an
    // infinitely separated alternative.
    res.df = na + nb - 2.0;
    if (ma == mb) {
      res.t = 0.0;
      res.p = 1.0;
    } else {
      res.t = ma > mb ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
      res.p = 0.0;
    }
    return res;
  }
  res.t = (ma - mb) / std::sqrt(sa + sb);
  res.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  double x = res.df / (res.df + res.t * res.t);
  res.p = regularized_incomplete_beta(res.df / 2.0, 0.5, x);
  return res;
}

}  // namespace cst
