#include <cmath>
#include <utility>
#include <vector>

#include "cst/objectives.hpp"
#include "cst/rng.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cst;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("entropy and confidence weight") {
  CHECK(entropy({0.5, 0.5}) == doctest::Approx(std::log(2.0)).epsilon(kTol));
  CHECK(entropy({1.0, 0.0}) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(entropy({0.9, 0.1}) == doctest::Approx(0.3250829733914482).epsilon(kTol));

  CHECK(confidence_weight({1.0, 0.0}) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(confidence_weight({0.5, 0.5}) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(confidence_weight({0.9, 0.1}) == doctest::Approx(0.5310044064107189).epsilon(kTol));
  CHECK(confidence_weight({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(0.0).epsilon(kTol));
}

TEST_CASE("KL divergence oracles") {
  CHECK(kl_divergence({1.0, 0.0}, {0.5, 0.5}) ==
        doctest::Approx(0.6931471805599453).epsilon(kTol));
  CHECK(kl_divergence({0.8, 0.2}, {0.6, 0.4}) ==
        doctest::Approx(0.09151622184943578).epsilon(kTol));
  CHECK(kl_divergence({0.3, 0.7}, {0.3, 0.7}) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(uniform_kl({0.9, 0.1}) == doctest::Approx(0.5108256237659907).epsilon(kTol));
  CHECK(uniform_kl({0.5, 0.5}) == doctest::Approx(0.0).epsilon(kTol));
}

TEST_CASE("KL gradients match finite differences") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    int c = 2 + static_cast<int>(rng.next_below(4));
    Vec p = cst::testing::random_probs(rng, c);
    Vec q = cst::testing::random_probs(rng, c);
    Vec dq(c, 0.0);
    kl_backward_q(p, q, 1.0, dq);
    Vec du(c, 0.0);
    uniform_kl_backward(q, 1.0, du);
    for (int j = 0; j < c; ++j) {
      double eps = 1e-7;
      Vec qp = q, qm = q;
      qp[j] += eps;
      qm[j] -= eps;
      double num_kl = (kl_divergence(p, qp) - kl_divergence(p, qm)) / (2 * eps);
      double num_u = (uniform_kl(qp) - uniform_kl(qm)) / (2 * eps);
      CHECK(dq[j] == doctest::Approx(num_kl).epsilon(1e-5));
      CHECK(du[j] == doctest::Approx(num_u).epsilon(1e-5));
    }
  }
}

TEST_CASE("soft pseudo-labels sharpen with squared frequency normalization") {
  auto rows = soft_pseudo_labels({{0.8, 0.2}, {0.4, 0.6}});
  CHECK(rows[0][0] == doctest::Approx(8.0 / 9.0).epsilon(kTol));
  CHECK(rows[0][1] == doctest::Approx(1.0 / 9.0).epsilon(kTol));
  CHECK(rows[1][0] == doctest::Approx(0.18181818181818182).epsilon(kTol));
  CHECK(rows[1][1] == doctest::Approx(0.8181818181818181).epsilon(kTol));
}

TEST_CASE("soft pseudo-label properties") {
  Rng rng(33);

  SUBCASE("rows are distributions") {
    for (int trial = 0; trial < 20; ++trial) {
      int c = 2 + static_cast<int>(rng.next_below(5));
      int n = 1 + static_cast<int>(rng.next_below(6));
      std::vector<Vec> probs;
      for (int i = 0; i < n; ++i) probs.push_back(cst::testing::random_probs(rng, c));
      for (const auto& row : soft_pseudo_labels(probs)) {
        double sum = 0.0;
        for (double x : row) {
          CHECK(x >= 0.0);
          sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(kTol));
      }
    }
  }

  SUBCASE("a singleton batch of full-support probabilities becomes uniform") {
    auto rows = soft_pseudo_labels({{0.7, 0.3}});
    CHECK(rows[0][0] == doctest::Approx(0.5).epsilon(kTol));
    CHECK(rows[0][1] == doctest::Approx(0.5).epsilon(kTol));
  }

  SUBCASE("one-hot batches are fixed points") {
    auto rows = soft_pseudo_labels({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
    CHECK(rows[0][0] == doctest::Approx(1.0).epsilon(kTol));
    CHECK(rows[1][1] == doctest::Approx(1.0).epsilon(kTol));
    CHECK(rows[2][0] == doctest::Approx(1.0).epsilon(kTol));
  }

  SUBCASE("permuting classes permutes the output") {
    std::vector<Vec> probs{{0.5, 0.3, 0.2}, {0.1, 0.6, 0.3}};
    auto base = soft_pseudo_labels(probs);
    std::vector<Vec> swapped{{0.3, 0.5, 0.2}, {0.6, 0.1, 0.3}};  // classes 0 and 1 swapped
    auto perm = soft_pseudo_labels(swapped);
    for (size_t i = 0; i < probs.size(); ++i) {
      CHECK(perm[i][0] == doctest::Approx(base[i][1]).epsilon(kTol));
      CHECK(perm[i][1] == doctest::Approx(base[i][0]).epsilon(kTol));
      CHECK(perm[i][2] == doctest::Approx(base[i][2]).epsilon(kTol));
    }
  }
}

TEST_CASE("distance oracles and properties") {
  CHECK(distance({1.0, 0.0}, {0.0, 1.0}, Distance::kScaledEuclidean) ==
        doctest::Approx(1.0).epsilon(kTol));
  CHECK(distance({1.0, 0.0}, {0.0, 1.0}, Distance::kCosine) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(distance({3.0, 4.0}, {0.0, 0.0}, Distance::kScaledEuclidean) ==
        doctest::Approx(12.5).epsilon(kTol));
  CHECK(distance({2.0, 2.0}, {5.0, 5.0}, Distance::kCosine) == doctest::Approx(0.0).epsilon(kTol));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Vec a(4), b(4);
    for (int k = 0; k < 4; ++k) {
      a[k] = rng.next_symmetric(2.0);
      b[k] = rng.next_symmetric(2.0);
    }
    for (Distance kind : {Distance::kScaledEuclidean, Distance::kCosine}) {
      CHECK(distance(a, b, kind) == doctest::Approx(distance(b, a, kind)).epsilon(kTol));
      CHECK(distance(a, b, kind) >= -kTol);
      CHECK(distance(a, a, kind) == doctest::Approx(0.0).epsilon(1e-7));
    }
  }
}

TEST_CASE("distance gradients match finite differences") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Vec a(3), b(3);
    for (int k = 0; k < 3; ++k) {
      a[k] = 0.2 + rng.next_double();  // keep away from the zero vector
      b[k] = 0.2 + rng.next_double();
    }
    for (Distance kind : {Distance::kScaledEuclidean, Distance::kCosine}) {
      Vec da(3, 0.0), db(3, 0.0);
      distance_backward(a, b, kind, 1.0, da, db);
      for (int k = 0; k < 3; ++k) {
        double eps = 1e-7;
        Vec ap = a, am = a, bp = b, bm = b;
        ap[k] += eps;
        am[k] -= eps;
        bp[k] += eps;
        bm[k] -= eps;
        CHECK(da[k] == doctest::Approx((distance(ap, b, kind) - distance(am, b, kind)) / (2 * eps))
                           .epsilon(1e-5));
        CHECK(db[k] == doctest::Approx((distance(a, bp, kind) - distance(a, bm, kind)) / (2 * eps))
                           .epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("similarity weights") {
  CHECK(similarity_weight({0.9, 0.1}, {0.6, 0.4}, Similarity::kHard, 10.0) == 1.0);
  CHECK(similarity_weight({0.9, 0.1}, {0.4, 0.6}, Similarity::kHard, 10.0) == 0.0);
  CHECK(similarity_weight({1.0, 0.0}, {0.0, 1.0}, Similarity::kL2Soft, 10.0) ==
        doctest::Approx(0.0).epsilon(kTol));
  CHECK(similarity_weight({0.3, 0.7}, {0.3, 0.7}, Similarity::kL2Soft, 10.0) ==
        doctest::Approx(1.0).epsilon(kTol));
  CHECK(similarity_weight({0.3, 0.7}, {0.3, 0.7}, Similarity::kKlSoft, 10.0) ==
        doctest::Approx(1.0).epsilon(kTol));

  // kl_soft is exp(-beta/2 * symmetrized KL): check one value end to end.
  Vec ya{0.8, 0.2}, yb{0.6, 0.4};
  double sym = kl_divergence(ya, yb) + kl_divergence(yb, ya);
  CHECK(similarity_weight(ya, yb, Similarity::kKlSoft, 10.0) ==
        doctest::Approx(std::exp(-5.0 * sym)).epsilon(kTol));
  CHECK(similarity_weight(ya, yb, Similarity::kKlSoft, 10.0) ==
        doctest::Approx(similarity_weight(yb, ya, Similarity::kKlSoft, 10.0)).epsilon(kTol));
}

TEST_CASE("contrastive pair loss oracles") {
  CHECK(pair_loss(1.0, 0.3, 1.0) == doctest::Approx(0.09).epsilon(kTol));
  CHECK(pair_loss(0.0, 1.5, 1.0) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(pair_loss(0.5, 0.4, 1.0) == doctest::Approx(0.26).epsilon(kTol));
  CHECK(pair_loss_ddist(1.0, 0.3, 1.0) == doctest::Approx(0.6).epsilon(kTol));
  CHECK(pair_loss_ddist(0.0, 0.4, 1.0) == doctest::Approx(-1.2).epsilon(kTol));
  CHECK(pair_loss_ddist(0.0, 1.5, 1.0) == doctest::Approx(0.0).epsilon(kTol));
}

TEST_CASE("exhaustive contrastive loss equals a brute-force recomputation") {
  Rng rng(55);
  for (int n = 2; n <= 8; ++n) {
    for (Distance dist : {Distance::kScaledEuclidean, Distance::kCosine}) {
      for (Similarity sim : {Similarity::kHard, Similarity::kKlSoft, Similarity::kL2Soft}) {
        std::vector<Vec> reps, targets;
        for (int i = 0; i < n; ++i) {
          Vec v(5);
          for (auto& x : v) x = 0.1 + rng.next_double();
          reps.push_back(v);
          targets.push_back(cst::testing::random_probs(rng, 3));
        }
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

        double got = contrastive_loss(reps, targets, pairs, dist, sim, 10.0, 1.0);

        // Independent scalar recomputation.
        double want = 0.0;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            double w = similarity_weight(targets[i], targets[j], sim, 10.0);
            double d = distance(reps[i], reps[j], dist);
            double hinge = std::max(0.0, 1.0 - d);
            want += w * d * d + (1.0 - w) * hinge * hinge;
          }
        }
        want /= static_cast<double>(pairs.size());
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("weighted KL loss oracle") {
  std::vector<Vec> targets{{1.0, 0.0}, {0.5, 0.5}};
  std::vector<Vec> probs{{0.5, 0.5}, {0.25, 0.75}};
  Vec weights{1.0, 0.5};
  CHECK(weighted_kl_loss(targets, probs, weights) ==
        doctest::Approx(0.38253384933644524).epsilon(kTol));
}

TEST_CASE("total loss composition") {
  CHECK(total_loss(0.2, 0.3, 0.4, 0.05) == doctest::Approx(0.52).epsilon(kTol));
  CHECK(total_loss(1.0, 0.0, 5.0, 0.0) == doctest::Approx(1.0).epsilon(kTol));
}

TEST_CASE("argmax prefers the earliest maximum") {
  CHECK(argmax({0.2, 0.5, 0.3}) == 1);
  CHECK(argmax({0.5, 0.5}) == 0);
  CHECK(argmax({1.0}) == 0);
}
