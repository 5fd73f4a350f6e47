#include <cmath>
#include <vector>

#include "cst/error.hpp"
#include "cst/optimizer.hpp"
#include "doctest.h"

using namespace cst;

TEST_CASE("first AdamW step matches the closed form") {
  AdamWConfig cfg;  // beta1 .9, beta2 .999, eps 1e-8, wd 1e-4
  AdamW opt(1, cfg);
  Vec p{1.0};
  opt.step(p, {0.1}, {1}, 0.01);
  CHECK(p[0] == doctest::Approx(0.9899990009999999).epsilon(1e-12));

  AdamW opt2(1, cfg);
  Vec q{1.0};
  opt2.step(q, {0.1}, {0}, 0.01);  // bias: no decay
  CHECK(q[0] == doctest::Approx(0.9900000009999999).epsilon(1e-12));
}

TEST_CASE("second step keeps matching the closed form") {
  AdamW opt(1, AdamWConfig{});
  Vec p{1.0};
  opt.step(p, {0.1}, {1}, 0.01);
  opt.step(p, {0.1}, {1}, 0.01);
  CHECK(p[0] == doctest::Approx(0.9799980120009989).epsilon(1e-12));
  CHECK(opt.steps_taken() == 2);
}

TEST_CASE("zero gradient leaves undecayed parameters untouched") {
  AdamW opt(2, AdamWConfig{});
  Vec p{2.0, 2.0};
  opt.step(p, {0.0, 0.0}, {0, 1}, 0.5);
  CHECK(p[0] == 2.0);               // bias, no decay, no gradient
  CHECK(p[1] == doctest::Approx(2.0 - 0.5 * 1e-4 * 2.0).epsilon(1e-12));  // decay only
}

TEST_CASE("constant gradient descends monotonically") {
  AdamW opt(1, AdamWConfig{});
  Vec p{5.0};
  double prev = p[0];
  for (int t = 0; t < 50; ++t) {
    opt.step(p, {1.0}, {1}, 0.01);
    CHECK(p[0] < prev);
    prev = p[0];
  }
}

TEST_CASE("schedule warms up linearly then decays to zero") {
  CHECK(lr_schedule(0, 100, 1.0, 0.1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lr_schedule(5, 100, 1.0, 0.1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lr_schedule(10, 100, 1.0, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lr_schedule(55, 100, 1.0, 0.1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lr_schedule(100, 100, 1.0, 0.1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lr_schedule(0, 100, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lr_schedule(3000, 3000, 2e-5, 0.1) == doctest::Approx(0.0).epsilon(1e-12));

  double peak = lr_schedule(10, 100, 1.0, 0.1);
  for (long t = 0; t < 100; ++t) {
    double now = lr_schedule(t, 100, 1.0, 0.1);
    CHECK(now <= peak + 1e-12);
    if (t < 10) CHECK(now <= lr_schedule(t + 1, 100, 1.0, 0.1) + 1e-12);
    if (t >= 10) CHECK(now >= lr_schedule(t + 1, 100, 1.0, 0.1) - 1e-12);
  }
}

TEST_CASE("optimizer rejects mismatched shapes") {
  AdamW opt(2, AdamWConfig{});
  Vec p{1.0};
  CHECK_THROWS_AS(opt.step(p, {0.1}, {1}, 0.01), Error);
}
