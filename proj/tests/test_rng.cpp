#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "fogplan/rng.hpp"

using namespace fogplan;

TEST_CASE("uniform01 stays in [0,1) and is seed-deterministic") {
  Rng a(7), b(7), c(8);
  bool all_match = true, any_differ = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform01();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    all_match &= (x == b.uniform01());
    any_differ |= (x != c.uniform01());
  }
  CHECK(all_match);
  CHECK(any_differ);
}

TEST_CASE("below is bounded and covers small ranges") {
  Rng rng(3);
  std::set<uint64_t> seen;
  for (int i = 0; i < 200; ++i) {
    const uint64_t v = rng.below(5);
    CHECK(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("poisson matches its mean and variance roughly") {
  Rng rng(11);
  const double mean = 112.0;
  const int n = 20000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.poisson(mean));
    sum += x;
    sumsq += x * x;
  }
  const double m = sum / n;
  const double var = sumsq / n - m * m;
  CHECK(m == doctest::Approx(mean).epsilon(0.02));
  CHECK(var == doctest::Approx(mean).epsilon(0.10));
}

TEST_CASE("poisson handles means beyond the exp underflow range") {
  Rng rng(12);
  const double mean = 2000.0;  // exp(-2000) underflows, chunked draws do not
  double sum = 0;
  for (int i = 0; i < 500; ++i) sum += static_cast<double>(rng.poisson(mean));
  CHECK(sum / 500 == doctest::Approx(mean).epsilon(0.02));
}

TEST_CASE("shuffle permutes and is seed-deterministic") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> w = v;
  Rng a(5), b(5);
  a.shuffle(v);
  b.shuffle(w);
  CHECK(v == w);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
  CHECK(mix_seed(1, 2, 3) != mix_seed(2, 2, 3));
  CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
}

TEST_CASE("normal has zero mean and unit variance roughly") {
  Rng rng(17);
  const int n = 20000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.05));
}
