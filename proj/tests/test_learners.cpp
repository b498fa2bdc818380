#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pblab/learners.hpp"
#include "pblab/rng.hpp"

using namespace pblab;

namespace {

Sample S(const std::string& text) { return parse_sample(text); }

int oracle_predict(int k, int x) { return x <= k ? -1 : +1; }

double oracle_loss(int k, const Sample& s) {
  int mistakes = 0;
  for (const auto& e : s.examples)
    if (oracle_predict(k, e.x) != e.y) ++mistakes;
  return static_cast<double>(mistakes) / s.size();
}

}  // namespace

TEST_CASE("exp learner weights follow exp(-beta * loss)") {
  const Domain dom(10);
  const Sample s = S("(1,-);(5,+);(8,+)");
  const auto q = exp_gibbs_learner(dom, s, {1.0});

  // oracle: losses 0, 1/3, 2/3 computed independently
  const double w1 = std::exp(-0.0), w5 = std::exp(-1.0 / 3.0), w8 = std::exp(-2.0 / 3.0);
  const double z = w1 + w5 + w8;
  REQUIRE(q.atoms().size() == 3);
  CHECK(q.weight_of(Hypothesis::threshold(1)) == doctest::Approx(w1 / z).epsilon(1e-14));
  CHECK(q.weight_of(Hypothesis::threshold(5)) == doctest::Approx(w5 / z).epsilon(1e-14));
  CHECK(q.weight_of(Hypothesis::threshold(8)) == doctest::Approx(w8 / z).epsilon(1e-14));
}

TEST_CASE("exp learner at beta 0 is uniform over sample thresholds") {
  const Domain dom(12);
  const auto q = exp_gibbs_learner(dom, S("(2,-);(7,+);(11,+)"), {0.0});
  for (const auto& a : q.atoms()) CHECK(a.w == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("exp learner merges duplicated sample points by weight addition") {
  const Domain dom(10);
  const Sample s = S("(5,+);(5,+);(9,-)");
  const auto q = exp_gibbs_learner(dom, s, {1.0});

  // oracle: unmerged weights for the three examples, then pooled by point
  const double u5 = std::exp(-oracle_loss(5, s));
  const double u9 = std::exp(-oracle_loss(9, s));
  const double z = 2.0 * u5 + u9;
  REQUIRE(q.atoms().size() == 2);
  CHECK(q.weight_of(Hypothesis::threshold(5)) == doctest::Approx(2.0 * u5 / z).epsilon(1e-14));
  CHECK(q.weight_of(Hypothesis::threshold(9)) == doctest::Approx(u9 / z).epsilon(1e-14));
}

TEST_CASE("exp learner rejects bad input") {
  const Domain dom(10);
  CHECK_THROWS_AS(exp_gibbs_learner(dom, Sample{}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(exp_gibbs_learner(dom, S("(11,+)"), {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(exp_gibbs_learner(dom, S("(3,+)"), {-1.0}), std::invalid_argument);
}

TEST_CASE("exp learner is deterministic") {
  const Domain dom(20);
  const Sample s = S("(3,-);(17,+);(9,+);(3,-)");
  const auto a = exp_gibbs_learner(dom, s, {2.5});
  const auto b = exp_gibbs_learner(dom, s, {2.5});
  REQUIRE(a.atoms().size() == b.atoms().size());
  for (std::size_t i = 0; i < a.atoms().size(); ++i)
    CHECK(a.atoms()[i].w == b.atoms()[i].w);  // bitwise
}

TEST_CASE("the minimum-loss atom of the exp learner carries weight >= 1/m") {
  // sum of m terms each <= exp(-beta*min) makes the min-loss weight >= 1/m;
  // checked by enumeration over all samples with distinct points, m <= 5
  const Domain dom(8);
  for (double beta : {0.0, 0.5, 1.0}) {
    for (int m = 1; m <= 5; ++m) {
      std::vector<int> idx(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
      // iterate subsets of {1..8} of size m and all label patterns
      while (true) {
        for (int mask = 0; mask < (1 << m); ++mask) {
          std::vector<LabeledExample> ex;
          for (int i = 0; i < m; ++i)
            ex.push_back({idx[static_cast<std::size_t>(i)], (mask >> i) & 1 ? 1 : -1});
          const Sample s{ex};
          const auto q = exp_gibbs_learner(dom, s, {beta});
          Rational best = empirical_loss(Hypothesis::threshold(ex[0].x), s);
          Hypothesis best_h = Hypothesis::threshold(ex[0].x);
          for (const auto& e : s.examples) {
            const Rational loss = empirical_loss(Hypothesis::threshold(e.x), s);
            if (loss < best) { best = loss; best_h = Hypothesis::threshold(e.x); }
          }
          CHECK(q.weight_of(best_h) >= 1.0 / m - 1e-12);
        }
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == 8 - m + i + 1) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
          idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
}

TEST_CASE("erm picks the max-margin midpoint threshold") {
  const Domain dom(10);
  const auto q1 = erm_learner(dom, S("(1,-);(5,+);(8,+)"));
  REQUIRE(q1.atoms().size() == 1);
  CHECK(q1.atoms()[0].h == Hypothesis::threshold(3));  // a=1, b=5

  // all-negative: a=7, b=n+1=11, k = floor(18/2) = 9
  const auto q2 = erm_learner(dom, S("(7,-);(2,-)"));
  CHECK(q2.atoms()[0].h == Hypothesis::threshold(9));

  // single positive: a=0, b=4
  const auto q3 = erm_learner(dom, S("(4,+)"));
  CHECK(q3.atoms()[0].h == Hypothesis::threshold(2));

  CHECK_THROWS_AS(erm_learner(dom, S("(5,-);(1,+)")), std::invalid_argument);
}

TEST_CASE("erm output has zero empirical loss on realizable samples") {
  const Domain dom(16);
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = static_cast<int>(rng.uniform_int(0, 16));
    std::vector<LabeledExample> ex;
    const int m = static_cast<int>(rng.uniform_int(1, 6));
    for (int i = 0; i < m; ++i) {
      const int x = static_cast<int>(rng.uniform_int(1, 16));
      ex.push_back({x, oracle_predict(k, x)});
    }
    const Sample s{ex};
    const auto q = erm_learner(dom, s);
    CHECK(empirical_loss(q.atoms()[0].h, s) == Rational(0));
  }
}

TEST_CASE("threshold cover has 1/eps cells within eps/2 of every threshold") {
  const auto cover = threshold_cover(1024, 0.125);
  CHECK(cover == std::vector<int>{64, 192, 320, 448, 576, 704, 832, 960});

  // uniform-marginal distance |k - c| / n stays within eps/2
  const int n = 64;
  const auto small = threshold_cover(n, 0.125);
  CHECK(small.size() == 8);
  for (int k = 0; k <= n; ++k) {
    int best = n + 1;
    for (int c : small) best = std::min(best, std::abs(k - c));
    CHECK(static_cast<double>(best) / n <= 0.125 / 2.0 + 1e-12);
  }
}

TEST_CASE("cover erm minimizes empirical loss over the cover") {
  const Domain dom(64);
  const Sample s = S("(10,-);(20,+);(30,+)");
  const auto q = cover_erm_learner(dom, s, 0.125);
  REQUIRE(q.atoms().size() == 1);
  const int chosen = q.atoms()[0].h.threshold_value();
  for (int c : threshold_cover(64, 0.125))
    CHECK(empirical_loss(Hypothesis::threshold(chosen), s) <=
          empirical_loss(Hypothesis::threshold(c), s));
  // accepts non-realizable samples
  CHECK_NOTHROW(cover_erm_learner(dom, S("(40,-);(2,+)"), 0.125));
}

TEST_CASE("table learner resolves samples from a JSON file") {
  const std::string path = "test_table_learner.json";
  {
    std::ofstream f(path);
    f << R"json({"n": 6, "entries": [
      {"sample": "(1,-);(3,+)",
       "posterior": [{"threshold": 2, "weight": 0.5},
                      {"table": [-1, 1, -1, 1, 1, 1], "weight": 0.5}]}
    ]})json";
  }
  const Domain dom(6);
  const auto learner = make_table_learner(dom, path);
  const auto q = learner(S("(1,-);(3,+)"));
  CHECK(q.atoms().size() == 2);
  CHECK(q.prob_positive(2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(learner(S("(2,-);(3,+)")), std::invalid_argument);
  CHECK_THROWS_AS(make_table_learner(Domain(7), path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("learner spec parsing") {
  const Domain dom(16);
  CHECK(parse_learner("exp:beta=2.0", dom).name == "exp:beta=" + std::to_string(2.0));
  CHECK(parse_learner("erm", dom)(S("(4,+)")).atoms()[0].h == Hypothesis::threshold(2));
  CHECK(parse_learner("const:k=5", dom)(S("(4,+)")).atoms()[0].h == Hypothesis::threshold(5));
  CHECK_NOTHROW(parse_learner("cover-erm:eps=0.25", dom));
  CHECK_THROWS_AS(parse_learner("bogus", dom), std::invalid_argument);
  CHECK_THROWS_AS(parse_learner("const:k=99", dom), std::invalid_argument);
}
