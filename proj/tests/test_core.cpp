#include <doctest.h>

#include <map>
#include <vector>

#include "pblab/core.hpp"
#include "pblab/rng.hpp"

using namespace pblab;

namespace {

// test-local threshold semantics, independent of Hypothesis::predict
int oracle_predict(int k, int x) { return x <= k ? -1 : +1; }

Sample S(const std::string& text) { return parse_sample(text); }

}  // namespace

TEST_CASE("predict on thresholds") {
  const Domain dom(10);
  CHECK(predict(dom, Hypothesis::threshold(5), 5) == -1);
  CHECK(predict(dom, Hypothesis::threshold(0), 1) == +1);
  CHECK(predict(dom, Hypothesis::threshold(3), 4) == +1);
  CHECK_THROWS_AS(predict(dom, Hypothesis::threshold(3), 11), std::invalid_argument);
  CHECK_THROWS_AS(predict(dom, Hypothesis::threshold(3), 0), std::invalid_argument);

  // exhaustive agreement with the oracle
  for (int k = 0; k <= 10; ++k)
    for (int x = 1; x <= 10; ++x)
      CHECK(predict(dom, Hypothesis::threshold(k), x) == oracle_predict(k, x));
}

TEST_CASE("table hypotheses canonicalize to thresholds when monotone") {
  const auto t = Hypothesis::table({-1, -1, 1, 1});
  CHECK(t.is_threshold());
  CHECK(t.threshold_value() == 2);
  CHECK(Hypothesis::table({1, 1, 1}).threshold_value() == 0);
  CHECK(Hypothesis::table({-1, -1, -1}).threshold_value() == 3);

  const auto zigzag = Hypothesis::table({-1, 1, -1, 1});
  CHECK(!zigzag.is_threshold());
  CHECK(zigzag.predict(2) == 1);
  CHECK(zigzag.predict(3) == -1);
  CHECK_THROWS_AS(zigzag.predict(5), std::invalid_argument);
  CHECK_THROWS_AS(Hypothesis::table({0, 1}), std::invalid_argument);
}

TEST_CASE("empirical loss of hypotheses is an exact rational") {
  const Sample s = S("(1,-);(5,+);(8,+)");
  CHECK(empirical_loss(Hypothesis::threshold(1), s) == Rational(0));
  CHECK(empirical_loss(Hypothesis::threshold(5), s) == Rational(1, 3));

  // any hypothesis has zero loss on a sample labeled by itself
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = static_cast<int>(rng.uniform_int(0, 10));
    std::vector<LabeledExample> ex;
    for (int i = 0; i < 4; ++i) {
      const int x = static_cast<int>(rng.uniform_int(1, 10));
      ex.push_back({x, oracle_predict(k, x)});
    }
    CHECK(empirical_loss(Hypothesis::threshold(k), Sample(ex)) == Rational(0));
  }

  CHECK_THROWS_AS(empirical_loss(Hypothesis::threshold(1), Sample{}), std::invalid_argument);
}

TEST_CASE("gibbs empirical loss equals the weight-average of atom losses") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<Hypothesis, double>> atoms;
    double total = 0.0;
    std::vector<double> raw;
    for (int a = 0; a < 4; ++a) {
      raw.push_back(0.1 + rng.uniform01());
      total += raw.back();
    }
    for (int a = 0; a < 4; ++a)
      atoms.emplace_back(Hypothesis::threshold(static_cast<int>(rng.uniform_int(0, 12))), raw[static_cast<std::size_t>(a)] / total);
    const auto q = GibbsClassifier::from_atoms(12, atoms);

    std::vector<LabeledExample> ex;
    for (int i = 0; i < 5; ++i)
      ex.push_back({static_cast<int>(rng.uniform_int(1, 12)), rng.uniform01() < 0.5 ? -1 : 1});
    const Sample s{ex};

    double direct = 0.0;  // independent route: per-atom direct counting
    for (const auto& atom : q.atoms()) {
      int mistakes = 0;
      for (const auto& e : s.examples)
        if (oracle_predict(atom.h.threshold_value(), e.x) != e.y) ++mistakes;
      direct += atom.w * mistakes / static_cast<double>(s.size());
    }
    CHECK(empirical_loss(q, s) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("population loss") {
  const auto uniform4 = RealizableDistribution(
      4, {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}, 2);
  CHECK(population_loss(Hypothesis::threshold(2), uniform4) == Rational(0));
  CHECK(population_loss(Hypothesis::threshold(0), uniform4) == Rational(1, 2));

  const auto mix = GibbsClassifier::from_rational_atoms(
      4, {{Hypothesis::threshold(0), Rational(1, 2)}, {Hypothesis::threshold(4), Rational(1, 2)}});
  CHECK(*population_loss_exact(mix, uniform4) == Rational(1, 2));
  CHECK(population_loss(GibbsClassifier::point_mass(4, Hypothesis::threshold(2)), uniform4) == 0.0);

  const auto other = GibbsClassifier::point_mass(6, Hypothesis::threshold(2));
  CHECK_THROWS_AS(population_loss(other, uniform4), std::invalid_argument);
}

TEST_CASE("pos counts distinct points at or below x") {
  const Sample s = S("(1,-);(5,+);(8,+)");
  CHECK(pos(5, s) == 2);
  CHECK(pos(0 + 1, s) == 1);  // x=1 is itself a sample point
  CHECK(pos(6, S("(3,-);(6,+);(4,+)")) == 3);

  // set semantics on duplicates
  const Sample dup = S("(5,+);(5,+);(9,-)");
  CHECK(pos(5, dup) == 1);
  CHECK(pos(9, dup) == 2);

  // below every sample point
  CHECK(pos(2, S("(3,-);(6,+)")) == 0);

  // nondecreasing in x
  for (int x = 1; x < 10; ++x) CHECK(pos(x, s) <= pos(x + 1, s));
}

TEST_CASE("order type") {
  CHECK(order_type(S("(1,-);(5,+);(8,+)")).pi == std::vector<int>{1, 2, 3});
  CHECK(order_type(S("(3,-);(6,+);(4,+)")).pi == std::vector<int>{1, 3, 2});
  CHECK(order_type(S("(4,+)")).pi == std::vector<int>{1});
  CHECK(order_type(S("(5,+);(5,+);(9,-)")).pi == std::vector<int>{1, 1, 2});
  CHECK(!order_type(S("(5,+);(5,+);(9,-)")).is_permutation());
  CHECK(order_type(S("(3,-);(6,+);(4,+)")).is_permutation());
}

TEST_CASE("order type is invariant under order-preserving relabelings") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    // strictly increasing random map on {1..12}
    std::vector<int> f(13);
    int value = 0;
    for (int x = 1; x <= 12; ++x) {
      value += static_cast<int>(rng.uniform_int(1, 5));
      f[static_cast<std::size_t>(x)] = value;
    }
    std::vector<LabeledExample> ex, mapped;
    const int m = static_cast<int>(rng.uniform_int(1, 4));
    for (int i = 0; i < m; ++i) {
      const int x = static_cast<int>(rng.uniform_int(1, 12));
      const int y = rng.uniform01() < 0.5 ? -1 : 1;
      ex.push_back({x, y});
      mapped.push_back({f[static_cast<std::size_t>(x)], y});
    }
    CHECK(order_type(Sample(ex)) == order_type(Sample(mapped)));
  }
}

TEST_CASE("equivalence examples and exhaustive agreement with order types") {
  CHECK(equivalent(S("(1,-);(5,+);(8,+)"), S("(10,-);(70,+);(100,+)")));
  CHECK(!equivalent(S("(1,-);(5,+);(8,+)"), S("(3,-);(6,+);(4,+)")));
  const Sample s = S("(2,-);(9,+)");
  CHECK(equivalent(s, s));
  CHECK_THROWS_AS(equivalent(s, S("(1,+)")), std::invalid_argument);

  // equivalent(S,S') <=> order_type(S) == order_type(S'), and <=> the
  // definition's raw comparisons; exhaustive over m=2, points in {1..8}
  for (int x1 = 1; x1 <= 8; ++x1)
    for (int x2 = 1; x2 <= 8; ++x2)
      for (int labels = 0; labels < 4; ++labels) {
        const Sample a{{{x1, labels & 1 ? 1 : -1}, {x2, labels & 2 ? 1 : -1}}};
        for (int z1 = 1; z1 <= 8; ++z1)
          for (int z2 = 1; z2 <= 8; ++z2) {
            const Sample b{{{z1, labels & 1 ? 1 : -1}, {z2, labels & 2 ? 1 : -1}}};
            // raw Definition: pairwise order agreement + equal labels
            const bool raw = ((x1 <= x2) == (z1 <= z2)) && ((x2 <= x1) == (z2 <= z1));
            CHECK(equivalent(a, b) == raw);
            CHECK((order_type(a) == order_type(b)) == raw);
          }
      }
}

TEST_CASE("equivalence matches order types exhaustively at m=3") {
  // full cross-check on a reduced point range to keep the pair count sane
  std::vector<Sample> all;
  for (int x1 = 1; x1 <= 5; ++x1)
    for (int x2 = 1; x2 <= 5; ++x2)
      for (int x3 = 1; x3 <= 5; ++x3)
        all.push_back(Sample{{{x1, -1}, {x2, 1}, {x3, 1}}});
  for (const auto& a : all)
    for (const auto& b : all)
      CHECK(equivalent(a, b) == (order_type(a) == order_type(b)));
}

TEST_CASE("realizability") {
  CHECK(is_realizable(S("(1,-);(5,+);(8,+)")));
  CHECK(is_realizable(S("(3,+);(1,+);(9,+)")));
  CHECK(!is_realizable(S("(5,-);(1,+)")));

  // cross-check against brute force over all n+1 thresholds, n=6, m<=3
  const int n = 6;
  for (int m = 1; m <= 3; ++m) {
    std::vector<int> point(static_cast<std::size_t>(m), 1);
    while (true) {
      for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<LabeledExample> ex;
        for (int i = 0; i < m; ++i)
          ex.push_back({point[static_cast<std::size_t>(i)], (mask >> i) & 1 ? 1 : -1});
        const Sample s{ex};
        bool brute = false;
        for (int k = 0; k <= n && !brute; ++k)
          brute = empirical_loss(Hypothesis::threshold(k), s) == Rational(0);
        CHECK(is_realizable(s) == brute);
      }
      int i = m - 1;
      while (i >= 0 && point[static_cast<std::size_t>(i)] == n) { point[static_cast<std::size_t>(i)] = 1; --i; }
      if (i < 0) break;
      ++point[static_cast<std::size_t>(i)];
    }
  }
}

TEST_CASE("sample literal parsing and printing") {
  const Sample s = S("(1,-);(5,+);(8,+)");
  CHECK(s.size() == 3);
  CHECK(s.examples[0].x == 1);
  CHECK(s.examples[0].y == -1);
  CHECK(to_string(s) == "(1,-);(5,+);(8,+)");
  CHECK(to_string(parse_sample(" ( 12 , + ) ; (3,-) ")) == "(12,+);(3,-)");
  CHECK_THROWS_AS(parse_sample(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_sample("(1,*)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sample("(x,+)"), std::invalid_argument);

  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledExample> ex;
    const int m = static_cast<int>(rng.uniform_int(1, 6));
    for (int i = 0; i < m; ++i)
      ex.push_back({static_cast<int>(rng.uniform_int(1, 99)), rng.uniform01() < 0.5 ? -1 : 1});
    const Sample original{ex};
    CHECK(parse_sample(to_string(original)) == original);
  }
}

TEST_CASE("gibbs classifier canonicalization") {
  // duplicates merge; a table atom equal to a threshold merges with it
  const auto q = GibbsClassifier::from_atoms(
      4, {{Hypothesis::threshold(2), 0.25},
          {Hypothesis::table({-1, -1, 1, 1}), 0.25},
          {Hypothesis::threshold(0), 0.5}});
  CHECK(q.atoms().size() == 2);
  CHECK(q.weight_of(Hypothesis::threshold(2)) == doctest::Approx(0.5));

  CHECK_THROWS_AS(GibbsClassifier::from_atoms(4, {{Hypothesis::threshold(1), 0.5}}),
                  std::invalid_argument);  // sums to 0.5
  CHECK_THROWS_AS(GibbsClassifier::from_atoms(4, {{Hypothesis::threshold(1), -0.2},
                                                  {Hypothesis::threshold(2), 1.2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GibbsClassifier::from_atoms(4, {{Hypothesis::table({1, -1}), 1.0}}),
                  std::invalid_argument);  // genuine table, length != domain

  // zero-weight atoms are dropped
  const auto z = GibbsClassifier::from_atoms(4, {{Hypothesis::threshold(1), 0.0},
                                                 {Hypothesis::threshold(2), 1.0}});
  CHECK(z.atoms().size() == 1);

  // rational constructor keeps exact weights through merging
  const auto r = GibbsClassifier::from_rational_atoms(
      4, {{Hypothesis::threshold(2), Rational(1, 3)},
          {Hypothesis::table({-1, -1, 1, 1}), Rational(1, 3)},
          {Hypothesis::threshold(4), Rational(1, 3)}});
  CHECK(r.atoms().size() == 2);
  REQUIRE(r.exact_weights().has_value());
  CHECK((*r.exact_weights())[0] == Rational(2, 3));

  // probability of predicting +1
  CHECK(q.prob_positive(1) == doctest::Approx(0.5));   // only h_0 fires
  CHECK(q.prob_positive(3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(q.prob_positive(5), std::invalid_argument);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
  CHECK(Rational(1, 2) - Rational(2, 3) == Rational(-1, 6));
  CHECK(Rational(3, 4) / Rational(3, 2) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);

  Rational out;
  CHECK(Rational::from_double_dyadic(0.25, out));
  CHECK(out == Rational(1, 4));
  CHECK(Rational::from_double_dyadic(0.75, out));
  CHECK(out == Rational(3, 4));
  CHECK(!Rational::from_double_dyadic(1.0 / 3.0, out));

  // reductions that leave 64 bits are refused rather than rounded
  const Rational big(INT64_MAX / 2, 3);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(GibbsClassifier::from_rational_atoms(
                      4, {{Hypothesis::threshold(1), Rational(1, 3)}}),
                  std::invalid_argument);  // sums to 1/3
}

TEST_CASE("realizable distribution validation") {
  CHECK_THROWS_AS(RealizableDistribution(2, {Rational(1, 2), Rational(1, 4)}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(RealizableDistribution(2, {Rational(1, 2), Rational(1, 2)}, 3),
                  std::invalid_argument);
  const RealizableDistribution d(2, {Rational(1, 2), Rational(1, 2)}, 1);
  CHECK(d.label(1) == -1);
  CHECK(d.label(2) == +1);
}
