#pragma once

// KL divergences, the PAC-Bayes generalization bound, and optimal-prior
// estimation. KL values live in [0, +inf]; +inf is exactly the failure of
// absolute continuity (the footnote convention for mismatched support).

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pblab/core.hpp"
#include "pblab/learners.hpp"
#include "pblab/parallel.hpp"
#include "pblab/rng.hpp"

namespace pblab {

/// Nonnegative real or +infinity.
using ExtendedReal = double;

inline constexpr ExtendedReal kInfiniteKl = std::numeric_limits<double>::infinity();

/// KL(Q ‖ P) = Σ_h Q(h) ln(Q(h)/P(h)) over Q's atoms, natural log. Atoms
/// match by canonical hypothesis equality (semantic on the shared domain);
/// an atom of Q that P does not charge yields +inf.
inline ExtendedReal kl_divergence(const GibbsClassifier& q, const GibbsClassifier& p) {
  if (q.domain_size() != p.domain_size())
    throw std::invalid_argument("kl_divergence: mixtures over different domains");
  double sum = 0.0;
  for (const auto& a : q.atoms()) {
    const double wp = p.weight_of(a.h);
    if (wp <= 0.0) return kInfiniteKl;
    sum += a.w * std::log(a.w / wp);
  }
  return sum < 0.0 ? 0.0 : sum;  // clamp float noise; Gibbs' inequality gives >= 0
}

/// Binary KL: q ln(q/p) + (1−q) ln((1−q)/(1−p)), with 0·ln 0 = 0.
inline ExtendedReal kl_bernoulli(double q, double p) {
  if (q < 0.0 || q > 1.0 || p < 0.0 || p > 1.0)
    throw std::invalid_argument("kl_bernoulli: arguments must be in [0,1]");
  double sum = 0.0;
  if (q > 0.0) {
    if (p == 0.0) return kInfiniteKl;
    sum += q * std::log(q / p);
  }
  if (q < 1.0) {
    if (p == 1.0) return kInfiniteKl;
    sum += (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
  }
  return sum < 0.0 ? 0.0 : sum;
}

struct BoundReport {
  double empirical_loss = 0.0;
  ExtendedReal kl = 0.0;
  int m = 2;
  double delta = 0.05;
  ExtendedReal bound = 0.0;
};

/// empirical_loss + sqrt((kl + ln(2·sqrt(m)/delta)) / (2(m−1))), the
/// classical concrete instantiation of the PAC-Bayes bound. +inf propagates.
inline BoundReport mcallester_bound(double empirical_loss, ExtendedReal kl, int m, double delta) {
  if (m < 2) throw std::invalid_argument("mcallester_bound: m must be >= 2");
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("mcallester_bound: delta must be in (0,1)");
  BoundReport r;
  r.empirical_loss = empirical_loss;
  r.kl = kl;
  r.m = m;
  r.delta = delta;
  if (std::isinf(kl)) {
    r.bound = kInfiniteKl;
  } else {
    r.bound = empirical_loss +
              std::sqrt((kl + std::log(2.0 * std::sqrt(static_cast<double>(m)) / delta)) /
                        (2.0 * (m - 1)));
  }
  return r;
}

inline nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["empirical_loss"] = r.empirical_loss;
  j["kl"] = std::isinf(r.kl) ? nlohmann::json("inf") : nlohmann::json(r.kl);
  j["m"] = r.m;
  j["delta"] = r.delta;
  j["bound"] = std::isinf(r.bound) ? nlohmann::json("inf") : nlohmann::json(r.bound);
  return j;
}

/// Draw a sample of size m from D (points via the marginal, labels by the
/// true threshold).
inline Sample draw_sample(const RealizableDistribution& d, int m, Rng& rng,
                          const std::vector<double>& cumulative) {
  std::vector<LabeledExample> ex;
  ex.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int x = static_cast<int>(rng.pick_from_cumulative(cumulative)) + 1;
    ex.push_back({x, d.label(x)});
  }
  return Sample(std::move(ex));
}

/// The prior minimizing E_S[KL(Q_S ‖ P)] is the mixture E_S[Q_S]; this
/// estimates it. Exact enumeration over all n^m samples when that count is
/// at most 10^6 (ignoring trials/seed), Monte Carlo otherwise. Trial seeds
/// derive from (seed, trial), and the atom accumulation runs in a fixed
/// order, so the result does not depend on execution schedule.
inline GibbsClassifier estimate_optimal_prior(const Learner& learner,
                                              const RealizableDistribution& d, int m,
                                              long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_optimal_prior: trials must be >= 1");
  if (m < 1) throw std::invalid_argument("estimate_optimal_prior: m must be >= 1");
  std::map<Hypothesis, double> acc;

  double exact_count = 1.0;
  for (int i = 0; i < m; ++i) exact_count *= d.n;
  const bool exact = exact_count <= 1e6;

  if (exact) {
    std::vector<int> point(static_cast<std::size_t>(m), 1);
    while (true) {
      double prob = 1.0;
      for (int x : point) prob *= d.marginal[static_cast<std::size_t>(x - 1)].to_double();
      if (prob > 0.0) {
        std::vector<LabeledExample> ex(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) ex[static_cast<std::size_t>(i)] = {point[static_cast<std::size_t>(i)], d.label(point[static_cast<std::size_t>(i)])};
        const GibbsClassifier q = learner(Sample(std::move(ex)));
        for (const auto& a : q.atoms()) acc[a.h] += prob * a.w;
      }
      int i = m - 1;
      while (i >= 0 && point[static_cast<std::size_t>(i)] == d.n) { point[static_cast<std::size_t>(i)] = 1; --i; }
      if (i < 0) break;
      ++point[static_cast<std::size_t>(i)];
    }
  } else {
    const auto cumulative = d.cumulative();
    const double w = 1.0 / static_cast<double>(trials);
    // Per-trial slots, merged in trial order: parallel and serial runs agree.
    std::vector<std::vector<GibbsClassifier::Atom>> slots(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
      slots[t] = learner(draw_sample(d, m, rng, cumulative)).atoms();
    });
    for (const auto& slot : slots)
      for (const auto& a : slot) acc[a.h] += w * a.w;
  }

  std::vector<std::pair<Hypothesis, double>> atoms(acc.begin(), acc.end());
  return GibbsClassifier::from_atoms(d.n, std::move(atoms));
}

}  // namespace pblab
