#pragma once

// Learning rules mapping samples to Gibbs classifiers: the exp-weighted
// family, max-margin ERM, ERM over an ε-cover, constants, and table-driven
// learners loaded from JSON (for adversarial stress tests).

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pblab/core.hpp"

namespace pblab {

struct TemperedExpParams {
  double beta = 1.0;  // inverse temperature; beta = 1 is the canonical rule
};

/// Posterior supported on the sample-point thresholds {h_{x_i}}, with
/// weight(h_{x_i}) ∝ exp(−beta · empirical_loss(h_{x_i}, S)). Duplicated
/// points merge by weight addition. Weights are computed in ascending
/// point order, so equivalent samples get bitwise-identical weight vectors.
inline GibbsClassifier exp_gibbs_learner(const Domain& dom, const Sample& s,
                                         TemperedExpParams params = {}) {
  if (s.size() == 0) throw std::invalid_argument("exp_gibbs_learner: empty sample");
  if (params.beta < 0.0) throw std::invalid_argument("exp_gibbs_learner: beta must be >= 0");
  for (const auto& e : s.examples)
    if (!dom.contains(e.x)) throw std::invalid_argument("exp_gibbs_learner: point outside domain");

  std::vector<std::pair<int, double>> weighted;  // (threshold, unnormalized weight)
  weighted.reserve(s.examples.size());
  for (const auto& e : s.examples)
    weighted.emplace_back(e.x, std::exp(-params.beta * empirical_loss(Hypothesis::threshold(e.x), s).to_double()));
  std::sort(weighted.begin(), weighted.end());

  std::vector<std::pair<Hypothesis, double>> atoms;
  double z = 0.0;
  for (const auto& [k, w] : weighted) {
    if (!atoms.empty() && atoms.back().first.threshold_value() == k)
      atoms.back().second += w;
    else
      atoms.emplace_back(Hypothesis::threshold(k), w);
    z += w;
  }
  for (auto& [h, w] : atoms) w /= z;
  return GibbsClassifier::from_atoms(dom.n, std::move(atoms));
}

/// Point mass on the max-margin consistent threshold ⌊(a+b)/2⌋, where a is
/// the largest negative point (0 if none) and b the smallest positive point
/// (n+1 if none). Rejects non-realizable input.
inline GibbsClassifier erm_learner(const Domain& dom, const Sample& s) {
  if (s.size() == 0) throw std::invalid_argument("erm_learner: empty sample");
  if (!is_realizable(s)) throw std::invalid_argument("erm_learner: sample not realizable");
  int a = 0, b = dom.n + 1;
  for (const auto& e : s.examples) {
    if (!dom.contains(e.x)) throw std::invalid_argument("erm_learner: point outside domain");
    if (e.y == -1) a = std::max(a, e.x);
    else b = std::min(b, e.x);
  }
  const int k = (a + b) / 2;
  return GibbsClassifier::point_mass(dom.n, Hypothesis::threshold(k));
}

/// Thresholds at the midpoints of 1/eps cells: an ε-cover of the threshold
/// class under any marginal dominated by uniform (every h_k is within ε/2
/// of the nearest cover element under the uniform marginal).
inline std::vector<int> threshold_cover(int n, double eps) {
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("threshold_cover: eps must be in (0,1]");
  const int cells = std::max(1, static_cast<int>(std::llround(1.0 / eps)));
  std::vector<int> cover;
  cover.reserve(static_cast<std::size_t>(cells));
  for (int j = 1; j <= cells; ++j) {
    int k = static_cast<int>(std::llround((2.0 * j - 1.0) * n / (2.0 * cells)));
    k = std::clamp(k, 0, n);
    if (cover.empty() || cover.back() != k) cover.push_back(k);
  }
  return cover;
}

/// ERM restricted to the ε-cover: point mass on the cover threshold with
/// minimal empirical loss (smallest index on ties). Unlike erm_learner it
/// accepts non-realizable samples; its output prior-KL against the uniform
/// cover prior is bounded by ln|cover| regardless of the domain size.
inline GibbsClassifier cover_erm_learner(const Domain& dom, const Sample& s, double eps) {
  if (s.size() == 0) throw std::invalid_argument("cover_erm_learner: empty sample");
  const auto cover = threshold_cover(dom.n, eps);
  int best = cover.front();
  Rational best_loss = empirical_loss(Hypothesis::threshold(cover.front()), s);
  for (std::size_t i = 1; i < cover.size(); ++i) {
    Rational loss = empirical_loss(Hypothesis::threshold(cover[i]), s);
    if (loss < best_loss) {
      best = cover[i];
      best_loss = loss;
    }
  }
  return GibbsClassifier::point_mass(dom.n, Hypothesis::threshold(best));
}

/// A deterministic learning rule with a descriptive name. Any mapping can be
/// registered through from_function, so the homogeneity checker can be run
/// against adversarial or noisy-by-construction rules.
struct Learner {
  std::string name;
  Domain domain{1};
  std::function<GibbsClassifier(const Sample&)> fn;

  GibbsClassifier operator()(const Sample& s) const { return fn(s); }

  static Learner from_function(std::string name, Domain dom,
                               std::function<GibbsClassifier(const Sample&)> fn) {
    return Learner{std::move(name), dom, std::move(fn)};
  }
};

inline Learner make_exp_learner(Domain dom, double beta) {
  return Learner::from_function(
      "exp:beta=" + std::to_string(beta), dom,
      [dom, beta](const Sample& s) { return exp_gibbs_learner(dom, s, {beta}); });
}

inline Learner make_erm_learner(Domain dom) {
  return Learner::from_function("erm", dom,
                                [dom](const Sample& s) { return erm_learner(dom, s); });
}

inline Learner make_cover_erm_learner(Domain dom, double eps) {
  return Learner::from_function(
      "cover-erm:eps=" + std::to_string(eps), dom,
      [dom, eps](const Sample& s) { return cover_erm_learner(dom, s, eps); });
}

inline Learner make_const_learner(Domain dom, int k) {
  if (k < 0 || k > dom.n) throw std::invalid_argument("const learner: k outside 0..n");
  return Learner::from_function(
      "const:k=" + std::to_string(k), dom, [dom, k](const Sample&) {
        return GibbsClassifier::point_mass(dom.n, Hypothesis::threshold(k));
      });
}

/// Table-driven learner from a JSON file enumerating sample → posterior
/// pairs for tiny domains:
///   { "n": 6, "entries": [ { "sample": "(1,-);(3,+)",
///       "posterior": [ {"threshold": 2, "weight": 0.5},
///                      {"table": [-1,1,1,1,1,1], "weight": 0.5} ] } ] }
inline Learner make_table_learner(Domain dom, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("table learner: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("n").get<int>() != dom.n)
    throw std::invalid_argument("table learner: file domain size != requested domain");

  auto mapping = std::make_shared<std::map<std::string, GibbsClassifier>>();
  for (const auto& entry : j.at("entries")) {
    const std::string key = to_string(parse_sample(entry.at("sample").get<std::string>()));
    std::vector<std::pair<Hypothesis, double>> atoms;
    for (const auto& atom : entry.at("posterior")) {
      double w = atom.at("weight").get<double>();
      if (atom.contains("threshold"))
        atoms.emplace_back(Hypothesis::threshold(atom.at("threshold").get<int>()), w);
      else
        atoms.emplace_back(Hypothesis::table(atom.at("table").get<std::vector<std::int8_t>>()), w);
    }
    mapping->emplace(key, GibbsClassifier::from_atoms(dom.n, std::move(atoms)));
  }
  return Learner::from_function("table:" + path, dom, [mapping](const Sample& s) {
    auto it = mapping->find(to_string(s));
    if (it == mapping->end())
      throw std::invalid_argument("table learner: no posterior for sample " + to_string(s));
    return it->second;
  });
}

/// CLI learner spec: exp:beta=<f> | erm | cover-erm:eps=<f> | const:k=<int>
/// | table:<path>.
inline Learner parse_learner(const std::string& spec, Domain dom) {
  auto num_after = [&](const std::string& prefix) {
    return spec.substr(prefix.size());
  };
  if (spec == "erm") return make_erm_learner(dom);
  if (spec.rfind("exp:beta=", 0) == 0) return make_exp_learner(dom, std::stod(num_after("exp:beta=")));
  if (spec.rfind("cover-erm:eps=", 0) == 0)
    return make_cover_erm_learner(dom, std::stod(num_after("cover-erm:eps=")));
  if (spec.rfind("const:k=", 0) == 0) return make_const_learner(dom, std::stoi(num_after("const:k=")));
  if (spec.rfind("table:", 0) == 0) return make_table_learner(dom, num_after("table:"));
  throw std::invalid_argument("unknown learner spec: " + spec);
}

}  // namespace pblab
