#pragma once

// p-profiles, exact and approximate homogeneity checking, the subset
// coloring, and tower / iterated-log / Φ numerics.
//
// A learner is γ-approximately m-homogeneous on X when for equivalent
// samples S, S' (permutation order-type) and out-of-sample query points
// with equal pos, the +1-probabilities differ by at most γ/(5m). The
// checker verifies every such 4-tuple by tracking the min/max probability
// per (equivalence-type, pos) class: the worst spread over a class equals
// the worst violation over all pairs in it.

#include <climits>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pblab/core.hpp"
#include "pblab/learners.hpp"
#include "pblab/parallel.hpp"
#include "pblab/rng.hpp"

namespace pblab {

// ---------------------------------------------------------------------------
// combination utilities

inline unsigned long long binom_capped(int n, int k, unsigned long long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    __uint128_t next = static_cast<__uint128_t>(r) * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    if (next > cap) return cap;
    r = static_cast<unsigned long long>(next);
  }
  return r;
}

/// Lexicographic iteration over all m-element index subsets of {0..n-1}.
template <class Fn>
void for_each_combination(int n, int m, Fn&& fn) {
  if (m > n || m < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// rank-th m-subset of {0..n-1} in lexicographic order.
inline std::vector<int> unrank_combination(int n, int m, unsigned long long rank) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(m));
  int next = 0;
  for (int slots = m; slots > 0; --slots) {
    for (int candidate = next; candidate < n; ++candidate) {
      unsigned long long below = binom_capped(n - candidate - 1, slots - 1, ULLONG_MAX >> 1);
      if (rank < below) {
        idx.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= below;
    }
  }
  return idx;
}

// ---------------------------------------------------------------------------
// p-profiles

/// The list p_0..p_m of +1-probabilities indexed by pos, for one
/// equivalence type. Entries with no admissible query point stay absent.
struct PProfile {
  EquivalenceType type;
  std::vector<std::optional<double>> p;  // size m+1, index = pos
  double max_deviation = 0.0;

  bool complete() const {
    for (const auto& v : p)
      if (!v) return false;
    return true;
  }
};

namespace detail {

struct ClassStats {
  long long count = 0;
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) {
    ++count;
    sum += v;
    if (v < min) min = v;
    if (v > max) max = v;
  }
};

}  // namespace detail

/// Profile of a learner for one permutation type, averaged over `reps`
/// representative samples drawn from X (evenly strided through the
/// combination order, deterministic). max_deviation is the largest spread
/// of the probabilities within one pos class, within and across
/// representatives; it is 0 for an exactly homogeneous learner.
inline PProfile p_profile(const Learner& learner, const EquivalenceType& type,
                          std::vector<int> X, long long reps) {
  if (!type.is_permutation()) throw std::invalid_argument("p_profile: type is not a permutation");
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  const int m = type.m();
  if (static_cast<int>(X.size()) < m + 1)
    throw std::invalid_argument("p_profile: need at least m+1 points");
  if (reps < 1) throw std::invalid_argument("p_profile: reps must be >= 1");

  const int nx = static_cast<int>(X.size());
  const unsigned long long total = binom_capped(nx, m, 1ULL << 62);
  const unsigned long long use = std::min<unsigned long long>(static_cast<unsigned long long>(reps), total);

  std::vector<detail::ClassStats> stats(static_cast<std::size_t>(m) + 1);
  for (unsigned long long j = 0; j < use; ++j) {
    const unsigned long long rank = (total == use) ? j : j * (total / use);
    const auto idx = unrank_combination(nx, m, rank);
    std::vector<int> pts(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pts[static_cast<std::size_t>(i)] = X[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    const Sample s = sample_of_type(type, pts);
    std::optional<GibbsClassifier> q;
    try {
      q = learner(s);
    } catch (const std::invalid_argument&) {
      continue;  // partial learner (e.g. ERM on a non-realizable sample)
    }
    for (int x : X) {
      if (s.contains_point(x)) continue;
      const int i = pos(x, s);
      stats[static_cast<std::size_t>(i)].add(q->prob_positive(x));
    }
  }

  PProfile out;
  out.type = type;
  out.p.resize(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    const auto& c = stats[static_cast<std::size_t>(i)];
    if (c.count == 0) continue;
    out.p[static_cast<std::size_t>(i)] = c.sum / static_cast<double>(c.count);
    out.max_deviation = std::max(out.max_deviation, c.max - c.min);
  }
  return out;
}

/// Per-sample profile: average of Q_S over the admissible query points of
/// {1..k} per pos class. Classes without an in-domain query point stay
/// absent. For an exactly homogeneous learner this equals the type profile.
inline PProfile sample_profile(const GibbsClassifier& q, const Sample& s, int k) {
  std::vector<detail::ClassStats> stats(static_cast<std::size_t>(s.points().size()) + 1);
  for (int x = 1; x <= k; ++x) {
    if (s.contains_point(x)) continue;
    stats[static_cast<std::size_t>(pos(x, s))].add(q.prob_positive(x));
  }
  PProfile out;
  out.type = order_type(s);
  out.p.resize(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i].count == 0) continue;
    out.p[i] = stats[i].sum / static_cast<double>(stats[i].count);
    out.max_deviation = std::max(out.max_deviation, stats[i].max - stats[i].min);
  }
  return out;
}

/// Exact slot profile for mixtures whose atoms are thresholds at sample
/// points or the constants h_0 / h_n: p_i is the total weight of atoms of
/// rank <= i, where the j-th smallest sample point has rank j, h_0 has rank
/// 0 and an off-sample h_n never predicts +1. This is the type-level
/// profile (defined through gap-ful representatives), so every class gets a
/// value even when the sample itself leaves a class without in-domain query
/// points. Returns nullopt when an atom is not constant on the slots.
inline std::optional<PProfile> threshold_mixture_profile(const GibbsClassifier& q,
                                                         const Sample& s) {
  const EquivalenceType type = order_type(s);
  if (!type.is_permutation()) return std::nullopt;
  const auto pts = s.points();
  const int n = q.domain_size();
  const int m = static_cast<int>(pts.size());

  std::vector<int> rank;
  rank.reserve(q.atoms().size());
  for (const auto& a : q.atoms()) {
    if (!a.h.is_threshold()) return std::nullopt;
    const int k = a.h.threshold_value();
    const auto it = std::lower_bound(pts.begin(), pts.end(), k);
    if (it != pts.end() && *it == k) rank.push_back(static_cast<int>(it - pts.begin()) + 1);
    else if (k == 0) rank.push_back(0);
    else if (k == n) rank.push_back(m + 1);  // constant −1 in-domain
    else return std::nullopt;
  }

  PProfile out;
  out.type = type;
  out.p.resize(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    double prefix = 0.0;
    for (std::size_t a = 0; a < rank.size(); ++a)
      if (rank[a] <= i) prefix += q.atoms()[a].w;
    out.p[static_cast<std::size_t>(i)] = prefix;
  }
  out.max_deviation = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// approximate homogeneity checking

struct HomogeneityWitness {
  EquivalenceType type;
  int pos_index = 0;
  Sample low_sample, high_sample;
  int low_x = 0, high_x = 0;
  double low_value = 0.0, high_value = 0.0;
};

struct HomogeneityReport {
  bool pass = true;
  double worst_violation = 0.0;  // largest |Q_S(x) − Q_{S'}(x')| over matched tuples
  double bound = 0.0;            // γ/(5m)
  bool exhaustive = true;
  double coverage = 1.0;         // fraction of sample evaluations performed
  long long learner_calls = 0;
  std::optional<HomogeneityWitness> witness;
};

/// Tests |Q_S(x) − Q_{S'}(x')| ≤ γ/(5m) over all pairs of equivalent
/// samples from X (permutation types) and pos-matched out-of-sample query
/// points. Exhaustive while the learner-application count stays within
/// `cap`; beyond that, uniformly sampled (falsification power only), with
/// the realized coverage reported.
inline HomogeneityReport check_approx_homogeneity(const Learner& learner, std::vector<int> X,
                                                  int m, double gamma,
                                                  long long cap = 10'000'000,
                                                  std::uint64_t seed = 0) {
  if (m < 1) throw std::invalid_argument("check_approx_homogeneity: m must be >= 1");
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("check_approx_homogeneity: gamma must be in (0,1)");
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  const int nx = static_cast<int>(X.size());
  if (nx < m + 1) throw std::invalid_argument("check_approx_homogeneity: need at least m+1 points");

  const auto types = enumerate_permutation_types(m);
  const unsigned long long subsets = binom_capped(nx, m, 1ULL << 62);
  const unsigned long long total_calls = subsets * types.size();

  HomogeneityReport report;
  report.bound = gamma / (5.0 * m);
  report.exhaustive = total_calls <= static_cast<unsigned long long>(cap);

  struct ClassAgg {
    bool any = false;
    double min = 0.0, max = 0.0;
    Sample min_s, max_s;
    int min_x = 0, max_x = 0;
  };

  // Worst spread within one (type, pos) class == worst violating pair.
  std::vector<std::vector<ClassAgg>> per_type(types.size());
  std::vector<long long> calls(types.size(), 0);

  auto scan_sample = [&](std::size_t ti, const Sample& s) {
    auto& classes = per_type[ti];
    std::optional<GibbsClassifier> q;
    try {
      q = learner(s);
    } catch (const std::invalid_argument&) {
      ++calls[ti];  // partial learner: the sample is outside its domain
      return;
    }
    ++calls[ti];
    for (int x : X) {
      if (s.contains_point(x)) continue;
      const int i = pos(x, s);
      const double v = q->prob_positive(x);
      auto& c = classes[static_cast<std::size_t>(i)];
      if (!c.any) {
        c.any = true;
        c.min = c.max = v;
        c.min_s = c.max_s = s;
        c.min_x = c.max_x = x;
      } else {
        if (v < c.min) { c.min = v; c.min_s = s; c.min_x = x; }
        if (v > c.max) { c.max = v; c.max_s = s; c.max_x = x; }
      }
    }
  };

  if (report.exhaustive) {
    parallel_for(types.size(), [&](std::size_t ti) {
      per_type[ti].assign(static_cast<std::size_t>(m) + 1, {});
      std::vector<int> pts(static_cast<std::size_t>(m));
      for_each_combination(nx, m, [&](const std::vector<int>& idx) {
        for (int i = 0; i < m; ++i)
          pts[static_cast<std::size_t>(i)] = X[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        scan_sample(ti, sample_of_type(types[ti], pts));
      });
    });
    report.coverage = 1.0;
  } else {
    for (auto& classes : per_type) classes.assign(static_cast<std::size_t>(m) + 1, {});
    Rng rng(derive_seed(seed, 0x686f6d6fULL));  // "homo" stream tag
    std::vector<int> pts(static_cast<std::size_t>(m));
    for (long long draw = 0; draw < cap; ++draw) {
      const std::size_t ti = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(types.size()) - 1));
      // uniform m-subset of X
      std::vector<int> chosen;
      while (static_cast<int>(chosen.size()) < m) {
        int c = static_cast<int>(rng.uniform_int(0, nx - 1));
        if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
      }
      std::sort(chosen.begin(), chosen.end());
      for (int i = 0; i < m; ++i)
        pts[static_cast<std::size_t>(i)] = X[static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])];
      scan_sample(ti, sample_of_type(types[ti], pts));
    }
    report.coverage = static_cast<double>(cap) / static_cast<double>(total_calls);
  }

  for (std::size_t ti = 0; ti < types.size(); ++ti) {
    report.learner_calls += calls[ti];
    for (int i = 0; i <= m; ++i) {
      const auto& c = per_type[ti][static_cast<std::size_t>(i)];
      if (!c.any) continue;
      const double spread = c.max - c.min;
      if (spread > report.worst_violation) {
        report.worst_violation = spread;
        HomogeneityWitness w;
        w.type = types[ti];
        w.pos_index = i;
        w.low_sample = c.min_s;
        w.high_sample = c.max_s;
        w.low_x = c.min_x;
        w.high_x = c.max_x;
        w.low_value = c.min;
        w.high_value = c.max;
        report.witness = std::move(w);
      }
    }
  }
  report.pass = report.worst_violation <= report.bound;
  if (report.pass) report.witness.reset();
  return report;
}

// ---------------------------------------------------------------------------
// tower arithmetic

/// twr_height(top): twr_1(x) = x, twr_i(x) = 2^{twr_{i-1}(x)}. Plain reals
/// embed at height 1. Heights collapse exactly under iterated_log, so tower
/// identities hold with no floating error.
struct TowerInt {
  int height = 1;
  double top = 1.0;

  TowerInt() = default;
  TowerInt(int height_, double top_) : height(height_), top(top_) {
    if (height < 1) throw std::invalid_argument("TowerInt: height must be >= 1");
  }

  friend bool operator==(const TowerInt& a, const TowerInt& b) {
    return a.height == b.height && a.top == b.top;
  }

  std::string str() const {
    if (height == 1) {
      std::ostringstream os;
      os << top;
      return os.str();
    }
    std::ostringstream os;
    os << "2^^" << height << "(" << top << ")";
    return os.str();
  }
};

/// Base-2 iterated logarithm in tower representation: each step peels a
/// tower level while one exists, otherwise takes a numeric log2.
inline TowerInt iterated_log(int k, TowerInt x) {
  if (k < 0) throw std::invalid_argument("iterated_log: k must be >= 0");
  for (int step = 0; step < k; ++step) {
    if (x.height > 1) {
      --x.height;
    } else {
      if (x.top <= 0.0) throw std::domain_error("iterated_log: log of nonpositive value");
      x.top = std::log2(x.top);
    }
  }
  return x;
}

/// Collapse to a double; +inf when the tower exceeds floating range.
inline double tower_to_double(TowerInt x) {
  while (x.height > 1) {
    if (x.top > 1024.0) return std::numeric_limits<double>::infinity();
    x.top = std::exp2(x.top);
    --x.height;
  }
  return x.top;
}

/// Order comparison via simultaneous log2 reduction (log2 is strictly
/// increasing, so order is preserved at every step).
inline bool tower_less(TowerInt a, TowerInt b) {
  while (a.height > 1 || b.height > 1) {
    bool a_dead = false, b_dead = false;
    auto step = [](TowerInt& t, bool& dead) {
      if (t.height > 1) {
        --t.height;
      } else if (t.top <= 0.0) {
        dead = true;  // log2 undefined: t is below every representable tower
      } else {
        t.top = std::log2(t.top);
      }
    };
    step(a, a_dead);
    step(b, b_dead);
    if (a_dead && b_dead) return false;
    if (a_dead) return true;
    if (b_dead) return false;
  }
  return a.top < b.top;
}

/// `d` or `2^^h(t)` meaning twr_h(t).
inline TowerInt parse_tower(const std::string& text) {
  if (text.rfind("2^^", 0) == 0) {
    const auto open = text.find('(');
    const auto close = text.find(')', open);
    if (open == std::string::npos || close == std::string::npos)
      throw std::invalid_argument("parse_tower: expected 2^^h(t): " + text);
    const int h = std::stoi(text.substr(3, open - 3));
    const double t = std::stod(text.substr(open + 1, close - open - 1));
    return TowerInt(h, t);
  }
  return TowerInt(1, std::stod(text));
}

/// Φ(m, γ, n) = log^{(m)}(n) / (10m/γ)^{3m}, in log2 space. +inf when the
/// numerator overflows doubles.
inline double phi(int m, double gamma, TowerInt n) {
  if (m < 2) throw std::invalid_argument("phi: m must be > 1");
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("phi: gamma must be in (0,1)");
  if (!tower_less(TowerInt(1, 1.0), n)) throw std::invalid_argument("phi: n must be > 1");
  const double numer = tower_to_double(iterated_log(m, n));
  if (std::isinf(numer)) return numer;
  const double denom_log2 = 3.0 * m * std::log2(10.0 * m / gamma);
  if (numer <= 0.0) return numer * std::exp2(-denom_log2);
  return std::exp2(std::log2(numer) - denom_log2);
}

/// Smallest n (as a tower) with Φ(m, γ, n) >= target:
/// log^(m)(n) >= target·(10m/γ)^{3m}  ⟺  n >= twr_{m+1}(that bound).
inline TowerInt phi_threshold_n(int m, double gamma, double target) {
  if (m < 2) throw std::invalid_argument("phi_threshold_n: m must be > 1");
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("phi_threshold_n: gamma must be in (0,1)");
  if (target <= 0.0) throw std::invalid_argument("phi_threshold_n: target must be positive");
  const double needed = target * std::pow(10.0 * m / gamma, 3.0 * m);
  return TowerInt(m + 1, needed);
}

/// Guaranteed monochromatic-subset size log^{(t-1)}(N) / (3 q log2 q).
inline double ramsey_homogeneous_size(long long q, int t, TowerInt N) {
  if (q < 2) throw std::invalid_argument("ramsey_homogeneous_size: q must be >= 2");
  if (t < 2) throw std::invalid_argument("ramsey_homogeneous_size: t must be >= 2");
  const double numer = tower_to_double(iterated_log(t - 1, N));
  if (std::isinf(numer)) return numer;
  return numer / (3.0 * static_cast<double>(q) * std::log2(static_cast<double>(q)));
}

// ---------------------------------------------------------------------------
// subset coloring

/// Rounded profile vectors per permutation equivalence-type, on the grid of
/// multiples of γ/(10m). Grid indices are integers, so key equality is
/// exact. Ties round toward the smaller multiple.
using ColorKey = std::map<EquivalenceType, std::vector<long long>>;

inline long long round_to_grid(double value, double step) {
  return static_cast<long long>(std::ceil(value / step - 0.5));
}

/// Color of an (m+1)-subset D: for every permutation type and held-out
/// index i, realize D∖{x_i} as a sample of that type, query the learner's
/// +1-probability at x_i, and round it to the grid.
inline ColorKey color_of_subset(const Learner& learner, std::vector<int> D, double gamma) {
  std::sort(D.begin(), D.end());
  if (std::adjacent_find(D.begin(), D.end()) != D.end())
    throw std::invalid_argument("color_of_subset: points must be distinct");
  const int m = static_cast<int>(D.size()) - 1;
  if (m < 1) throw std::invalid_argument("color_of_subset: need at least 2 points");
  const double step = gamma / (10.0 * m);

  ColorKey key;
  for (const auto& type : enumerate_permutation_types(m)) {
    std::vector<long long> rounded(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
      std::vector<int> rest;
      rest.reserve(D.size() - 1);
      for (int j = 0; j <= m; ++j)
        if (j != i) rest.push_back(D[static_cast<std::size_t>(j)]);
      const Sample s = sample_of_type(type, rest);
      long long cell = -1;  // sentinel: the learner rejects this sample
      try {
        cell = round_to_grid(learner(s).prob_positive(D[static_cast<std::size_t>(i)]), step);
      } catch (const std::invalid_argument&) {
      }
      rounded[static_cast<std::size_t>(i)] = cell;
    }
    key.emplace(type, std::move(rounded));
  }
  return key;
}

struct SubsetSearchResult {
  std::optional<std::vector<int>> subset;
  bool budget_exhausted = false;
  long long colorings = 0;
  std::string note;
};

/// Search for a subset of X of the requested size on which every
/// (m+1)-subset has one ColorKey: exhaustive over candidate subsets for
/// small X, greedy growth otherwise. Any returned subset is re-validated
/// with check_approx_homogeneity at level γ/(5m). Failure means the budget
/// ran out or no candidate was found, not a disproof.
inline SubsetSearchResult find_homogeneous_subset(const Learner& learner, std::vector<int> X,
                                                  int m, double gamma, int target_size,
                                                  long long coloring_budget = 200'000) {
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  const int nx = static_cast<int>(X.size());
  if (target_size > nx)
    throw std::invalid_argument("find_homogeneous_subset: target size exceeds |X|");
  if (target_size < m + 1)
    throw std::invalid_argument("find_homogeneous_subset: target size below m+1");

  SubsetSearchResult result;
  std::map<std::vector<int>, ColorKey> color_cache;
  auto color_of = [&](const std::vector<int>& pts) -> const ColorKey& {
    auto it = color_cache.find(pts);
    if (it == color_cache.end()) {
      ++result.colorings;
      it = color_cache.emplace(pts, color_of_subset(learner, pts, gamma)).first;
    }
    return it->second;
  };

  auto monochromatic = [&](const std::vector<int>& candidate) -> bool {
    const ColorKey* reference = nullptr;
    bool ok = true;
    for_each_combination(static_cast<int>(candidate.size()), m + 1, [&](const std::vector<int>& idx) {
      if (!ok || result.colorings >= coloring_budget) return;
      std::vector<int> pts(static_cast<std::size_t>(m) + 1);
      for (int i = 0; i <= m; ++i)
        pts[static_cast<std::size_t>(i)] = candidate[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      const ColorKey& c = color_of(pts);
      if (reference == nullptr) reference = &c;
      else if (!(*reference == c)) ok = false;
    });
    return ok;
  };

  std::optional<std::vector<int>> found;
  if (nx <= 16) {
    for_each_combination(nx, target_size, [&](const std::vector<int>& idx) {
      if (found || result.colorings >= coloring_budget) return;
      std::vector<int> candidate(static_cast<std::size_t>(target_size));
      for (int i = 0; i < target_size; ++i)
        candidate[static_cast<std::size_t>(i)] = X[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      if (monochromatic(candidate)) found = candidate;
    });
  } else {
    // greedy growth from the leftmost seed
    std::vector<int> grown(X.begin(), X.begin() + m + 1);
    if (monochromatic(grown)) {
      const ColorKey reference = color_of(grown);
      for (int c = m + 1; c < nx && static_cast<int>(grown.size()) < target_size; ++c) {
        if (result.colorings >= coloring_budget) break;
        const int candidate_point = X[static_cast<std::size_t>(c)];
        bool ok = true;
        for_each_combination(static_cast<int>(grown.size()), m, [&](const std::vector<int>& idx) {
          if (!ok || result.colorings >= coloring_budget) return;
          std::vector<int> pts(static_cast<std::size_t>(m) + 1);
          for (int i = 0; i < m; ++i)
            pts[static_cast<std::size_t>(i)] = grown[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          pts[static_cast<std::size_t>(m)] = candidate_point;
          std::sort(pts.begin(), pts.end());
          if (!(color_of(pts) == reference)) ok = false;
        });
        if (ok) {
          grown.push_back(candidate_point);
          std::sort(grown.begin(), grown.end());
        }
      }
      if (static_cast<int>(grown.size()) >= target_size) found = grown;
    }
  }

  result.budget_exhausted = result.colorings >= coloring_budget;
  if (!found) {
    result.note = result.budget_exhausted ? "coloring budget exhausted" : "no monochromatic subset found";
    return result;
  }

  const auto validation = check_approx_homogeneity(learner, *found, m, gamma);
  if (!validation.pass) {
    result.note = "candidate subset failed homogeneity re-validation";
    return result;
  }
  result.subset = std::move(found);
  return result;
}

}  // namespace pblab
