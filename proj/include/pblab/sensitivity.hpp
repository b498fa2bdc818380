#pragma once

// Sensitive indices, the replacement interval I(S), rounded hypotheses,
// the binary-search event construction, and KL lower-bound certificates.
//
// The event E_x̂ is "binary search on the empirical rounded hypothesis
// outputs an interval containing x̂". The search bisects over even
// coordinates for the leftmost even +1, so its output {e−1, e} contains
// exactly one odd point; events for distinct odd x̂ are disjoint, which is
// what the pigeonhole step of the certificate needs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pblab/core.hpp"
#include "pblab/homogeneity.hpp"
#include "pblab/pacbayes.hpp"
#include "pblab/parallel.hpp"
#include "pblab/rng.hpp"

namespace pblab {

// ---------------------------------------------------------------------------
// sensitive indices

struct SensitiveIndexReport {
  std::optional<int> index;  // smallest sensitive index in 1..m
  double gap = 0.0;          // gap at the index, or the largest gap when absent
  PProfile profile;
};

/// Smallest i with |p_i − p_{i−1}| >= threshold. The profile must be
/// complete (no absent entries).
inline SensitiveIndexReport sensitive_index(const PProfile& profile, double threshold) {
  if (!profile.complete())
    throw std::invalid_argument("sensitive_index: profile has absent entries");
  SensitiveIndexReport report;
  report.profile = profile;
  double largest = 0.0;
  for (std::size_t i = 1; i < profile.p.size(); ++i) {
    const double gap = std::abs(*profile.p[i] - *profile.p[i - 1]);
    largest = std::max(largest, gap);
    if (!report.index && gap >= threshold) {
      report.index = static_cast<int>(i);
      report.gap = gap;
    }
  }
  if (!report.index) report.gap = largest;
  return report;
}

/// Minimal sensitive index over adjacent present entries; nullopt if none.
inline std::optional<int> minimal_sensitive_index(const PProfile& profile, double threshold) {
  for (std::size_t i = 1; i < profile.p.size(); ++i) {
    if (!profile.p[i] || !profile.p[i - 1]) continue;
    if (std::abs(*profile.p[i] - *profile.p[i - 1]) >= threshold) return static_cast<int>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// the interval I(S)

/// Closed integer interval; empty when lo > hi.
struct PointInterval {
  int lo = 1, hi = 0;
  bool empty() const { return lo > hi; }
  long long size() const { return empty() ? 0 : static_cast<long long>(hi) - lo + 1; }
  bool contains(int x) const { return x >= lo && x <= hi; }
};

/// The case split of I(S) on domain {1..k}, given the sensitive index i
/// (pos of the sensitive point). Requires a permutation order-type.
inline PointInterval interval_for_sensitive_index(const Sample& s, int k, int i) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("interval_for_sensitive_index: k must be even and >= 2");
  if (!order_type(s).is_permutation())
    throw std::invalid_argument("interval_for_sensitive_index: order-type not a permutation");
  int xj = 0, yj = 0;
  for (const auto& e : s.examples)
    if (pos(e.x, s) == i) { xj = e.x; yj = e.y; break; }
  if (xj == 0) throw std::invalid_argument("interval_for_sensitive_index: no point with pos == i");

  int x_minus = 0, x_plus = k + 1;
  for (const auto& e : s.examples) {
    if (e.x < xj) x_minus = std::max(x_minus, e.x);
    if (e.x > xj) x_plus = std::min(x_plus, e.x);
  }
  const int half = k / 2;
  if (x_minus < half && half < x_plus) {
    if (yj == -1) return {x_minus + 1, half};  // (x_j^-, k/2]
    return {half + 1, x_plus - 1};             // (k/2, x_j^+)
  }
  return {x_minus + 1, x_plus - 1};            // (x_j^-, x_j^+)
}

/// I(S) for a learner on {1..k}: empty unless the order-type is a
/// permutation and the sample's profile has a γ/(2m)-sensitive index.
inline PointInterval interval_I(const Learner& learner, const Sample& s, int k, double gamma) {
  const EquivalenceType type = order_type(s);
  if (!type.is_permutation()) return {};
  const GibbsClassifier q = learner(s);
  PProfile profile;
  if (auto exact = threshold_mixture_profile(q, s)) profile = *exact;
  else profile = sample_profile(q, s, k);
  const auto idx = minimal_sensitive_index(profile, gamma / (2.0 * s.size()));
  if (!idx) return {};
  return interval_for_sensitive_index(s, k, *idx);
}

// ---------------------------------------------------------------------------
// rounded hypotheses

/// Deterministic predictor: +1 at x iff Pr_{h~Q}[h(x)=+1] > (q1+q2)/2.
inline Hypothesis rounded_hypothesis(const GibbsClassifier& q, double q1, double q2) {
  if (!(q1 < q2)) throw std::invalid_argument("rounded_hypothesis: need q1 < q2");
  const double mid = 0.5 * (q1 + q2);
  std::vector<std::int8_t> bits(static_cast<std::size_t>(q.domain_size()));
  for (int x = 1; x <= q.domain_size(); ++x)
    bits[static_cast<std::size_t>(x - 1)] = q.prob_positive(x) > mid ? 1 : -1;
  return Hypothesis::table(std::move(bits));
}

/// Majority-style rounding of r drawn hypotheses: +1 at x iff the fraction
/// predicting +1 strictly exceeds (q1+q2)/2.
inline Hypothesis empirical_rounded_hypothesis(std::span<const Hypothesis> hs, int n, double q1,
                                               double q2) {
  if (hs.empty()) throw std::invalid_argument("empirical_rounded_hypothesis: need r >= 1");
  if (!(q1 < q2)) throw std::invalid_argument("empirical_rounded_hypothesis: need q1 < q2");
  const double mid = 0.5 * (q1 + q2);
  const double r = static_cast<double>(hs.size());
  std::vector<std::int8_t> bits(static_cast<std::size_t>(n));
  for (int x = 1; x <= n; ++x) {
    int count = 0;
    for (const auto& h : hs)
      if (h.predict(x) == 1) ++count;
    bits[static_cast<std::size_t>(x - 1)] = (static_cast<double>(count) / r > mid) ? 1 : -1;
  }
  return Hypothesis::table(std::move(bits));
}

// ---------------------------------------------------------------------------
// binary search over even coordinates

/// Output interval {e−1, e} of the sign-change search; e is even, e−1 odd.
struct SearchInterval {
  int lo = 0, hi = 0;
  friend bool operator==(const SearchInterval&, const SearchInterval&) = default;
};

/// Bisects over even coordinates for the leftmost even coordinate with bit
/// +1 (position `length` acts as a +1 sentinel and is never queried).
/// Exactly b−1 queries for length 2^b, all at even coordinates < length.
/// On a monotone threshold input the output brackets the sign change.
template <class BitAt>
SearchInterval binary_search_signchange_fn(int length, BitAt&& bit_at) {
  if (length < 2 || (length & (length - 1)) != 0)
    throw std::invalid_argument("binary_search_signchange: length must be a power of two >= 2");
  int lo = 0;             // even index known/presumed −1 (0 = virtual left edge)
  int hi = length / 2;    // even index of the current +1 candidate (sentinel)
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (bit_at(2 * mid) == 1) hi = mid;
    else lo = mid;
  }
  return {2 * hi - 1, 2 * hi};
}

inline SearchInterval binary_search_signchange(std::span<const std::int8_t> bits) {
  return binary_search_signchange_fn(static_cast<int>(bits.size()), [&](int x) {
    return static_cast<int>(bits[static_cast<std::size_t>(x - 1)]);
  });
}

inline SearchInterval binary_search_signchange(const Hypothesis& h, int length) {
  return binary_search_signchange_fn(length, [&](int x) { return h.predict(x); });
}

/// x̂ ∈ I_out for the search on the empirical rounded hypothesis of hs.
/// The bits at the b−1 queried coordinates are evaluated lazily.
inline bool event_membership(int xhat, std::span<const Hypothesis> hs, int n, double q1,
                             double q2) {
  if (xhat % 2 != 1) throw std::invalid_argument("event_membership: xhat must be odd");
  if (hs.empty()) throw std::invalid_argument("event_membership: need r >= 1");
  const double mid = 0.5 * (q1 + q2);
  const double r = static_cast<double>(hs.size());
  const auto out = binary_search_signchange_fn(n, [&](int x) {
    int count = 0;
    for (const auto& h : hs)
      if (h.predict(x) == 1) ++count;
    return (static_cast<double>(count) / r > mid) ? 1 : -1;
  });
  return out.lo == xhat;  // the interval's unique odd point
}

// ---------------------------------------------------------------------------
// Wilson score intervals

inline double wilson_lower(long long successes, long long trials, double z) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::max(0.0, (center - half) / denom);
}

inline double wilson_upper(long long successes, long long trials, double z) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::min(1.0, (center + half) / denom);
}

// ---------------------------------------------------------------------------
// exact event masses

/// Event masses Q^r(E_x̂) computed exactly: r i.i.d. draws from a mixture
/// with rational weights a_i/d are permutation-invariant, so it suffices to
/// enumerate multisets. Masses are integers over the common denominator
/// d^r, held in 128 bits; the total over all odd x̂ can be compared to d^r
/// with no rounding at all.
struct ExactEventMasses {
  bool available = false;
  int r = 0;
  long long weight_den = 1;               // d
  std::vector<unsigned __int128> numerators;  // index (x̂−1)/2; mass = num / d^r

  double mass(int odd_index) const {
    long double den = 1.0L;
    for (int i = 0; i < r; ++i) den *= static_cast<long double>(weight_den);
    return static_cast<double>(static_cast<long double>(numerators[static_cast<std::size_t>(odd_index)]) / den);
  }

  unsigned __int128 total_numerator() const {
    unsigned __int128 total = 0;
    for (auto v : numerators) total += v;
    return total;
  }

  unsigned __int128 denominator_pow() const {
    unsigned __int128 den = 1;
    for (int i = 0; i < r; ++i) den *= static_cast<unsigned __int128>(weight_den);
    return den;
  }
};

namespace detail {

inline unsigned __int128 binom_u128(int n, int k) {
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r;
}

}  // namespace detail

/// Exact masses when the mixture carries rational weights with a small
/// common denominator: requires r·log2(d) <= 126 and at most `multiset_cap`
/// weight multisets C(r+s−1, s−1). Returns available = false otherwise.
inline ExactEventMasses exact_event_masses(const GibbsClassifier& mix, double q1, double q2,
                                           int r, long long multiset_cap = 1'000'000) {
  ExactEventMasses out;
  out.r = r;
  if (r < 1 || !mix.exact_weights()) return out;
  const int n = mix.domain_size();
  if (n < 2 || (n & (n - 1)) != 0) return out;

  const auto& weights = *mix.exact_weights();
  long long d = 1;
  for (const auto& w : weights) {
    d = std::lcm(d, w.den());
    if (d > (1LL << 30)) return out;
  }
  if (static_cast<double>(r) * std::log2(static_cast<double>(d)) > 126.0) return out;
  const int s = static_cast<int>(weights.size());
  if (binom_capped(r + s - 1, s - 1, 1ULL << 62) > static_cast<unsigned long long>(multiset_cap))
    return out;

  std::vector<unsigned long long> numer(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i)
    numer[static_cast<std::size_t>(i)] =
        static_cast<unsigned long long>(weights[static_cast<std::size_t>(i)].num()) *
        static_cast<unsigned long long>(d / weights[static_cast<std::size_t>(i)].den());

  // per-atom prediction tables
  std::vector<std::vector<std::int8_t>> table(static_cast<std::size_t>(s),
                                              std::vector<std::int8_t>(static_cast<std::size_t>(n)));
  for (int i = 0; i < s; ++i)
    for (int x = 1; x <= n; ++x)
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(x - 1)] =
          static_cast<std::int8_t>(mix.atoms()[static_cast<std::size_t>(i)].h.predict(x));

  const double mid_times_r = 0.5 * (q1 + q2) * static_cast<double>(r);
  out.weight_den = d;
  out.numerators.assign(static_cast<std::size_t>(n / 2), 0);

  std::vector<int> counts(static_cast<std::size_t>(s), 0);
  // enumerate compositions of r into s parts
  auto process = [&]() {
    unsigned __int128 term = 1;
    int remaining = r;
    for (int i = 0; i < s; ++i) {
      const int c = counts[static_cast<std::size_t>(i)];
      term *= detail::binom_u128(remaining, c);
      remaining -= c;
      for (int p = 0; p < c; ++p) term *= numer[static_cast<std::size_t>(i)];
    }
    const auto iv = binary_search_signchange_fn(n, [&](int x) {
      int count = 0;
      for (int i = 0; i < s; ++i)
        if (table[static_cast<std::size_t>(i)][static_cast<std::size_t>(x - 1)] == 1)
          count += counts[static_cast<std::size_t>(i)];
      return (static_cast<double>(count) > mid_times_r) ? 1 : -1;
    });
    out.numerators[static_cast<std::size_t>(iv.lo / 2)] += term;  // iv.lo = e−1, odd
  };

  // enumerate compositions of r into s parts; the last part absorbs the rest
  std::function<void(int, int)> recurse = [&](int level, int used) {
    if (level == s - 1) {
      counts[static_cast<std::size_t>(level)] = r - used;
      process();
      return;
    }
    for (int c = 0; used + c <= r; ++c) {
      counts[static_cast<std::size_t>(level)] = c;
      recurse(level + 1, used + c);
    }
  };
  recurse(0, 0);

  out.available = true;
  return out;
}

// ---------------------------------------------------------------------------
// KL certificates

struct CertRow {
  int xhat = 0;
  double q_mass = 0.0;      // Q_x̂^r(E_x̂) (point estimate or exact)
  double q_mass_lower = 0.0;
  double p_mass = 0.0;      // P^r(E_x̂)
  double p_mass_upper = 0.0;
  double certificate = 0.0;  // kl_bernoulli(q_lower, p_upper) / r
  double direct_kl = 0.0;    // kl_divergence(Q_x̂, P) for comparison
  bool q_exact = false;
  bool p_exact = false;
};

struct CertReport {
  bool family_valid = true;
  std::vector<std::string> premise_violations;
  double q1 = 0.0, q2 = 0.0;
  int r = 0;
  long long trials = 0;
  std::vector<CertRow> rows;
};

/// Default draw count ceil(2(ln(b−1) + 2)/(q2−q1)^2); b−1 is the
/// number of coordinates the search queries (the union bound's range).
inline int default_r(int b, double q1, double q2) {
  if (b < 2) throw std::invalid_argument("default_r: need b >= 2");
  if (!(q1 < q2)) throw std::invalid_argument("default_r: need q1 < q2");
  const double delta = q2 - q1;
  return static_cast<int>(std::ceil(2.0 * (std::log(static_cast<double>(b - 1)) + 2.0) / (delta * delta)));
}

/// Per-x̂ certified KL lower bounds: estimates a = Q_x̂^r(E_x̂) and
/// p = P^r(E_x̂) (exactly where the rational fast path applies, otherwise
/// Monte Carlo with Wilson intervals at confidence z) and reports
/// kl_bernoulli(a_lower, p_upper)/r next to the directly computed
/// kl_divergence(Q_x̂, P). Premise violations flag the family invalid.
inline CertReport kl_certificate(const std::vector<std::pair<int, GibbsClassifier>>& family,
                                 const GibbsClassifier& prior, double q1, double q2, int r,
                                 long long trials, std::uint64_t seed, double z = 2.576) {
  if (family.empty()) throw std::invalid_argument("kl_certificate: empty family");
  if (r < 1) throw std::invalid_argument("kl_certificate: r must be >= 1");
  if (trials < 1) throw std::invalid_argument("kl_certificate: trials must be >= 1");
  const int n = prior.domain_size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("kl_certificate: index set size must be a power of two");

  CertReport report;
  report.q1 = q1;
  report.q2 = q2;
  report.r = r;
  report.trials = trials;
  const double delta = q2 - q1;

  // family premise on the grid: below x̂ the +1-probability stays low, above
  // it stays high.
  for (const auto& [xhat, q] : family) {
    if (xhat % 2 != 1 || xhat < 1 || xhat > n)
      throw std::invalid_argument("kl_certificate: family keys must be odd domain points");
    for (int x = 1; x <= n; ++x) {
      if (x == xhat) continue;
      const double v = q.prob_positive(x);
      if (x < xhat && v > q1 + delta / 4.0 + 1e-12) {
        report.family_valid = false;
        report.premise_violations.push_back("xhat=" + std::to_string(xhat) + " x=" + std::to_string(x) + " low-side prob " + std::to_string(v));
      } else if (x > xhat && v < q2 - delta / 4.0 - 1e-12) {
        report.family_valid = false;
        report.premise_violations.push_back("xhat=" + std::to_string(xhat) + " x=" + std::to_string(x) + " high-side prob " + std::to_string(v));
      }
    }
  }

  // P-side masses: exact when the rational path applies, else one shared
  // Monte Carlo pass (events are disjoint, every draw lands in one E_x̂).
  const auto p_exact = exact_event_masses(prior, q1, q2, r);
  std::vector<double> p_mass(static_cast<std::size_t>(n / 2), 0.0);
  std::vector<double> p_upper(static_cast<std::size_t>(n / 2), 0.0);
  if (p_exact.available) {
    for (int i = 0; i < n / 2; ++i) {
      p_mass[static_cast<std::size_t>(i)] = p_exact.mass(i);
      p_upper[static_cast<std::size_t>(i)] = p_mass[static_cast<std::size_t>(i)];
    }
  } else {
    std::vector<double> cum;
    cum.reserve(prior.atoms().size());
    double acc = 0.0;
    for (const auto& a : prior.atoms()) { acc += a.w; cum.push_back(acc); }
    std::vector<int> hits(static_cast<std::size_t>(n / 2), 0);
    std::vector<int> per_trial(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      Rng rng(derive_seed(seed, 0x5052494fULL, static_cast<std::uint64_t>(t)));  // "PRIO"
      std::vector<Hypothesis> draws;
      draws.reserve(static_cast<std::size_t>(r));
      for (int i = 0; i < r; ++i)
        draws.push_back(prior.atoms()[rng.pick_from_cumulative(cum)].h);
      const double mid = 0.5 * (q1 + q2);
      const auto iv = binary_search_signchange_fn(n, [&](int x) {
        int count = 0;
        for (const auto& h : draws)
          if (h.predict(x) == 1) ++count;
        return (static_cast<double>(count) / static_cast<double>(r) > mid) ? 1 : -1;
      });
      per_trial[t] = iv.lo / 2;
    });
    for (int idx : per_trial) ++hits[static_cast<std::size_t>(idx)];
    for (int i = 0; i < n / 2; ++i) {
      p_mass[static_cast<std::size_t>(i)] = static_cast<double>(hits[static_cast<std::size_t>(i)]) / static_cast<double>(trials);
      p_upper[static_cast<std::size_t>(i)] = wilson_upper(hits[static_cast<std::size_t>(i)], trials, z);
    }
  }

  report.rows.resize(family.size());
  parallel_for(family.size(), [&](std::size_t fi) {
    const auto& [xhat, q] = family[fi];
    CertRow row;
    row.xhat = xhat;
    row.p_exact = p_exact.available;
    row.p_mass = p_mass[static_cast<std::size_t>(xhat / 2)];
    row.p_mass_upper = p_upper[static_cast<std::size_t>(xhat / 2)];

    const auto q_exact = exact_event_masses(q, q1, q2, r);
    if (q_exact.available) {
      row.q_exact = true;
      row.q_mass = q_exact.mass(xhat / 2);
      row.q_mass_lower = row.q_mass;
    } else {
      std::vector<double> cum;
      cum.reserve(q.atoms().size());
      double acc = 0.0;
      for (const auto& a : q.atoms()) { acc += a.w; cum.push_back(acc); }
      long long hits = 0;
      for (long long t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(xhat), static_cast<std::uint64_t>(t)));
        std::vector<Hypothesis> draws;
        draws.reserve(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i)
          draws.push_back(q.atoms()[rng.pick_from_cumulative(cum)].h);
        if (event_membership(xhat, draws, n, q1, q2)) ++hits;
      }
      row.q_mass = static_cast<double>(hits) / static_cast<double>(trials);
      row.q_mass_lower = wilson_lower(hits, trials, z);
    }

    row.certificate = (row.q_mass_lower > row.p_mass_upper)
                          ? kl_bernoulli(row.q_mass_lower, row.p_mass_upper) / static_cast<double>(r)
                          : 0.0;
    row.direct_kl = kl_divergence(q, prior);
    report.rows[fi] = std::move(row);
  });
  return report;
}

// ---------------------------------------------------------------------------
// the standard step family

/// Family {Q_x̂} over {1..2^b} satisfying the certificate premise with room
/// to spare: Pr[h(x)=+1] equals q1 below x̂ (and at x̂) and q2 above it.
/// Atoms are h_0, h_x̂ and h_n with weights q1, q2−q1, 1−q2 (exact when the
/// weights are dyadic).
inline std::vector<std::pair<int, GibbsClassifier>> make_step_family(int b, double q1, double q2) {
  if (b < 1) throw std::invalid_argument("make_step_family: b must be >= 1");
  if (!(0.0 <= q1 && q1 < q2 && q2 <= 1.0))
    throw std::invalid_argument("make_step_family: need 0 <= q1 < q2 <= 1");
  const int n = 1 << b;
  Rational rq1, rq2;
  const bool exact = Rational::from_double_dyadic(q1, rq1) && Rational::from_double_dyadic(q2, rq2);

  std::vector<std::pair<int, GibbsClassifier>> family;
  family.reserve(static_cast<std::size_t>(n / 2));
  for (int xhat = 1; xhat < n; xhat += 2) {
    if (exact) {
      std::vector<std::pair<Hypothesis, Rational>> atoms;
      atoms.emplace_back(Hypothesis::threshold(0), rq1);
      atoms.emplace_back(Hypothesis::threshold(xhat), rq2 - rq1);
      atoms.emplace_back(Hypothesis::threshold(n), Rational(1) - rq2);
      family.emplace_back(xhat, GibbsClassifier::from_rational_atoms(n, std::move(atoms)));
    } else {
      std::vector<std::pair<Hypothesis, double>> atoms;
      atoms.emplace_back(Hypothesis::threshold(0), q1);
      atoms.emplace_back(Hypothesis::threshold(xhat), q2 - q1);
      atoms.emplace_back(Hypothesis::threshold(n), 1.0 - q2);
      family.emplace_back(xhat, GibbsClassifier::from_atoms(n, std::move(atoms)));
    }
  }
  return family;
}

/// Uniform average of the family posteriors: the best-response prior
/// (minimizer of the average KL against the family).
inline GibbsClassifier make_family_average_prior(
    const std::vector<std::pair<int, GibbsClassifier>>& family) {
  if (family.empty()) throw std::invalid_argument("make_family_average_prior: empty family");
  const int n = family.front().second.domain_size();
  bool all_exact = true;
  for (const auto& [xhat, q] : family)
    if (!q.exact_weights()) { all_exact = false; break; }

  if (all_exact) {
    const Rational share(1, static_cast<std::int64_t>(family.size()));
    std::vector<std::pair<Hypothesis, Rational>> atoms;
    for (const auto& [xhat, q] : family) {
      const auto& w = *q.exact_weights();
      for (std::size_t i = 0; i < q.atoms().size(); ++i)
        atoms.emplace_back(q.atoms()[i].h, w[i] * share);
    }
    return GibbsClassifier::from_rational_atoms(n, std::move(atoms));
  }
  const double share = 1.0 / static_cast<double>(family.size());
  std::vector<std::pair<Hypothesis, double>> atoms;
  for (const auto& [xhat, q] : family)
    for (const auto& a : q.atoms()) atoms.emplace_back(a.h, a.w * share);
  return GibbsClassifier::from_atoms(n, std::move(atoms));
}

}  // namespace pblab
