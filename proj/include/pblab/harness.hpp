#pragma once

// Hard distributions and the end-to-end experiments: the KL-vs-loss
// tradeoff, the spacing event, and KL growth against estimated optimal
// priors. Every experiment is a pure function of (config, seed); trials run
// in per-trial slots with derived seeds, so parallel and serial runs agree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pblab/core.hpp"
#include "pblab/homogeneity.hpp"
#include "pblab/learners.hpp"
#include "pblab/pacbayes.hpp"
#include "pblab/parallel.hpp"
#include "pblab/rng.hpp"
#include "pblab/sensitivity.hpp"

namespace pblab {

/// Raised when a search budget runs out (CLI exit code 3).
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform marginal on {1..k} with labels h_{k/2}: the canonical hard
/// distribution. k must be even.
inline RealizableDistribution hard_distribution(int k) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("hard_distribution: k must be even and >= 2");
  std::vector<Rational> marginal(static_cast<std::size_t>(k), Rational(1, k));
  return RealizableDistribution(k, std::move(marginal), k / 2);
}

/// Uniform over an even-sized point set, labels split at the median point.
inline RealizableDistribution restricted_hard_distribution(int n, std::vector<int> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() % 2 != 0) points.pop_back();  // need an even split
  if (points.size() < 2)
    throw std::invalid_argument("restricted_hard_distribution: need >= 2 points");
  std::vector<Rational> marginal(static_cast<std::size_t>(n), Rational(0));
  for (int x : points) {
    if (x < 1 || x > n) throw std::invalid_argument("restricted_hard_distribution: point outside domain");
    marginal[static_cast<std::size_t>(x - 1)] = Rational(1, static_cast<std::int64_t>(points.size()));
  }
  return RealizableDistribution(n, std::move(marginal), points[points.size() / 2 - 1]);
}

// ---------------------------------------------------------------------------
// priors

/// Prior spec: `optimal[:samples=<int>]` (Monte-Carlo/exact estimate of
/// E_S[Q_S]), `cover:eps=<f>` (uniform over the ε-cover thresholds),
/// `uniform` (uniform over all n+1 thresholds), or `point:k=<int>`.
inline GibbsClassifier resolve_prior(const std::string& spec, const Learner& learner,
                                     const RealizableDistribution& d, int m,
                                     std::uint64_t seed, long long default_samples = 50'000) {
  if (spec == "optimal" || spec.rfind("optimal:samples=", 0) == 0) {
    long long samples = default_samples;
    if (spec != "optimal") samples = std::stoll(spec.substr(std::string("optimal:samples=").size()));
    return estimate_optimal_prior(learner, d, m, samples, derive_seed(seed, 0x7072696fULL));
  }
  if (spec == "uniform") {
    std::vector<std::pair<Hypothesis, Rational>> atoms;
    atoms.reserve(static_cast<std::size_t>(d.n) + 1);
    for (int k = 0; k <= d.n; ++k)
      atoms.emplace_back(Hypothesis::threshold(k), Rational(1, d.n + 1));
    return GibbsClassifier::from_rational_atoms(d.n, std::move(atoms));
  }
  if (spec.rfind("cover:eps=", 0) == 0) {
    const double eps = std::stod(spec.substr(std::string("cover:eps=").size()));
    const auto cover = threshold_cover(d.n, eps);
    std::vector<std::pair<Hypothesis, Rational>> atoms;
    atoms.reserve(cover.size());
    for (int k : cover)
      atoms.emplace_back(Hypothesis::threshold(k), Rational(1, static_cast<std::int64_t>(cover.size())));
    return GibbsClassifier::from_rational_atoms(d.n, std::move(atoms));
  }
  if (spec.rfind("point:k=", 0) == 0) {
    const int k = std::stoi(spec.substr(std::string("point:k=").size()));
    return GibbsClassifier::point_mass(d.n, Hypothesis::threshold(k));
  }
  throw std::invalid_argument("unknown prior spec: " + spec);
}

// ---------------------------------------------------------------------------
// the tradeoff experiment

struct ExperimentConfig {
  std::string learner = "exp:beta=1";
  int n = 64;
  int m = 3;
  double gamma = 0.25;
  double delta = 0.05;
  long long trials = 100;
  std::uint64_t seed = 1;
  std::string prior = "optimal";
  std::string out;            // empty = stdout
  std::string format = "csv"; // csv | json
};

inline void from_json_config(const nlohmann::json& j, ExperimentConfig& cfg) {
  if (j.contains("learner")) cfg.learner = j["learner"].get<std::string>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("m")) cfg.m = j["m"].get<int>();
  if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<long long>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("prior")) cfg.prior = j["prior"].get<std::string>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{{"learner", cfg.learner}, {"n", cfg.n},       {"m", cfg.m},
                        {"gamma", cfg.gamma},     {"delta", cfg.delta}, {"trials", cfg.trials},
                        {"seed", cfg.seed},       {"prior", cfg.prior}, {"out", cfg.out},
                        {"format", cfg.format}};
}

struct TrialRecord {
  double empirical_loss = 0.0;
  double population_loss = 0.0;
  double kl = 0.0;
  long long interval_size = 0;
  std::optional<int> sensitive_index;
  bool high_kl = false;
  bool high_loss = false;
  bool dichotomy = false;
  double bound = 0.0;
  bool bound_violated = false;
  bool spacing_event = false;
  bool spacing_implication_violated = false;  // spacing held but |I| fell short
};

struct TradeoffReport {
  ExperimentConfig config;
  int effective_k = 0;                 // domain (or homogeneous-subset) size
  std::vector<int> restricted_points;  // empty when the full domain is used
  std::vector<TrialRecord> trials;
  double dichotomy_frequency = 0.0;
  double high_kl_frequency = 0.0;
  double high_loss_frequency = 0.0;
  double bound_violation_frequency = 0.0;
  long long spacing_implication_violations = 0;
};

/// The frozen constant in the dichotomy's KL threshold
/// c · (γ²/m²) · ln|I| / lnln|I|.
inline constexpr double kTradeoffKlConstant = 1.0 / 64.0;

/// +inf for |I| <= 2: with no usable interval nothing is certified, so the
/// KL branch of the dichotomy cannot fire (a learner without a sensitive
/// index is counted through its loss alone).
inline double tradeoff_kl_threshold(long long interval_size, double gamma, int m) {
  if (interval_size <= 2) return std::numeric_limits<double>::infinity();
  const double li = std::log(static_cast<double>(interval_size));
  return kTradeoffKlConstant * (gamma * gamma / (static_cast<double>(m) * m)) * li / std::log(li);
}

inline TradeoffReport run_tradeoff_experiment(const ExperimentConfig& cfg) {
  if (cfg.n < 2 || cfg.n % 2 != 0)
    throw std::invalid_argument("tradeoff: n must be even and >= 2");
  if (cfg.m < 1 || cfg.trials < 1) throw std::invalid_argument("tradeoff: bad m or trials");
  if (cfg.gamma <= 0.0 || cfg.gamma >= 1.0) throw std::invalid_argument("tradeoff: gamma in (0,1)");
  const Domain dom(cfg.n);
  const Learner learner = parse_learner(cfg.learner, dom);

  // Exactly homogeneous learners run on the full domain; others get the
  // hard distribution restricted to a homogeneous subset when one is found.
  std::vector<int> domain_points(static_cast<std::size_t>(cfg.n));
  for (int x = 1; x <= cfg.n; ++x) domain_points[static_cast<std::size_t>(x - 1)] = x;

  std::vector<int> probe(domain_points.begin(),
                         domain_points.begin() + std::min(cfg.n, 2 * cfg.m + 4));
  const auto probe_report =
      check_approx_homogeneity(learner, probe, cfg.m, cfg.gamma, 50'000, cfg.seed);

  TradeoffReport report;
  report.config = cfg;
  std::vector<int> points = domain_points;
  if (probe_report.worst_violation > 0.0) {
    const int target = std::min(cfg.n, std::max(2 * (cfg.m + 1), 16));
    auto found = find_homogeneous_subset(learner, domain_points, cfg.m, cfg.gamma, target);
    if (!found.subset)
      throw BudgetExhausted("tradeoff: no homogeneous subset found (" + found.note + ")");
    points = *found.subset;
    if (points.size() % 2 != 0) points.pop_back();
    report.restricted_points = points;
  }
  const bool restricted = !report.restricted_points.empty();
  const RealizableDistribution d =
      restricted ? restricted_hard_distribution(cfg.n, points) : hard_distribution(cfg.n);
  const int k_eff = restricted ? static_cast<int>(points.size()) : cfg.n;
  report.effective_k = k_eff;

  const GibbsClassifier prior = resolve_prior(cfg.prior, learner, d, cfg.m, cfg.seed);
  const auto cumulative = d.cumulative();

  // rank of a point inside the effective index set (identity when full)
  auto rank_of = [&](int x) {
    if (!restricted) return x;
    return static_cast<int>(std::lower_bound(points.begin(), points.end(), x) - points.begin()) + 1;
  };

  const double spacing_distance = static_cast<double>(k_eff) / (8.0 * (cfg.m + 1) * (cfg.m + 1));
  const double loss_threshold = 0.5 - cfg.gamma - static_cast<double>(cfg.m) / k_eff;

  report.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    const Sample s = draw_sample(d, cfg.m, rng, cumulative);
    const GibbsClassifier q = learner(s);

    TrialRecord rec;
    rec.empirical_loss = empirical_loss(q, s);
    rec.population_loss = population_loss(q, d);
    rec.kl = kl_divergence(q, prior);

    // profile + interval in rank space over the effective index set
    const EquivalenceType type = order_type(s);
    if (type.is_permutation()) {
      PProfile profile;
      if (auto exact = threshold_mixture_profile(q, s)) {
        profile = *exact;
      } else {
        // average Q over effective query points per pos class
        std::vector<detail::ClassStats> stats(static_cast<std::size_t>(cfg.m) + 1);
        for (int x : points) {
          if (s.contains_point(x)) continue;
          stats[static_cast<std::size_t>(pos(x, s))].add(q.prob_positive(x));
        }
        profile.type = type;
        profile.p.resize(stats.size());
        for (std::size_t i = 0; i < stats.size(); ++i)
          if (stats[i].count > 0) profile.p[i] = stats[i].sum / static_cast<double>(stats[i].count);
      }
      if (auto idx = minimal_sensitive_index(profile, cfg.gamma / (2.0 * cfg.m))) {
        rec.sensitive_index = *idx;
        std::vector<LabeledExample> rank_ex;
        rank_ex.reserve(s.examples.size());
        for (const auto& e : s.examples) rank_ex.push_back({rank_of(e.x), e.y});
        const auto interval = interval_for_sensitive_index(Sample(std::move(rank_ex)), k_eff, *idx);
        rec.interval_size = interval.size();
      }
    }

    // spacing event over {ranks of x_i} ∪ {k_eff/2}
    {
      std::vector<int> pts;
      pts.reserve(s.examples.size() + 1);
      for (const auto& e : s.examples) pts.push_back(rank_of(e.x));
      pts.push_back(k_eff / 2);
      std::sort(pts.begin(), pts.end());
      bool spaced = true;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (static_cast<double>(pts[i + 1] - pts[i]) < spacing_distance) { spaced = false; break; }
      rec.spacing_event = spaced;
      if (spaced && rec.sensitive_index &&
          static_cast<double>(rec.interval_size) < spacing_distance)
        rec.spacing_implication_violated = true;
    }

    rec.high_kl = rec.kl >= tradeoff_kl_threshold(rec.interval_size, cfg.gamma, cfg.m);
    rec.high_loss = rec.population_loss >= loss_threshold;
    rec.dichotomy = rec.high_kl || rec.high_loss;
    const auto bound = mcallester_bound(rec.empirical_loss, rec.kl, cfg.m, cfg.delta);
    rec.bound = bound.bound;
    rec.bound_violated = rec.population_loss > bound.bound;
    report.trials[t] = rec;
  });

  long long dichotomy = 0, high_kl = 0, high_loss = 0, violated = 0;
  for (const auto& rec : report.trials) {
    dichotomy += rec.dichotomy ? 1 : 0;
    high_kl += rec.high_kl ? 1 : 0;
    high_loss += rec.high_loss ? 1 : 0;
    violated += rec.bound_violated ? 1 : 0;
    report.spacing_implication_violations += rec.spacing_implication_violated ? 1 : 0;
  }
  const double trials = static_cast<double>(cfg.trials);
  report.dichotomy_frequency = static_cast<double>(dichotomy) / trials;
  report.high_kl_frequency = static_cast<double>(high_kl) / trials;
  report.high_loss_frequency = static_cast<double>(high_loss) / trials;
  report.bound_violation_frequency = static_cast<double>(violated) / trials;
  return report;
}

inline std::string to_csv(const TradeoffReport& report) {
  std::ostringstream os;
  os << "trial,empirical_loss,population_loss,kl,interval_size,sensitive_index,dichotomy,bound,bound_violated\n";
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const auto& r = report.trials[t];
    os << t << ',' << r.empirical_loss << ',' << r.population_loss << ',' << r.kl << ','
       << r.interval_size << ',';
    if (r.sensitive_index) os << *r.sensitive_index;
    os << ',' << (r.dichotomy ? 1 : 0) << ',' << r.bound << ',' << (r.bound_violated ? 1 : 0)
       << '\n';
  }
  return os.str();
}

inline nlohmann::json to_json(const TradeoffReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.trials) {
    nlohmann::json row{{"empirical_loss", r.empirical_loss},
                       {"population_loss", r.population_loss},
                       {"kl", std::isinf(r.kl) ? nlohmann::json("inf") : nlohmann::json(r.kl)},
                       {"interval_size", r.interval_size},
                       {"dichotomy", r.dichotomy},
                       {"bound", std::isinf(r.bound) ? nlohmann::json("inf") : nlohmann::json(r.bound)},
                       {"bound_violated", r.bound_violated}};
    if (r.sensitive_index) row["sensitive_index"] = *r.sensitive_index;
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"config", to_json(report.config)},
                        {"effective_k", report.effective_k},
                        {"restricted_points", report.restricted_points},
                        {"dichotomy_frequency", report.dichotomy_frequency},
                        {"high_kl_frequency", report.high_kl_frequency},
                        {"high_loss_frequency", report.high_loss_frequency},
                        {"bound_violation_frequency", report.bound_violation_frequency},
                        {"spacing_implication_violations", report.spacing_implication_violations},
                        {"trials", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// spacing event

/// Monte-Carlo frequency of "every two of {x_1..x_m, k/2} are at distance
/// >= k/(8(m+1)^2)" under m uniform draws from {1..k}.
inline double spacing_event_probability(int k, int m, long long trials, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("spacing: k must be even and >= 2");
  if (m < 1 || trials < 1) throw std::invalid_argument("spacing: bad m or trials");
  if (static_cast<double>(k) < 8.0 * (m + 1) * (m + 1))
    throw std::invalid_argument("spacing: need k >= 8(m+1)^2");
  const double min_distance = static_cast<double>(k) / (8.0 * (m + 1) * (m + 1));

  std::vector<std::uint8_t> hit(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<int> pts(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < m; ++i)
      pts[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_int(1, k));
    pts[static_cast<std::size_t>(m)] = k / 2;
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (static_cast<double>(pts[i + 1] - pts[i]) < min_distance) { ok = false; break; }
    hit[t] = ok ? 1 : 0;
  });
  long long count = 0;
  for (auto h : hit) count += h;
  return static_cast<double>(count) / static_cast<double>(trials);
}

// ---------------------------------------------------------------------------
// KL growth

struct KlGrowthRow {
  int n = 0;
  double median_kl = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

/// For each n in the grid: estimate the optimal prior (or resolve a fixed
/// prior spec), then report median and IQR of KL(Q_S ‖ P_n) over trials.
inline std::vector<KlGrowthRow> kl_growth_experiment(const std::string& learner_spec, int m,
                                                     const std::vector<int>& n_grid,
                                                     long long trials, std::uint64_t seed,
                                                     const std::string& prior_spec = "optimal",
                                                     long long prior_samples = 50'000) {
  if (n_grid.empty()) throw std::invalid_argument("kl_growth: empty n grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("kl_growth: n grid must increase");
  if (trials < 1) throw std::invalid_argument("kl_growth: trials must be >= 1");

  std::vector<KlGrowthRow> rows;
  rows.reserve(n_grid.size());
  for (int n : n_grid) {
    const Domain dom(n);
    const Learner learner = parse_learner(learner_spec, dom);
    const RealizableDistribution d = hard_distribution(n);
    const std::uint64_t grid_seed = derive_seed(seed, static_cast<std::uint64_t>(n));
    std::string spec = prior_spec;
    if (spec == "optimal") spec = "optimal:samples=" + std::to_string(prior_samples);
    const GibbsClassifier prior = resolve_prior(spec, learner, d, m, grid_seed, prior_samples);

    const auto cumulative = d.cumulative();
    std::vector<double> kls(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      Rng rng(derive_seed(grid_seed, 0x74726961ULL, static_cast<std::uint64_t>(t)));  // "tria"
      const Sample s = draw_sample(d, m, rng, cumulative);
      kls[t] = kl_divergence(learner(s), prior);
    });
    std::sort(kls.begin(), kls.end());
    KlGrowthRow row;
    row.n = n;
    const std::size_t T = kls.size();
    row.median_kl = (T % 2 == 1) ? kls[T / 2] : 0.5 * (kls[T / 2 - 1] + kls[T / 2]);
    row.q25 = kls[T / 4];
    row.q75 = kls[(3 * T) / 4];
    rows.push_back(row);
  }
  return rows;
}

inline std::string to_csv(const std::vector<KlGrowthRow>& rows) {
  std::ostringstream os;
  os << "n,median_kl,q25,q75\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.median_kl << ',' << r.q25 << ',' << r.q75 << '\n';
  return os.str();
}

inline std::string to_csv(const CertReport& report) {
  std::ostringstream os;
  os << "xhat,Q_mass,P_mass,certificate,direct_kl\n";
  for (const auto& row : report.rows)
    os << row.xhat << ',' << row.q_mass << ',' << row.p_mass << ',' << row.certificate << ','
       << row.direct_kl << '\n';
  return os.str();
}

}  // namespace pblab
