#pragma once

// Domains, samples, hypotheses, losses, and the order/equivalence
// combinatorics the rest of the laboratory keys on. Everything here is a
// pure value type; losses of deterministic hypotheses are exact rationals.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pblab/rational.hpp"

namespace pblab {

/// The ordered finite domain {1, ..., n}.
struct Domain {
  int n = 1;

  explicit Domain(int n_) : n(n_) {
    if (n < 1) throw std::invalid_argument("Domain: n must be >= 1");
  }
  bool contains(int x) const { return x >= 1 && x <= n; }
};

/// A ±1-valued predictor: either a threshold h_k (−1 for x <= k, +1 above)
/// or an explicit truth table over {1..n}. Tables whose bit pattern equals
/// some h_k are canonicalized to threshold form at construction, so value
/// equality coincides with semantic equality on the table's domain.
class Hypothesis {
 public:
  static Hypothesis threshold(int k) {
    if (k < 0) throw std::invalid_argument("Hypothesis: threshold must be >= 0");
    Hypothesis h;
    h.k_ = k;
    return h;
  }

  static Hypothesis table(std::vector<std::int8_t> bits) {
    if (bits.empty()) throw std::invalid_argument("Hypothesis: empty table");
    for (std::int8_t b : bits)
      if (b != -1 && b != 1) throw std::invalid_argument("Hypothesis: table bits must be ±1");
    // h_k pattern: a (possibly empty) block of −1 followed by +1s.
    std::size_t first_pos = 0;
    while (first_pos < bits.size() && bits[first_pos] == -1) ++first_pos;
    bool monotone = true;
    for (std::size_t i = first_pos; i < bits.size(); ++i)
      if (bits[i] == -1) { monotone = false; break; }
    if (monotone) return threshold(static_cast<int>(first_pos));
    Hypothesis h;
    h.bits_ = std::move(bits);
    return h;
  }

  bool is_threshold() const { return bits_.empty(); }
  int threshold_value() const {
    if (!is_threshold()) throw std::logic_error("Hypothesis: not threshold form");
    return k_;
  }
  const std::vector<std::int8_t>& bits() const { return bits_; }

  /// Prediction at x (1-based). Table form checks its own bounds.
  int predict(int x) const {
    if (is_threshold()) {
      if (x < 1) throw std::invalid_argument("Hypothesis: x must be >= 1");
      return x <= k_ ? -1 : +1;
    }
    if (x < 1 || static_cast<std::size_t>(x) > bits_.size())
      throw std::invalid_argument("Hypothesis: x outside table domain");
    return bits_[static_cast<std::size_t>(x) - 1];
  }

  friend bool operator==(const Hypothesis& a, const Hypothesis& b) {
    return a.k_ == b.k_ && a.bits_ == b.bits_;
  }
  friend bool operator<(const Hypothesis& a, const Hypothesis& b) {
    if (a.is_threshold() != b.is_threshold()) return a.is_threshold();
    if (a.is_threshold()) return a.k_ < b.k_;
    return a.bits_ < b.bits_;
  }

  std::string str() const {
    if (is_threshold()) return "h_" + std::to_string(k_);
    std::string s = "table[";
    for (std::size_t i = 0; i < bits_.size(); ++i)
      s += (bits_[i] > 0 ? "+" : "-");
    return s + "]";
  }

 private:
  Hypothesis() = default;
  int k_ = -1;
  std::vector<std::int8_t> bits_;
};

/// Domain-checked prediction.
inline int predict(const Domain& dom, const Hypothesis& h, int x) {
  if (!dom.contains(x)) throw std::invalid_argument("predict: x outside domain");
  return h.predict(x);
}

struct LabeledExample {
  int x = 1;
  int y = 1;  // ±1
  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// An ordered list of labeled examples. Order is part of identity.
struct Sample {
  std::vector<LabeledExample> examples;

  Sample() = default;
  explicit Sample(std::vector<LabeledExample> ex) : examples(std::move(ex)) { validate(); }

  int size() const { return static_cast<int>(examples.size()); }

  /// Distinct points of the sample, sorted ascending (the underlying set).
  std::vector<int> points() const {
    std::vector<int> p;
    p.reserve(examples.size());
    for (const auto& e : examples) p.push_back(e.x);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
  }

  bool contains_point(int x) const {
    for (const auto& e : examples)
      if (e.x == x) return true;
    return false;
  }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  void validate() const {
    for (const auto& e : examples) {
      if (e.x < 1) throw std::invalid_argument("Sample: points must be >= 1");
      if (e.y != -1 && e.y != 1) throw std::invalid_argument("Sample: labels must be ±1");
    }
  }
};

/// Text form used by the CLI and fixtures: `(1,-);(5,+);(8,+)`.
inline std::string to_string(const Sample& s) {
  std::string out;
  for (int i = 0; i < s.size(); ++i) {
    if (i > 0) out += ";";
    out += "(" + std::to_string(s.examples[i].x) + "," +
           (s.examples[i].y > 0 ? "+" : "-") + ")";
  }
  return out;
}

inline Sample parse_sample(const std::string& text) {
  std::vector<LabeledExample> ex;
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= text.size() || text[i] != c)
      throw std::invalid_argument("parse_sample: expected '" + std::string(1, c) + "' in \"" + text + "\"");
    ++i;
  };
  skip_ws();
  while (i < text.size()) {
    expect('(');
    skip_ws();
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw std::invalid_argument("parse_sample: expected point in \"" + text + "\"");
    int x = std::stoi(text.substr(start, i - start));
    expect(',');
    skip_ws();
    if (i >= text.size() || (text[i] != '+' && text[i] != '-'))
      throw std::invalid_argument("parse_sample: expected label +/- in \"" + text + "\"");
    int y = text[i] == '+' ? 1 : -1;
    ++i;
    expect(')');
    skip_ws();
    if (i < text.size()) expect(';');
    skip_ws();
    ex.push_back({x, y});
  }
  if (ex.empty()) throw std::invalid_argument("parse_sample: empty sample");
  return Sample(std::move(ex));
}

/// Number of distinct sample points <= x (set semantics for duplicates).
inline int pos(int x, const Sample& s) {
  auto pts = s.points();
  int count = 0;
  for (int p : pts)
    if (p <= x) ++count;
  return count;
}

/// Order-type plus label vector; the key of all homogeneity structure.
struct EquivalenceType {
  std::vector<int> pi;    // pos(x_i, S) per example, values in 1..m
  std::vector<int> ybar;  // labels in order, ±1

  int m() const { return static_cast<int>(pi.size()); }

  bool is_permutation() const {
    std::vector<bool> seen(pi.size() + 1, false);
    for (int v : pi) {
      if (v < 1 || v > m() || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
  }

  friend bool operator==(const EquivalenceType&, const EquivalenceType&) = default;
  friend bool operator<(const EquivalenceType& a, const EquivalenceType& b) {
    if (a.pi != b.pi) return a.pi < b.pi;
    return a.ybar < b.ybar;
  }

  std::string str() const {
    std::string s = "pi=(";
    for (std::size_t i = 0; i < pi.size(); ++i)
      s += (i ? "," : "") + std::to_string(pi[i]);
    s += "), y=(";
    for (std::size_t i = 0; i < ybar.size(); ++i)
      s += std::string(i ? "," : "") + (ybar[i] > 0 ? "+" : "-");
    return s + ")";
  }
};

inline EquivalenceType order_type(const Sample& s) {
  if (s.size() == 0) throw std::invalid_argument("order_type: empty sample");
  EquivalenceType t;
  t.pi.reserve(s.examples.size());
  t.ybar.reserve(s.examples.size());
  for (const auto& e : s.examples) {
    t.pi.push_back(pos(e.x, s));
    t.ybar.push_back(e.y);
  }
  return t;
}

inline bool equivalent(const Sample& a, const Sample& b) {
  if (a.size() != b.size()) throw std::invalid_argument("equivalent: length mismatch");
  return order_type(a) == order_type(b);
}

/// Realizable by some threshold: all-positive, or a witness split point.
inline bool is_realizable(const Sample& s) {
  bool all_positive = true;
  for (const auto& e : s.examples)
    if (e.y == -1) { all_positive = false; break; }
  if (all_positive) return true;
  for (const auto& w : s.examples) {
    bool ok = true;
    for (const auto& e : s.examples)
      if ((e.y == -1) != (e.x <= w.x)) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

/// Realize a permutation type on concrete sorted points: point j of the
/// sample is the pi[j]-th smallest of `sorted_points`.
inline Sample sample_of_type(const EquivalenceType& t, const std::vector<int>& sorted_points) {
  if (!t.is_permutation()) throw std::invalid_argument("sample_of_type: type not a permutation");
  if (static_cast<int>(sorted_points.size()) != t.m())
    throw std::invalid_argument("sample_of_type: point count mismatch");
  std::vector<LabeledExample> ex(t.pi.size());
  for (std::size_t j = 0; j < t.pi.size(); ++j)
    ex[j] = {sorted_points[static_cast<std::size_t>(t.pi[j]) - 1], t.ybar[j]};
  return Sample(std::move(ex));
}

/// All m!·2^m permutation equivalence-types, in deterministic order.
/// With realizable_only, labels must be threshold-consistent with the order.
inline std::vector<EquivalenceType> enumerate_permutation_types(int m, bool realizable_only = false) {
  std::vector<int> perm(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
  std::vector<EquivalenceType> out;
  do {
    for (int mask = 0; mask < (1 << m); ++mask) {
      EquivalenceType t;
      t.pi = perm;
      t.ybar.resize(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j)
        t.ybar[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? 1 : -1;
      if (realizable_only) {
        // label as a function of rank must be a block of −1 then +1
        std::vector<int> by_rank(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
          by_rank[static_cast<std::size_t>(t.pi[static_cast<std::size_t>(j)] - 1)] =
              t.ybar[static_cast<std::size_t>(j)];
        bool seen_positive = false, ok = true;
        for (int v : by_rank) {
          if (v == 1) seen_positive = true;
          else if (seen_positive) { ok = false; break; }
        }
        if (!ok) continue;
      }
      out.push_back(std::move(t));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// A finite probability mixture over hypotheses (posteriors and priors).
/// Atoms are canonicalized: sorted, duplicates merged, zero weights dropped,
/// weights normalized (the input must already sum to 1 within 1e−12).
/// When constructed from rational weights the exact values ride along.
class GibbsClassifier {
 public:
  struct Atom {
    Hypothesis h;
    double w;
  };

  static constexpr double kWeightTolerance = 1e-12;

  GibbsClassifier(int n, std::vector<std::pair<Hypothesis, double>> atoms)
      : n_(check_n(n)) {
    init_double(std::move(atoms));
  }

  static GibbsClassifier point_mass(int n, const Hypothesis& h) {
    return from_rational_atoms(n, {{h, Rational(1)}});
  }

  static GibbsClassifier from_atoms(int n, std::vector<std::pair<Hypothesis, double>> atoms) {
    return GibbsClassifier(n, std::move(atoms));
  }

  static GibbsClassifier from_rational_atoms(int n,
                                             std::vector<std::pair<Hypothesis, Rational>> atoms) {
    GibbsClassifier q(check_n(n));
    q.init_rational(std::move(atoms));
    return q;
  }

  int domain_size() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<std::vector<Rational>>& exact_weights() const { return exact_; }

  /// Pr_{h~Q}[h(x) = +1]. Summation runs in canonical atom order, so the
  /// value is a deterministic function of the (ordered) weight sequence.
  double prob_positive(int x) const {
    if (x < 1 || x > n_) throw std::invalid_argument("GibbsClassifier: x outside domain");
    double p = 0.0;
    for (const auto& a : atoms_)
      if (a.h.predict(x) == 1) p += a.w;
    return p;
  }

  /// Weight of a given hypothesis (0 when absent).
  double weight_of(const Hypothesis& h) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), h,
                               [](const Atom& a, const Hypothesis& key) { return a.h < key; });
    if (it != atoms_.end() && it->h == h) return it->w;
    return 0.0;
  }

  friend bool operator==(const GibbsClassifier& a, const GibbsClassifier& b) {
    if (a.n_ != b.n_ || a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i)
      if (!(a.atoms_[i].h == b.atoms_[i].h) || a.atoms_[i].w != b.atoms_[i].w) return false;
    return true;
  }

 private:
  explicit GibbsClassifier(int n) : n_(n) {}

  static int check_n(int n) {
    if (n < 1) throw std::invalid_argument("GibbsClassifier: domain size must be >= 1");
    return n;
  }

  void check_atom(const Hypothesis& h) const {
    if (!h.is_threshold() && static_cast<int>(h.bits().size()) != n_)
      throw std::invalid_argument("GibbsClassifier: table atom length != domain size");
    if (h.is_threshold() && h.threshold_value() > n_)
      throw std::invalid_argument("GibbsClassifier: threshold atom outside 0..n");
  }

  void init_double(std::vector<std::pair<Hypothesis, double>> in) {
    std::sort(in.begin(), in.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0.0;
    for (auto& [h, w] : in) {
      check_atom(h);
      if (w < 0.0) throw std::invalid_argument("GibbsClassifier: negative weight");
      if (w == 0.0) continue;
      if (!atoms_.empty() && atoms_.back().h == h) {
        atoms_.back().w += w;
      } else {
        atoms_.push_back({h, w});
      }
      total += w;
    }
    if (atoms_.empty()) throw std::invalid_argument("GibbsClassifier: no positive-weight atoms");
    if (total < 1.0 - kWeightTolerance || total > 1.0 + kWeightTolerance)
      throw std::invalid_argument("GibbsClassifier: weights do not sum to 1");
    for (auto& a : atoms_) a.w /= total;
  }

  void init_rational(std::vector<std::pair<Hypothesis, Rational>> in) {
    std::sort(in.begin(), in.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Rational> exact;
    Rational total(0);
    for (auto& [h, w] : in) {
      check_atom(h);
      if (w < Rational(0)) throw std::invalid_argument("GibbsClassifier: negative weight");
      if (w.is_zero()) continue;
      if (!atoms_.empty() && atoms_.back().h == h) {
        exact.back() += w;
        atoms_.back().w = exact.back().to_double();
      } else {
        atoms_.push_back({h, w.to_double()});
        exact.push_back(w);
      }
      total += w;
    }
    if (atoms_.empty()) throw std::invalid_argument("GibbsClassifier: no positive-weight atoms");
    if (total != Rational(1)) throw std::invalid_argument("GibbsClassifier: weights do not sum to 1");
    exact_ = std::move(exact);
  }

  int n_;
  std::vector<Atom> atoms_;
  std::optional<std::vector<Rational>> exact_;
};

/// Empirical 0/1 loss of a deterministic hypothesis: mistakes / m, exact.
inline Rational empirical_loss(const Hypothesis& h, const Sample& s) {
  if (s.size() == 0) throw std::invalid_argument("empirical_loss: empty sample");
  std::int64_t mistakes = 0;
  for (const auto& e : s.examples)
    if (h.predict(e.x) != e.y) ++mistakes;
  return Rational(mistakes, s.size());
}

/// Empirical loss of a Gibbs classifier: weight-average of atom losses.
inline double empirical_loss(const GibbsClassifier& q, const Sample& s) {
  if (s.size() == 0) throw std::invalid_argument("empirical_loss: empty sample");
  double loss = 0.0;
  for (const auto& a : q.atoms())
    loss += a.w * empirical_loss(a.h, s).to_double();
  return loss;
}

/// Exact empirical loss when the mixture carries rational weights.
inline std::optional<Rational> empirical_loss_exact(const GibbsClassifier& q, const Sample& s) {
  if (!q.exact_weights()) return std::nullopt;
  Rational loss(0);
  const auto& w = *q.exact_weights();
  for (std::size_t i = 0; i < q.atoms().size(); ++i)
    loss += w[i] * empirical_loss(q.atoms()[i].h, s);
  return loss;
}

/// A distribution over labeled examples whose labels agree with a threshold.
struct RealizableDistribution {
  int n;
  std::vector<Rational> marginal;  // index 0 is point 1
  int true_threshold;              // 0..n

  RealizableDistribution(int n_, std::vector<Rational> marginal_, int true_threshold_)
      : n(n_), marginal(std::move(marginal_)), true_threshold(true_threshold_) {
    if (n < 1) throw std::invalid_argument("RealizableDistribution: n must be >= 1");
    if (static_cast<int>(marginal.size()) != n)
      throw std::invalid_argument("RealizableDistribution: marginal size != n");
    if (true_threshold < 0 || true_threshold > n)
      throw std::invalid_argument("RealizableDistribution: threshold outside 0..n");
    Rational total(0);
    for (const auto& p : marginal) {
      if (p < Rational(0)) throw std::invalid_argument("RealizableDistribution: negative mass");
      total += p;
    }
    if (total != Rational(1))
      throw std::invalid_argument("RealizableDistribution: marginal does not sum to 1");
  }

  int label(int x) const { return x <= true_threshold ? -1 : +1; }

  /// Cumulative marginal in doubles, for sampling.
  std::vector<double> cumulative() const {
    std::vector<double> cum(marginal.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < marginal.size(); ++i) {
      acc += marginal[i].to_double();
      cum[i] = acc;
    }
    return cum;
  }
};

/// Exact population loss of a deterministic hypothesis.
inline Rational population_loss(const Hypothesis& h, const RealizableDistribution& d) {
  Rational loss(0);
  for (int x = 1; x <= d.n; ++x) {
    if (d.marginal[static_cast<std::size_t>(x - 1)].is_zero()) continue;
    if (h.predict(x) != d.label(x)) loss += d.marginal[static_cast<std::size_t>(x - 1)];
  }
  return loss;
}

/// Population loss of a Gibbs classifier (exact expectation, no sampling).
inline double population_loss(const GibbsClassifier& q, const RealizableDistribution& d) {
  if (q.domain_size() != d.n)
    throw std::invalid_argument("population_loss: domain mismatch");
  double loss = 0.0;
  for (const auto& a : q.atoms())
    loss += a.w * population_loss(a.h, d).to_double();
  return loss;
}

inline std::optional<Rational> population_loss_exact(const GibbsClassifier& q,
                                                     const RealizableDistribution& d) {
  if (q.domain_size() != d.n)
    throw std::invalid_argument("population_loss: domain mismatch");
  if (!q.exact_weights()) return std::nullopt;
  Rational loss(0);
  const auto& w = *q.exact_weights();
  for (std::size_t i = 0; i < q.atoms().size(); ++i)
    loss += w[i] * population_loss(q.atoms()[i].h, d);
  return loss;
}

}  // namespace pblab
