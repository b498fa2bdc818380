// pblab: command-line front end for the PAC-Bayes threshold laboratory.
//
// Subcommands: tradeoff, spacing, kl-growth, profile, check-homogeneity,
// sensitivity-cert, ramsey. Exit codes: 0 success, 2 validation failure,
// 3 search-budget exhaustion.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pblab/harness.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << content;
}

std::vector<int> split_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<int> parse_label_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "+") out.push_back(1);
    else if (item == "-") out.push_back(-1);
    else throw std::invalid_argument("labels must be +/-: " + item);
  }
  return out;
}

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  f >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pblab: PAC-Bayes verification laboratory for 1-D thresholds"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  std::string config_path;
  app.add_option("--seed", seed, "global random seed");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON config file overriding flags");

  // --- tradeoff ---
  auto* tradeoff = app.add_subcommand("tradeoff", "KL-vs-loss dichotomy experiment");
  pblab::ExperimentConfig tcfg;
  tradeoff->add_option("--learner", tcfg.learner, "learner spec");
  tradeoff->add_option("--n", tcfg.n, "domain size (even)");
  tradeoff->add_option("--m", tcfg.m, "sample size");
  tradeoff->add_option("--gamma", tcfg.gamma, "gamma in (0,1)");
  tradeoff->add_option("--delta", tcfg.delta, "confidence parameter");
  tradeoff->add_option("--trials", tcfg.trials, "number of trials");
  tradeoff->add_option("--prior", tcfg.prior, "optimal[:samples=N] | cover:eps=F | point:k=K");

  // --- spacing ---
  auto* spacing = app.add_subcommand("spacing", "spacing-event frequency");
  int sp_k = 1'000'000, sp_m = 5;
  long long sp_trials = 10'000;
  spacing->add_option("--k", sp_k, "domain size (even)");
  spacing->add_option("--m", sp_m, "sample size");
  spacing->add_option("--trials", sp_trials, "number of trials");

  // --- kl-growth ---
  auto* growth = app.add_subcommand("kl-growth", "median KL against the optimal prior per n");
  std::string g_learner = "exp:beta=1";
  int g_m = 3;
  std::string g_grid = "64,256,1024,4096";
  long long g_trials = 500;
  std::string g_prior = "optimal";
  long long g_prior_samples = 50'000;
  growth->add_option("--learner", g_learner, "learner spec");
  growth->add_option("--m", g_m, "sample size");
  growth->add_option("--n-grid", g_grid, "comma-separated increasing even n values");
  growth->add_option("--trials", g_trials, "trials per grid point");
  growth->add_option("--prior", g_prior, "prior spec (optimal | cover:eps=F | point:k=K)");
  growth->add_option("--prior-samples", g_prior_samples, "samples for optimal-prior estimation");

  // --- profile ---
  auto* profile = app.add_subcommand("profile", "p-profile of a learner for one type");
  std::string p_learner = "exp:beta=1";
  int p_n = 10;
  std::string p_pi = "1,2,3";
  std::string p_labels = "-,+,+";
  long long p_reps = 8;
  profile->add_option("--learner", p_learner, "learner spec");
  profile->add_option("--n", p_n, "domain size");
  profile->add_option("--pi", p_pi, "order-type, e.g. 1,3,2");
  profile->add_option("--labels", p_labels, "labels, e.g. -,+,+");
  profile->add_option("--reps", p_reps, "representative samples");

  // --- check-homogeneity ---
  auto* homo = app.add_subcommand("check-homogeneity", "approximate-homogeneity verdict");
  std::string h_learner = "exp:beta=1";
  int h_n = 12, h_m = 2;
  double h_gamma = 0.5;
  long long h_cap = 10'000'000;
  homo->add_option("--learner", h_learner, "learner spec");
  homo->add_option("--n", h_n, "domain size");
  homo->add_option("--m", h_m, "sample size");
  homo->add_option("--gamma", h_gamma, "gamma in (0,1)");
  homo->add_option("--exhaustive-cap", h_cap, "learner-application budget before sampling");

  // --- sensitivity-cert ---
  auto* cert = app.add_subcommand("sensitivity-cert", "per-x̂ KL lower-bound certificates");
  int c_b = 8;
  double c_q1 = 0.25, c_q2 = 0.75;
  std::string c_r = "auto";
  long long c_trials = 1000;
  std::string c_prior = "avg";
  cert->add_option("--b", c_b, "index set size 2^b");
  cert->add_option("--q1", c_q1, "lower probability level");
  cert->add_option("--q2", c_q2, "upper probability level");
  cert->add_option("--r", c_r, "draws per event: integer or 'auto'");
  cert->add_option("--trials", c_trials, "Monte-Carlo trials per mass");
  cert->add_option("--prior", c_prior, "avg | uniform | step:at=X");

  // --- ramsey ---
  auto* ramsey = app.add_subcommand("ramsey", "Φ and Ramsey-size numerics");
  int r_m = 2;
  double r_gamma = 0.5;
  std::string r_n = "2^^3(40)";
  double r_target = 0.0;
  ramsey->add_option("--m", r_m, "sample size");
  ramsey->add_option("--gamma", r_gamma, "gamma in (0,1)");
  ramsey->add_option("--n", r_n, "domain size: d or 2^^h(t)");
  ramsey->add_option("--target", r_target, "report the n threshold for Φ >= target");

  // global flags are accepted on either side of the subcommand
  for (auto* sub : {tradeoff, spacing, growth, profile, homo, cert, ramsey}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg_override;
    if (!config_path.empty()) {
      cfg_override = load_config(config_path);
      if (cfg_override.contains("seed")) seed = cfg_override["seed"].get<std::uint64_t>();
      if (cfg_override.contains("out")) out_path = cfg_override["out"].get<std::string>();
      if (cfg_override.contains("format")) format = cfg_override["format"].get<std::string>();
    }

    if (tradeoff->parsed()) {
      tcfg.seed = seed;
      tcfg.out = out_path;
      tcfg.format = format;
      if (!cfg_override.is_null()) pblab::from_json_config(cfg_override, tcfg);
      const auto report = pblab::run_tradeoff_experiment(tcfg);
      if (tcfg.format == "json") {
        write_output(tcfg.out, pblab::to_json(report).dump(2) + "\n");
      } else {
        write_output(tcfg.out, pblab::to_csv(report));
        if (!tcfg.out.empty()) {
          json sidecar{{"config", pblab::to_json(tcfg)},
                       {"effective_k", report.effective_k},
                       {"dichotomy_frequency", report.dichotomy_frequency},
                       {"high_kl_frequency", report.high_kl_frequency},
                       {"high_loss_frequency", report.high_loss_frequency},
                       {"bound_violation_frequency", report.bound_violation_frequency}};
          write_output(tcfg.out + ".config.json", sidecar.dump(2) + "\n");
        }
      }
      return 0;
    }

    if (spacing->parsed()) {
      if (!cfg_override.is_null()) {
        if (cfg_override.contains("k")) sp_k = cfg_override["k"].get<int>();
        if (cfg_override.contains("m")) sp_m = cfg_override["m"].get<int>();
        if (cfg_override.contains("trials")) sp_trials = cfg_override["trials"].get<long long>();
      }
      const double freq = pblab::spacing_event_probability(sp_k, sp_m, sp_trials, seed);
      const json full{{"k", sp_k}, {"m", sp_m}, {"trials", sp_trials}, {"seed", seed}, {"frequency", freq}};
      if (format == "json") {
        write_output(out_path, full.dump(2) + "\n");
      } else {
        std::ostringstream os;
        os << "k,m,trials,frequency\n" << sp_k << ',' << sp_m << ',' << sp_trials << ',' << freq << '\n';
        write_output(out_path, os.str());
        if (!out_path.empty()) write_output(out_path + ".config.json", full.dump(2) + "\n");
      }
      return 0;
    }

    if (growth->parsed()) {
      if (!cfg_override.is_null()) {
        if (cfg_override.contains("learner")) g_learner = cfg_override["learner"].get<std::string>();
        if (cfg_override.contains("m")) g_m = cfg_override["m"].get<int>();
        if (cfg_override.contains("n_grid")) g_grid = cfg_override["n_grid"].get<std::string>();
        if (cfg_override.contains("trials")) g_trials = cfg_override["trials"].get<long long>();
        if (cfg_override.contains("prior")) g_prior = cfg_override["prior"].get<std::string>();
        if (cfg_override.contains("prior_samples")) g_prior_samples = cfg_override["prior_samples"].get<long long>();
      }
      const auto rows = pblab::kl_growth_experiment(g_learner, g_m, split_ints(g_grid), g_trials,
                                                    seed, g_prior, g_prior_samples);
      const json config{{"learner", g_learner}, {"m", g_m},         {"n_grid", g_grid},
                        {"trials", g_trials},   {"prior", g_prior}, {"prior_samples", g_prior_samples},
                        {"seed", seed}};
      if (format == "json") {
        json jrows = json::array();
        for (const auto& r : rows)
          jrows.push_back({{"n", r.n}, {"median_kl", r.median_kl}, {"q25", r.q25}, {"q75", r.q75}});
        write_output(out_path, json{{"config", config}, {"rows", std::move(jrows)}}.dump(2) + "\n");
      } else {
        write_output(out_path, pblab::to_csv(rows));
        if (!out_path.empty()) write_output(out_path + ".config.json", config.dump(2) + "\n");
      }
      return 0;
    }

    if (profile->parsed()) {
      if (!cfg_override.is_null()) {
        if (cfg_override.contains("learner")) p_learner = cfg_override["learner"].get<std::string>();
        if (cfg_override.contains("n")) p_n = cfg_override["n"].get<int>();
        if (cfg_override.contains("pi")) p_pi = cfg_override["pi"].get<std::string>();
        if (cfg_override.contains("labels")) p_labels = cfg_override["labels"].get<std::string>();
        if (cfg_override.contains("reps")) p_reps = cfg_override["reps"].get<long long>();
      }
      const pblab::Domain dom(p_n);
      const auto learner = pblab::parse_learner(p_learner, dom);
      pblab::EquivalenceType type;
      type.pi = split_ints(p_pi);
      type.ybar = parse_label_list(p_labels);
      if (type.pi.size() != type.ybar.size())
        throw std::invalid_argument("profile: pi and labels must have equal length");
      std::vector<int> X(static_cast<std::size_t>(p_n));
      for (int x = 1; x <= p_n; ++x) X[static_cast<std::size_t>(x - 1)] = x;
      const auto prof = pblab::p_profile(learner, type, X, p_reps);
      if (format == "json") {
        json entries = json::array();
        for (const auto& v : prof.p) entries.push_back(v ? json(*v) : json(nullptr));
        write_output(out_path, json{{"type", type.str()},
                                    {"p", entries},
                                    {"max_deviation", prof.max_deviation},
                                    {"complete", prof.complete()}}.dump(2) + "\n");
      } else {
        std::ostringstream os;
        os << "i,p,absent\n";
        for (std::size_t i = 0; i < prof.p.size(); ++i) {
          os << i << ',';
          if (prof.p[i]) os << *prof.p[i];
          os << ',' << (prof.p[i] ? 0 : 1) << '\n';
        }
        write_output(out_path, os.str());
      }
      return 0;
    }

    if (homo->parsed()) {
      if (!cfg_override.is_null()) {
        if (cfg_override.contains("learner")) h_learner = cfg_override["learner"].get<std::string>();
        if (cfg_override.contains("n")) h_n = cfg_override["n"].get<int>();
        if (cfg_override.contains("m")) h_m = cfg_override["m"].get<int>();
        if (cfg_override.contains("gamma")) h_gamma = cfg_override["gamma"].get<double>();
        if (cfg_override.contains("exhaustive_cap")) h_cap = cfg_override["exhaustive_cap"].get<long long>();
      }
      const pblab::Domain dom(h_n);
      const auto learner = pblab::parse_learner(h_learner, dom);
      std::vector<int> X(static_cast<std::size_t>(h_n));
      for (int x = 1; x <= h_n; ++x) X[static_cast<std::size_t>(x - 1)] = x;
      const auto report = pblab::check_approx_homogeneity(learner, X, h_m, h_gamma, h_cap, seed);
      json j{{"pass", report.pass},
             {"worst_violation", report.worst_violation},
             {"bound", report.bound},
             {"exhaustive", report.exhaustive},
             {"coverage", report.coverage},
             {"learner_calls", report.learner_calls}};
      if (report.witness) {
        j["witness"] = {{"type", report.witness->type.str()},
                        {"pos", report.witness->pos_index},
                        {"low_sample", pblab::to_string(report.witness->low_sample)},
                        {"low_x", report.witness->low_x},
                        {"low_value", report.witness->low_value},
                        {"high_sample", pblab::to_string(report.witness->high_sample)},
                        {"high_x", report.witness->high_x},
                        {"high_value", report.witness->high_value}};
      }
      write_output(out_path, j.dump(2) + "\n");
      return 0;
    }

    if (cert->parsed()) {
      if (!cfg_override.is_null()) {
        if (cfg_override.contains("b")) c_b = cfg_override["b"].get<int>();
        if (cfg_override.contains("q1")) c_q1 = cfg_override["q1"].get<double>();
        if (cfg_override.contains("q2")) c_q2 = cfg_override["q2"].get<double>();
        if (cfg_override.contains("r")) c_r = cfg_override["r"].get<std::string>();
        if (cfg_override.contains("trials")) c_trials = cfg_override["trials"].get<long long>();
        if (cfg_override.contains("prior")) c_prior = cfg_override["prior"].get<std::string>();
      }
      const int n = 1 << c_b;
      const int r = (c_r == "auto") ? pblab::default_r(c_b, c_q1, c_q2) : std::stoi(c_r);
      const auto family = pblab::make_step_family(c_b, c_q1, c_q2);
      pblab::GibbsClassifier prior = [&]() -> pblab::GibbsClassifier {
        if (c_prior == "avg") return pblab::make_family_average_prior(family);
        if (c_prior == "uniform") {
          std::vector<std::pair<pblab::Hypothesis, pblab::Rational>> atoms;
          for (int k = 0; k <= n; ++k)
            atoms.emplace_back(pblab::Hypothesis::threshold(k), pblab::Rational(1, n + 1));
          return pblab::GibbsClassifier::from_rational_atoms(n, std::move(atoms));
        }
        if (c_prior.rfind("step:at=", 0) == 0) {
          const int at = std::stoi(c_prior.substr(std::string("step:at=").size()));
          pblab::Rational rq1, rq2;
          if (!pblab::Rational::from_double_dyadic(c_q1, rq1) ||
              !pblab::Rational::from_double_dyadic(c_q2, rq2))
            throw std::invalid_argument("step prior requires dyadic q1/q2");
          return pblab::GibbsClassifier::from_rational_atoms(
              n, {{pblab::Hypothesis::threshold(0), rq1},
                  {pblab::Hypothesis::threshold(at), rq2 - rq1},
                  {pblab::Hypothesis::threshold(n), pblab::Rational(1) - rq2}});
        }
        throw std::invalid_argument("unknown cert prior spec: " + c_prior);
      }();
      const auto report = pblab::kl_certificate(family, prior, c_q1, c_q2, r, c_trials, seed);
      if (format == "json") {
        json rows = json::array();
        for (const auto& row : report.rows)
          rows.push_back({{"xhat", row.xhat},
                          {"Q_mass", row.q_mass},
                          {"P_mass", row.p_mass},
                          {"certificate", row.certificate},
                          {"direct_kl", row.direct_kl},
                          {"q_exact", row.q_exact},
                          {"p_exact", row.p_exact}});
        write_output(out_path, json{{"family_valid", report.family_valid},
                                    {"r", report.r},
                                    {"trials", report.trials},
                                    {"rows", std::move(rows)}}.dump(2) + "\n");
      } else {
        write_output(out_path, pblab::to_csv(report));
      }
      if (!report.family_valid) {
        std::cerr << "family premise violated on " << report.premise_violations.size()
                  << " grid points\n";
        return 2;
      }
      return 0;
    }

    if (ramsey->parsed()) {
      if (!cfg_override.is_null()) {
        if (cfg_override.contains("m")) r_m = cfg_override["m"].get<int>();
        if (cfg_override.contains("gamma")) r_gamma = cfg_override["gamma"].get<double>();
        if (cfg_override.contains("n")) r_n = cfg_override["n"].get<std::string>();
        if (cfg_override.contains("target")) r_target = cfg_override["target"].get<double>();
      }
      const pblab::TowerInt n = pblab::parse_tower(r_n);
      const double phi_value = pblab::phi(r_m, r_gamma, n);
      const double q_colors = std::pow(10.0 * r_m / r_gamma, 2.0 * r_m);
      json j{{"m", r_m},
             {"gamma", r_gamma},
             {"n", n.str()},
             {"phi", std::isinf(phi_value) ? json("inf") : json(phi_value)},
             {"log_iter_m", pblab::tower_to_double(pblab::iterated_log(r_m, n))}};
      if (q_colors < 9e18) {
        const double rs = pblab::ramsey_homogeneous_size(static_cast<long long>(q_colors), r_m + 1, n);
        j["ramsey_size"] = std::isinf(rs) ? json("inf") : json(rs);
      }
      if (r_target > 0.0) {
        const pblab::TowerInt threshold = pblab::phi_threshold_n(r_m, r_gamma, r_target);
        j["target"] = r_target;
        j["n_threshold"] = threshold.str();
        j["n_reaches_target"] = !pblab::tower_less(n, threshold);
      }
      write_output(out_path, j.dump(2) + "\n");
      return 0;
    }
  } catch (const pblab::BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
