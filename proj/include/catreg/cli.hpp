#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it with in-memory streams.
//
// Exit codes: 0 success, 2 invalid arguments or input, 3 a computation
// rejected its (well-formed) input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catreg/association.hpp"
#include "catreg/bootstrap.hpp"
#include "catreg/estimators.hpp"
#include "catreg/hypothesis.hpp"
#include "catreg/io.hpp"
#include "catreg/mutual_information.hpp"
#include "catreg/table.hpp"

namespace catreg::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_domain = 3;

enum class OutputFormat { Human, Structured };

struct CliConfig {
  std::string subcommand;
  std::string input_path = "-";
  std::string input_format = "auto";
  OutputFormat output = OutputFormat::Human;

  std::optional<std::int64_t> x;
  std::optional<std::int64_t> n;
  double prior_a = 1.0;
  double prior_b = 1.0;
  std::string estimator = "beta";

  std::string kind;
  double lambda = 1.0;
  double pi0 = 0.5;
  double tau = 0.5;

  std::string targets_path;
  std::string base = "nats";
  bool drop_empty = false;

  std::optional<std::uint64_t> seed;
  std::int64_t replicates = 10000;
  double alpha = 0.05;
  unsigned threads = 0;
};

namespace detail {

// Wraps failures that come from reading or validating user input.
struct InputFailure {
  std::string message;
};

class Runner {
 public:
  Runner(const CliConfig& cfg, std::istream& in, std::ostream& out) : cfg_(cfg), in_(in), out_(out) {}

  void dispatch() {
    if (cfg_.subcommand == "estimate") return estimate();
    if (cfg_.subcommand == "test") return test();
    if (cfg_.subcommand == "assoc") return assoc();
    if (cfg_.subcommand == "mi") return mutual_information();
    if (cfg_.subcommand == "bootstrap") return bootstrap();
  }

 private:
  std::string read_all(const std::string& path) {
    if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(in_), std::istreambuf_iterator<char>()};
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputFailure{"input: cannot open '" + path + "'"};
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
  }

  ContingencyTable load_table() {
    const std::string text = read_all(cfg_.input_path);
    InputFormat fmt = InputFormat::Auto;
    if (cfg_.input_format == "delimited") fmt = InputFormat::Delimited;
    if (cfg_.input_format == "json") fmt = InputFormat::Json;
    try {
      return parse_table(text, fmt);
    } catch (const Error& e) {
      throw InputFailure{"input: " + std::string(e.what())};
    }
  }

  void emit(const nlohmann::json& doc, const std::vector<std::pair<std::string, std::string>>& human) {
    if (cfg_.output == OutputFormat::Structured) {
      out_ << doc.dump(2) << '\n';
      return;
    }
    for (const auto& [k, v] : human) out_ << k << ": " << v << '\n';
  }

  static std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  }

  static std::string table_text(const ContingencyTable& t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.rows(); ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < t.cols(); ++j) s += (j ? ", " : "") + std::to_string(t(i, j));
      s += "]";
    }
    return s + "]";
  }

  static std::string kind_name(ModeKind k) {
    switch (k) {
      case ModeKind::Interior: return "interior";
      case ModeKind::BoundaryMode: return "boundary";
      case ModeKind::UndefinedMode: return "undefined";
    }
    return "?";
  }

  void estimate() {
    if (!cfg_.x || !cfg_.n) throw InputFailure{"estimate: --x and --n are required"};
    if (*cfg_.n < 0) throw InputFailure{"--n: must be >= 0"};
    if (*cfg_.x < 0 || *cfg_.x > *cfg_.n) throw InputFailure{"--x: must satisfy 0 <= x <= n"};
    const BinomialSample s(*cfg_.x, *cfg_.n);
    BetaPrior prior(cfg_.prior_a, cfg_.prior_b);
    if (cfg_.estimator == "bl") prior = BetaPrior::bayes_laplace();
    if (cfg_.estimator == "jeffreys") prior = BetaPrior::jeffreys();

    nlohmann::json doc{{"command", "estimate"}, {"estimator", cfg_.estimator}, {"x", s.successes()}, {"n", s.trials()}};
    std::vector<std::pair<std::string, std::string>> human{{"estimator", cfg_.estimator}};
    double value = 0.0;
    if (cfg_.estimator == "mle") {
      value = mle(s);
    } else {
      if (cfg_.estimator == "map") {
        const MapEstimate m = map_estimate(prior, s);
        value = m.value;
        doc["mode_kind"] = kind_name(m.kind);
        human.emplace_back("mode_kind", kind_name(m.kind));
      } else if (cfg_.estimator == "bl") {
        value = bayes_laplace(s);
      } else if (cfg_.estimator == "jeffreys") {
        value = jeffreys(s);
      } else {
        value = posterior_mean_beta(prior, s);
      }
      const BetaPrior post = posterior_beta(prior, s);
      doc["prior"] = {{"a", prior.a()}, {"b", prior.b()}};
      doc["posterior"] = {{"a", post.a()}, {"b", post.b()}};
      doc["prior_advisory"] = prior.below_recommended();
      human.emplace_back("prior", "Beta(" + num(prior.a()) + ", " + num(prior.b()) + ")");
      human.emplace_back("posterior", "Beta(" + num(post.a()) + ", " + num(post.b()) + ")");
      if (prior.below_recommended()) human.emplace_back("advisory", "prior shape below 1 can put the mode at 0 or 1");
      if (s.trials() >= 1) {
        const ShrinkageConfig c = decompose_shrinkage(prior, s.trials());
        doc["shrinkage"] = {{"lambda", c.lambda}, {"target", c.target}};
        human.emplace_back("shrinkage_lambda", num(c.lambda));
        human.emplace_back("shrinkage_target", num(c.target));
      }
    }
    doc["estimate"] = value;
    human.insert(human.begin() + 1, {"estimate", num(value)});
    emit(doc, human);
  }

  void test() {
    nlohmann::json doc{{"command", "test"}, {"kind", cfg_.kind}};
    TestReport r;
    double classical = 0.0;
    if (cfg_.kind == "sign") {
      std::int64_t x = 0;
      std::int64_t n = 0;
      if (cfg_.x && cfg_.n) {
        if (*cfg_.n < 1) throw InputFailure{"--n: must be >= 1"};
        if (*cfg_.x < 0 || *cfg_.x > *cfg_.n) throw InputFailure{"--x: must satisfy 0 <= x <= n"};
        x = *cfg_.x;
        n = *cfg_.n;
      } else {
        const ContingencyTable t = load_table();
        if (t.rows() != 1 || t.cols() != 2) throw InputFailure{"input: sign test expects one row 'successes,failures'"};
        x = t(0, 0);
        n = t.total();
      }
      const BinomialSample s(x, n);
      r = sign_regularized(s, cfg_.lambda, cfg_.pi0);
      classical = sign_statistic(s);
      doc["x"] = x;
      doc["n"] = n;
      doc["pi0"] = cfg_.pi0;
    } else {
      const ContingencyTable t = load_table();
      doc["table"] = to_json(t);
      if (cfg_.kind == "homogeneity") {
        r = homogeneity_regularized(t, cfg_.lambda);
        classical = homogeneity_z(t);
      } else {
        r = mcnemar_regularized(t, cfg_.lambda, cfg_.tau);
        classical = mcnemar_t(t);
        doc["tau"] = cfg_.tau;
      }
    }
    doc["classical_statistic"] = classical;
    doc["report"] = to_json(r);
    std::vector<std::pair<std::string, std::string>> human{
        {"kind", cfg_.kind},
        {"lambda", num(r.lambda)},
        {"statistic", num(r.statistic)},
        {"scaled_statistic", num(r.scaled_statistic)},
        {"classical_statistic", num(classical)},
        {"reference", std::string(to_string(r.reference))},
        {"p_two_sided", num(r.p_two_sided)},
        {"p_one_sided_upper", num(r.p_one_sided_upper)},
        {"p_one_sided_lower", num(r.p_one_sided_lower)}};
    if (r.calibration_warning) human.emplace_back("warning", "pi0 != 1/2: scaled statistic is not calibrated to N(0,1)");
    emit(doc, human);
  }

  void assoc() {
    const ContingencyTable t = load_table();
    AssociationReport r;
    if (t.is_2x2()) {
      r = regularized_association(t, cfg_.lambda);
    } else {
      if (cfg_.lambda != 1.0) detail_fail("regularized association is only defined for 2x2 tables");
      r = classical_association(t);
    }
    nlohmann::json doc{{"command", "assoc"}, {"table", to_json(t)}, {"report", to_json(r)}};
    emit(doc, {{"lambda", num(r.lambda)},
               {"z_star", num(r.z_star)},
               {"n", std::to_string(r.n)},
               {"pearson_c", num(r.pearson_c)},
               {"phi", num(r.phi)},
               {"cramers_v", num(r.cramers_v)}});
  }

  void mutual_information() {
    ContingencyTable t = load_table();
    if (cfg_.drop_empty) t = drop_empty_margins(t);
    std::optional<MITargetSpec> targets;
    if (!cfg_.targets_path.empty()) {
      std::vector<std::vector<double>> m;
      try {
        m = parse_real_matrix(read_all(cfg_.targets_path));
      } catch (const Error& e) {
        throw InputFailure{"--targets: " + std::string(e.what())};
      }
      if (m.size() != t.rows() || m.front().size() != t.cols())
        throw InputFailure{"--targets: shape does not match the table (" + std::to_string(t.rows()) + "x" +
                           std::to_string(t.cols()) + ")"};
      std::vector<double> flat;
      for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
      try {
        targets.emplace(MITargetSpec::from_joint(t.rows(), t.cols(), std::move(flat)));
      } catch (const Error& e) {
        throw InputFailure{"--targets: " + std::string(e.what())};
      }
    } else {
      targets.emplace(uniform_targets(t.rows(), t.cols()));
    }
    const MIResult r = mi_regularized(t, cfg_.lambda, *targets);
    const double shown = cfg_.base == "bits" ? r.bits() : r.value;
    nlohmann::json doc{{"command", "mi"}, {"table", to_json(t)}, {"base", cfg_.base}, {"value", shown}, {"report", to_json(r)}};
    emit(doc, {{"value", num(shown) + " " + cfg_.base},
               {"value_nats", num(r.value)},
               {"value_bits", num(r.bits())},
               {"lambda", num(r.lambda)},
               {"cells_elided", std::to_string(r.cells_elided)}});
  }

  void bootstrap() {
    if (!cfg_.seed) throw InputFailure{"--seed: required for bootstrap"};
    const ContingencyTable t = load_table();
    BootstrapConfig bc;
    bc.replicates = cfg_.replicates;
    bc.seed = *cfg_.seed;
    bc.alpha = cfg_.alpha;
    bc.threads = cfg_.threads;
    const BootstrapReport r =
        cfg_.kind == "mcnemar" ? bootstrap_mcnemar(t, cfg_.lambda, cfg_.tau, bc) : bootstrap_homogeneity(t, cfg_.lambda, bc);
    nlohmann::json doc{{"command", "bootstrap"}, {"kind", cfg_.kind}, {"table", to_json(t)}, {"report", to_json(r)}};
    if (cfg_.kind == "mcnemar") doc["tau"] = cfg_.tau;
    std::vector<std::pair<std::string, std::string>> human{{"kind", cfg_.kind},
                                                           {"lambda", num(r.lambda)},
                                                           {"replicates", std::to_string(r.replicates)},
                                                           {"seed", std::to_string(r.seed)},
                                                           {"alpha", num(r.alpha)},
                                                           {"observed_scaled", num(r.observed_scaled)},
                                                           {"critical_value", num(r.critical_value)},
                                                           {"rejection_rate", num(r.rejection_rate)},
                                                           {"p_value", num(r.p_value)},
                                                           {"degenerate_replicates", std::to_string(r.degenerate_replicates)}};
    for (const auto& [level, q] : r.empirical_quantiles) human.emplace_back("quantile_" + num(level), num(q));
    emit(doc, human);
  }

  [[noreturn]] static void detail_fail(const std::string& what) { catreg::detail::fail(ErrorCode::InvalidDims, what); }

  const CliConfig& cfg_;
  std::istream& in_;
  std::ostream& out_;
};

}  // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Regularized estimation and inference for categorical data", "catreg"};
  app.require_subcommand(1);

  std::string output = "human";
  auto add_common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input) {
      sub->add_option("input", cfg.input_path, "Table file (delimited text or JSON); '-' or omitted reads stdin");
      sub->add_option("--input-format", cfg.input_format, "Input format")->check(CLI::IsMember({"auto", "delimited", "json"}));
    }
    sub->add_option("--output", output, "Report format")->check(CLI::IsMember({"human", "structured"}));
  };
  const auto unit = CLI::Range(0.0, 1.0);

  auto* est = app.add_subcommand("estimate", "Estimate a binomial success probability");
  add_common(est, false);
  est->add_option("--x", cfg.x, "Number of successes");
  est->add_option("--n", cfg.n, "Number of trials");
  est->add_option("--prior-a", cfg.prior_a, "Beta prior a")->check(CLI::PositiveNumber);
  est->add_option("--prior-b", cfg.prior_b, "Beta prior b")->check(CLI::PositiveNumber);
  est->add_option("--estimator", cfg.estimator, "Estimator")->check(CLI::IsMember({"mle", "beta", "bl", "jeffreys", "map"}));

  auto* tst = app.add_subcommand("test", "Sign, homogeneity or McNemar test");
  add_common(tst, true);
  tst->add_option("--kind", cfg.kind, "Test")->required()->check(CLI::IsMember({"sign", "homogeneity", "mcnemar"}));
  tst->add_option("--lambda", cfg.lambda, "Regularization weight in (0, 1]")->check(unit);
  tst->add_option("--pi0", cfg.pi0, "Sign test shrinkage target")->check(unit);
  tst->add_option("--tau", cfg.tau, "McNemar shrinkage target")->check(unit);
  tst->add_option("--x", cfg.x, "Sign test successes");
  tst->add_option("--n", cfg.n, "Sign test trials");

  auto* asc = app.add_subcommand("assoc", "Pearson C, phi and Cramer's V");
  add_common(asc, true);
  asc->add_option("--lambda", cfg.lambda, "Regularization weight in (0, 1]")->check(unit);

  auto* mi = app.add_subcommand("mi", "Regularized mutual information");
  add_common(mi, true);
  mi->add_option("--lambda", cfg.lambda, "Regularization weight in [0, 1]")->check(unit);
  mi->add_option("--targets", cfg.targets_path, "Target matrix file (delimited text)");
  mi->add_option("--base", cfg.base, "Logarithm base")->check(CLI::IsMember({"nats", "bits"}));
  mi->add_flag("--drop-empty", cfg.drop_empty, "Remove all-zero rows and columns first");

  auto* bs = app.add_subcommand("bootstrap", "Parametric bootstrap of a regularized test");
  add_common(bs, true);
  bs->add_option("--kind", cfg.kind, "Test")->required()->check(CLI::IsMember({"homogeneity", "mcnemar"}));
  bs->add_option("--lambda", cfg.lambda, "Regularization weight in (0, 1]")->check(unit);
  bs->add_option("--tau", cfg.tau, "McNemar shrinkage target")->check(unit);
  bs->add_option("--replicates", cfg.replicates, "Bootstrap replicates (>= 100)");
  bs->add_option("--seed", cfg.seed, "RNG seed (required)");
  bs->add_option("--alpha", cfg.alpha, "Nominal level")->check(CLI::Range(0.0, 1.0));
  bs->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  std::vector<std::string> storage{"catreg"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  }

  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  cfg.output = output == "structured" ? OutputFormat::Structured : OutputFormat::Human;

  try {
    detail::Runner(cfg, in, out).dispatch();
  } catch (const detail::InputFailure& f) {
    err << "error: " << f.message << '\n';
    return exit_invalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_domain;
  }
  return exit_ok;
}

}  // namespace catreg::cli
