// Experiment harness: exact decomposition, identity verification, Monte
// Carlo estimation, the LCS suite, Gaussian-limit tables, prescribed
// jackknife construction and the level-gap integral, with CSV/JSON output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varjack/builtins.hpp"
#include "varjack/exact.hpp"
#include "varjack/gaussian.hpp"
#include "varjack/instances.hpp"
#include "varjack/io.hpp"
#include "varjack/lcs_lab.hpp"
#include "varjack/mc.hpp"
#include "varjack/quadrature.hpp"

using namespace varjack;
using nlohmann::json;

namespace {

struct Output {
  std::string path;          // empty: stdout
  std::string format = "csv";
  ExperimentManifest manifest;

  void emit(const CsvTable& table, const json& rows) const {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
    if (format == "json") {
      *os << experiment_json(manifest, rows).dump(2) << '\n';
      return;
    }
    // manifest echoed as a comment line; timestamp kept out of the CSV so
    // identical manifests produce byte-identical files
    json m = manifest.to_json();
    m.erase("timestamp");
    *os << "# manifest: " << m.dump() << '\n';
    table.write(*os);
  }
};

ProductSpace parse_space(const std::string& spec, int n) {
  if (spec == "rademacher" || spec == "bernoulli") return bernoulli_space(n);
  if (spec.rfind("bernoulli:", 0) == 0)
    return bernoulli_space(n, std::stod(spec.substr(10)));
  if (spec.rfind("uniform:", 0) == 0)
    return uniform_space(n, std::stoi(spec.substr(8)));
  throw CLI::ValidationError("--space",
                             "expected rademacher | bernoulli[:p] | uniform:m");
}

CoordFunction parse_function(const std::string& spec, int n) {
  if (spec == "additive") return make_additive(n, ValueTable::signs());
  if (spec == "additive01") return make_additive(n, ValueTable::identity(2));
  if (spec == "parity") return make_parity(n);
  if (spec == "dictator") return make_dictator(n);
  if (spec.rfind("prefix:", 0) == 0)
    return make_product_of_prefix(n, std::stoi(spec.substr(7)));
  if (spec.rfind("tribes:", 0) == 0)
    return make_tribes(n, std::stoi(spec.substr(7)));
  if (spec == "lcs") {
    if (n % 2 != 0)
      throw CLI::ValidationError("--function", "lcs needs an even dimension");
    return make_lcs_function(n / 2, 4);
  }
  throw CLI::ValidationError(
      "--function",
      "expected additive | additive01 | parity | dictator | prefix:m | "
      "tribes:w | lcs");
}

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_reals(csv)) out.push_back(static_cast<int>(v));
  return out;
}

Word parse_word(const std::string& bits) {
  Word w;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw CLI::ValidationError("--w1/--w2", "words are strings of 0/1");
    w.push_back(c - '0');
  }
  return w;
}

std::string num(double v) { return format_number(v); }

int run_decompose(const json& cfg, Output& out) {
  const int n = cfg.at("n");
  auto space = parse_space(cfg.at("space"), n);
  auto f = parse_function(cfg.at("function"), n);
  auto t = correlation_table(space, f);
  auto r = b_and_derivatives(t);
  auto id = verify_identities(r, t);

  CsvTable table;
  table.header = {"k", "B_k", "Jprime_k", "Kprime_k"};
  json rows = json::array();
  for (int k = 1; k <= n; ++k) {
    table.add_row({std::to_string(k), num(r.B[k - 1]), num(r.Jp[k - 1]),
                   num(r.Kp[k - 1])});
    rows.push_back({{"k", k},
                    {"B_k", r.B[k - 1]},
                    {"Jprime_k", r.Jp[k - 1]},
                    {"Kprime_k", r.Kp[k - 1]}});
  }
  out.manifest.config["variance"] = r.variance;
  out.manifest.config["exact"] = r.exact_flag;
  out.emit(table, rows);
  if (!id.all_pass()) {
    for (const auto& e : id.entries)
      if (!e.pass)
        std::cerr << "identity " << e.name << " residual " << e.residual
                  << " exceeds " << id.tolerance << '\n';
    return 1;
  }
  return 0;
}

int run_verify(const json& cfg, Output& out) {
  const int instances = cfg.at("instances");
  RandomSource rng(cfg.at("seed").get<std::uint64_t>());
  CsvTable table;
  table.header = {"instance", "kind", "n", "identity", "residual", "pass"};
  json rows = json::array();
  bool all_ok = true;
  std::string first_bad;
  for (int i = 0; i < instances; ++i) {
    auto inst = make_random_instance(rng, 8);
    auto t = correlation_table(inst.space, inst.f);
    auto r = b_and_derivatives(t);
    auto id = verify_identities(r, t);
    for (const auto& e : id.entries) {
      table.add_row({std::to_string(i), inst.kind,
                     std::to_string(inst.space.dimension()), e.name,
                     num(e.residual), e.pass ? "1" : "0"});
      rows.push_back({{"instance", i},
                      {"kind", inst.kind},
                      {"n", inst.space.dimension()},
                      {"identity", e.name},
                      {"residual", e.residual},
                      {"pass", e.pass}});
      if (!e.pass && first_bad.empty())
        first_bad = e.name + " residual " + num(e.residual);
      all_ok = all_ok && e.pass;
    }
  }
  out.emit(table, rows);
  if (!all_ok) {
    std::cerr << "identity failure: " << first_bad << '\n';
    return 1;
  }
  return 0;
}

int run_estimate(const json& cfg, Output& out) {
  const int n = cfg.at("n");
  auto space = parse_space(cfg.at("space"), n);
  auto f = parse_function(cfg.at("function"), n);
  EstimatorConfig ec;
  ec.samples = cfg.at("samples").get<std::uint64_t>();
  ec.seed = cfg.at("seed").get<std::uint64_t>();
  ec.threads = cfg.at("threads");
  const std::string quantity = cfg.at("quantity");

  CsvTable table;
  table.header = {"quantity", "k", "mean", "stderr", "count", "seed"};
  json rows = json::array();
  auto push = [&](const std::string& q, int k, const Estimate& e) {
    table.add_row({q, std::to_string(k), num(e.mean), num(e.std_error),
                   std::to_string(e.count), std::to_string(ec.seed)});
    rows.push_back({{"quantity", q},
                    {"k", k},
                    {"mean", e.mean},
                    {"stderr", e.std_error},
                    {"count", e.count},
                    {"seed", ec.seed}});
    if (e.negative_warning)
      std::cerr << "warning: nonnegative quantity " << q
                << " estimated negative\n";
  };
  if (quantity == "variance") {
    push("variance", 0, estimate_variance(space, f, ec));
  } else if (quantity == "bk") {
    const int k = cfg.at("k");
    push("B_k", k, estimate_b_k(space, f, k, ec));
  } else {
    throw CLI::ValidationError("--quantity", "expected variance | bk");
  }
  out.emit(table, rows);
  return 0;
}

EstimatorConfig mc_config(const json& cfg) {
  EstimatorConfig ec;
  ec.samples = cfg.at("samples").get<std::uint64_t>();
  ec.seed = cfg.at("seed").get<std::uint64_t>();
  ec.threads = cfg.at("threads");
  return ec;
}

int run_lcs_upper(const json& cfg, Output& out) {
  const int n = cfg.at("n");
  const int m = cfg.at("alphabet");
  auto rep = upper_bound_report(
      LcsModel(n, FiniteDistribution::uniform(m), FiniteDistribution::uniform(m)),
      mc_config(cfg));
  CsvTable table;
  table.header = {"n",       "empirical_var", "stderr",
                  "bound_quarter", "bound_alphabet", "symmetry"};
  table.add_row({std::to_string(n), num(rep.empirical_variance.mean),
                 num(rep.empirical_variance.std_error), num(rep.bound_quarter),
                 num(rep.bound_alphabet), rep.symmetry_flag ? "1" : "0"});
  json rows = json::array(
      {{{"n", n},
        {"empirical_var", rep.empirical_variance.mean},
        {"stderr", rep.empirical_variance.std_error},
        {"bound_quarter", rep.bound_quarter},
        {"bound_alphabet", rep.bound_alphabet},
        {"symmetry", rep.symmetry_flag}}});
  out.emit(table, rows);
  const double slack = 4.0 * rep.empirical_variance.std_error;
  const double bound =
      rep.symmetry_flag ? std::min(rep.bound_quarter, rep.bound_alphabet)
                        : rep.bound_alphabet;
  if (rep.empirical_variance.mean > bound + slack) {
    std::cerr << "upper bound violated: " << rep.empirical_variance.mean
              << " > " << bound << " + 4 stderr\n";
    return 1;
  }
  return 0;
}

int run_lcs_blast(const json& cfg, Output& out) {
  const int n = cfg.at("n");
  const double p = cfg.at("p");
  auto rep = blast_lcs_estimate(
      LcsModel(n, FiniteDistribution::bernoulli(p), FiniteDistribution::bernoulli(p)),
      mc_config(cfg));
  CsvTable table;
  table.header = {"n", "p", "b_last", "stderr", "variance_lower"};
  table.add_row({std::to_string(n), num(p), num(rep.b_last.mean),
                 num(rep.b_last.std_error), num(rep.variance_lower.mean)});
  json rows = json::array({{{"n", n},
                            {"p", p},
                            {"b_last", rep.b_last.mean},
                            {"stderr", rep.b_last.std_error},
                            {"variance_lower", rep.variance_lower.mean}}});
  out.emit(table, rows);
  return 0;
}

int run_lcs_b1(const json& cfg, Output& out) {
  const int n = cfg.at("n");
  const int m = cfg.at("alphabet");
  auto e = b1_lcs_estimate(
      LcsModel(n, FiniteDistribution::uniform(m), FiniteDistribution::uniform(m)),
      mc_config(cfg));
  CsvTable table;
  table.header = {"n", "alphabet", "b1", "stderr", "count"};
  table.add_row({std::to_string(n), std::to_string(m), num(e.mean),
                 num(e.std_error), std::to_string(e.count)});
  json rows = json::array({{{"n", n},
                            {"alphabet", m},
                            {"b1", e.mean},
                            {"stderr", e.std_error},
                            {"count", e.count}}});
  out.emit(table, rows);
  return 0;
}

int run_lcs_figure1(const json& cfg, Output& out) {
  PerturbationSpec spec;
  spec.w1 = parse_word(cfg.at("w1"));
  spec.w2 = parse_word(cfg.at("w2"));
  spec.b = static_cast<int>(spec.w1.size());
  if (spec.w1.size() != spec.w2.size())
    throw CLI::ValidationError("--w2", "w1 and w2 must have equal length");
  EstimatorConfig ec;
  ec.samples = cfg.at("replicas").get<std::uint64_t>();
  ec.seed = cfg.at("seed").get<std::uint64_t>();
  ec.threads = cfg.at("threads");

  CsvTable table;
  table.header = {"n", "b", "statistic", "stderr", "count"};
  json rows = json::array();
  for (int n : parse_ints(cfg.at("n"))) {
    auto e = cell_statistic(LcsModel::uniform_binary(n), spec, ec);
    table.add_row({std::to_string(n), std::to_string(spec.b), num(e.mean),
                   num(e.std_error), std::to_string(e.count)});
    rows.push_back({{"n", n},
                    {"b", spec.b},
                    {"statistic", e.mean},
                    {"stderr", e.std_error},
                    {"count", e.count}});
  }
  out.emit(table, rows);
  return 0;
}

int run_lcs_omitted(const json& cfg, Output& out) {
  const int n = cfg.at("n");
  const int m = cfg.at("alphabet");  // y-alphabet size; x has one extra letter
  const double p = cfg.at("p");
  std::vector<int> atoms(m + 1);
  std::vector<double> probs(m + 1, (1.0 - p) / m);
  for (int i = 0; i <= m; ++i) atoms[i] = i;
  probs[m] = p;
  LcsModel model(n, FiniteDistribution(atoms, probs),
                 FiniteDistribution::uniform(m));
  auto rep = omitted_letter_bound(model, m, mc_config(cfg));
  CsvTable table;
  table.header = {"n", "p", "delta_e", "stderr", "b2n_linear",
                  "b2n_quadratic", "var_lower_linear", "var_lower_quadratic"};
  table.add_row({std::to_string(n), num(p), num(rep.delta_e.mean),
                 num(rep.delta_e.std_error), num(rep.b2n_linear),
                 num(rep.b2n_quadratic), num(rep.variance_lower_linear),
                 num(rep.variance_lower_quadratic)});
  json rows = json::array({{{"n", n},
                            {"p", p},
                            {"delta_e", rep.delta_e.mean},
                            {"stderr", rep.delta_e.std_error},
                            {"b2n_linear", rep.b2n_linear},
                            {"b2n_quadratic", rep.b2n_quadratic},
                            {"var_lower_linear", rep.variance_lower_linear},
                            {"var_lower_quadratic", rep.variance_lower_quadratic}}});
  out.emit(table, rows);
  return 0;
}

int run_lcs_varsup(const json& cfg, Output& out) {
  const double p0 = cfg.at("p0");
  const double gh = cfg.at("gamma_half");
  const double v = varsup_constant(p0, gh);
  CsvTable table;
  table.header = {"p0", "gamma_half", "constant"};
  table.add_row({num(p0), num(gh), num(v)});
  json rows = json::array({{{"p0", p0}, {"gamma_half", gh}, {"constant", v}}});
  out.emit(table, rows);
  return 0;
}

int run_gaussian(const json& cfg, Output& out) {
  PolynomialG g(parse_reals(cfg.at("coeffs")));
  const int kmax = cfg.at("kmax");
  auto rows_data = convergence_table(g, parse_ints(cfg.at("n_grid")), kmax);
  auto res = gaussian_series_residuals(g);
  CsvTable table;
  table.header = {"n", "k", "J_k", "eta_k", "K_k", "theta_k", "gap_J", "gap_K"};
  json rows = json::array();
  for (const auto& row : rows_data) {
    table.add_row({std::to_string(row.n), std::to_string(row.k), num(row.J),
                   num(row.eta), num(row.K), num(row.theta), num(row.gap_J),
                   num(row.gap_K)});
    rows.push_back({{"n", row.n},
                    {"k", row.k},
                    {"J_k", row.J},
                    {"eta_k", row.eta},
                    {"K_k", row.K},
                    {"theta_k", row.theta},
                    {"gap_J", row.gap_J},
                    {"gap_K", row.gap_K}});
  }
  out.manifest.config["series_residual"] = res.max_residual();
  out.emit(table, rows);
  if (res.max_residual() > 1e-12) {
    std::cerr << "series identity residual " << res.max_residual()
              << " exceeds 1e-12\n";
    return 1;
  }
  return 0;
}

int run_hoeffding(const json& cfg, Output& out) {
  HoeffdingSpec spec;
  spec.targets = parse_reals(cfg.at("targets"));
  spec.n = static_cast<int>(spec.targets.size());
  auto hc = hoeffding_construct(spec);
  CsvTable table;
  table.header = {"k", "target", "achieved", "residual"};
  json rows = json::array();
  double worst = 0.0;
  if (spec.n <= 10) {
    auto r = b_and_derivatives(
        correlation_table(rademacher_space(spec.n), hc.S));
    for (int k = 1; k <= spec.n; ++k) {
      const double achieved = factorial(k) * r.Kp[k - 1];
      const double res = std::abs(achieved - spec.targets[k - 1]) /
                         std::max(1.0, spec.targets[k - 1]);
      worst = std::max(worst, res);
      table.add_row({std::to_string(k), num(spec.targets[k - 1]),
                     num(achieved), num(res)});
      rows.push_back({{"k", k},
                      {"target", spec.targets[k - 1]},
                      {"achieved", achieved},
                      {"residual", res}});
    }
  } else {
    for (int k = 1; k <= spec.n; ++k) {
      table.add_row({std::to_string(k), num(spec.targets[k - 1]),
                     num(hc.amplitudes[k - 1]), ""});
      rows.push_back({{"k", k},
                      {"target", spec.targets[k - 1]},
                      {"amplitude", hc.amplitudes[k - 1]}});
    }
  }
  out.emit(table, rows);
  if (worst > 1e-9) {
    std::cerr << "round-trip residual " << worst << " exceeds 1e-9\n";
    return 1;
  }
  return 0;
}

int run_hyper(const json& cfg, Output& out) {
  const int n_max = cfg.at("n_max");
  CsvTable table;
  table.header = {"n", "R", "ratio", "error_estimate", "nodes"};
  json rows = json::array();
  double min_ratio = 1e300;
  for (int n = 1; n <= n_max; ++n) {
    auto h = hyper_gap_ratio(n);
    min_ratio = std::min(min_ratio, h.ratio);
    table.add_row({std::to_string(n), num(h.R), num(h.ratio),
                   num(h.error_estimate), std::to_string(h.nodes)});
    rows.push_back({{"n", n},
                    {"R", h.R},
                    {"ratio", h.ratio},
                    {"error_estimate", h.error_estimate},
                    {"nodes", h.nodes}});
  }
  out.emit(table, rows);
  if (min_ratio < 0.5099) {
    std::cerr << "ratio floor violated: " << min_ratio << " < 0.5099\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variance decomposition and jackknife laboratory"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t samples = 10000;
  int threads = 1;
  std::string out_path, format = "csv", config_path;
  app.add_option("--seed", seed, "RNG seed (default: VARJACK_SEED or 1)")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON config file (overrides flags)");

  // decompose
  auto* dec = app.add_subcommand("decompose", "exact decomposition report");
  int dec_n = 4;
  std::string dec_space = "rademacher", dec_fn = "additive";
  dec->add_option("--n", dec_n, "dimension");
  dec->add_option("--space", dec_space, "rademacher | bernoulli[:p] | uniform:m");
  dec->add_option("--function", dec_fn, "function family");

  // verify
  auto* ver = app.add_subcommand("verify", "identity suite on random instances");
  int ver_instances = 50;
  ver->add_option("--instances", ver_instances, "instance count");

  // estimate
  auto* est = app.add_subcommand("estimate", "Monte Carlo estimators");
  int est_n = 6, est_k = 1;
  std::string est_space = "rademacher", est_fn = "additive",
              est_quantity = "variance";
  est->add_option("--n", est_n, "dimension");
  est->add_option("--space", est_space, "coordinate law");
  est->add_option("--function", est_fn, "function family");
  est->add_option("--quantity", est_quantity, "variance | bk");
  est->add_option("--k", est_k, "order for bk");

  // lcs sub-subcommands
  auto* lcs = app.add_subcommand("lcs", "longest-common-subsequence suite");
  lcs->require_subcommand(1);
  auto* lup = lcs->add_subcommand("upper", "variance upper bounds");
  int lup_n = 200, lup_m = 2;
  lup->add_option("--n", lup_n, "word length");
  lup->add_option("--alphabet", lup_m, "alphabet size");
  auto* lbl = lcs->add_subcommand("blast", "top-level weight estimate");
  int lbl_n = 50;
  double lbl_p = 0.5;
  lbl->add_option("--n", lbl_n, "word length");
  lbl->add_option("--p", lbl_p, "P(letter = 1)");
  auto* lb1 = lcs->add_subcommand("b1", "first-level weight estimate");
  int lb1_n = 100, lb1_m = 2;
  lb1->add_option("--n", lb1_n, "word length");
  lb1->add_option("--alphabet", lb1_m, "alphabet size");
  auto* lf1 = lcs->add_subcommand("figure1", "block statistic vs n");
  std::string lf1_n = "20,60,100,150,200", lf1_w1 = "10", lf1_w2 = "11";
  std::uint64_t lf1_replicas = 1000;
  lf1->add_option("--n", lf1_n, "comma-separated word lengths");
  lf1->add_option("--replicas", lf1_replicas, "replicas per grid point");
  lf1->add_option("--w1", lf1_w1, "first replacement word (bits)");
  lf1->add_option("--w2", lf1_w2, "second replacement word (bits)");
  auto* lom = lcs->add_subcommand("omitted", "omitted-letter lower bound");
  int lom_n = 50, lom_m = 2;
  double lom_p = 0.3;
  lom->add_option("--n", lom_n, "word length");
  lom->add_option("--alphabet", lom_m, "shared alphabet size");
  lom->add_option("--p", lom_p, "mass of the omitted x-letter");
  auto* lvs = lcs->add_subcommand("varsup", "explicit lower-bound constant");
  double lvs_p0 = 0.096, lvs_gh = 0.8263;
  lvs->add_option("--p0", lvs_p0, "bias parameter in (0, 1/2)");
  lvs->add_option("--gamma-half", lvs_gh, "upper bound on gamma(1/2)");

  // gaussian
  auto* gau = app.add_subcommand("gaussian", "Rademacher-sum limit tables");
  std::string gau_coeffs = "0,0,1", gau_grid = "10,20,40,80";
  int gau_kmax = 3;
  gau->add_option("--coeffs", gau_coeffs, "polynomial coefficients c0,c1,...");
  gau->add_option("--n-grid", gau_grid, "comma-separated n values");
  gau->add_option("--kmax", gau_kmax, "highest order");

  // hoeffding
  auto* hoe = app.add_subcommand("hoeffding", "prescribed jackknife values");
  std::string hoe_targets = "3,1,4,1,5";
  hoe->add_option("--targets", hoe_targets, "comma-separated targets a_1..a_n");

  // hyper
  auto* hyp = app.add_subcommand("hyper", "level-gap integral table");
  int hyp_nmax = 20;
  hyp->add_option("--n-max", hyp_nmax, "largest n");

  // let global flags appear after the subcommand name
  for (auto* sub : {dec, ver, est, lcs, gau, hoe, hyp}) sub->fallthrough();
  for (auto* sub : {lup, lbl, lb1, lf1, lom, lvs}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2
  }

  try {
    if (!seed_set) seed = default_seed();

    json cfg;
    cfg["seed"] = seed;
    cfg["samples"] = samples;
    cfg["threads"] = threads;

    std::string name;
    if (app.got_subcommand(dec)) {
      name = "decompose";
      cfg["n"] = dec_n;
      cfg["space"] = dec_space;
      cfg["function"] = dec_fn;
    } else if (app.got_subcommand(ver)) {
      name = "verify";
      cfg["instances"] = ver_instances;
    } else if (app.got_subcommand(est)) {
      name = "estimate";
      cfg["n"] = est_n;
      cfg["space"] = est_space;
      cfg["function"] = est_fn;
      cfg["quantity"] = est_quantity;
      cfg["k"] = est_k;
    } else if (app.got_subcommand(lcs)) {
      if (lcs->got_subcommand(lup)) {
        name = "lcs upper";
        cfg["n"] = lup_n;
        cfg["alphabet"] = lup_m;
      } else if (lcs->got_subcommand(lbl)) {
        name = "lcs blast";
        cfg["n"] = lbl_n;
        cfg["p"] = lbl_p;
      } else if (lcs->got_subcommand(lb1)) {
        name = "lcs b1";
        cfg["n"] = lb1_n;
        cfg["alphabet"] = lb1_m;
      } else if (lcs->got_subcommand(lf1)) {
        name = "lcs figure1";
        cfg["n"] = lf1_n;
        cfg["replicas"] = lf1_replicas;
        cfg["w1"] = lf1_w1;
        cfg["w2"] = lf1_w2;
      } else if (lcs->got_subcommand(lom)) {
        name = "lcs omitted";
        cfg["n"] = lom_n;
        cfg["alphabet"] = lom_m;
        cfg["p"] = lom_p;
      } else {
        name = "lcs varsup";
        cfg["p0"] = lvs_p0;
        cfg["gamma_half"] = lvs_gh;
      }
    } else if (app.got_subcommand(gau)) {
      name = "gaussian";
      cfg["coeffs"] = gau_coeffs;
      cfg["n_grid"] = gau_grid;
      cfg["kmax"] = gau_kmax;
    } else if (app.got_subcommand(hoe)) {
      name = "hoeffding";
      cfg["targets"] = hoe_targets;
    } else {
      name = "hyper";
      cfg["n_max"] = hyp_nmax;
    }

    // config file entries take precedence over flags
    if (!config_path.empty()) {
      const json file_cfg = load_json_config(config_path);
      for (auto it = file_cfg.begin(); it != file_cfg.end(); ++it)
        cfg[it.key()] = it.value();
    }

    Output out;
    out.path = out_path;
    out.format = format;
    out.manifest.subcommand = name;
    out.manifest.config = cfg;
    out.manifest.seed = cfg.at("seed").get<std::uint64_t>();
    out.manifest.timestamp = ExperimentManifest::now_utc();

    if (name == "decompose") return run_decompose(cfg, out);
    if (name == "verify") return run_verify(cfg, out);
    if (name == "estimate") return run_estimate(cfg, out);
    if (name == "lcs upper") return run_lcs_upper(cfg, out);
    if (name == "lcs blast") return run_lcs_blast(cfg, out);
    if (name == "lcs b1") return run_lcs_b1(cfg, out);
    if (name == "lcs figure1") return run_lcs_figure1(cfg, out);
    if (name == "lcs omitted") return run_lcs_omitted(cfg, out);
    if (name == "lcs varsup") return run_lcs_varsup(cfg, out);
    if (name == "gaussian") return run_gaussian(cfg, out);
    if (name == "hoeffding") return run_hoeffding(cfg, out);
    return run_hyper(cfg, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
