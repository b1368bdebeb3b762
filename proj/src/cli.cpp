#include "liouville/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "liouville/actions.hpp"
#include "liouville/config.hpp"
#include "liouville/csv.hpp"
#include "liouville/diophantine.hpp"
#include "liouville/ebk.hpp"
#include "liouville/errors.hpp"
#include "liouville/lattice.hpp"
#include "liouville/parallel.hpp"
#include "liouville/sturm.hpp"
#include "liouville/weyl.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string metric_path;
  std::string out_path;
  unsigned workers = 0;
  std::uint64_t seed = 1;

  bool echo = false;

  int samples = 257;

  std::string domain;
  double r_min = 10.0, r_max = 100.0;
  int r_steps = 16;
  std::vector<double> shift{0.0, 0.0};
  std::string mode = "exact";
  int poisson_kmax = 100;

  std::optional<double> alpha;
  bool golden = false;
  std::vector<double> pathological;
  int random_count = 0;
  double tau = 2.0;
  std::int64_t kmax = 100000;

  std::string method = "direct";
  int count = 50;
  int resolution = 64;

  std::string source = "lattice";
  double lambda_min = 0.0, lambda_max = 100.0;
  int steps = 64;
};

MetricSpec metric_of(const RunConfig& cfg) {
  if (cfg.metric_path.empty()) fail(ErrorCode::InvalidConfig, "this subcommand needs --metric");
  return load_metric(cfg.metric_path);
}

std::vector<double> geometric(double lo, double hi, int steps) {
  std::vector<double> out;
  for (int i = 0; i < steps; ++i)
    out.push_back(steps == 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1)));
  return out;
}

std::string report_typicality(const TypicalityReport& t) {
  std::ostringstream s;
  s << "tau=" << format_real(t.tau) << " kmax=" << t.kmax << " delta_est=" << format_real(t.delta_est)
    << " worst_pair=(" << t.worst_pair.first << "," << t.worst_pair.second << ")"
    << " delta_min=" << format_real(t.delta_min) << " verdict=" << (t.passed ? "not-refuted" : "refuted");
  return s.str();
}

int cmd_validate(const RunConfig& cfg, std::string& data) {
  const MetricSpec m = metric_of(cfg);
  if (cfg.echo) {
    data = dump_metric(m);
    return exit_ok;
  }
  const ValidationReport report = validate_omega(m);
  std::ostringstream s;
  s << "kind: " << to_string(m.kind) << '\n';
  for (const auto& c : report.conditions)
    s << "condition " << c.index << ": " << (c.passed ? "pass" : "fail") << (c.detail.empty() ? "" : " (" + c.detail + ")")
      << '\n';
  if (report.passed()) {
    const CriticalConstants cc = critical_constants(m);
    s << "c1=" << format_real(cc.c1) << " c2=" << format_real(cc.c2) << " c3=" << format_real(cc.c3)
      << " c4=" << format_real(cc.c4) << '\n';
  }
  s << "verdict: " << (report.passed() ? "pass" : "fail") << '\n';
  data = s.str();
  return report.passed() ? exit_ok : exit_verdict;
}

int cmd_curve(const RunConfig& cfg, std::string& data) {
  const ActionCurve ac(metric_of(cfg));
  const int n = cfg.samples;
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const double c = ac.c_min() + (ac.c_max() - ac.c_min()) * (static_cast<double>(i) + 0.5) / n;
    auto guarded = [](auto&& f) {
      try {
        return f();
      } catch (const Error&) {
        return std::nan("");
      }
    };
    const double a = ac.alpha(c);
    rows[i] = {c,
               ac.F1(c),
               ac.F2(c),
               guarded([&] { return ac.dF(c, 1); }),
               guarded([&] { return ac.dF(c, 2); }),
               guarded([&] { return ac.kappa(c); }),
               a,
               ac.G(a)};
  });
  CsvWriter csv({"c", "F1", "F2", "dF1", "dF2", "kappa", "alpha", "G"});
  for (const auto& r : rows) csv.row(r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]);
  data = csv.str();
  return exit_ok;
}

int cmd_lattice_count(const RunConfig& cfg, std::string& data) {
  std::string domain = cfg.domain.empty() ? (cfg.metric_path.empty() ? "" : "metric") : cfg.domain;
  std::optional<StarDomain> D;
  if (domain == "disk") D = StarDomain::disk();
  else if (domain == "quarter-disk") D = StarDomain::quarter_disk();
  else if (domain == "metric") D = action_domains(std::make_shared<const ActionCurve>(metric_of(cfg))).whole();
  else fail(ErrorCode::InvalidConfig, "choose --domain disk|quarter-disk|metric (metric needs --metric)");
  if (!(cfg.r_max >= cfg.r_min)) fail(ErrorCode::InvalidConfig, "--r-max must be >= --r-min");
  const Vec2 a{cfg.shift[0], cfg.shift[1]};
  const std::vector<double> radii = geometric(cfg.r_min, cfg.r_max, cfg.r_steps);
  const double area = D->area();
  std::vector<double> counts(radii.size());
  if (cfg.mode == "exact") {
    parallel_for(radii.size(), [&](std::size_t i) { counts[i] = count_exact(*D, a, radii[i]).weighted(); });
  } else if (cfg.mode == "mollified") {
    for (std::size_t i = 0; i < radii.size(); ++i) counts[i] = count_mollified(*D, a, radii[i]);
  } else if (cfg.mode == "poisson") {
    for (std::size_t i = 0; i < radii.size(); ++i) counts[i] = poisson_partial_sum(*D, a, radii[i], cfg.poisson_kmax);
  } else {
    fail(ErrorCode::InvalidConfig, "unknown --mode " + cfg.mode);
  }
  CsvWriter csv({"r", "count", "area_term", "remainder"});
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double term = area * radii[i] * radii[i] / (2.0 * kPi * kPi);
    csv.row(radii[i], counts[i], term, counts[i] - term);
  }
  data = csv.str();
  return exit_ok;
}

int cmd_diophantine(const RunConfig& cfg, std::string& data) {
  const int chosen = (cfg.alpha ? 1 : 0) + (cfg.golden ? 1 : 0) + (cfg.pathological.empty() ? 0 : 1) +
                     (cfg.random_count > 0 ? 1 : 0);
  if (chosen != 1) fail(ErrorCode::InvalidConfig, "give exactly one of --alpha, --golden, --pathological, --random");
  std::ostringstream s;
  if (cfg.random_count > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> alphas(cfg.random_count);
    for (double& x : alphas) x = uniform(rng);
    std::vector<TypicalityReport> reports(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) { reports[i] = typicality_test(alphas[i], cfg.tau, cfg.kmax); });
    int passed = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      passed += reports[i].passed;
      s << "alpha=" << format_real(alphas[i]) << ' ' << report_typicality(reports[i]) << '\n';
    }
    s << "passed: " << passed << "/" << cfg.random_count << '\n';
    data = s.str();
    return exit_ok;
  }
  ContinuedFraction cf;
  TypicalityReport t;
  double alpha;
  if (!cfg.pathological.empty()) {
    const double depth = cfg.pathological[1];
    if (depth != std::floor(depth)) fail(ErrorCode::InvalidConfig, "--pathological depth must be an integer");
    cf = pathological_alpha(cfg.pathological[0], static_cast<int>(depth));
    alpha = static_cast<double>(cf.value());
    t = typicality_test(cf, cfg.tau, cfg.kmax);
  } else {
    alpha = cfg.golden ? std::numbers::phi : *cfg.alpha;
    cf = continued_fraction(alpha, 20);
    t = typicality_test(alpha, cfg.tau, cfg.kmax);
  }
  s << "alpha: " << format_real(alpha) << '\n' << "partial_quotients:";
  for (const auto& q : cf.partial_quotients) s << ' ' << q;
  s << "\nconvergent_denominators:";
  for (const auto& q : cf.denominators) s << ' ' << q;
  s << "\ntypicality: " << report_typicality(t) << '\n';
  data = s.str();
  return exit_ok;
}

int cmd_spectrum(const RunConfig& cfg, std::string& data) {
  const MetricSpec m = metric_of(cfg);
  if (cfg.method == "direct") {
    const std::vector<double> e = direct_2d_spectrum(m, cfg.count, cfg.resolution);
    CsvWriter csv({"index", "E", "lambda"});
    for (std::size_t i = 0; i < e.size(); ++i) csv.row(static_cast<long>(i), e[i], std::sqrt(std::max(0.0, e[i])));
    data = csv.str();
    return exit_ok;
  }
  const auto ac = std::make_shared<const ActionCurve>(m);
  // EBK levels up to a Weyl-law radius with slack enumerate enough indices
  const double area = area_torus(m);
  double lambda_max = std::sqrt(4.0 * kPi * (1.5 * cfg.count + 20.0) / area) + 4.0;
  EbkSpectrum ebk;
  for (int attempt = 0; attempt < 8; ++attempt, lambda_max *= 1.3) {
    ebk = ebk_spectrum(*ac, lambda_max);
    if (static_cast<int>(ebk.solutions.size()) + 1 >= cfg.count + 8) break;
  }
  if (static_cast<int>(ebk.solutions.size()) + 1 < cfg.count) fail(ErrorCode::Truncated, "not enough EBK levels");
  if (cfg.method == "ebk") {
    CsvWriter csv({"m1", "m2", "lambda", "c", "region", "transition_flag"});
    const int n = std::min<int>(cfg.count, static_cast<int>(ebk.solutions.size()));
    for (int i = 0; i < n; ++i) {
      const auto& s = ebk.solutions[i];
      csv.row(s.m1, s.m2, s.lambda, s.c, to_string(s.region), s.transition_flag);
    }
    data = csv.str();
    return exit_ok;
  }
  if (cfg.method != "separated") fail(ErrorCode::InvalidConfig, "unknown --method " + cfg.method);
  std::vector<std::pair<int, int>> indices{{0, 0}};
  for (const auto& s : ebk.solutions) indices.emplace_back(s.m1, s.m2);
  std::vector<JointEigenpair> pairs(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) {
    if (i == 0) {
      pairs[i] = joint_eigenpair(m, 0, 0, {0.0, 1.0});
      return;
    }
    const double guess = ebk.solutions[i - 1].lambda * ebk.solutions[i - 1].lambda;
    pairs[i] = joint_eigenpair(m, indices[i].first, indices[i].second, {0.8 * guess, 1.25 * guess});
  });
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.E < b.E; });
  CsvWriter csv({"index", "E", "lambda", "m1", "m2", "c"});
  for (int i = 0; i < cfg.count; ++i)
    csv.row(i, pairs[i].E, pairs[i].lambda(), pairs[i].m1, pairs[i].m2, pairs[i].c);
  data = csv.str();
  return exit_ok;
}

int cmd_remainder(const RunConfig& cfg, std::string& data) {
  const MetricSpec m = metric_of(cfg);
  const Source source = parse_source(cfg.source);
  const double lo = cfg.lambda_min > 0 ? cfg.lambda_min : cfg.lambda_max / 50.0;
  if (!(cfg.lambda_max > lo)) fail(ErrorCode::InvalidConfig, "--lambda-max must exceed --lambda-min");
  const RemainderSeries series = remainder_series(source, m, geometric(lo, cfg.lambda_max, cfg.steps));
  CsvWriter csv({"lambda", "N", "N_min", "N_max", "weyl_term", "R"});
  for (const auto& s : series.samples) csv.row(s.lambda, s.N, s.N_min, s.N_max, s.weyl_term, s.R);
  if (series.fitted)
    csv.comment("fitted exponent " + format_real(series.exponent) + " constant " + format_real(series.constant));
  else
    csv.comment("fitted exponent nan constant nan (" + series.fit_note + ")");
  data = csv.str();
  return exit_ok;
}

int cmd_nondeg(const RunConfig& cfg, std::string& data) {
  const NondegeneracyReport r = nondegeneracy_report(metric_of(cfg), cfg.tau, cfg.kmax);
  std::ostringstream s;
  s << "definition: " << (r.revolution ? "revolution" : "liouville") << '\n';
  s << "certification: tau=" << format_real(r.tau) << " kmax=" << r.kmax << '\n';
  s << "curvature_zeros:";
  for (const auto& z : r.kappa_zeros) s << " c=" << format_real(z.c) << "(order " << z.order << ")";
  s << '\n';
  for (const auto& item : r.items) {
    s << "item " << item.index << ": " << (item.passed ? "pass" : "fail") << " [" << item.name << "]";
    if (!item.detail.empty()) s << " (" << item.detail << ")";
    s << '\n';
    for (std::size_t i = 0; i < item.values.size(); ++i) {
      s << "  value " << format_real(item.values[i]);
      if (i < item.typicality.size() && item.typicality[i].kmax > 0) s << ' ' << report_typicality(item.typicality[i]);
      s << '\n';
    }
  }
  s << "verdict: " << (r.passed() ? "nondegenerate" : "not certified") << '\n';
  data = s.str();
  return r.passed() ? exit_ok : exit_verdict;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectra and Weyl remainders on Liouville tori", "liouville"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--metric", cfg.metric_path, "Metric config (JSON)");
  app.add_option("--out", cfg.out_path, "Output path (written atomically); standard output if absent");
  app.add_option("--workers", cfg.workers, "Worker threads (0 = hardware concurrency)")->check(CLI::Range(0u, 1024u));
  app.add_option("--seed", cfg.seed, "Seed for randomized sweeps");

  auto* validate = app.add_subcommand("validate", "Check the metric class conditions");
  validate->add_flag("--echo", cfg.echo, "Print the parsed metric config instead of the report");

  auto* curve = app.add_subcommand("curve", "Sample the action curve");
  curve->add_option("--samples", cfg.samples, "Number of c samples")->check(CLI::Range(2, 1000000));

  auto* lattice = app.add_subcommand("lattice-count", "Lattice point counts in a dilated domain");
  lattice->add_option("--domain", cfg.domain, "disk | quarter-disk | metric")
      ->check(CLI::IsMember({"disk", "quarter-disk", "metric"}));
  lattice->add_option("--r-min", cfg.r_min)->check(CLI::PositiveNumber);
  lattice->add_option("--r-max", cfg.r_max)->check(CLI::PositiveNumber);
  lattice->add_option("--r-steps", cfg.r_steps)->check(CLI::Range(1, 10000000));
  lattice->add_option("--shift", cfg.shift, "Lattice shift ax ay")->expected(2);
  lattice->add_option("--mode", cfg.mode)->check(CLI::IsMember({"exact", "mollified", "poisson"}));
  lattice->add_option("--kmax", cfg.poisson_kmax, "Frequency cutoff for --mode poisson")->check(CLI::Range(1, 4000));

  auto* dio = app.add_subcommand("diophantine", "Continued fraction and typicality report");
  auto* alpha_opt = dio->add_option("--alpha", cfg.alpha)->check(CLI::Range(-1e12, 1e12));
  auto* golden_opt = dio->add_flag("--golden", cfg.golden);
  auto* patho_opt = dio->add_option("--pathological", cfg.pathological, "C depth")->expected(2);
  auto* random_opt = dio->add_option("--random", cfg.random_count, "Random alphas from --seed")->check(CLI::Range(1, 1000000));
  alpha_opt->excludes(golden_opt)->excludes(patho_opt)->excludes(random_opt);
  golden_opt->excludes(patho_opt)->excludes(random_opt);
  patho_opt->excludes(random_opt);
  dio->add_option("--tau", cfg.tau)->check(CLI::Range(0.0, 100.0));
  dio->add_option("--kmax", cfg.kmax)->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));

  auto* spectrum = app.add_subcommand("spectrum", "Laplace eigenvalues");
  spectrum->add_option("--method", cfg.method)->check(CLI::IsMember({"direct", "separated", "ebk"}));
  spectrum->add_option("--count", cfg.count)->check(CLI::Range(1, 100000));
  spectrum->add_option("--resolution", cfg.resolution, "Fourier grid size for --method direct")
      ->check(CLI::Range(8, 128));

  auto* remainder = app.add_subcommand("remainder", "Weyl remainder series");
  remainder->add_option("--source", cfg.source)->check(CLI::IsMember({"direct", "ebk", "lattice"}));
  remainder->add_option("--lambda-min", cfg.lambda_min, "Smallest lambda (default lambda-max / 50)")
      ->check(CLI::NonNegativeNumber);
  remainder->add_option("--lambda-max", cfg.lambda_max)->check(CLI::PositiveNumber);
  remainder->add_option("--steps", cfg.steps)->check(CLI::Range(1, 1000000));

  auto* nondeg = app.add_subcommand("nondeg", "Nondegeneracy report");
  nondeg->add_option("--tau", cfg.tau)->check(CLI::Range(0.0, 100.0));
  nondeg->add_option("--kmax", cfg.kmax)->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    set_worker_count(cfg.workers);
    std::string data;
    int code = exit_ok;
    if (*validate) code = cmd_validate(cfg, data);
    else if (*curve) code = cmd_curve(cfg, data);
    else if (*lattice) code = cmd_lattice_count(cfg, data);
    else if (*dio) code = cmd_diophantine(cfg, data);
    else if (*spectrum) code = cmd_spectrum(cfg, data);
    else if (*remainder) code = cmd_remainder(cfg, data);
    else if (*nondeg) code = cmd_nondeg(cfg, data);
    if (cfg.out_path.empty()) out << data;
    else write_atomic(cfg.out_path, data);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidConfig ? exit_usage : exit_numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace liouville
