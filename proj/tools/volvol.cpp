// Command-line front end: simulate stochastic-volatility paths, estimate
// spot variance and integrated variance-of-variance from observation CSVs,
// run the bootstrap specification test, and reproduce the Monte Carlo study
// tables.
//
// Exit codes: 0 success, 2 invalid input (CLI arguments, malformed CSV,
// out-of-domain parameters), 3 degenerate numerical condition (non-positive
// variance estimate where a positive one is required, empty studentization
// grid, untenable bootstrap scale).

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "volvol/errors.hpp"
#include "volvol/estimators.hpp"
#include "volvol/gof.hpp"
#include "volvol/io.hpp"
#include "volvol/mc.hpp"
#include "volvol/model.hpp"
#include "volvol/parallel.hpp"
#include "volvol/rng.hpp"
#include "volvol/simulate.hpp"
#include "volvol/spot.hpp"
#include "volvol/version.hpp"

namespace {

using volvol::EstimatorConfig;
using volvol::ModelSpec;
using volvol::SampledPath;

struct ModelOptions {
  std::string name = "heston";
  std::optional<double> beta, kappa, alpha, xi, rho, x0, v0;
  std::string drift = "log_heston";

  ModelSpec build() const {
    ModelSpec spec;
    if (name == "heston") {
      spec = ModelSpec::heston(0.3, 5.0, 0.2, 0.5, 0.0, 0.0, 0.2);
    } else if (name == "vasicek") {
      spec = ModelSpec::vasicek(0.3, 5.0, 0.2, 0.5, 0.0, 0.0, 0.2);
    } else if (name.rfind("cev:", 0) == 0) {
      double gamma = 0.0;
      try {
        std::size_t used = 0;
        gamma = std::stod(name.substr(4), &used);
        if (used != name.size() - 4) throw std::invalid_argument(name);
      } catch (const std::exception&) {
        throw std::invalid_argument("unparsable elasticity in '" + name +
                                    "' (expected cev:<gamma>)");
      }
      spec = ModelSpec::cev(gamma, 0.3, 5.0, 0.2, 0.5, 0.0, 0.0, 0.2);
    } else {
      throw std::invalid_argument(
          "unknown model '" + name +
          "' (expected heston, cev:<gamma>, or vasicek)");
    }
    if (beta) spec.beta = *beta;
    if (kappa) spec.kappa = *kappa;
    if (alpha) spec.alpha = *alpha;
    if (xi) spec.xi = *xi;
    if (rho) spec.rho = *rho;
    if (x0) spec.x0 = *x0;
    if (v0) spec.v0 = *v0;
    if (drift == "log_heston") {
      spec.drift = volvol::PriceDrift::LogHeston;
    } else if (drift == "none") {
      spec.drift = volvol::PriceDrift::None;
    } else {
      throw std::invalid_argument("unknown drift '" + drift +
                                  "' (expected log_heston or none)");
    }
    spec.validate();
    return spec;
  }
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
  cmd->add_option("--model", opts.name,
                  "Model family: heston, cev:<gamma>, or vasicek")
      ->capture_default_str();
  cmd->add_option("--beta", opts.beta, "Price drift level");
  cmd->add_option("--kappa", opts.kappa, "Variance mean-reversion speed");
  cmd->add_option("--alpha", opts.alpha, "Variance mean-reversion level");
  cmd->add_option("--xi", opts.xi, "Variance diffusion scale");
  cmd->add_option("--rho", opts.rho, "Price/variance correlation");
  cmd->add_option("--x0", opts.x0, "Initial log price");
  cmd->add_option("--v0", opts.v0, "Initial variance");
  cmd->add_option("--drift", opts.drift,
                  "Price drift convention: log_heston or none")
      ->capture_default_str();
}

struct EstOptions {
  double c = 1.0;
  double t = 1.0;
  double t_min = 0.1;
  bool sup_full = false;

  EstimatorConfig build() const {
    EstimatorConfig cfg;
    cfg.c = c;
    cfg.t = t;
    cfg.t_min = t_min;
    cfg.sup_from_t_min = !sup_full;
    return cfg;
  }
};

void add_window_option(CLI::App* cmd, EstOptions& opts) {
  cmd->add_option("-c,--window-constant", opts.c,
                  "Window constant: k_n = floor(c*sqrt(n))")
      ->capture_default_str();
}

std::vector<double> load_series(const std::string& path) {
  volvol::io::IngestResult in = volvol::io::ingest_csv(path);
  return std::move(in.x);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  ModelOptions model;
  std::size_t n = 10000;
  int substeps = 10;
  std::uint64_t seed = 1;
  std::string out;
  bool with_sigma2 = false;
};

int run_simulate(const SimulateArgs& args) {
  const ModelSpec spec = args.model.build();
  std::string warning;
  if (!volvol::check_feller(spec, &warning)) {
    std::cerr << "warning: " << warning << "\n";
  }
  volvol::rng::Stream stream(args.seed, 0);
  const SampledPath path =
      volvol::simulate(spec, args.n, args.substeps, stream);
  if (args.out.empty()) {
    volvol::io::write_path_csv(std::cout, path, args.with_sigma2);
  } else {
    volvol::io::write_path_csv(args.out, path, args.with_sigma2);
    volvol::io::write_text_file(
        args.out + ".json",
        volvol::io::sidecar_json(spec, path, args.substeps).dump(2) + "\n");
    std::cerr << "wrote " << args.out << " and " << args.out << ".json\n";
  }
  return 0;
}

// -------------------------------------------------------------------- spot

struct SpotArgs {
  std::string in;
  EstOptions est;
  std::string out;
};

int run_spot(const SpotArgs& args) {
  const std::vector<double> x = load_series(args.in);
  const volvol::SpotSeries s = volvol::spot_series(x, args.est.build());
  std::ostringstream text;
  text << "time,sigma2_hat,sigma4_hat\n";
  const double nd = static_cast<double>(s.n);
  for (std::size_t i = 0; i < s.s2.size(); ++i) {
    text << volvol::io::fmt_double(static_cast<double>(i) / nd) << ','
         << volvol::io::fmt_double(s.s2[i]) << ','
         << volvol::io::fmt_double(s.s4[i]) << '\n';
  }
  if (args.out.empty()) {
    std::cout << text.str();
  } else {
    volvol::io::write_text_file(args.out, text.str());
  }
  return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string in;
  EstOptions est;
  std::optional<double> truth;
  double level = 0.95;
  bool json = false;
};

int run_estimate(const EstimateArgs& args) {
  const std::vector<double> x = load_series(args.in);
  SampledPath path;
  path.n = x.size() - 1;
  path.x = x;
  const volvol::VolvolReport report =
      volvol::analyze(path, args.est.build(), args.truth, args.level);
  if (args.json) {
    std::cout << volvol::io::report_json(report).dump(2) << "\n";
  } else {
    std::cout << volvol::io::report_text(report);
  }
  // A requested standardization that the variance estimate cannot support is
  // a degenerate outcome, reported after the estimates themselves.
  if (args.truth && !report.z) {
    throw volvol::NonPositiveVariance(
        "estimated limiting variance is not positive; no standardized "
        "statistic");
  }
  return 0;
}

// -------------------------------------------------------------------- test

struct TestArgs {
  std::string in;
  std::string f = "heston";
  EstOptions est;
  std::size_t B = 0;
  std::uint64_t seed = 1;
  int substeps = 10;
  int threads = 0;
  bool json = false;
};

volvol::Tau2Fn parse_f(const std::string& name) {
  if (name == "heston") return volvol::Tau2Fn::heston();
  if (name == "constant") return volvol::Tau2Fn::constant();
  if (name.rfind("cev:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double gamma = std::stod(name.substr(4), &used);
      if (used != name.size() - 4) throw std::invalid_argument(name);
      return volvol::Tau2Fn::cev(gamma);
    } catch (const volvol::Error&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("unparsable elasticity in '" + name + "'");
    }
  }
  throw std::invalid_argument("unknown shape '" + name +
                              "' (expected heston, cev:<gamma>, or constant)");
}

int run_test(const TestArgs& args) {
  const std::vector<double> x = load_series(args.in);
  SampledPath path;
  path.n = x.size() - 1;
  path.x = x;
  const volvol::Tau2Fn fn = parse_f(args.f);
  const EstimatorConfig cfg = args.est.build();
  volvol::GofReport report;
  if (args.B == 0) {
    report = volvol::gof_statistic(path, fn, cfg);
  } else {
    report = volvol::bootstrap_test(
        path, fn, args.B, volvol::rng::Stream(args.seed, 0), cfg,
        args.substeps, volvol::resolve_threads(args.threads));
  }
  if (args.json) {
    std::cout << volvol::io::report_json(report).dump(2) << "\n";
  } else {
    std::cout << volvol::io::report_text(report);
  }
  return 0;
}

// ---------------------------------------------------------------------- mc

struct McArgs {
  int table = 1;
  std::vector<std::size_t> n_list;
  std::size_t reps = 1000;
  std::size_t runs = 200;
  std::size_t B = 200;
  std::optional<double> rho;
  double gamma = 1.0;
  std::uint64_t seed = 1;
  int substeps = 10;
  int threads = 0;
  bool full_scale = false;
  std::string json_out;
};

int run_mc(const McArgs& args) {
  if (args.table < 1 || args.table > 6) {
    throw std::invalid_argument("--table must be 1..6");
  }
  volvol::mc::ExperimentSpec spec;
  spec.table = static_cast<volvol::mc::Table>(args.table);
  spec.reps = args.reps;
  spec.runs = args.runs;
  spec.B = args.B;
  spec.rho = args.rho;
  spec.power_gamma = args.gamma;
  spec.master_seed = args.seed;
  spec.substeps = args.substeps;
  spec.threads = volvol::resolve_threads(args.threads);
  if (!args.n_list.empty()) spec.n_list = args.n_list;
  if (args.full_scale) {
    spec.n_list = {2500, 10000, 22500, 40000, 52900};
    spec.reps = 10000;
    spec.runs = 500;
  }
  const std::vector<volvol::mc::TableRow> rows =
      volvol::mc::run_experiment(spec);
  std::cout << volvol::io::rows_csv(rows, spec.table, spec.levels);
  const volvol::mc::CompareReport cmp =
      volvol::mc::compare_to_reference(rows, spec.table, spec.power_gamma);
  const std::string cmp_text = volvol::io::compare_json(cmp).dump(2) + "\n";
  if (args.json_out.empty()) {
    std::cout << cmp_text;
  } else {
    volvol::io::write_text_file(args.json_out, cmp_text);
    std::cerr << "wrote " << args.json_out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Non-parametric variance-of-variance estimation from high-frequency "
      "observations"};
  app.set_version_flag(
      "--version", std::string("volvol ") + volvol::kVersion + "\n" +
                       "coefficients: " + volvol::kCoefficientSet);
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Simulate a stochastic-volatility observation path");
  add_model_options(c_sim, sim.model);
  c_sim->add_option("-n,--n", sim.n, "Number of observation intervals")
      ->capture_default_str();
  c_sim->add_option("--substeps", sim.substeps,
                    "Euler substeps per observation interval")
      ->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  c_sim->add_option("-o,--out", sim.out,
                    "Output CSV (stdout if omitted; a .json companion with "
                    "the latent truth is written next to a file)");
  c_sim->add_flag("--sigma2", sim.with_sigma2,
                  "Include the latent spot variance column");

  SpotArgs spot;
  CLI::App* c_spot = app.add_subcommand(
      "spot", "Spot variance/quarticity series from an observation CSV");
  c_spot->add_option("-i,--in", spot.in, "Input CSV: (time,x) or (x) columns")
      ->required();
  add_window_option(c_spot, spot.est);
  c_spot->add_option("-o,--out", spot.out, "Output CSV (stdout if omitted)");

  EstimateArgs est;
  CLI::App* c_est = app.add_subcommand(
      "estimate",
      "Integrated variance-of-variance with feasible confidence interval");
  c_est->add_option("-i,--in", est.in, "Input CSV: (time,x) or (x) columns")
      ->required();
  add_window_option(c_est, est.est);
  c_est->add_option("-t,--horizon", est.est.t,
                    "Upper limit of the integration window in rescaled time")
      ->capture_default_str();
  c_est->add_option("--truth", est.truth,
                    "Known integral for standardized-error reporting");
  c_est->add_option("--level", est.level, "Confidence level")
      ->capture_default_str();
  c_est->add_flag("--json", est.json, "Emit JSON instead of text");

  TestArgs test;
  CLI::App* c_test = app.add_subcommand(
      "test", "Bootstrap specification test for the variance-of-variance");
  c_test->add_option("-i,--in", test.in, "Input CSV: (time,x) or (x) columns")
      ->required();
  c_test->add_option("-f,--shape", test.f,
                     "Hypothesized shape: heston, cev:<gamma>, or constant")
      ->capture_default_str();
  add_window_option(c_test, test.est);
  c_test->add_option("-B,--bootstrap", test.B,
                     "Bootstrap replications (0: statistic only)")
      ->capture_default_str();
  c_test->add_option("--seed", test.seed, "Master seed")
      ->capture_default_str();
  c_test->add_option("--substeps", test.substeps,
                     "Euler substeps for bootstrap paths")
      ->capture_default_str();
  c_test->add_option("--threads", test.threads,
                     "Worker threads (0: VOLVOL_THREADS or hardware)")
      ->capture_default_str();
  c_test->add_option("--t-min", test.est.t_min,
                     "Lower sup limit in rescaled time")
      ->capture_default_str();
  c_test->add_flag("--sup-full", test.est.sup_full,
                   "Take the sup over the whole defined grid");
  c_test->add_flag("--json", test.json, "Emit JSON instead of text");

  McArgs mcargs;
  CLI::App* c_mc = app.add_subcommand(
      "mc", "Monte Carlo study tables with reference comparison");
  c_mc->add_option("--table", mcargs.table,
                   "Study: 1/2 infeasible (rho 0 / 0.2), 3/4 feasible (rho 0 "
                   "/ -0.2), 5 test size, 6 test power")
      ->capture_default_str();
  c_mc->add_option("-n,--n", mcargs.n_list,
                   "Sample sizes (repeatable; default 2500 10000)");
  c_mc->add_option("--reps", mcargs.reps, "Replications for studies 1-4")
      ->capture_default_str();
  c_mc->add_option("--runs", mcargs.runs, "Runs for studies 5-6")
      ->capture_default_str();
  c_mc->add_option("-B,--bootstrap", mcargs.B,
                   "Bootstrap replications per run")
      ->capture_default_str();
  c_mc->add_option("--rho", mcargs.rho, "Override the study correlation");
  c_mc->add_option("--gamma", mcargs.gamma,
                   "Power-study alternative elasticity (0 or 1)")
      ->capture_default_str();
  c_mc->add_option("--seed", mcargs.seed, "Master seed")
      ->capture_default_str();
  c_mc->add_option("--substeps", mcargs.substeps,
                   "Euler substeps per observation interval")
      ->capture_default_str();
  c_mc->add_option("--threads", mcargs.threads,
                   "Worker threads (0: VOLVOL_THREADS or hardware)")
      ->capture_default_str();
  c_mc->add_flag("--full-scale", mcargs.full_scale,
                 "All five sample sizes at full replication counts");
  c_mc->add_option("--json-out", mcargs.json_out,
                   "Write the comparison report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_spot->parsed()) return run_spot(spot);
    if (c_est->parsed()) return run_estimate(est);
    if (c_test->parsed()) return run_test(test);
    if (c_mc->parsed()) return run_mc(mcargs);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const volvol::NonPositiveVariance& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 3;
  } catch (const volvol::DegenerateStudentization& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 3;
  } catch (const volvol::DegenerateDesign& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 3;
  } catch (const volvol::BootstrapDegenerate& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 3;
  } catch (const volvol::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
