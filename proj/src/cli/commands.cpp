#include "hypervirial/cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "hypervirial/errors.hpp"
#include "hypervirial/virial.hpp"

namespace hypervirial::cli {

using models::EigenState;
using models::ModelSpec;

namespace {

constexpr double kCoulombAsymptote = 2.0 * 0.57721566490153286061 - 1.0;

bool is_coulomb(const RunConfig& c) { return c.model == "coulomb"; }
bool is_oscillator(const RunConfig& c) { return c.model == "oscillator"; }
bool is_robin(const RunConfig& c) { return c.model == "robin"; }

EigenState state_for(const RunConfig& config, const ModelSpec& spec, int branch) {
  switch (spec.kind) {
    case models::ModelKind::RobinFree:
      if (branch != 0) {
        throw UsageError("the Robin free particle has a single bound state (--state 0)");
      }
      return models::robin_free_eigenstate(spec);
    case models::ModelKind::CoulombPoint: {
      auto st = models::solve_coulomb_branch(spec, branch);
      if (!st) {
        throw UsageError("no Coulomb bound state on branch " + std::to_string(branch) +
                         " for these parameters");
      }
      return *st;
    }
    case models::ModelKind::OscillatorPoint:
      return models::solve_oscillator_branch(spec, branch);
  }
  (void)config;
  throw UsageError("unknown model");
}

std::string method_name(virial::Method m) {
  switch (m) {
    case virial::Method::ClosedForm:
      return "closed_form";
    case virial::Method::Quadrature:
      return "quadrature";
    case virial::Method::Mixed:
      return "mixed";
  }
  return "mixed";
}

void describe_model(Table& t, const RunConfig& c, const ModelSpec& spec) {
  t.meta["model"] = c.model;
  if (spec.is_dirichlet()) {
    t.meta["extension"] = "dirichlet";
  } else {
    t.meta["extension"] = spec.extension_value();
    t.meta["extension_ratio"] = spec.extension_ratio();
  }
  if (spec.kind == models::ModelKind::CoulombPoint) {
    t.meta["xi"] = spec.scales.xi();
  } else if (spec.kind == models::ModelKind::OscillatorPoint) {
    t.meta["sigma"] = spec.scales.sigma();
  }
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("VIRIAL_ANOMALY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      return static_cast<int>(std::min<long>(v, 256));
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate(const RunConfig& c) {
  if (!is_coulomb(c) && !is_oscillator(c) && !is_robin(c)) {
    throw UsageError("--model must be one of robin, coulomb, oscillator");
  }
  const int coulomb_ext = (c.alpha ? 1 : 0) + (c.alpha_over_xi ? 1 : 0) + (c.dirichlet ? 1 : 0);
  const int osc_ext = (c.beta ? 1 : 0) + (c.beta_over_sigma ? 1 : 0) + (c.dirichlet ? 1 : 0);
  if (is_robin(c)) {
    if (!c.alpha || c.alpha_over_xi || c.dirichlet || c.beta || c.beta_over_sigma || c.xi || c.sigma) {
      throw UsageError("robin takes exactly --alpha");
    }
    if (!(*c.alpha > 0.0)) {
      throw UsageError("robin needs --alpha > 0 (no bound state otherwise)");
    }
  }
  // figure and limits sweep the extension themselves; one is accepted but not needed.
  const int min_ext = c.command == Command::Figure || c.command == Command::Limits ? 0 : 1;
  if (is_coulomb(c)) {
    if (coulomb_ext < min_ext || coulomb_ext > 1 || c.beta || c.beta_over_sigma || c.sigma) {
      throw UsageError("coulomb takes exactly one of --alpha, --alpha-over-xi, --dirichlet, plus optional --xi");
    }
    if (c.xi && (*c.xi == 0.0 || !std::isfinite(*c.xi))) {
      throw UsageError("--xi must be finite and nonzero");
    }
  }
  if (is_oscillator(c)) {
    if (osc_ext < min_ext || osc_ext > 1 || c.alpha || c.alpha_over_xi || c.xi) {
      throw UsageError("oscillator takes exactly one of --beta, --beta-over-sigma, --dirichlet, plus optional --sigma");
    }
    if (c.sigma && !(*c.sigma > 0.0)) {
      throw UsageError("--sigma must be positive");
    }
  }
  if (c.n_max < 0 || c.n_max > 10000) {
    throw UsageError("--n-max must be in [0, 10000]");
  }
  if (c.state < 0) {
    throw UsageError("--state must be >= 0");
  }
  if (!(c.tol > 0.0)) {
    throw UsageError("--tol must be positive");
  }
  for (std::size_t i = 0; i < c.eps_schedule.size(); ++i) {
    if (!(c.eps_schedule[i] > 0.0) || (i > 0 && !(c.eps_schedule[i] < c.eps_schedule[i - 1]))) {
      throw UsageError("--eps must be positive and strictly decreasing");
    }
  }
  if (c.format != "csv" && c.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  if (c.command == Command::Figure) {
    if (is_robin(c)) {
      throw UsageError("figure needs --model coulomb or oscillator");
    }
    if (c.samples < 2) {
      throw UsageError("--samples must be >= 2");
    }
    if (c.x_min && c.x_max && !(*c.x_min < *c.x_max)) {
      throw UsageError("--x-min must be below --x-max");
    }
  }
  if (c.command == Command::Limits) {
    if (is_robin(c)) {
      throw UsageError("limits needs --model coulomb or oscillator");
    }
    if (is_coulomb(c) && c.xi && *c.xi < 0.0) {
      throw UsageError("the Dirichlet limit of the Coulomb problem needs --xi > 0");
    }
    for (double s : c.schedule) {
      if (!std::isfinite(s)) {
        throw UsageError("--schedule values must be finite");
      }
    }
  }
}

ModelSpec build_model(const RunConfig& c) {
  if (is_robin(c)) {
    return ModelSpec::robin_free(*c.alpha);
  }
  if (is_coulomb(c)) {
    const double xi = c.xi.value_or(1.0);
    const auto scales = models::PhysicalScales::coulomb_xi(xi);
    if (c.dirichlet || (!c.alpha && !c.alpha_over_xi)) {
      return ModelSpec::coulomb(models::DirichletLimit{}, scales);
    }
    return ModelSpec::coulomb(c.alpha ? *c.alpha : *c.alpha_over_xi * xi, scales);
  }
  if (is_oscillator(c)) {
    const double sigma = c.sigma.value_or(1.0);
    const auto scales = models::PhysicalScales::oscillator_sigma(sigma);
    if (c.dirichlet || (!c.beta && !c.beta_over_sigma)) {
      return ModelSpec::oscillator(models::DirichletLimit{}, scales);
    }
    return ModelSpec::oscillator(c.beta ? *c.beta : *c.beta_over_sigma * sigma, scales);
  }
  throw UsageError("unknown model " + c.model);
}

CommandResult cmd_spectrum(const RunConfig& config) {
  const ModelSpec spec = build_model(config);
  CommandResult result;
  Table& t = result.table;
  t.columns = {"branch", "spectral_param", "energy", "norm_const", "status"};
  describe_model(t, config, spec);

  struct Row {
    bool present = false;
    EigenState state;
    std::string error;
  };
  int count = config.n_max;
  if (spec.kind == models::ModelKind::RobinFree) {
    count = std::min(count, 1);
  }
  if (spec.kind == models::ModelKind::CoulombPoint && spec.scales.xi() < 0.0) {
    count = std::min(count, 1);
  }
  const auto rows = parallel_map<Row>(count, [&](int n) {
    Row row;
    try {
      if (spec.kind == models::ModelKind::CoulombPoint) {
        auto st = models::solve_coulomb_branch(spec, n);
        if (st) {
          row.present = true;
          row.state = *st;
        }
      } else {
        row.state = state_for(config, spec, n);
        row.present = true;
      }
    } catch (const NumericalFailure& e) {
      row.present = true;
      row.error = e.what();
    } catch (const IntegrityError& e) {
      row.present = true;
      row.error = e.what();
    }
    return row;
  });
  for (int n = 0; n < count; ++n) {
    const Row& row = rows[n];
    if (!row.present) {
      continue;
    }
    if (!row.error.empty()) {
      t.add_row({static_cast<long long>(n), std::monostate{}, std::monostate{}, std::monostate{}, "error: " + row.error});
      result.exit_code = kExitNumerical;
      result.message += "branch " + std::to_string(n) + ": " + row.error + "\n";
      continue;
    }
    t.add_row({static_cast<long long>(row.state.branch), row.state.spectral_param, row.state.energy,
               row.state.norm_const, std::string("ok")});
  }
  t.meta["rows"] = static_cast<long long>(t.rows.size());
  return result;
}

CommandResult cmd_verify(const RunConfig& config) {
  const ModelSpec spec = build_model(config);
  const EigenState st = state_for(config, spec, config.state);
  virial::VerifyOptions options;
  options.eps_schedule = config.eps_schedule;
  const auto outcome = virial::verify(st, options);

  CommandResult result;
  Table& t = result.table;
  describe_model(t, config, spec);
  t.meta["branch"] = static_cast<long long>(st.branch);
  t.meta["spectral_param"] = st.spectral_param;
  t.meta["energy"] = st.energy;
  t.meta["tol"] = config.tol;

  if (const auto* report = std::get_if<virial::VirialReport>(&outcome)) {
    t.columns = {"kinetic", "potential", "anomaly", "energy", "residual", "method"};
    t.add_row({report->kinetic, report->potential, report->anomaly, report->energy, report->residual,
               method_name(report->method)});
    const bool ok = std::abs(report->residual) <= config.tol;
    t.meta["passed"] = ok;
    if (!ok) {
      result.exit_code = kExitTolerance;
      result.message = "residual " + format_double(report->residual) + " exceeds tolerance " +
                       format_double(config.tol) + "\n";
    }
    return result;
  }

  const auto& study = std::get<virial::CutoffStudy>(outcome);
  t.columns = {"eps", "anomaly_eps", "potential_eps", "combination", "target", "error",
               "anomaly_closed_eps", "potential_closed_eps"};
  for (std::size_t i = 0; i < study.epsilons.size(); ++i) {
    t.add_row({study.epsilons[i], study.anomaly_eps[i], study.potential_eps[i], study.combination[i], study.target,
               study.combination[i] - study.target, study.anomaly_closed_eps[i], study.potential_closed_eps[i]});
  }
  const double rel = std::abs(study.extrapolated - study.target) / std::abs(study.target);
  t.meta["extrapolated"] = study.extrapolated;
  t.meta["target"] = study.target;
  t.meta["relative_error"] = rel;
  t.meta["anomaly_log_slope"] = study.anomaly_log_slope;
  t.meta["potential_log_slope"] = study.potential_log_slope;
  t.meta["observed_rate"] = study.observed_rate;
  const bool ok = rel <= config.tol;
  t.meta["passed"] = ok;
  if (!ok) {
    result.exit_code = kExitTolerance;
    result.message = "extrapolated combination misses 2E by " + format_double(rel) + " (relative), tolerance " +
                     format_double(config.tol) + "\n";
  }
  return result;
}

CommandResult cmd_figure(const RunConfig& config) {
  const bool coulomb = is_coulomb(config);
  const double lo = config.x_min.value_or(coulomb ? -5.0 : -3.0);
  const double hi = config.x_max.value_or(coulomb ? 4.0 : 4.0);
  if (!(lo < hi)) {
    throw UsageError("--x-min must be below --x-max");
  }
  // Poles: lambda = 0, 1, 2, ... for F_C and kappa = 3/4 + n for F_H.
  const double first_pole = coulomb ? 0.0 : 0.75;
  std::vector<double> poles;
  for (double p = std::max(first_pole, first_pole + std::ceil(lo - first_pole)); p < hi; p += 1.0) {
    if (p > lo) {
      poles.push_back(p);
    }
  }

  CommandResult result;
  Table& t = result.table;
  t.columns = {"series", "x", "f"};
  t.meta["function"] = coulomb ? "F_C" : "F_H";
  t.meta["x_min"] = lo;
  t.meta["x_max"] = hi;
  t.meta["samples"] = static_cast<long long>(config.samples);
  t.meta["poles"] = poles;
  t.meta["series_count"] = static_cast<long long>(poles.size() + 1);
  if (!config.dirichlet && (config.alpha_over_xi || config.beta_over_sigma || config.alpha || config.beta)) {
    const ModelSpec spec = build_model(config);
    t.meta["extension_ratio"] = spec.extension_ratio();
  }

  struct Sample {
    bool valid = false;
    double x = 0.0;
    double f = 0.0;
  };
  const int n = config.samples;
  const auto samples = parallel_map<Sample>(n, [&](int i) {
    Sample s;
    s.x = i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    try {
      s.f = coulomb ? models::f_coulomb(s.x) : models::f_harmonic(s.x);
      s.valid = std::isfinite(s.f);
    } catch (const PoleError&) {
      s.valid = false;
    }
    return s;
  });
  for (const Sample& s : samples) {
    if (!s.valid) {
      continue;
    }
    long long series = 0;
    for (double p : poles) {
      series += p < s.x ? 1 : 0;
    }
    t.add_row({series, s.x, s.f});
  }
  return result;
}

CommandResult cmd_limits(const RunConfig& config) {
  const ModelSpec base = build_model(config);
  const bool coulomb = base.kind == models::ModelKind::CoulombPoint;
  std::vector<double> schedule = config.schedule.empty() ? std::vector<double>{-10.0, -100.0, -1000.0} : config.schedule;
  const int branch = config.state;
  const double dirichlet_value = coulomb ? branch + 1.0 : branch + 0.75;

  CommandResult result;
  Table& t = result.table;
  t.columns = {"extension_ratio", "branch", "spectral_param", "dirichlet_value", "deviation", "status"};
  t.meta["model"] = config.model;
  t.meta["branch"] = static_cast<long long>(branch);
  t.meta["dirichlet_value"] = dirichlet_value;

  struct Row {
    double param = 0.0;
    std::string error;
  };
  const auto rows = parallel_map<Row>(static_cast<int>(schedule.size()), [&](int i) {
    Row row;
    try {
      if (coulomb) {
        const double xi = base.scales.xi();
        const ModelSpec spec = ModelSpec::coulomb(schedule[i] * xi, base.scales);
        auto st = models::solve_coulomb_branch(spec, branch);
        if (!st) {
          row.error = "no state on this branch";
        } else {
          row.param = st->spectral_param;
        }
      } else {
        const ModelSpec spec = ModelSpec::oscillator(schedule[i] * base.scales.sigma(), base.scales);
        row.param = models::solve_oscillator_branch(spec, branch).spectral_param;
      }
    } catch (const NumericalFailure& e) {
      row.error = e.what();
    } catch (const IntegrityError& e) {
      row.error = e.what();
    }
    return row;
  });
  bool monotone = true;
  double previous = -1.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!rows[i].error.empty()) {
      t.add_row({schedule[i], static_cast<long long>(branch), std::monostate{}, dirichlet_value, std::monostate{},
                 "error: " + rows[i].error});
      result.exit_code = kExitNumerical;
      result.message += "ratio " + format_double(schedule[i]) + ": " + rows[i].error + "\n";
      continue;
    }
    const double dev = std::abs(rows[i].param - dirichlet_value);
    if (previous >= 0.0 && !(dev < previous)) {
      monotone = false;
    }
    previous = dev;
    t.add_row({schedule[i], static_cast<long long>(branch), rows[i].param, dirichlet_value, dev, std::string("ok")});
  }
  t.meta["monotone_approach"] = monotone;
  return result;
}

CommandResult dispatch(const RunConfig& config) {
  validate(config);
  switch (config.command) {
    case Command::Spectrum:
      return cmd_spectrum(config);
    case Command::Verify:
      return cmd_verify(config);
    case Command::Figure:
      return cmd_figure(config);
    case Command::Limits:
      return cmd_limits(config);
  }
  throw UsageError("unknown command");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-interaction spectra and the virial boundary anomaly"};
  app.require_subcommand(1);
  RunConfig config;

  double alpha = 0, alpha_over_xi = 0, xi = 0, beta = 0, beta_over_sigma = 0, sigma = 0, x_min = 0, x_max = 0;
  std::string output;

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--model", config.model, "robin | coulomb | oscillator")->required();
    sub->add_option("--alpha", alpha, "extension parameter alpha (Robin, Coulomb)");
    sub->add_option("--alpha-over-xi", alpha_over_xi, "Coulomb extension ratio alpha/xi");
    sub->add_option("--xi", xi, "Coulomb xi = 2mk/hbar^2 (default 1)");
    sub->add_option("--beta", beta, "oscillator extension parameter beta");
    sub->add_option("--beta-over-sigma", beta_over_sigma, "oscillator extension ratio beta/sigma");
    sub->add_option("--sigma", sigma, "oscillator sigma = sqrt(m omega/hbar) (default 1)");
    sub->add_flag("--dirichlet", config.dirichlet, "Dirichlet limit of the extension");
    sub->add_option("--format", config.format, "csv | json")->capture_default_str();
    sub->add_option("--output", output, "write to this path instead of stdout");
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues per branch");
  add_model_flags(spectrum);
  spectrum->add_option("--n-max", config.n_max, "number of branches")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "generalized virial identity for one state");
  add_model_flags(verify);
  verify->add_option("--state", config.state, "branch index")->capture_default_str();
  verify->add_option("--eps", config.eps_schedule, "Coulomb cutoff schedule (decreasing)");
  verify->add_option("--tol", config.tol, "residual tolerance")->capture_default_str();

  auto* figure = app.add_subcommand("figure", "eigenvalue-function data split at poles");
  add_model_flags(figure);
  figure->add_option("--x-min", x_min, "left end of the sampled range");
  figure->add_option("--x-max", x_max, "right end of the sampled range");
  figure->add_option("--samples", config.samples, "sample count")->capture_default_str();

  auto* limits = app.add_subcommand("limits", "approach to the Dirichlet limit");
  add_model_flags(limits);
  limits->add_option("--state", config.state, "branch index")->capture_default_str();
  limits->add_option("--schedule", config.schedule, "extension ratios (default -10 -100 -1000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == spectrum) {
    config.command = Command::Spectrum;
  } else if (sub == verify) {
    config.command = Command::Verify;
  } else if (sub == figure) {
    config.command = Command::Figure;
  } else {
    config.command = Command::Limits;
  }
  auto given = [sub](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--alpha")) config.alpha = alpha;
  if (given("--alpha-over-xi")) config.alpha_over_xi = alpha_over_xi;
  if (given("--xi")) config.xi = xi;
  if (given("--beta")) config.beta = beta;
  if (given("--beta-over-sigma")) config.beta_over_sigma = beta_over_sigma;
  if (given("--sigma")) config.sigma = sigma;
  if (given("--x-min")) config.x_min = x_min;
  if (given("--x-max")) config.x_max = x_max;
  if (given("--output")) config.output_path = output;

  CommandResult result;
  try {
    result = dispatch(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << " (error estimate " << format_double(e.error_estimate()) << ")\n";
    return kExitNumerical;
  } catch (const IntegrityError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  const std::string text = config.format == "json" ? to_json(result.table) : to_csv(result.table);
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file) {
      err << "cannot open " << *config.output_path << " for writing\n";
      return kExitUsage;
    }
    file << text;
  } else {
    out << text;
  }
  if (!result.message.empty()) {
    err << result.message;
  }
  return result.exit_code;
}

}  // namespace hypervirial::cli
