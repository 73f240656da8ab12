#include "gmol_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string_view>
#include <thread>

#include "gmol/distribution.hpp"
#include "gmol/error.hpp"
#include "gmol/fit.hpp"
#include "gmol/properties.hpp"
#include "gmol/regression.hpp"
#include "gmol/simulate.hpp"
#include "gmol_cli/csv.hpp"

namespace gmol::cli {
namespace {

namespace fs = std::filesystem;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

SubModel model_from_flag(const std::string& name) {
  try {
    return parse_sub_model(name);
  } catch (const DomainError&) {
    throw UsageError("--model must be one of gmol, mol, lomax (got '" + name + "')");
  }
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

fs::path sibling(const fs::path& input, const std::string& suffix) {
  fs::path out = input;
  out.replace_filename(input.stem().string() + suffix);
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  return f;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  std::string file;
  std::string model = "gmol";
  std::string init;
  std::uint64_t seed = 0;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const SubModel model = model_from_flag(a.model);
  const CsvTable table = read_csv(a.file);
  if (table.find("time") < 0) throw InputError(a.file + ": iid data needs a 'time' column");
  const IidSample s(table.column("time"));

  std::optional<GmolParams> init;
  if (!a.init.empty()) {
    const auto v = parse_number_list(a.init, "--init");
    if (v.size() != 4) throw UsageError("--init expects four values a,l,t,b");
    try {
      init = GmolParams(v[0], v[1], v[2], v[3]);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--init: ") + e.what());
    }
  }
  FitOptions options;
  options.optimizer.seed = a.seed;
  const FitResult fit = fit_mle(s, model, init, options);
  const GofReport gof = gof_stats(fit, s);

  const std::vector<const char*> free = free_parameter_names(model);
  const GmolParams& t = fit.theta_hat;
  const double all[4] = {t.alpha(), t.lambda(), t.tau(), t.beta()};
  const char* all_names[4] = {"alpha", "lambda", "tau", "beta"};

  out << upper(to_string(model)) << " fit of " << a.file << " (n = " << s.size() << ")\n\n";
  out << pad("parameter", 12) << lpad("estimate", 12) << lpad("SE", 12) << '\n';
  for (std::size_t i = 0; i < 4; ++i) {
    std::string se = "fixed";
    const auto slot = std::find_if(free.begin(), free.end(),
                                   [&](const char* f) { return std::string_view(f) == all_names[i]; });
    if (slot != free.end()) se = fit.se ? fixed4((*fit.se)[static_cast<std::size_t>(slot - free.begin())]) : "n/a";
    out << pad(all_names[i], 12) << lpad(fixed4(all[i]), 12) << lpad(se, 12) << '\n';
  }
  out << '\n' << pad("log-lik", 12) << lpad(fixed4(fit.loglik), 12) << '\n';
  const std::pair<const char*, double> gof_rows[] = {
      {"W*", gof.w_star}, {"A*", gof.a_star}, {"KS", gof.ks},     {"KS p", gof.ks_p},
      {"AIC", gof.aic},   {"CAIC", gof.caic}, {"BIC", gof.bic},   {"HQIC", gof.hqic}};
  for (const auto& [name, v] : gof_rows) out << pad(name, 12) << lpad(fixed4(v), 12) << '\n';
  out << pad("converged", 12) << lpad(fit.converged ? "yes" : "no", 12) << '\n';

  std::vector<std::string> header{"alpha", "lambda", "tau", "beta"};
  std::vector<double> row(all, all + 4);
  for (std::size_t i = 0; i < free.size(); ++i) {
    header.push_back(std::string("se_") + free[i]);
    row.push_back(fit.se ? (*fit.se)[i] : std::nan(""));
  }
  for (const auto& [name, v] : {std::pair<const char*, double>{"loglik", fit.loglik}, {"w_star", gof.w_star},
                                {"a_star", gof.a_star}, {"ks", gof.ks}, {"ks_p", gof.ks_p}, {"aic", gof.aic},
                                {"caic", gof.caic}, {"bic", gof.bic}, {"hqic", gof.hqic},
                                {"n", static_cast<double>(s.size())},
                                {"converged", fit.converged ? 1.0 : 0.0}}) {
    header.emplace_back(name);
    row.push_back(v);
  }
  const fs::path csv_path = sibling(a.file, ".fit.csv");
  std::ofstream csv = open_output(csv_path);
  write_csv(csv, header, {row});
  out << "\nwrote " << csv_path.string() << '\n';
  return fit.converged ? kOk : kNonConvergence;
}

// ---- regress ---------------------------------------------------------------

struct RegressArgs {
  std::string file;
  std::string model = "gmol";
  std::string covariates;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    std::string name = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    if (!name.empty()) names.push_back(name);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return names;
}

RegFitResult best_fit(const CensoredDesign& d, SubModel model, const std::optional<RegParams>& nested_start) {
  RegFitResult best = fit_regression(d, model);
  if (nested_start) {
    const RegFitResult alt = fit_regression(d, model, nested_start);
    if (alt.loglik > best.loglik) best = alt;
  }
  return best;
}

int cmd_regress(const RegressArgs& a, std::ostream& out) {
  const SubModel model = model_from_flag(a.model);
  const CsvTable table = read_csv(a.file);
  for (const char* required : {"time", "status"}) {
    if (table.find(required) < 0) throw InputError(a.file + ": censored data needs a '" + required + "' column");
  }
  std::vector<std::string> available;
  for (const auto& h : table.header) {
    if (h != "time" && h != "status") available.push_back(h);
  }
  std::vector<std::string> names = a.covariates.empty() ? available : split_names(a.covariates);
  for (const auto& name : names) {
    if (std::find(available.begin(), available.end(), name) == available.end()) {
      std::string list;
      for (const auto& h : available) list += (list.empty() ? "" : ", ") + h;
      throw UsageError("unknown covariate '" + name + "'; available: " + (list.empty() ? "(none)" : list));
    }
  }

  const std::size_t n = table.rows();
  const auto& status_col = table.column("status");
  std::vector<int> status(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (status_col[i] != 0.0 && status_col[i] != 1.0) {
      throw InputError(a.file + ":" + std::to_string(i + 2) + ": status must be 0 or 1");
    }
    status[i] = static_cast<int>(status_col[i]);
  }
  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size() + 1));
  v.col(0).setOnes();
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto& col = table.column(names[j]);
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = col[i];
  }
  const CensoredDesign d(table.column("time"), std::move(status), std::move(v));
  const int r = d.num_covariates();

  // Nested chain: every richer model also starts from the best simpler fit, so its
  // log-likelihood cannot fall below the nested one.
  std::vector<RegFitResult> chain;
  std::optional<RegParams> start;
  for (const SubModel m : {SubModel::Lomax, SubModel::MOL, SubModel::GMOL}) {
    chain.push_back(best_fit(d, m, start));
    start = chain.back().zeta_hat;
    if (m == model) break;
  }
  const RegFitResult& fit = chain.back();

  out << upper(to_string(model)) << " regression of " << a.file << " (n = " << d.size()
      << ", failures = " << d.failures() << ")\n\n";
  out << pad("parameter", 12) << lpad("estimate", 12) << lpad("SE", 12) << lpad("p-value", 12) << '\n';
  const auto pnames = regression_parameter_names(model, r);
  const std::size_t off = pnames.size() - static_cast<std::size_t>(2 * r);
  Eigen::VectorXd est(static_cast<Eigen::Index>(pnames.size()));
  {
    Eigen::Index k = 0;
    if (model != SubModel::Lomax) est[k++] = fit.zeta_hat.alpha;
    if (model == SubModel::GMOL) est[k++] = fit.zeta_hat.lambda;
    est.segment(k, r) = fit.zeta_hat.eta1;
    est.segment(k + r, r) = fit.zeta_hat.eta2;
  }
  for (std::size_t i = 0; i < pnames.size(); ++i) {
    const std::string se = fit.se ? fixed4((*fit.se)[i]) : "n/a";
    const std::string p = (i >= off && fit.se) ? fixed4(fit.wald_p[i - off]) : "";
    out << pad(pnames[i], 12) << lpad(fixed4(est[static_cast<Eigen::Index>(i)]), 12) << lpad(se, 12)
        << lpad(p, 12) << '\n';
  }
  out << '\n' << pad("log-lik", 12) << lpad(fixed4(fit.loglik), 12) << '\n';
  out << pad("converged", 12) << lpad(fit.converged ? "yes" : "no", 12) << '\n';

  if (chain.size() > 1) {
    out << '\n' << pad("model", 8) << pad("hypotheses", 28) << lpad("LR", 12) << lpad("p-value", 12) << '\n';
    const std::string full_name = upper(to_string(model));
    for (std::size_t i = chain.size() - 1; i-- > 0;) {
      const int df = free_parameter_count(model) - free_parameter_count(chain[i].model);
      const std::string nested_name = upper(to_string(chain[i].model));
      const std::string hyp = "H0: " + nested_name + " vs H1: " + full_name;
      try {
        const LrTestResult lr = lr_test(fit, chain[i], df);
        out << pad(nested_name, 8) << pad(hyp, 28) << lpad(fixed4(lr.statistic), 12)
            << lpad(fixed4(lr.p_value), 12) << '\n';
      } catch (const InconsistencyError& e) {
        out << pad(nested_name, 8) << pad(hyp, 28) << "  " << e.what() << '\n';
      }
    }
  }

  const fs::path res_path = sibling(a.file, ".residuals.csv");
  std::vector<std::vector<double>> rows;
  const auto qr = quantile_residuals(fit, d);
  rows.reserve(qr.size());
  for (std::size_t i = 0; i < qr.size(); ++i) {
    rows.push_back({static_cast<double>(i + 1), qr[i].qr, static_cast<double>(qr[i].delta)});
  }
  std::ofstream csv = open_output(res_path);
  write_csv(csv, {"index", "qr", "status"}, rows);
  out << "\nwrote " << res_path.string() << '\n';
  return fit.converged ? kOk : kNonConvergence;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string design;
  std::string truth;
  std::string n_list;
  int reps = 1000;
  std::string censoring = "0";
  std::uint64_t seed = 0;
  std::string out = "-";
};

int thread_budget() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("GMOL_THREADS");
  if (env == nullptr || *env == '\0') return static_cast<int>(hw);
  int cap = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
  if (ec != std::errc() || ptr != s.data() + s.size() || cap < 1) {
    throw UsageError("GMOL_THREADS must be a positive integer (got '" + std::string(s) + "')");
  }
  return std::min(cap, static_cast<int>(hw));
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> ns;
  for (const double v : parse_number_list(text, "--n-list")) {
    if (v < 2 || v != std::floor(v) || v > 1e9) throw UsageError("--n-list entries must be integers >= 2");
    ns.push_back(static_cast<int>(v));
  }
  return ns;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.reps < 1) throw UsageError("--reps must be >= 1");
  const std::vector<double> truth = parse_number_list(a.truth, "--truth");
  const std::vector<int> ns = parse_n_list(a.n_list);
  const std::vector<double> censoring = parse_number_list(a.censoring, "--censoring");
  for (const double c : censoring) {
    if (!(c >= 0.0 && c < 1.0)) throw UsageError("--censoring levels are fractions in [0,1)");
  }

  StudyTable table;
  if (a.design == "iid") {
    if (truth.size() != 4) throw UsageError("--truth for the iid design expects a,l,t,b (4 values)");
    if (std::any_of(censoring.begin(), censoring.end(), [](double c) { return c != 0.0; })) {
      throw UsageError("--censoring applies to the regression design only");
    }
    IidStudyConfig cfg;
    try {
      cfg.truth = GmolParams(truth[0], truth[1], truth[2], truth[3]);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--truth: ") + e.what());
    }
    cfg.n_list = ns;
    cfg.reps = a.reps;
    cfg.seed = a.seed;
    cfg.threads = thread_budget();
    table = run_iid_study(cfg);
  } else if (a.design == "regression") {
    if (truth.size() != 6) {
      throw UsageError("--truth for the regression design expects alpha,lambda,eta10,eta11,eta20,eta21 (6 values)");
    }
    RegressionStudyConfig cfg;
    cfg.truth.alpha = truth[0];
    cfg.truth.lambda = truth[1];
    cfg.truth.eta1 = Eigen::Vector2d(truth[2], truth[3]);
    cfg.truth.eta2 = Eigen::Vector2d(truth[4], truth[5]);
    try {
      cfg.truth.validate();
    } catch (const DomainError& e) {
      throw UsageError(std::string("--truth: ") + e.what());
    }
    cfg.n_list = ns;
    cfg.reps = a.reps;
    cfg.seed = a.seed;
    cfg.censor_targets = censoring;
    cfg.threads = thread_budget();
    table = run_regression_study(cfg);
  } else {
    throw UsageError("--design must be iid or regression");
  }

  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  if (a.out == "-") {
    write_study_csv(out, table);
  } else {
    std::ofstream f = open_output(a.out);
    write_study_csv(f, table);
  }
  return kOk;
}

// ---- curve -----------------------------------------------------------------

struct CurveArgs {
  std::string what;
  std::string params;
  std::string grid;
  std::string out = "-";
};

int cmd_curve(const CurveArgs& a, std::ostream& out) {
  const auto p = parse_number_list(a.params, "--params");
  if (p.size() != 4) throw UsageError("--params expects a,l,t,b");
  std::optional<GmolParams> theta;
  try {
    theta = GmolParams(p[0], p[1], p[2], p[3]);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--params: ") + e.what());
  }

  const auto colon1 = a.grid.find(':');
  const auto colon2 = colon1 == std::string::npos ? std::string::npos : a.grid.find(':', colon1 + 1);
  if (colon2 == std::string::npos) throw UsageError("--grid must be min:max:points");
  const auto lo = parse_number_list(a.grid.substr(0, colon1), "--grid");
  const auto hi = parse_number_list(a.grid.substr(colon1 + 1, colon2 - colon1 - 1), "--grid");
  const auto pts = parse_number_list(a.grid.substr(colon2 + 1), "--grid");
  if (lo.size() != 1 || hi.size() != 1 || pts.size() != 1) throw UsageError("--grid must be min:max:points");
  const double gmin = lo[0];
  const double gmax = hi[0];
  if (pts[0] < 2 || pts[0] != std::floor(pts[0]) || pts[0] > 1e7) throw UsageError("--grid points must be an integer >= 2");
  const int points = static_cast<int>(pts[0]);
  if (!(gmax > gmin)) throw UsageError("--grid needs max > min");

  std::function<double(double)> f;
  std::string abscissa = "x";
  const GmolParams& t = *theta;
  if (a.what == "pdf") {
    f = [&](double x) { return pdf(x, t); };
  } else if (a.what == "cdf") {
    f = [&](double x) { return cdf(x, t); };
  } else if (a.what == "hrf") {
    f = [&](double x) { return hrf(x, t); };
  } else if (a.what == "quantile") {
    abscissa = "u";
    f = [&](double u) { return quantile(u, t); };
  } else if (a.what == "lorenz") {
    abscissa = "nu";
    f = [&](double nu) { return lorenz(nu, t); };
  } else if (a.what == "bonferroni") {
    abscissa = "nu";
    f = [&](double nu) { return bonferroni(nu, t); };
  } else {
    throw UsageError("--what must be one of pdf, cdf, hrf, quantile, lorenz, bonferroni");
  }
  if (abscissa == "x") {
    if (gmin < 0.0) throw UsageError("--grid for " + a.what + " must start at x >= 0");
  } else if (!(gmin > 0.0 && gmax < 1.0)) {
    throw UsageError("--grid for " + a.what + " must lie strictly inside (0,1)");
  }
  if ((a.what == "lorenz" || a.what == "bonferroni") && !(t.tau() > 1.0)) {
    throw UsageError(a.what + " needs tau > 1 (finite mean)");
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = i + 1 == points ? gmax : gmin + (gmax - gmin) * i / (points - 1);
    rows.push_back({x, f(x)});
  }
  if (a.out == "-") {
    write_csv(out, {abscissa, a.what}, rows);
  } else {
    std::ofstream file = open_output(a.out);
    write_csv(file, {abscissa, a.what}, rows);
  }
  return kOk;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    std::string cell = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    cell.erase(0, cell.find_first_not_of(' '));
    cell.erase(cell.find_last_not_of(' ') + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw UsageError(flag + ": '" + cell + "' is not a number");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Marshall-Olkin Lomax fitting, regression, simulation and curves", "gmol"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit of an iid sample (column 'time')");
  fit_cmd->add_option("file", fit.file, "CSV with a 'time' column")->required();
  fit_cmd->add_option("--model", fit.model, "gmol, mol or lomax")->capture_default_str();
  fit_cmd->add_option("--init", fit.init, "initial a,l,t,b");
  fit_cmd->add_option("--seed", fit.seed, "seed of the optimizer restarts")->capture_default_str();

  RegressArgs reg;
  auto* reg_cmd = app.add_subcommand("regress", "Censored GMOL regression (columns time, status, covariates)");
  reg_cmd->add_option("file", reg.file, "CSV with time, status and covariate columns")->required();
  reg_cmd->add_option("--model", reg.model, "gmol, mol or lomax")->capture_default_str();
  reg_cmd->add_option("--covariates", reg.covariates, "comma-separated covariate columns (default: all)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo parameter-recovery study");
  sim_cmd->add_option("--design", sim.design, "iid or regression")->required();
  sim_cmd->add_option("--truth", sim.truth, "a,l,t,b (iid) or alpha,lambda,eta10,eta11,eta20,eta21")->required();
  sim_cmd->add_option("--n-list", sim.n_list, "sample sizes, e.g. 50,150,300")->required();
  sim_cmd->add_option("--reps", sim.reps, "replicates per cell")->capture_default_str();
  sim_cmd->add_option("--censoring", sim.censoring, "censoring fractions, e.g. 0,0.1,0.3")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "study seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "output CSV ('-' for stdout)")->capture_default_str();

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "Tabulate pdf, cdf, hrf, quantile, lorenz or bonferroni");
  curve_cmd->add_option("--what", curve.what, "pdf, cdf, hrf, quantile, lorenz or bonferroni")->required();
  curve_cmd->add_option("--params", curve.params, "a,l,t,b")->required();
  curve_cmd->add_option("--grid", curve.grid, "min:max:points")->required();
  curve_cmd->add_option("--out", curve.out, "output CSV ('-' for stdout)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*reg_cmd) return cmd_regress(reg, out);
    if (*sim_cmd) return cmd_simulate(sim, out, err);
    if (*curve_cmd) return cmd_curve(curve, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DesignError& e) {
    err << "design error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNonConvergence;
  }
  return kInputError;
}

}  // namespace gmol::cli
