#ifndef JSEARCH_CLI_HPP
#define JSEARCH_CLI_HPP

// Command-line front end. run() is the whole program; tools/jsearch.cpp only
// forwards argc/argv and the standard streams.
//
// Exit codes: 0 success, 1 a validation check failed, 2 usage or domain
// error (including the full-space cap), 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "jsearch/coupling.hpp"
#include "jsearch/dynamics.hpp"
#include "jsearch/errors.hpp"
#include "jsearch/johnson.hpp"
#include "jsearch/report.hpp"
#include "jsearch/spectral.hpp"
#include "jsearch/validation.hpp"

namespace jsearch::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

/// Relative --out paths are resolved against this directory when it is set.
inline constexpr const char* kOutDirEnv = "JSEARCH_OUT_DIR";

enum class Command { spectrum, gamma, simulate, scan, validate, sweep };

struct CliConfig {
  Command command = Command::spectrum;
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::optional<double> gamma_override;
  std::optional<double> t;
  std::optional<double> t0, t1;
  std::size_t m = 101;
  std::vector<std::int64_t> n_list;
  std::uint64_t w = 0;
  std::string out;  // empty: standard output
  report::Format format = report::Format::csv;
  std::uint64_t full_cap = kDefaultFullSpaceCap;
  unsigned threads = 1;
};

struct Outcome {
  report::Table table;
  int code = kOk;
};

inline Outcome cmd_spectrum(const CliConfig& cfg) {
  const auto params = GraphParams::make(cfg.n, cfg.k);
  const auto spec = spectral_data(params);
  report::Table t{{"ell", "lambda", "mult", "overlap_sq"}, {}};
  for (int ell = 0; ell <= params.k(); ++ell) {
    const double p = spec.overlaps[static_cast<std::size_t>(ell)];
    t.add_row({static_cast<std::int64_t>(ell), spec.lambdas[static_cast<std::size_t>(ell)],
               spec.mults[static_cast<std::size_t>(ell)], p * p});
  }
  return {std::move(t)};
}

inline Outcome cmd_gamma(const CliConfig& cfg) {
  const auto params = GraphParams::make(cfg.n, cfg.k);
  const auto sp = ScaledParams::from_graph(params);
  const double g = gamma_star(params);
  report::Table t{{"n", "k", "eps", "eta_star", "gamma_star"}, {}};
  std::vector<report::Cell> row{params.n(), static_cast<std::int64_t>(params.k()), sp.eps(),
                                eta_star(sp), g};
  if (params.k() >= 3 && params.k() <= 5) {
    const double cf = gamma_closed_form(sp);
    t.columns.push_back("gamma_closed_form");
    t.columns.push_back("rel_diff");
    row.push_back(cf);
    row.push_back(std::abs(cf - g) / g);
  }
  t.add_row(std::move(row));
  return {std::move(t)};
}

inline double resolve_gamma(const CliConfig& cfg, const GraphParams& params) {
  if (cfg.gamma_override) {
    if (!(*cfg.gamma_override > 0.0)) throw DomainError("--gamma must be positive");
    return *cfg.gamma_override;
  }
  return gamma_star(params);
}

inline Outcome cmd_simulate(const CliConfig& cfg) {
  const auto params = GraphParams::make(cfg.n, cfg.k);
  const double gamma = resolve_gamma(cfg, params);
  const double t = cfg.t.value_or(run_time(params));
  const double p = success_probability(params, gamma, t);
  report::Table tab{{"n", "k", "gamma", "t", "p_succ"}, {}};
  tab.add_row({params.n(), static_cast<std::int64_t>(params.k()), gamma, t, p});
  return {std::move(tab)};
}

inline Outcome cmd_scan(const CliConfig& cfg) {
  const auto params = GraphParams::make(cfg.n, cfg.k);
  const double gamma = resolve_gamma(cfg, params);
  const double t0 = cfg.t0.value_or(0.0);
  const double t1 = cfg.t1.value_or(2.0 * run_time(params));
  const auto s = scan(params, gamma, t0, t1, cfg.m);
  report::Table tab{{"t", "p_succ"}, {}};
  for (std::size_t i = 0; i < s.times.size(); ++i) tab.add_row({s.times[i], s.probs[i]});
  return {std::move(tab)};
}

inline Outcome cmd_validate(const CliConfig& cfg) {
  const auto params = GraphParams::make(cfg.n, cfg.k);
  detail::require_cap(params, cfg.full_cap);
  const VertexId w(cfg.w);
  detail::require_vertex(w, params);
  const double gamma = resolve_gamma(cfg, params);
  const auto N = params.vertex_count();

  std::vector<ValidationReport> reps;
  reps.push_back(check_spectrum(params, cfg.full_cap));
  reps.push_back(check_reduced_conjugation(params, gamma, w, cfg.full_cap));

  ValidationReport dyn{describe(params), {}};
  dyn.add("partition_invariance", check_partition_invariance(params, w, cfg.full_cap), kInvarianceTol);
  const auto times = oracle_times(params);
  dyn.add("oracle_full_vs_reduced", compare_full_reduced(params, gamma, w, times, cfg.full_cap),
          kOracleTol);
  const VertexId other(w.value + 1 < N ? N - 1 : 0);
  const auto a = full_probability_curve(params, gamma, w, times, cfg.full_cap);
  const auto b = full_probability_curve(params, gamma, other, times, cfg.full_cap);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  dyn.add("vertex_transitivity", diff, kTransitivityTol);
  reps.push_back(std::move(dyn));

  bool ok = true;
  for (const auto& r : reps) ok = ok && r.all_passed();
  return {report::validation_table(params, reps), ok ? kOk : kCheckFailed};
}

inline Outcome cmd_sweep(const CliConfig& cfg) {
  if (cfg.n_list.empty()) throw DomainError("--n-list must name at least one n");
  const unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  const auto rows = convergence_sweep(static_cast<int>(cfg.k), cfg.n_list, threads);
  return {report::sweep_table(rows)};
}

inline Outcome dispatch(const CliConfig& cfg) {
  switch (cfg.command) {
    case Command::spectrum: return cmd_spectrum(cfg);
    case Command::gamma: return cmd_gamma(cfg);
    case Command::simulate: return cmd_simulate(cfg);
    case Command::scan: return cmd_scan(cfg);
    case Command::validate: return cmd_validate(cfg);
    case Command::sweep: return cmd_sweep(cfg);
  }
  throw DomainError("unknown command");
}

inline std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Continuous-time quantum-walk search on Johnson graphs J(n,k)", "jsearch"};
  app.require_subcommand(1);

  std::string format = "csv";
  auto common = [&](CLI::App* sub, bool needs_n) {
    if (needs_n) sub->add_option("--n", cfg.n, "ground-set size n")->required();
    sub->add_option("--k", cfg.k, "subset size k")->required();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
  };
  auto gamma_opt = [&](CLI::App* sub) {
    sub->add_option("--gamma", cfg.gamma_override, "hopping rate (default: critical gamma*)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "closed-form eigenvalues, multiplicities, overlaps");
  common(spectrum, true);
  auto* gamma = app.add_subcommand("gamma", "critical hopping rate gamma*");
  common(gamma, true);
  auto* simulate = app.add_subcommand("simulate", "success probability at one time");
  common(simulate, true);
  gamma_opt(simulate);
  simulate->add_option("--t", cfg.t, "evolution time (default: t_run)");
  auto* scan_cmd = app.add_subcommand("scan", "success probability on a uniform time grid");
  common(scan_cmd, true);
  gamma_opt(scan_cmd);
  scan_cmd->add_option("--t0", cfg.t0, "grid start (default 0)");
  scan_cmd->add_option("--t1", cfg.t1, "grid end (default 2 t_run)");
  scan_cmd->add_option("--m", cfg.m, "number of samples (default 101)");
  auto* validate = app.add_subcommand("validate", "full-space oracle checks");
  common(validate, true);
  gamma_opt(validate);
  validate->add_option("--w", cfg.w, "marked vertex id (default 0)");
  validate->add_option("--full-cap", cfg.full_cap, "largest full-space dimension N");
  auto* sweep = app.add_subcommand("sweep", "convergence study over several n");
  common(sweep, false);
  sweep->add_option("--n-list", cfg.n_list, "comma-separated ascending n values")
      ->delimiter(',')
      ->required();
  sweep->add_option("--threads", cfg.threads, "worker threads, 0 = hardware concurrency");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "jsearch: " << e.what() << '\n';
    return kUsage;
  }

  if (*spectrum) cfg.command = Command::spectrum;
  if (*gamma) cfg.command = Command::gamma;
  if (*simulate) cfg.command = Command::simulate;
  if (*scan_cmd) cfg.command = Command::scan;
  if (*validate) cfg.command = Command::validate;
  if (*sweep) cfg.command = Command::sweep;
  cfg.format = format == "json" ? report::Format::json : report::Format::csv;

  Outcome result;
  try {
    result = dispatch(cfg);
  } catch (const NumericalError& e) {
    err << "jsearch: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "jsearch: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    err << "jsearch: " << e.what() << '\n';
    return kUsage;
  }

  const auto text = report::render(result.table, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    const auto path = resolve_out(cfg.out);
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) {
      err << "jsearch: cannot write " << path.string() << '\n';
      return kUsage;
    }
  }
  return result.code;
}

}  // namespace jsearch::cli

#endif  // JSEARCH_CLI_HPP
