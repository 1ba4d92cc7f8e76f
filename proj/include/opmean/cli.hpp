#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opmean/harness.hpp"
#include "opmean/io.hpp"
#include "opmean/means.hpp"

namespace opmean::cli {

enum ExitCode : int { ok = 0, check_failed = 1, bad_input = 2, no_convergence = 3 };

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string echo(const std::vector<std::string>& args) {
  std::string line = "command=opmean";
  for (const auto& a : args) line += " " + a;
  return line;
}

template <class E>
std::vector<std::string> names(std::initializer_list<E> values) {
  std::vector<std::string> out;
  for (E v : values) out.emplace_back(to_string(v));
  return out;
}

inline std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (MeanKind k : kAllKinds) out.emplace_back(to_string(k));
  return out;
}

// Flag values as typed; converted to enums after parsing.
struct RawFlags {
  std::string kind = "inductive";
  std::string format = "json";
  std::string init = "arithmetic";
  std::string structure = "generic";
  std::vector<std::string> kinds;
};

struct Options {
  MeanKind kind = MeanKind::inductive;
  std::string input;
  std::string output;
  FileFormat format = FileFormat::json;
  double solver_tol = 1e-10;
  double check_tol = 1e-8;
  int max_iter = 500;
  KarcherInit init = KarcherInit::arithmetic;
  std::vector<std::string> suite{"all"};
  std::vector<MeanKind> kinds{std::begin(kAllKinds), std::end(kAllKinds)};
  GenSpec spec;
  int trials = 100;
};

// Report lines are collected and written once when the command finishes.
struct Report {
  std::vector<std::string> lines;
  void add(std::string l) { lines.push_back(std::move(l)); }
};

inline int cmd_mean(const Options& o, std::ostream& out, Report& rep) {
  if (o.input.empty()) throw input_error("mean: --input is required");
  const MatrixFile file = read_matrix_file(o.input, o.format);
  const SpdTuple tuple = file.to_tuple();
  SolverConfig cfg;
  cfg.residual_tol = o.solver_tol;
  cfg.max_iter = o.max_iter;
  cfg.init = o.init;
  cfg.validate();

  const SpdMatrix result = mean(o.kind, tuple, cfg);
  rep.add("kind=" + std::string(to_string(o.kind)) + " k=" + std::to_string(tuple.size()) +
          " dim=" + std::to_string(tuple.dim()));
  if (o.kind == MeanKind::karcher) rep.add("residual=" + sci(karcher_residual(result, tuple).frobenius()));

  const std::string text = serialize(MatrixFile::single(result, std::string(to_string(o.kind))), o.format);
  if (o.output.empty())
    out << text;
  else
    write_text(o.output, text);
  return ok;
}

inline int cmd_check(const Options& o, Report& rep) {
  SolverConfig cfg;
  cfg.max_iter = o.max_iter;
  cfg.init = o.init;
  cfg.validate();
  const auto reports = run_suite(o.suite, o.spec, o.trials, o.check_tol, o.kinds, cfg);
  for (const auto& r : reports) rep.add(format_report(r));
  return all_passed(reports) ? ok : check_failed;
}

inline int cmd_gen(const Options& o, std::ostream& out, Report& rep) {
  const SpdTuple tuple = gen_tuple(o.spec);
  const std::string text = serialize(MatrixFile::from_tuple(tuple), o.format);
  rep.add("dim=" + std::to_string(o.spec.dim) + " k=" + std::to_string(o.spec.k) +
          " seed=" + std::to_string(o.spec.seed) + " structure=" + std::string(to_string(o.spec.structure)));
  if (o.output.empty())
    out << text;
  else
    write_text(o.output, text);
  return ok;
}

}  // namespace detail

// Runs the command line `args` (program name excluded).  The result matrix of
// mean/gen goes to `out` unless --output is given; their report goes to `err`.
// The check report goes to `out`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Options;
  Options o;
  CLI::App app{"Multivariate geometric means of SPD matrices", "opmean"};
  app.require_subcommand(1);

  detail::RawFlags raw;
  const auto kinds = detail::kind_names();
  const auto formats = detail::names({FileFormat::json, FileFormat::csv});
  const auto structures = detail::names({Structure::generic, Structure::commuting, Structure::block});
  const std::vector<std::string> inits{"arithmetic", "inductive"};

  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--dim", o.spec.dim, "Matrix dimension")->capture_default_str();
    sub->add_option("--k", o.spec.k, "Tuple size")->capture_default_str();
    sub->add_option("--seed", o.spec.seed, "Base seed")->capture_default_str();
    sub->add_option("--cond", o.spec.cond_bound, "Condition number bound")->capture_default_str();
    sub->add_option("--structure", raw.structure, "generic|commuting|block")
        ->check(CLI::IsMember(structures))
        ->capture_default_str();
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--max-iter", o.max_iter, "Karcher iteration cap")->capture_default_str();
    sub->add_option("--init", raw.init, "Karcher start: arithmetic|inductive")
        ->check(CLI::IsMember(inits))
        ->capture_default_str();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", raw.format, "json|csv")->check(CLI::IsMember(formats))->capture_default_str();
  };

  CLI::App* mean_cmd = app.add_subcommand("mean", "Compute the mean of the matrices in a file");
  mean_cmd->add_option("--kind", raw.kind, "inductive|variant|karcher|arithmetic|harmonic")
      ->check(CLI::IsMember(kinds))
      ->capture_default_str();
  mean_cmd->add_option("--input", o.input, "Matrix file")->required();
  mean_cmd->add_option("--output", o.output, "Result file (default: standard output)");
  mean_cmd->add_option("--tol", o.solver_tol, "Karcher residual tolerance")->capture_default_str();
  add_format(mean_cmd);
  add_solver(mean_cmd);

  CLI::App* check_cmd = app.add_subcommand("check", "Run property checks");
  check_cmd->add_option("--suite", o.suite, "NAME[,NAME...] or all")->delimiter(',')->capture_default_str();
  check_cmd->add_option("--kinds", raw.kinds, "Mean kinds to check (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(kinds));
  check_cmd->add_option("--trials", o.trials, "Trials per check")->capture_default_str();
  check_cmd->add_option("--tol", o.check_tol, "Check tolerance")->capture_default_str();
  add_spec(check_cmd);
  add_solver(check_cmd);

  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a seeded random tuple");
  gen_cmd->add_option("--output", o.output, "Output file (default: standard output)");
  add_spec(gen_cmd);
  add_format(gen_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << detail::echo(args) << "\nexit_code=" << bad_input << "\n";
    return bad_input;
  }

  o.kind = *parse_mean_kind(raw.kind);
  o.format = *parse_file_format(raw.format);
  o.init = raw.init == "inductive" ? KarcherInit::inductive : KarcherInit::arithmetic;
  o.spec.structure = *parse_structure(raw.structure);
  if (!raw.kinds.empty()) {
    o.kinds.clear();
    for (const auto& k : raw.kinds) o.kinds.push_back(*parse_mean_kind(k));
  }

  const auto start = std::chrono::steady_clock::now();
  detail::Report rep;
  rep.add(detail::echo(args));
  int code = ok;
  std::ostringstream result;
  try {
    if (mean_cmd->parsed())
      code = detail::cmd_mean(o, result, rep);
    else if (check_cmd->parsed())
      code = detail::cmd_check(o, rep);
    else
      code = detail::cmd_gen(o, result, rep);
  } catch (const convergence_error& e) {
    rep.add(std::string("error=") + e.what());
    rep.add("residual=" + detail::sci(e.residual_norm()) + " iterations=" + std::to_string(e.iterations()));
    code = no_convergence;
  } catch (const solver_failure& e) {
    rep.add(std::string("error=") + e.what());
    code = no_convergence;
  } catch (const error& e) {
    rep.add(std::string("error=") + e.what());
    code = bad_input;
  }
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rep.add("wall_ms=" + std::to_string(static_cast<long long>(ms)));
  rep.add("exit_code=" + std::to_string(code));

  std::ostream& report_stream = check_cmd->parsed() ? out : err;
  out << result.str();
  for (const auto& l : rep.lines) report_stream << l << "\n";
  return code;
}

}  // namespace opmean::cli
