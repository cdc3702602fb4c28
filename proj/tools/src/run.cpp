#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "mfgcanon/errors.hpp"
#include "mfgcanon_cli/workflows.hpp"

namespace mfgcanon::cli {
namespace {

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << content;
    f.flush();
    if (!f) throw ValidationError("write to '" + path + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

struct Options {
  std::string problem;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string table;
};

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return kExitUsage;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNonConvergence;
  return kExitConsistency;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical transformation toolkit for mean field games"};
  app.require_subcommand(1);
  Options opts;
  const char* names[] = {"certify", "check", "solve", "equivalence"};
  const char* help[] = {"closed-form well-posedness certificates",
                        "sampled monotonicity checks",
                        "solve the N-particle forward-backward system",
                        "compare solutions of (H, G) and (H_alpha, G_alpha)"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--problem", opts.problem, "problem file (JSON)")->required();
    sub->add_option("--alpha", opts.alpha, "transform parameter");
    sub->add_option("--seed", opts.seed, "overrides the seed in the problem file");
    sub->add_option("--out", opts.out, "report file (default: stdout)");
    sub->add_option("--table", opts.table,
                    "trajectory table (default for solve: <out>.trajectories.csv)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mfg-canon: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  const std::string workflow = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  nlohmann::json report;
  WorkflowResult result;
  try {
    const ProblemFile problem = load_problem(opts.problem, opts.seed);
    report["version"] = kReportVersion;
    report["workflow"] = workflow;
    report["seed"] = problem.seed;
    report["input"] = problem.raw;
    if (opts.alpha) report["alpha"] = *opts.alpha;
    try {
      if (workflow == "certify") {
        result = cmd_certify(problem, opts.alpha);
      } else if (workflow == "check") {
        result = cmd_check(problem, opts.alpha);
      } else if (workflow == "solve") {
        result = cmd_solve(problem, opts.alpha);
      } else {
        result = cmd_equivalence(problem, opts.alpha);
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      // Numerical and consistency failures still produce a report.
      result.payload = {{"error", e.what()}};
      result.exit_code = exit_code_for(e);
    }
  } catch (const std::exception& e) {
    err << "mfg-canon: " << e.what() << "\n";
    return exit_code_for(e);
  }

  report["payload"] = result.payload;
  report["exit_code"] = result.exit_code;
  report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    const std::string text = report.dump(2) + "\n";
    if (opts.out.empty()) {
      out << text;
    } else {
      write_atomically(opts.out, text);
    }
    if (result.table) {
      std::string table_path = opts.table;
      if (table_path.empty() && !opts.out.empty()) table_path = opts.out + ".trajectories.csv";
      if (!table_path.empty()) write_atomically(table_path, *result.table);
    }
  } catch (const std::exception& e) {
    err << "mfg-canon: " << e.what() << "\n";
    return kExitUsage;
  }
  if (result.exit_code == kExitNonConvergence) {
    err << "mfg-canon: numerical failure: "
        << result.payload.value("message", result.payload.value("error", std::string("not converged")))
        << "\n";
  } else if (result.exit_code == kExitConsistency) {
    err << "mfg-canon: internal consistency violation: " << result.payload.value("error", std::string()) << "\n";
  }
  return result.exit_code;
}

}  // namespace mfgcanon::cli
