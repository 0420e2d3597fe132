#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "minisy/parser.hpp"
#include "minisy/printer.hpp"
#include "minisy/solver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"minisy: a syntax-guided synthesis solver"};

  std::string file = "-";
  std::string strategy = "auto";
  int64_t timeout_ms = 60000;
  int max_size = 12;
  int verify_bound = 32;
  uint64_t seed = 0;
  bool stats = false;
  bool quiet = false;

  app.add_option("file", file,
                 "input problem file (defaults to standard input)");
  app.add_option("--strategy", strategy,
                 "auto, fast, si, pbe, or unif (default auto)");
  app.add_option("--timeout-ms", timeout_ms, "overall budget, milliseconds");
  app.add_option("--max-size", max_size, "largest candidate term size");
  app.add_option("--verify-bound", verify_bound,
                 "half-width of the integer box used for bounded checking");
  app.add_option("--seed", seed, "sample-point generator seed");
  app.add_flag("--stats", stats, "print search statistics to stderr");
  app.add_flag("--quiet", quiet, "suppress warnings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  minisy::SolverConfig cfg;
  try {
    cfg.strategy = minisy::strategy_from_name(strategy);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  cfg.timeout_ms = timeout_ms;
  cfg.max_size = max_size;
  cfg.verify_bound = verify_bound;
  cfg.seed = seed;

  minisy::Problem problem;
  try {
    problem = minisy::parse_problem_file(file);
  } catch (const minisy::ParseError& e) {
    std::cerr << "error: " << file << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  minisy::SolveReport report;
  try {
    minisy::Solver solver(problem, cfg);
    report = solver.solve();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!quiet) {
    for (const auto& w : report.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
  }
  if (stats) {
    std::cerr << "strategy=" << report.stats.strategy << "\n"
              << "enumerated=" << report.stats.enumerated << "\n"
              << "admitted=" << report.stats.admitted << "\n"
              << "verifier_calls=" << report.stats.verifier_calls << "\n"
              << "rounds=" << report.stats.rounds << "\n";
  }

  switch (report.outcome.kind) {
    case minisy::SolveOutcome::Kind::Solution: {
      const minisy::SynthFun* f = problem.find_function(report.function_name);
      std::cout << minisy::print_define_fun(*f, report.outcome.body) << "\n";
      return 0;
    }
    case minisy::SolveOutcome::Kind::Infeasible:
      std::cout << "infeasible\n";
      return 0;
    case minisy::SolveOutcome::Kind::Unknown:
      std::cout << "unknown\n";
      if (!quiet && !report.outcome.reason.empty()) {
        std::cerr << "reason: " << report.outcome.reason << "\n";
      }
      return 1;
  }
  return 1;
}
