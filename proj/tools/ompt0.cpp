#include "ompt0/cli.hpp"
#include "ompt0/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace ompt0;

std::optional<StoppingRule> parse_stop(const std::vector<std::string>& words) {
  if (words.empty()) return std::nullopt;
  if (words.size() != 2) throw Error(ErrorKind::ParseError, "--stop takes `iters N` or `residual EPS`");
  if (words[0] == "iters") return FixedIterations{parse_count(words[1])};
  if (words[0] == "residual") return ResidualThreshold{parse_double(words[1])};
  throw Error(ErrorKind::ParseError, "unknown stopping rule '" + words[0] + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Greedy sparse recovery with a prior support estimate (OMP started from T0).\n"
      "All indices in files and output are 0-based."};
  app.require_subcommand(1);

  // recover
  auto* recover = app.add_subcommand("recover", "Run OMP with prior support on a problem file");
  std::string problem_path;
  std::vector<std::string> stop_words;
  std::string tie = "lowest";
  recover->add_option("problem", problem_path, "Problem file (key = value lines)")->required();
  recover
      ->add_option("--stop", stop_words,
                   "`iters N` or `residual EPS`. Default: residual epsilon when epsilon > 0, "
                   "otherwise k - |T n T0| iterations")
      ->expected(2);
  recover->add_option("--tie", tie, "Tie-break rule: lowest, highest or adversarial")
      ->check(CLI::IsMember({"lowest", "highest", "adversarial"}));

  // ric
  auto* ric = app.add_subcommand("ric", "Exact restricted isometry constant by enumeration");
  std::string matrix_path;
  std::size_t order = 0;
  std::uint64_t budget = kDefaultRicBudget;
  unsigned ric_threads = 1;
  ric->add_option("matrix", matrix_path, "Matrix file")->required();
  ric->add_option("order", order, "Subset size")->required();
  ric->add_option("--budget", budget, "Maximum number of subsets to enumerate");
  ric->add_option("--threads", ric_threads, "Worker threads (0: all cores)");

  // demo
  auto* demo = app.add_subcommand("demo", "Extremal constructions");
  demo->require_subcommand(1);
  cli::DemoOptions demo_opts;
  std::string write_matrix, write_problem;
  std::size_t dk = 0, dg = 0, db = 0;
  double ddelta = 0.0, deps = 0.0;
  auto* sharp = demo->add_subcommand("sharp", "Instance where a tie lets OMP fail at the threshold");
  auto* necessary =
      demo->add_subcommand("necessary", "Noisy instance where the magnitude bound is tight");
  for (auto* sub : {sharp, necessary}) {
    sub->add_option("k", dk, "Sparsity")->required();
    sub->add_option("g", dg, "Correct prior indices, g < k")->required();
    sub->add_option("b", db, "Wrong prior indices")->required();
    sub->add_option("--write-matrix", write_matrix, "Save the matrix to this file");
    sub->add_option("--write-problem", write_problem, "Save a problem file (inline matrix)");
  }
  necessary->add_option("delta", ddelta, "RIC value, below 1/sqrt(k-g+1)")->required();
  necessary->add_option("epsilon", deps, "Noise level, > 0")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep from a config file");
  std::string config_path, output_path, details_path;
  unsigned sweep_threads = 0;
  sweep->add_option("config", config_path, "Sweep config file")->required();
  sweep->add_option("output", output_path, "Summary CSV")->required();
  sweep->add_option("--details", details_path, "Per-trial CSV");
  sweep->add_option("--threads", sweep_threads,
                    "Worker threads (0: OMP_PRIOR_THREADS, else all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kMalformedInput;
  }

  try {
    if (*recover) {
      cli::RecoverOptions opts;
      opts.stop = parse_stop(stop_words);
      opts.tie = tie == "highest"       ? TieKind::Highest
                 : tie == "adversarial" ? TieKind::Adversarial
                                        : TieKind::Lowest;
      return cli::cmd_recover(read_problem_file(problem_path), opts, std::cout, std::cerr);
    }
    if (*ric) {
      RicOptions opts;
      opts.budget = budget;
      opts.threads = ric_threads;
      return cli::cmd_ric(read_matrix_file(matrix_path), order, opts, std::cout, std::cerr);
    }
    if (*demo) {
      if (!write_matrix.empty()) demo_opts.write_matrix = write_matrix;
      if (!write_problem.empty()) demo_opts.write_problem = write_problem;
      if (*sharp) return cli::cmd_demo_sharp(dk, dg, db, demo_opts, std::cout, std::cerr);
      return cli::cmd_demo_necessary(dk, dg, db, ddelta, deps, demo_opts, std::cout, std::cerr);
    }
    if (*sweep) {
      RunOptions opts;
      opts.threads = sweep_threads;
      std::optional<std::filesystem::path> details;
      if (!details_path.empty()) details = details_path;
      return cli::cmd_sweep(config_path, output_path, details, opts, std::cout, std::cerr);
    }
  } catch (const Error& e) {
    std::cerr << "error [input]: " << e.what() << '\n';
    return cli::exit_code_for(e.kind());
  }
  return cli::kMalformedInput;
}
