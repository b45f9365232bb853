#pragma once

// Command implementations behind the `ompt0` executable. Each returns the
// process exit code:
//   0 success, 1 malformed input or usage, 2 numerical failure (rank loss,
//   eigensolver, failed self-check), 3 RIC enumeration budget exceeded,
//   4 a noiseless compliant sweep trial failed to recover.

#include "ompt0/errors.hpp"
#include "ompt0/greedy.hpp"
#include "ompt0/harness.hpp"
#include "ompt0/io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace ompt0::cli {

enum ExitCode : int {
  kOk = 0,
  kMalformedInput = 1,
  kNumericalFailure = 2,
  kBudgetExceeded = 3,
  kTheoremViolation = 4,
};

int exit_code_for(ErrorKind kind);

struct RecoverOptions {
  std::optional<StoppingRule> stop;  // default: see default_stopping_rule
  TieKind tie = TieKind::Lowest;
};

/// residual(ε) when ε > 0; otherwise k - |T ∩ T0| iterations when x is
/// known, else k - |T0|.
StoppingRule default_stopping_rule(const ProblemFile& problem);

int cmd_recover(const ProblemFile& problem, const RecoverOptions& options, std::ostream& out,
                std::ostream& err);

int cmd_ric(const Matrix& a, std::size_t order, const RicOptions& options, std::ostream& out,
            std::ostream& err);

struct DemoOptions {
  std::optional<std::filesystem::path> write_matrix;
  std::optional<std::filesystem::path> write_problem;
};

int cmd_demo_sharp(std::size_t k, std::size_t g, std::size_t b, const DemoOptions& options,
                   std::ostream& out, std::ostream& err);

int cmd_demo_necessary(std::size_t k, std::size_t g, std::size_t b, double delta, double epsilon,
                       const DemoOptions& options, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::filesystem::path& config, const std::filesystem::path& output,
              const std::optional<std::filesystem::path>& details, const RunOptions& options,
              std::ostream& out, std::ostream& err);

}  // namespace ompt0::cli
