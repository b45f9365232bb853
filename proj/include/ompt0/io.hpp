#pragma once

// Text file formats. Parsing and printing never depend on the C locale.
//
// Matrix file:
//   rows cols
//   a11 a12 ... a1n
//   ...
//
// Problem file (one `key = value` per line, '#' starts a comment):
//   matrix_file = A.txt            path relative to the problem file, or
//   matrix = 2 2  1 0  0 1         inline: rows cols, then row-major entries
//   y = 1 2
//   x = 1 0                        optional dense true signal
//   prior = 0 3                    0-based T0, may be empty
//   k = 1
//   epsilon = 0
//
// Sweep config:
//   rows = 16
//   cols = 20
//   family = gaussian_normalized | gaussian_raw | identity
//   seed = 7
//   trial k=4 g=2 b=1 epsilon=0 trials=100 signal=unit tie=lowest verify_ric=1
//
// `trial` lines may also set signal=uniform:LO:HI, noise=ball|worst and
// floor=MULTIPLIER.

#include "ompt0/harness.hpp"
#include "ompt0/matrix_core.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ompt0 {

struct ProblemFile {
  Matrix matrix;
  Vector y;
  std::optional<Vector> x;
  IndexSet prior;
  std::size_t k = 0;
  double epsilon = 0.0;
};

struct SweepConfig {
  EnsembleSpec spec;
  std::vector<TrialConfig> trials;
};

/// Locale-independent strict parse; throws ParseError.
double parse_double(std::string_view text);
std::uint64_t parse_count(std::string_view text);

Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::filesystem::path& path);
/// 17 significant digits per entry, so reading back is exact.
void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix_file(const std::filesystem::path& path, const Matrix& a);

/// `base_dir` resolves a relative matrix_file path.
ProblemFile read_problem(std::istream& in, const std::filesystem::path& base_dir = {});
ProblemFile read_problem_file(const std::filesystem::path& path);
void write_problem(std::ostream& out, const ProblemFile& problem);

SweepConfig read_sweep_config(std::istream& in);
SweepConfig read_sweep_config_file(const std::filesystem::path& path);

}  // namespace ompt0
