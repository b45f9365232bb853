#include "ompt0/io.hpp"

#include "ompt0/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ompt0 {
namespace {

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::string format17(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

Vector parse_vector(std::string_view text) {
  const auto tokens = split_ws(text);
  Vector v(static_cast<Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) v(static_cast<Index>(i)) = parse_double(tokens[i]);
  return v;
}

Matrix matrix_from_tokens(const std::vector<std::string_view>& tokens, const char* where) {
  if (tokens.size() < 2) throw Error(ErrorKind::ParseError, std::string(where) + ": missing header");
  const auto rows = static_cast<Index>(parse_count(tokens[0]));
  const auto cols = static_cast<Index>(parse_count(tokens[1]));
  if (rows < 1 || cols < 1) {
    throw Error(ErrorKind::ParseError, std::string(where) + ": dimensions must be positive");
  }
  if (static_cast<Index>(tokens.size()) - 2 != rows * cols) {
    throw Error(ErrorKind::ParseError,
                std::string(where) + ": expected " + std::to_string(rows * cols) +
                    " entries, found " + std::to_string(tokens.size() - 2));
  }
  Matrix a(rows, cols);
  std::size_t pos = 2;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = parse_double(tokens[pos++]);
  }
  return a;
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  return in;
}

}  // namespace

double parse_double(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError, "not a finite real number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_count(std::string_view text) {
  const std::string_view t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::ParseError, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

Matrix read_matrix(std::istream& in) {
  const std::string text = read_all(in);
  return matrix_from_tokens(split_ws(text), "matrix file");
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format17(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  write_matrix(out, a);
}

ProblemFile read_problem(std::istream& in, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string, std::less<>> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (trim(body).empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError,
                  "problem file line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(std::string_view(body).substr(0, eq)));
    if (kv.count(key)) {
      throw Error(ErrorKind::ParseError, "problem file: duplicate key '" + key + "'");
    }
    kv[key] = std::string(trim(std::string_view(body).substr(eq + 1)));
  }
  for (const auto& [key, value] : kv) {
    if (key != "matrix" && key != "matrix_file" && key != "y" && key != "x" && key != "prior" &&
        key != "k" && key != "epsilon") {
      throw Error(ErrorKind::ParseError, "problem file: unknown key '" + key + "'");
    }
  }

  ProblemFile p;
  if (kv.count("matrix") && kv.count("matrix_file")) {
    throw Error(ErrorKind::ParseError, "problem file: give either matrix or matrix_file");
  }
  if (auto it = kv.find("matrix"); it != kv.end()) {
    p.matrix = matrix_from_tokens(split_ws(it->second), "inline matrix");
  } else if (auto it2 = kv.find("matrix_file"); it2 != kv.end()) {
    std::filesystem::path path(it2->second);
    if (path.is_relative()) path = base_dir / path;
    p.matrix = read_matrix_file(path);
  } else {
    throw Error(ErrorKind::ParseError, "problem file: missing matrix");
  }
  if (!kv.count("y")) throw Error(ErrorKind::ParseError, "problem file: missing y");
  p.y = parse_vector(kv["y"]);
  if (p.y.size() != p.matrix.rows()) {
    throw Error(ErrorKind::ParseError, "problem file: y has " + std::to_string(p.y.size()) +
                                           " entries, matrix has " +
                                           std::to_string(p.matrix.rows()) + " rows");
  }
  if (auto it = kv.find("x"); it != kv.end()) {
    p.x = parse_vector(it->second);
    if (p.x->size() != p.matrix.cols()) {
      throw Error(ErrorKind::ParseError, "problem file: x length != matrix columns");
    }
  }
  if (auto it = kv.find("prior"); it != kv.end()) {
    for (auto tok : split_ws(it->second)) {
      const auto idx = static_cast<Index>(parse_count(tok));
      if (idx >= p.matrix.cols()) {
        throw Error(ErrorKind::ParseError, "problem file: prior index " + std::to_string(idx) +
                                               " out of range");
      }
      p.prior.push_back(idx);
    }
  }
  if (auto it = kv.find("k"); it != kv.end()) p.k = parse_count(it->second);
  if (auto it = kv.find("epsilon"); it != kv.end()) {
    p.epsilon = parse_double(it->second);
    if (p.epsilon < 0.0) throw Error(ErrorKind::ParseError, "problem file: epsilon < 0");
  }
  return p;
}

ProblemFile read_problem_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_problem(in, path.parent_path());
}

void write_problem(std::ostream& out, const ProblemFile& p) {
  auto write_vec = [&](const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << format17(v(i));
  };
  out << "matrix = " << p.matrix.rows() << ' ' << p.matrix.cols();
  for (Index i = 0; i < p.matrix.rows(); ++i) {
    for (Index j = 0; j < p.matrix.cols(); ++j) out << ' ' << format17(p.matrix(i, j));
  }
  out << "\ny = ";
  write_vec(p.y);
  if (p.x) {
    out << "\nx = ";
    write_vec(*p.x);
  }
  out << "\nprior =";
  for (Index i : p.prior) out << ' ' << i;
  out << "\nk = " << p.k << "\nepsilon = " << format17(p.epsilon) << '\n';
}

namespace {

TrialConfig parse_trial_line(const std::vector<std::string_view>& tokens, int line_no) {
  TrialConfig c;
  const std::string where = "sweep config line " + std::to_string(line_no);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, where + ": expected key=value");
    const std::string_view key = tokens[i].substr(0, eq);
    const std::string_view value = tokens[i].substr(eq + 1);
    if (key == "k") {
      c.k = parse_count(value);
    } else if (key == "g") {
      c.g = parse_count(value);
    } else if (key == "b") {
      c.b = parse_count(value);
    } else if (key == "epsilon") {
      c.noise_epsilon = parse_double(value);
    } else if (key == "trials") {
      c.trials = parse_count(value);
    } else if (key == "verify_ric") {
      c.verify_ric = parse_count(value) != 0;
    } else if (key == "floor") {
      c.floor_multiplier = parse_double(value);
    } else if (key == "tie") {
      if (value == "lowest") c.tie = TieKind::Lowest;
      else if (value == "highest") c.tie = TieKind::Highest;
      else if (value == "adversarial") c.tie = TieKind::Adversarial;
      else throw Error(ErrorKind::ParseError, where + ": unknown tie '" + std::string(value) + "'");
    } else if (key == "noise") {
      if (value == "ball") c.noise = NoiseModel::UniformBall;
      else if (value == "worst") c.noise = NoiseModel::WorstCaseDirection;
      else throw Error(ErrorKind::ParseError, where + ": unknown noise '" + std::string(value) + "'");
    } else if (key == "signal") {
      if (value == "unit") {
        c.signal = UnitMagnitudeRandomSign{};
      } else if (value.substr(0, 8) == "uniform:") {
        const std::string_view range = value.substr(8);
        const auto colon = range.find(':');
        if (colon == std::string_view::npos) {
          throw Error(ErrorKind::ParseError, where + ": signal=uniform:LO:HI");
        }
        c.signal = UniformMagnitude{parse_double(range.substr(0, colon)),
                                    parse_double(range.substr(colon + 1))};
      } else {
        throw Error(ErrorKind::ParseError, where + ": unknown signal '" + std::string(value) + "'");
      }
    } else {
      throw Error(ErrorKind::ParseError, where + ": unknown key '" + std::string(key) + "'");
    }
  }
  return c;
}

}  // namespace

SweepConfig read_sweep_config(std::istream& in) {
  SweepConfig cfg;
  bool have_rows = false, have_cols = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    const auto tokens = split_ws(body);
    if (tokens.empty()) continue;
    if (tokens[0] == "trial") {
      cfg.trials.push_back(parse_trial_line(tokens, line_no));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError,
                  "sweep config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(std::string_view(body).substr(0, eq));
    const std::string_view value = trim(std::string_view(body).substr(eq + 1));
    if (key == "rows") {
      cfg.spec.rows = static_cast<Index>(parse_count(value));
      have_rows = true;
    } else if (key == "cols") {
      cfg.spec.cols = static_cast<Index>(parse_count(value));
      have_cols = true;
    } else if (key == "seed") {
      cfg.spec.seed = parse_count(value);
    } else if (key == "family") {
      if (value == "gaussian_normalized") cfg.spec.family = MatrixFamily::GaussianNormalizedColumns;
      else if (value == "gaussian_raw") cfg.spec.family = MatrixFamily::GaussianRaw;
      else if (value == "identity") cfg.spec.family = MatrixFamily::Identity;
      else throw Error(ErrorKind::ParseError, "sweep config: unknown family '" + std::string(value) + "'");
    } else {
      throw Error(ErrorKind::ParseError, "sweep config: unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_rows || !have_cols) throw Error(ErrorKind::ParseError, "sweep config: rows and cols are required");
  return cfg;
}

SweepConfig read_sweep_config_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_sweep_config(in);
}

}  // namespace ompt0
