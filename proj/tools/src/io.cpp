#include "mixssl_cli/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mixssl/errors.hpp"

namespace mixssl::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(const fs::path& path, std::size_t row, std::size_t col) {
  std::ostringstream out;
  out << path.filename().string() << ": row " << row << ", column " << col;
  return out.str();
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw InputError("write failed for " + path.string());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

Matrix read_matrix_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<double> values;
    std::istringstream cells(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(cells, cell, ',')) {
      ++col;
      const std::string text = trim(cell);
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw InputError(where(path, row, col) + ": not a number '" + text + "'");
      if (!std::isfinite(v)) throw InputError(where(path, row, col) + ": non-finite value");
      values.push_back(v);
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path.filename().string() << ": row " << row << " has " << values.size()
          << " columns, expected " << rows.front().size();
      throw InputShapeError(msg.str());
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InputShapeError(path.filename().string() + ": no data rows");
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return M;
}

void write_matrix_csv(const fs::path& path, const Matrix& M) {
  std::string text;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) text += ',';
      text += format_double(M(i, j));
    }
    text += '\n';
  }
  write_text(path, text);
}

std::vector<OutcomeKind> read_kinds(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<OutcomeKind> kinds;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string text = trim(line);
    if (text.empty()) continue;
    try {
      kinds.push_back(parse_outcome_kind(text));
    } catch (const InputError&) {
      throw InputError(where(path, row, 1) + ": unknown outcome kind '" + text + "'");
    }
  }
  if (kinds.empty()) throw InputShapeError(path.filename().string() + ": no outcome kinds");
  return kinds;
}

void write_kinds(const fs::path& path, const std::vector<OutcomeKind>& kinds) {
  std::string text;
  for (OutcomeKind k : kinds) text += to_string(k) + "\n";
  write_text(path, text);
}

}  // namespace mixssl::cli
