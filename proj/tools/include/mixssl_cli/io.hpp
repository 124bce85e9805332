#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixssl/core_types.hpp"

namespace mixssl::cli {

/// Headerless numeric CSV. Parse failures name the file, row, and column
/// (both 1-based) and throw mixssl::InputError.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Every value printed with 17 significant digits so a read-back is exact.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& M);

/// One kind per line: "continuous" or "binary".
std::vector<OutcomeKind> read_kinds(const std::filesystem::path& path);
void write_kinds(const std::filesystem::path& path, const std::vector<OutcomeKind>& kinds);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Creates the directory (and parents); throws InputError when that fails.
void ensure_directory(const std::filesystem::path& dir);

std::string format_double(double value);

}  // namespace mixssl::cli
