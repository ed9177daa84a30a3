#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spectralk/core.hpp"

namespace spectralk::cli {

/// EMB1: "EMB1", u32 LE n, u32 LE d, then n * d float32 LE values, row-major.
Matrix read_emb1(const std::filesystem::path& path);
void write_emb1(const std::filesystem::path& path, const Matrix& m);

/// One row per point, comma separated. A first row with any non-numeric field
/// is treated as a header and skipped.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

/// `.csv` files are read as CSV, everything else as EMB1.
Matrix read_embeddings(const std::filesystem::path& path);

/// One UTF-8 label per line.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

/// One integer cluster id per line.
std::vector<std::int64_t> read_assignment(const std::filesystem::path& path);
void write_assignment(const std::filesystem::path& path, std::span<const int> ids);

/// Shortest representation that round-trips, independent of the C locale.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spectralk::cli
