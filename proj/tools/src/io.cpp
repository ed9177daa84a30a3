#include "spectralk_cli/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace spectralk::cli {

namespace fs = std::filesystem;

namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoError, "read failed for " + path.string());
  return data;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  return out;
}

std::uint32_t load_u32(const std::string& data, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(data[offset + b]);
  return v;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

bool parse_double(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

Matrix read_emb1(const fs::path& path) {
  const std::string data = read_all(path);
  if (data.size() < 4 || data.compare(0, 4, "EMB1") != 0) {
    throw Error(Errc::FormatError, path.string() + ": bad magic at offset 0 (expected \"EMB1\")");
  }
  if (data.size() < 12) {
    throw Error(Errc::FormatError,
                path.string() + ": truncated header at offset " + std::to_string(data.size()));
  }
  const std::uint64_t n = load_u32(data, 4);
  const std::uint64_t d = load_u32(data, 8);
  const std::uint64_t expected = 12 + 4 * n * d;
  if (data.size() != expected) {
    throw Error(Errc::FormatError, path.string() + ": payload ends at offset " +
                                       std::to_string(data.size()) + ", expected " +
                                       std::to_string(expected) + " bytes for n=" +
                                       std::to_string(n) + ", d=" + std::to_string(d));
  }
  Matrix m(n, d);
  auto values = m.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = load_u32(data, 12 + 4 * i);
    values[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return m;
}

void write_emb1(const fs::path& path, const Matrix& m) {
  std::string out = "EMB1";
  out.reserve(12 + 4 * m.values().size());
  store_u32(out, static_cast<std::uint32_t>(m.rows()));
  store_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.values()) store_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  write_text(path, out);
}

Matrix read_csv_matrix(const fs::path& path) {
  const std::string text = read_all(path);
  const auto lines = split_lines(text);
  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    std::size_t start = 0;
    const std::string_view line = lines[ln];
    while (true) {
      const std::size_t comma = line.find(',', start);
      const auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      double v = 0.0;
      if (!parse_double(field, v)) numeric = false;
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!numeric) {
      if (rows == 0 && cols == 0 && values.empty()) {
        cols = row.size();  // header fixes the width
        continue;
      }
      throw Error(Errc::FormatError, path.string() + ": non-numeric field on line " + std::to_string(ln + 1));
    }
    if (cols == 0) cols = row.size();
    if (row.size() != cols) {
      throw Error(Errc::FormatError, path.string() + ": line " + std::to_string(ln + 1) + " has " +
                                         std::to_string(row.size()) + " fields, expected " +
                                         std::to_string(cols));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  return Matrix(rows, cols, std::move(values));
}

void write_csv_matrix(const fs::path& path, const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  write_text(path, out);
}

Matrix read_embeddings(const fs::path& path) {
  if (path.extension() == ".csv") return read_csv_matrix(path);
  return read_emb1(path);
}

std::vector<std::string> read_lines(const fs::path& path) {
  const std::string text = read_all(path);
  std::vector<std::string> out;
  for (auto line : split_lines(text)) out.emplace_back(line);
  return out;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out.push_back('\n');
  }
  write_text(path, out);
}

std::vector<std::int64_t> read_assignment(const fs::path& path) {
  std::vector<std::int64_t> ids;
  const auto lines = read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view s = lines[ln];
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) continue;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(Errc::FormatError, path.string() + ": line " + std::to_string(ln + 1) +
                                         " is not an integer cluster id");
    }
    ids.push_back(v);
  }
  return ids;
}

void write_assignment(const fs::path& path, std::span<const int> ids) {
  std::string out;
  for (int id : ids) {
    out += std::to_string(id);
    out.push_back('\n');
  }
  write_text(path, out);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace spectralk::cli
