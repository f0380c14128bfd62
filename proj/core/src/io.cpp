#include "cinesim/io.hpp"

#include "cinesim/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>

namespace cinesim::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "unformattable double");
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParse, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error(ErrorCode::kIo, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string to_csv(const LabeledMatrix& m) {
  if (static_cast<std::size_t>(m.values.rows()) != m.row_ids.size() ||
      static_cast<std::size_t>(m.values.cols()) != m.column_names.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "labeled matrix labels do not match shape");
  }
  std::string out = "movie_id";
  for (const auto& c : m.column_names) {
    out += ',';
    out += csv_escape(c);
  }
  out += '\n';
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    out += csv_escape(m.row_ids[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      out += ',';
      out += format_double(m.values(r, c));
    }
    out += '\n';
  }
  return out;
}

LabeledMatrix labeled_matrix_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "empty matrix CSV");
  LabeledMatrix m;
  auto header = split_csv_line(lines[0]);
  if (header.empty() || header[0] != "movie_id") {
    throw Error(ErrorCode::kParse, "matrix CSV must start with a movie_id header");
  }
  m.column_names.assign(header.begin() + 1, header.end());
  const auto cols = static_cast<Eigen::Index>(m.column_names.size());
  m.values.resize(static_cast<Eigen::Index>(lines.size() - 1), cols);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != cols + 1) {
      throw Error(ErrorCode::kParse, "row " + std::to_string(i) + " has wrong field count");
    }
    m.row_ids.push_back(fields[0]);
    for (Eigen::Index c = 0; c < cols; ++c) {
      m.values(static_cast<Eigen::Index>(i - 1), c) = parse_double(fields[static_cast<std::size_t>(c) + 1]);
    }
  }
  return m;
}

void write_labeled_matrix(const std::filesystem::path& path, const LabeledMatrix& m) {
  write_file(path, to_csv(m));
}

LabeledMatrix read_labeled_matrix(const std::filesystem::path& path) {
  return labeled_matrix_from_csv(read_file(path));
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(std::string_view text) {
  const auto lines = split_lines(text);
  Matrix m;
  if (lines.empty()) return m;
  const auto cols = static_cast<Eigen::Index>(split_csv_line(lines[0]).size());
  m.resize(static_cast<Eigen::Index>(lines.size()), cols);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    auto fields = split_csv_line(lines[r]);
    if (static_cast<Eigen::Index>(fields.size()) != cols) {
      throw Error(ErrorCode::kParse, "ragged numeric CSV at line " + std::to_string(r + 1));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) = parse_double(fields[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

}  // namespace cinesim::io
