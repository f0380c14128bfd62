#include "cinesim/subtitle.hpp"

#include "cinesim/error.hpp"
#include "cinesim/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <regex>

namespace cinesim {
namespace {

const std::regex& timestamp_regex() {
  static const std::regex re(
      R"(^\s*(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})\s*-->\s*(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})(\s.*)?$)");
  return re;
}

std::optional<std::int64_t> to_ms(const std::string& h, const std::string& m, const std::string& s,
                                  std::string frac) {
  const long long hours = std::stoll(h);
  const int minutes = std::stoi(m);
  const int seconds = std::stoi(s);
  if (minutes >= 60 || seconds >= 60) return std::nullopt;
  while (frac.size() < 3) frac.push_back('0');
  return ((hours * 60 + minutes) * 60 + seconds) * 1000 + std::stoi(frac);
}

struct Timing {
  std::int64_t start_ms;
  std::int64_t end_ms;
};

std::optional<Timing> parse_timing(const std::string& line) {
  std::smatch m;
  if (!std::regex_match(line, m, timestamp_regex())) return std::nullopt;
  auto start = to_ms(m[1], m[2], m[3], m[4]);
  auto end = to_ms(m[5], m[6], m[7], m[8]);
  if (!start || !end || *end < *start) return std::nullopt;
  return Timing{*start, *end};
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_index_line(std::string_view line) {
  std::size_t b = 0, e = line.size();
  while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
  return b < e && std::all_of(line.begin() + static_cast<std::ptrdiff_t>(b),
                              line.begin() + static_cast<std::ptrdiff_t>(e),
                              [](unsigned char c) { return std::isdigit(c); });
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Deletes every span opened by `open` and closed by `close`; an unclosed
// opener runs to the end of the line.
std::string strip_spans(std::string_view s, char open, char close) {
  std::string out;
  out.reserve(s.size());
  int depth = 0;
  for (char c : s) {
    if (c == open) {
      ++depth;
    } else if (c == close && depth > 0) {
      --depth;
    } else if (depth == 0) {
      out.push_back(c);
    }
  }
  return out;
}

std::string format_timestamp(std::int64_t ms) {
  char buf[32];
  const auto h = ms / 3'600'000;
  const auto m = (ms / 60'000) % 60;
  const auto s = (ms / 1000) % 60;
  const auto f = ms % 1000;
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(h),
                static_cast<long long>(m), static_cast<long long>(s), static_cast<long long>(f));
  return buf;
}

}  // namespace

std::string SubtitleDocument::full_text() const {
  std::string out;
  for (const auto& cue : cues) {
    if (!out.empty()) out.push_back('\n');
    out += cue.text;
  }
  return out;
}

bool is_valid_utf8(std::string_view bytes) noexcept {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

std::string latin1_to_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() + bytes.size() / 4);
  for (char ch : bytes) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80) {
      out.push_back(ch);
    } else {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::string clean_cue_text(std::string_view text) {
  std::string out;
  for (const auto& raw_line : io::split_lines(text)) {
    std::string line = strip_spans(raw_line, '<', '>');
    line = strip_spans(line, '[', ']');
    line = strip_spans(line, '{', '}');
    line = trim(line);
    std::size_t dash = 0;
    while (dash < line.size() && (line[dash] == '-' || std::isspace(static_cast<unsigned char>(line[dash])))) {
      ++dash;
    }
    line = trim(std::string_view(line).substr(dash));
    if (line.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += line;
  }
  return out;
}

SrtParseResult parse_srt(std::string_view raw_bytes, std::string movie_id) {
  std::string text;
  if (raw_bytes.substr(0, 3) == "\xEF\xBB\xBF") raw_bytes.remove_prefix(3);
  text = is_valid_utf8(raw_bytes) ? std::string(raw_bytes) : latin1_to_utf8(raw_bytes);

  SrtParseResult result;
  result.document.movie_id = std::move(movie_id);

  const auto lines = io::split_lines(text);
  std::size_t i = 0;
  std::size_t block_no = 0;
  while (i < lines.size()) {
    while (i < lines.size() && is_blank(lines[i])) ++i;
    if (i >= lines.size()) break;
    std::vector<std::string> block;
    while (i < lines.size() && !is_blank(lines[i])) block.push_back(lines[i++]);
    ++block_no;

    std::size_t t = 0;
    if (is_index_line(block[0]) && block.size() > 1) t = 1;
    auto timing = parse_timing(block[t]);
    if (!timing) {
      result.warnings.push_back("block " + std::to_string(block_no) + ": malformed timestamp '" +
                                block[t] + "', cue skipped");
      continue;
    }
    std::string body;
    for (std::size_t k = t + 1; k < block.size(); ++k) {
      if (!body.empty()) body.push_back('\n');
      body += block[k];
    }
    std::string cleaned = clean_cue_text(body);
    if (cleaned.empty()) continue;
    result.document.cues.push_back(Cue{timing->start_ms, timing->end_ms, std::move(cleaned)});
  }

  std::stable_sort(result.document.cues.begin(), result.document.cues.end(),
                   [](const Cue& a, const Cue& b) { return a.start_ms < b.start_ms; });
  if (result.document.cues.empty()) {
    throw Error(ErrorCode::kEmptyDocument,
                "no cues in subtitle" + (result.document.movie_id.empty() ? std::string()
                                                                          : " for " + result.document.movie_id));
  }
  return result;
}

std::string serialize_srt(const SubtitleDocument& doc) {
  std::string out;
  std::size_t index = 1;
  for (const auto& cue : doc.cues) {
    out += std::to_string(index++);
    out += '\n';
    out += format_timestamp(cue.start_ms);
    out += " --> ";
    out += format_timestamp(cue.end_ms);
    out += '\n';
    out += cue.text;
    out += "\n\n";
  }
  return out;
}

}  // namespace cinesim
