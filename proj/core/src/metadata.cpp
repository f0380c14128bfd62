#include "cinesim/metadata.hpp"

#include "cinesim/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

namespace cinesim {
namespace {

std::string lookup_key(TagKind kind, std::string_view key) {
  return std::to_string(static_cast<int>(kind)) + '\x1f' + std::string(key);
}

template <typename F>
void for_each_tag(const MovieMetadata& m, F&& f) {
  for (const auto& a : m.actors) f(TagKind::kActor, a);
  for (const auto& d : m.directors) f(TagKind::kDirector, d);
  for (const auto& g : m.genres) f(TagKind::kGenre, g);
}

}  // namespace

std::string_view to_string(TagKind kind) noexcept {
  switch (kind) {
    case TagKind::kActor: return "actor";
    case TagKind::kDirector: return "director";
    case TagKind::kGenre: return "genre";
  }
  return "unknown";
}

std::string normalize_tag(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> dedup_labels(std::span<const std::string> labels) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& l : labels) {
    auto key = normalize_tag(l);
    if (key.empty() || !seen.insert(key).second) continue;
    std::string display(l);
    display.erase(0, display.find_first_not_of(" \t\r\n"));
    display.erase(display.find_last_not_of(" \t\r\n") + 1);
    out.push_back(std::move(display));
  }
  return out;
}

std::optional<std::size_t> TagIndex::column(TagKind kind, std::string_view raw_name) const {
  auto it = lookup_.find(lookup_key(kind, normalize_tag(raw_name)));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

TagIndex build_index(std::span<const MovieMetadata> movies) {
  std::set<std::tuple<int, std::string>> keys;
  std::unordered_map<std::string, std::string> display;
  for (const auto& m : movies) {
    for_each_tag(m, [&](TagKind kind, const std::string& raw) {
      auto key = normalize_tag(raw);
      if (key.empty()) return;
      auto lk = lookup_key(kind, key);
      if (!display.contains(lk)) {
        std::string d(raw);
        d.erase(0, d.find_first_not_of(" \t\r\n"));
        d.erase(d.find_last_not_of(" \t\r\n") + 1);
        display.emplace(lk, std::move(d));
      }
      keys.emplace(static_cast<int>(kind), std::move(key));
    });
  }
  TagIndex index;
  for (const auto& [kind, key] : keys) {
    const auto k = static_cast<TagKind>(kind);
    auto lk = lookup_key(k, key);
    index.lookup_.emplace(lk, index.tags_.size());
    index.tags_.push_back(Tag{k, key, display.at(lk)});
  }
  return index;
}

VectorizeResult vectorize(std::span<const MovieMetadata> movies, const TagIndex& index, bool lenient) {
  VectorizeResult out;
  out.matrix.modality = "metadata";
  out.matrix.values = Matrix::Zero(static_cast<Eigen::Index>(movies.size()), static_cast<Eigen::Index>(index.size()));
  for (std::size_t r = 0; r < movies.size(); ++r) {
    const auto& m = movies[r];
    out.matrix.doc_ids.push_back(m.movie_id);
    for_each_tag(m, [&](TagKind kind, const std::string& raw) {
      if (normalize_tag(raw).empty()) return;
      auto col = index.column(kind, raw);
      if (!col) {
        const std::string msg = std::string(to_string(kind)) + " '" + raw + "' of '" + m.movie_id + "' not in index";
        if (!lenient) throw Error(ErrorCode::kUnknownTag, msg);
        out.warnings.push_back(msg + ", ignored");
        return;
      }
      out.matrix.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(*col)) = 1.0;
    });
  }
  return out;
}

std::string tag_index_to_tsv(const TagIndex& index) {
  std::string out = "column\tkind\tkey\tdisplay\n";
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& t = index.tags()[i];
    out += std::to_string(i) + '\t' + std::string(to_string(t.kind)) + '\t' + t.key + '\t' + t.display + '\n';
  }
  return out;
}

MovieMetadata metadata_from_json_text(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    MovieMetadata m;
    m.movie_id = j.value("movie_id", "");
    m.title = j.value("title", "");
    m.actors = dedup_labels(j.value("actors", std::vector<std::string>{}));
    m.directors = dedup_labels(j.value("directors", std::vector<std::string>{}));
    m.genres = dedup_labels(j.value("genres", std::vector<std::string>{}));
    m.rating = j.value("rating", 0.0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("metadata JSON: ") + e.what());
  }
}

}  // namespace cinesim
