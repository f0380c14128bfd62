#include "cinesim/fixture.hpp"

#include "cinesim/audio.hpp"
#include "cinesim/image.hpp"
#include "cinesim/io.hpp"
#include "cinesim/random.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

namespace cinesim::fixture {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string pseudo_word(std::size_t index) {
  static const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z"};
  static const char* vowels[] = {"a", "o", "u"};
  std::string w;
  // three consonant-vowel syllables, ending in a vowel
  for (int s = 0; s < 3; ++s) {
    w += onsets[index % 13];
    index /= 13;
    w += vowels[index % 3];
    index /= 3;
  }
  return w;
}

namespace {

std::string timestamp(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(ms / 3600000),
                static_cast<long long>(ms / 60000 % 60), static_cast<long long>(ms / 1000 % 60),
                static_cast<long long>(ms % 1000));
  return buf;
}

std::string make_srt(const std::vector<std::string>& words, std::size_t per_cue) {
  std::string out;
  std::size_t cue = 0;
  for (std::size_t i = 0; i < words.size(); i += per_cue) {
    ++cue;
    const std::int64_t start = static_cast<std::int64_t>(cue) * 2500;
    out += std::to_string(cue) + "\n" + timestamp(start) + " --> " + timestamp(start + 2000) + "\n";
    for (std::size_t j = i; j < std::min(words.size(), i + per_cue); ++j) {
      if (j > i) out += ' ';
      out += words[j];
    }
    out += "\n\n";
  }
  return out;
}

// Draws `n` words; word w of topic t is pseudo_word(base + t * per_topic + w).
std::vector<std::string> sample_words(Rng& rng, const std::vector<double>& mix, std::size_t per_topic,
                                      std::size_t base, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    std::size_t t = 0;
    while (t + 1 < mix.size() && u >= mix[t]) u -= mix[t++];
    out.push_back(pseudo_word(base + t * per_topic + rng.index(per_topic)));
  }
  return out;
}

// Segment labels with event counts proportional to `events` (largest remainder).
std::string make_labels(const std::string& id, const std::vector<double>& events, std::size_t segments,
                        std::size_t music_genre, Rng& rng, double genre_noise) {
  std::vector<std::size_t> counts(events.size());
  std::vector<std::pair<double, std::size_t>> rema;
  std::size_t used = 0;
  for (std::size_t e = 0; e < events.size(); ++e) {
    const double exact = events[e] * static_cast<double>(segments);
    counts[e] = static_cast<std::size_t>(std::floor(exact));
    used += counts[e];
    rema.emplace_back(-(exact - std::floor(exact)), e);
  }
  std::sort(rema.begin(), rema.end());
  for (std::size_t i = 0; used < segments; ++i, ++used) ++counts[rema[i % rema.size()].second];
  ojson segs = ojson::array();
  const auto& en = audio_event_names();
  const auto& gn = music_genre_names();
  std::size_t index = 0;
  for (std::size_t e = 0; e < counts.size(); ++e) {
    for (std::size_t k = 0; k < counts[e]; ++k) {
      ojson s{{"i", index++}, {"event", std::string(en[e])}};
      if (e == 0) {
        const std::size_t g = rng.uniform() < genre_noise ? rng.index(gn.size()) : music_genre;
        s["genre"] = std::string(gn[g]);
      }
      segs.push_back(std::move(s));
    }
  }
  return ojson{{"movie_id", id}, {"segments", segs}}.dump(1) + "\n";
}

std::string movie_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%02zu", i);
  return buf;
}

Frame textured_frame(int w, int h, double shift, double phase, const double tint[3], bool gray) {
  Frame f;
  f.width = w;
  f.height = h;
  f.rgb.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double xs = x - shift;
      const double v = 0.5 + 0.25 * std::sin(0.45 * xs + phase) * std::cos(0.37 * y - 0.5 * phase) +
                       0.2 * std::sin(0.13 * xs + 0.21 * y + 2.0 * phase);
      for (int c = 0; c < 3; ++c) {
        const double level = gray ? v : v * tint[c];
        const auto px = static_cast<std::size_t>((y * w + x) * 3 + c);
        f.rgb[px] = static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * level), 0L, 255L));
      }
    }
  }
  return f;
}

void write_tag_csv(const fs::path& path, const std::vector<std::string>& ids, const std::vector<std::string>& tags,
                   const std::vector<std::vector<double>>& rows) {
  io::LabeledMatrix m;
  m.row_ids = ids;
  m.column_names = tags;
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(tags.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < tags.size(); ++j) m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  io::write_labeled_matrix(path, m);
}

}  // namespace

fs::path write_cluster_dataset(const fs::path& dir, std::uint64_t seed) {
  constexpr std::size_t kMovies = 12;
  constexpr std::size_t kClusters = 3;
  constexpr std::size_t kPerTopic = 30;
  Rng rng(seed);
  static const char* genres[kClusters][2] = {{"Drama", "Romance"}, {"Western", "Adventure"}, {"Film-Noir", "Crime"}};
  static const double tints[kClusters][3] = {{1.0, 0.55, 0.35}, {0.35, 0.6, 1.0}, {1.0, 1.0, 1.0}};
  ojson movies = ojson::array();
  std::vector<std::string> ids;
  std::vector<std::vector<double>> tag_rows;
  for (std::size_t i = 0; i < kMovies; ++i) {
    const std::size_t c = i % kClusters;
    const std::string id = movie_id(i);
    ids.push_back(id);
    const fs::path mdir = dir / id;

    // subtitles: own cluster topic, a little of the others, plus ubiquitous filler
    std::vector<double> mix(kClusters + 1, 0.01);
    mix[c] = 0.73;
    mix[kClusters] = 0.25;
    io::write_file(mdir / "subtitles.srt", make_srt(sample_words(rng, mix, kPerTopic, 0, 240), 6));

    // frames: warm static, cool panning, or monochrome with one hard cut
    const fs::path fdir = mdir / "frames";
    constexpr std::size_t kFrames = 10;
    const double phase = rng.uniform() * 3.0;
    ojson faces = ojson::array();
    for (std::size_t t = 0; t < kFrames; ++t) {
      const double shift = c == 1 ? 2.0 * static_cast<double>(t) : 0.0;
      const double ph = c == 2 && t >= kFrames / 2 ? phase + 2.5 : phase;
      char name[32];
      std::snprintf(name, sizeof name, "frame_%06zu.ppm", t);
      write_ppm(fdir / name, textured_frame(80, 60, shift, ph, tints[c], c == 2));
      ojson boxes = ojson::array();
      for (std::size_t b = 0; b < c; ++b) boxes.push_back({40 + 200 * static_cast<int>(b), 60, 90, 110});
      if (c == 0) boxes.push_back({200, 100, 120, 140});
      faces.push_back(std::move(boxes));
    }
    io::write_file(fdir / "manifest.json",
                   ojson{{"movie_id", id}, {"fps_sampled", 2}, {"duration_s", kFrames / 2.0}, {"frame_count", kFrames}}.dump(1) + "\n");
    io::write_file(mdir / "faces.json", faces.dump() + "\n");

    // audio: cluster-typical event mix
    std::vector<double> events(kAudioEventClasses, 0.02);
    if (c == 0) events = {0.45, 0.4, 0.05, 0.02, 0.02, 0.02, 0.02, 0.02};
    if (c == 1) events = {0.25, 0.3, 0.05, 0.1, 0.05, 0.15, 0.08, 0.02};
    if (c == 2) events = {0.15, 0.55, 0.1, 0.05, 0.05, 0.03, 0.02, 0.05};
    for (auto& e : events) e = std::max(0.0, e + 0.02 * (rng.uniform() - 0.5));
    const double total = std::accumulate(events.begin(), events.end(), 0.0);
    for (auto& e : events) e /= total;
    io::write_file(mdir / "labels.json", make_labels(id, events, 120, c == 0 ? 1 : c == 1 ? 2 : 0, rng, 0.2));

    const double rating = std::round(50.0 + 40.0 * rng.uniform()) / 10.0;
    ojson meta{{"actors", {"Actor " + std::to_string(c) + "A", "Actor " + std::to_string(rng.index(6))}},
               {"directors", {"Director " + std::to_string(c * 2 + rng.index(2))}},
               {"genres", {genres[c][0], genres[c][1]}}};
    movies.push_back({{"movie_id", id},
                      {"title", "Synthetic Movie " + std::to_string(i)},
                      {"rating", rating},
                      {"subtitle_path", id + "/subtitles.srt"},
                      {"frames_dir", id + "/frames"},
                      {"faces_path", id + "/faces.json"},
                      {"audio_labels_path", id + "/labels.json"},
                      {"metadata", meta}});

    std::vector<double> tags(15);
    for (std::size_t t = 0; t < tags.size(); ++t) tags[t] = 0.3 * rng.uniform() + (t / 5 == c ? 0.7 : 0.0);
    tag_rows.push_back(std::move(tags));
  }
  std::vector<std::string> tag_names;
  for (std::size_t t = 0; t < 15; ++t) tag_names.push_back("tag" + std::to_string(t));
  write_tag_csv(dir / "ground_truth.csv", ids, tag_names, tag_rows);
  const fs::path manifest = dir / "manifest.json";
  io::write_file(manifest, ojson{{"gt_path", "ground_truth.csv"}, {"movies", movies}}.dump(1) + "\n");
  return manifest;
}

fs::path write_boost_dataset(const fs::path& dir, std::uint64_t seed, std::size_t n, double metadata_share) {
  constexpr std::size_t kGenres = 5;
  constexpr std::size_t kPerTopic = 40;
  Rng rng(seed);
  ojson movies = ojson::array();
  std::vector<std::string> ids;
  std::vector<std::vector<double>> tag_rows;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = movie_id(i);
    ids.push_back(id);
    const std::size_t g = i % kGenres;
    // content latent, independent of the genre
    std::vector<double> content(kAudioEventClasses);
    double total = 0.0;
    for (auto& x : content) total += (x = rng.gamma(0.5) + 1e-3);
    for (auto& x : content) x /= total;

    const fs::path mdir = dir / id;
    std::vector<double> mix(content);
    mix.push_back(0.0);
    for (auto& x : mix) x *= 0.8;
    mix.back() = 0.2;  // filler shared by every movie
    io::write_file(mdir / "subtitles.srt", make_srt(sample_words(rng, mix, kPerTopic, 500, 320), 8));
    io::write_file(mdir / "labels.json", make_labels(id, content, 400, rng.index(kMusicGenreClasses), rng, 0.5));

    ojson meta{{"actors", {"Lead " + id}},
               {"directors", {"Director " + std::to_string(g)}},
               {"genres", {"Genre " + std::to_string(g)}}};
    movies.push_back({{"movie_id", id},
                      {"title", "Blend Movie " + std::to_string(i)},
                      {"rating", std::round(50.0 + 40.0 * rng.uniform()) / 10.0},
                      {"subtitle_path", id + "/subtitles.srt"},
                      {"audio_labels_path", id + "/labels.json"},
                      {"metadata", meta}});

    // unit-norm halves make the tag cosine an exact blend of the two signals
    std::vector<double> tags(kGenres + content.size(), 0.0);
    tags[g] = std::sqrt(metadata_share);
    double norm = 0.0;
    for (double x : content) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < content.size(); ++k) tags[kGenres + k] = std::sqrt(1.0 - metadata_share) * content[k] / norm;
    tag_rows.push_back(std::move(tags));
  }
  std::vector<std::string> tag_names;
  for (std::size_t g = 0; g < kGenres; ++g) tag_names.push_back("genre" + std::to_string(g));
  for (std::size_t k = 0; k < kAudioEventClasses; ++k) tag_names.push_back("content" + std::to_string(k));
  write_tag_csv(dir / "ground_truth.csv", ids, tag_names, tag_rows);
  const fs::path manifest = dir / "manifest.json";
  io::write_file(manifest, ojson{{"gt_path", "ground_truth.csv"}, {"movies", movies}}.dump(1) + "\n");
  return manifest;
}

}  // namespace cinesim::fixture
