#pragma once

#include "cinesim/bow.hpp"
#include "cinesim/fusion.hpp"
#include "cinesim/graph.hpp"
#include "cinesim/lda.hpp"
#include "cinesim/metadata.hpp"
#include "cinesim/visual_features.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cinesim {

struct MovieEntry {
  std::string movie_id;
  std::string title;
  double rating = 0.0;
  std::optional<std::filesystem::path> subtitle_path;
  std::optional<std::filesystem::path> frames_dir;
  std::optional<std::filesystem::path> faces_path;
  std::optional<std::filesystem::path> audio_labels_path;
  std::optional<MovieMetadata> metadata;
};

/// Dataset description. Relative paths resolve against the manifest directory.
struct DatasetManifest {
  std::vector<MovieEntry> movies;
  std::vector<std::filesystem::path> stopword_paths;  // empty: bundled lists
  std::optional<std::filesystem::path> gt_path;

  /// Throws kConfigInvalid for an empty movie list or duplicate ids.
  static DatasetManifest from_json(std::string_view text, const std::filesystem::path& base_dir);
  static DatasetManifest load(const std::filesystem::path& path);
  std::vector<std::string> ids() const;
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  BowOptions bow;
  std::size_t lsi_concepts = 55;
  bool lsi_on_counts = false;
  LdaOptions lda;
  VisualOptions visual;
  double fps = 2.0;
  bool metadata_lenient = false;
  FitOptions fusion;
  std::vector<std::string> fusion_modalities;  // empty: all available
  std::size_t n_recs = 2;
  std::size_t min_population = 4;
  std::string baseline = "metadata";
  std::size_t graph_k = 3;
  double graph_min_weight = 0.0;
  double resolution = 1.0;

  /// Missing keys keep their defaults; unknown keys or bad values throw kConfigInvalid.
  static PipelineConfig from_json(std::string_view text);
  static PipelineConfig load(const std::filesystem::path& path);
  std::string to_json() const;
  std::string hash() const;
  /// "section.key=value" with a JSON literal or bare string value.
  void apply_override(std::string_view assignment);
};

enum class Stage {
  kIngestText,
  kTrainTfidf,
  kTrainLsi,
  kTrainLda,
  kVisual,
  kAudio,
  kMetadata,
  kSimilarity,
  kFitWeights,
  kFuse,
  kEvaluate,
  kGraph,
};

inline constexpr std::size_t kStageCount = 12;
const std::array<Stage, kStageCount>& all_stages();
std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> parse_stage(std::string_view name);

struct StageSummary {
  std::string stage;
  std::string status;  // "ok" or "skipped"
  std::vector<std::string> notices;
  std::vector<std::string> outputs;  // relative to the output directory
  double seconds = 0.0;
  std::string config_hash;
  std::string metrics_json = "{}";

  std::string to_json() const;
};

using Logger = std::function<void(std::string_view)>;

/// Runs stages against an output directory. Every artifact gets a sidecar
/// "<file>.meta.json" with stage name, config hash and input hashes.
class Pipeline {
 public:
  Pipeline(DatasetManifest manifest, PipelineConfig config, std::filesystem::path out_dir, Logger log = {});

  /// Throws kMissingDependency naming the producing stage when inputs are absent.
  StageSummary run_stage(Stage stage);
  std::vector<StageSummary> run_all();

  const std::filesystem::path& out_dir() const noexcept { return out_; }

 private:
  struct Context;
  StageSummary ingest_text(Context& ctx);
  StageSummary train_tfidf(Context& ctx);
  StageSummary train_lsi(Context& ctx);
  StageSummary train_lda(Context& ctx);
  StageSummary visual(Context& ctx);
  StageSummary audio(Context& ctx);
  StageSummary metadata(Context& ctx);
  StageSummary similarity(Context& ctx);
  StageSummary fit_weights(Context& ctx);
  StageSummary fuse(Context& ctx);
  StageSummary evaluate(Context& ctx);
  StageSummary graph(Context& ctx);

  DatasetManifest manifest_;
  PipelineConfig config_;
  std::filesystem::path out_;
  Logger log_;
  std::string config_hash_;
};

/// Modality names in canonical order; similarity and graph files use these.
const std::vector<std::string>& modality_names();

}  // namespace cinesim
