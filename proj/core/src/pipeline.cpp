#include "cinesim/pipeline.hpp"

#include "cinesim/audio.hpp"
#include "cinesim/error.hpp"
#include "cinesim/image.hpp"
#include "cinesim/io.hpp"
#include "cinesim/subtitle.hpp"
#include "cinesim/text.hpp"
#include "cinesim/text_models.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

namespace cinesim {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::kConfigInvalid, what); }

std::optional<fs::path> optional_path(const json& j, const char* key, const fs::path& base) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  fs::path p = j.at(key).get<std::string>();
  return p.is_absolute() ? p : base / p;
}

MovieMetadata find_metadata_record(const fs::path& path, const std::string& movie_id) {
  const auto j = json::parse(io::read_file(path));
  if (j.is_object()) return metadata_from_json_text(j.dump());
  for (const auto& rec : j) {
    if (rec.value("movie_id", "") == movie_id) return metadata_from_json_text(rec.dump());
  }
  throw Error(ErrorCode::kConfigInvalid, "movie '" + movie_id + "' not found in " + path.string());
}

}  // namespace

DatasetManifest DatasetManifest::from_json(std::string_view text, const fs::path& base_dir) {
  DatasetManifest m;
  try {
    const auto j = json::parse(text);
    for (const auto& p : j.value("stopword_paths", std::vector<std::string>{})) {
      fs::path path = p;
      m.stopword_paths.push_back(path.is_absolute() ? path : base_dir / path);
    }
    m.gt_path = optional_path(j, "gt_path", base_dir);
    std::unordered_set<std::string> seen;
    for (const auto& e : j.value("movies", json::array())) {
      MovieEntry movie;
      movie.movie_id = e.at("movie_id").get<std::string>();
      if (movie.movie_id.empty()) config_error("manifest: empty movie_id");
      if (!seen.insert(movie.movie_id).second) config_error("manifest: duplicate movie_id '" + movie.movie_id + "'");
      movie.title = e.value("title", movie.movie_id);
      movie.rating = e.value("rating", 0.0);
      movie.subtitle_path = optional_path(e, "subtitle_path", base_dir);
      movie.frames_dir = optional_path(e, "frames_dir", base_dir);
      movie.faces_path = optional_path(e, "faces_path", base_dir);
      movie.audio_labels_path = optional_path(e, "audio_labels_path", base_dir);
      if (e.contains("metadata") && e.at("metadata").is_object()) {
        movie.metadata = metadata_from_json_text(e.at("metadata").dump());
      } else if (auto p = optional_path(e, "metadata_path", base_dir)) {
        movie.metadata = find_metadata_record(*p, movie.movie_id);
      }
      if (movie.metadata) {
        movie.metadata->movie_id = movie.movie_id;
        if (movie.metadata->title.empty()) movie.metadata->title = movie.title;
        if (!e.contains("metadata") || !e.at("metadata").contains("rating")) movie.metadata->rating = movie.rating;
      }
      m.movies.push_back(std::move(movie));
    }
  } catch (const json::exception& e) {
    config_error(std::string("manifest: ") + e.what());
  }
  if (m.movies.empty()) config_error("manifest lists no movies");
  return m;
}

DatasetManifest DatasetManifest::load(const fs::path& path) {
  return from_json(io::read_file(path), path.parent_path());
}

std::vector<std::string> DatasetManifest::ids() const {
  std::vector<std::string> out;
  for (const auto& m : movies) out.push_back(m.movie_id);
  return out;
}

// ---------------------------------------------------------------------------
// config

namespace {

ojson config_to_json(const PipelineConfig& c) {
  const auto& f = c.visual.flow;
  const auto& s = c.visual.shots;
  ojson j;
  j["seed"] = c.seed;
  j["text"] = {{"min_collection_freq", c.bow.min_collection_freq},
               {"max_doc_ratio", c.bow.max_doc_ratio},
               {"lsi_concepts", c.lsi_concepts},
               {"lsi_on_counts", c.lsi_on_counts},
               {"lda_topics", c.lda.n_topics},
               {"lda_sweeps", c.lda.sweeps},
               {"lda_burn_in", c.lda.burn_in},
               {"lda_alpha_init", c.lda.alpha_init},
               {"lda_eta_init", c.lda.eta_init},
               {"lda_optimize", c.lda.optimize_hyperparameters},
               {"lda_average_samples", c.lda.average_samples}};
  j["visual"] = {{"target_width", c.visual.target_width},
                 {"fps", c.fps},
                 {"grid", f.grid},
                 {"levels", f.max_level},
                 {"window", f.window},
                 {"iterations", f.iterations},
                 {"epsilon", f.epsilon},
                 {"pixel_delta", s.pixel_delta},
                 {"changed_fraction", s.changed_fraction},
                 {"flow_magnitude", s.flow_magnitude},
                 {"histogram_distance", s.histogram_distance},
                 {"votes_required", s.votes_required},
                 {"merge_window_s", s.merge_window_s},
                 {"dispersion", c.visual.aggregate.dispersion == Dispersion::kStdDev ? "std" : "variance"}};
  j["metadata"] = {{"lenient", c.metadata_lenient}};
  const char* method = c.fusion.method == FitMethod::kGrid           ? "grid"
                       : c.fusion.method == FitMethod::kRandomSimplex ? "random_simplex"
                                                                      : "auto";
  j["fusion"] = {{"method", method},
                 {"grid_step", c.fusion.grid_step},
                 {"samples", c.fusion.samples},
                 {"refine_steps", c.fusion.refine_steps},
                 {"holdout_fraction", c.fusion.holdout_fraction},
                 {"modalities", c.fusion_modalities}};
  j["evaluation"] = {{"n_recs", c.n_recs}, {"min_population", c.min_population}, {"baseline", c.baseline}};
  j["graph"] = {{"k", c.graph_k}, {"min_weight", c.graph_min_weight}, {"resolution", c.resolution}};
  return j;
}

template <typename T>
void take(const json& section, const char* key, T& field) {
  if (!section.contains(key)) return;
  const auto& v = section.at(key);
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_unsigned()) config_error(std::string("config: '") + key + "' must be a non-negative integer");
  }
  field = v.get<T>();
}

void check_keys(const json& j, const ojson& reference, const std::string& where) {
  if (!j.is_object()) config_error("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!reference.contains(key)) config_error("config: unknown key '" + where + key + "'");
    if (reference.at(key).is_object()) check_keys(value, reference.at(key), where + key + ".");
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(std::string_view text) {
  PipelineConfig c;
  try {
    const auto j = json::parse(text);
    check_keys(j, config_to_json(c), "");
    take(j, "seed", c.seed);
    const json empty = json::object();
    const auto& t = j.contains("text") ? j.at("text") : empty;
    take(t, "min_collection_freq", c.bow.min_collection_freq);
    take(t, "max_doc_ratio", c.bow.max_doc_ratio);
    take(t, "lsi_concepts", c.lsi_concepts);
    take(t, "lsi_on_counts", c.lsi_on_counts);
    take(t, "lda_topics", c.lda.n_topics);
    take(t, "lda_sweeps", c.lda.sweeps);
    take(t, "lda_burn_in", c.lda.burn_in);
    take(t, "lda_alpha_init", c.lda.alpha_init);
    take(t, "lda_eta_init", c.lda.eta_init);
    take(t, "lda_optimize", c.lda.optimize_hyperparameters);
    take(t, "lda_average_samples", c.lda.average_samples);
    const auto& v = j.contains("visual") ? j.at("visual") : empty;
    take(v, "target_width", c.visual.target_width);
    take(v, "fps", c.fps);
    take(v, "grid", c.visual.flow.grid);
    take(v, "levels", c.visual.flow.max_level);
    take(v, "window", c.visual.flow.window);
    take(v, "iterations", c.visual.flow.iterations);
    take(v, "epsilon", c.visual.flow.epsilon);
    take(v, "pixel_delta", c.visual.shots.pixel_delta);
    take(v, "changed_fraction", c.visual.shots.changed_fraction);
    take(v, "flow_magnitude", c.visual.shots.flow_magnitude);
    take(v, "histogram_distance", c.visual.shots.histogram_distance);
    take(v, "votes_required", c.visual.shots.votes_required);
    take(v, "merge_window_s", c.visual.shots.merge_window_s);
    if (v.contains("dispersion")) {
      const auto d = v.at("dispersion").get<std::string>();
      if (d != "std" && d != "variance") config_error("config: visual.dispersion must be 'std' or 'variance'");
      c.visual.aggregate.dispersion = d == "std" ? Dispersion::kStdDev : Dispersion::kVariance;
    }
    if (j.contains("metadata")) take(j.at("metadata"), "lenient", c.metadata_lenient);
    const auto& f = j.contains("fusion") ? j.at("fusion") : empty;
    if (f.contains("method")) {
      const auto m = f.at("method").get<std::string>();
      if (m == "auto") c.fusion.method = FitMethod::kAuto;
      else if (m == "grid") c.fusion.method = FitMethod::kGrid;
      else if (m == "random_simplex") c.fusion.method = FitMethod::kRandomSimplex;
      else config_error("config: fusion.method must be auto, grid or random_simplex");
    }
    take(f, "grid_step", c.fusion.grid_step);
    take(f, "samples", c.fusion.samples);
    take(f, "refine_steps", c.fusion.refine_steps);
    take(f, "holdout_fraction", c.fusion.holdout_fraction);
    take(f, "modalities", c.fusion_modalities);
    const auto& e = j.contains("evaluation") ? j.at("evaluation") : empty;
    take(e, "n_recs", c.n_recs);
    take(e, "min_population", c.min_population);
    take(e, "baseline", c.baseline);
    const auto& g = j.contains("graph") ? j.at("graph") : empty;
    take(g, "k", c.graph_k);
    take(g, "min_weight", c.graph_min_weight);
    take(g, "resolution", c.resolution);
  } catch (const json::exception& e) {
    config_error(std::string("config: ") + e.what());
  }
  c.lda.seed = c.seed;
  c.fusion.seed = c.seed;
  if (c.lsi_concepts < 1) config_error("config: text.lsi_concepts must be >= 1");
  if (c.lda.n_topics < 1) config_error("config: text.lda_topics must be >= 1");
  if (c.lda.sweeps <= c.lda.burn_in) config_error("config: text.lda_sweeps must exceed text.lda_burn_in");
  if (c.graph_k < 1) config_error("config: graph.k must be >= 1");
  if (c.n_recs < 1) config_error("config: evaluation.n_recs must be >= 1");
  if (!(c.fps > 0.0)) config_error("config: visual.fps must be positive");
  if (c.visual.target_width < 1) config_error("config: visual.target_width must be >= 1");
  if (c.visual.flow.grid < 1 || c.visual.flow.max_level < 0 || c.visual.flow.iterations < 1) {
    config_error("config: visual.grid, visual.levels and visual.iterations must be positive");
  }
  if (c.visual.flow.window < 3 || c.visual.flow.window % 2 == 0) config_error("config: visual.window must be odd and >= 3");
  if (!(c.bow.max_doc_ratio > 0.0 && c.bow.max_doc_ratio <= 1.0)) config_error("config: text.max_doc_ratio must be in (0, 1]");
  if (!(c.fusion.grid_step > 0.0 && c.fusion.grid_step <= 0.5)) config_error("config: fusion.grid_step must be in (0, 0.5]");
  if (!(c.fusion.holdout_fraction >= 0.0 && c.fusion.holdout_fraction < 1.0)) {
    config_error("config: fusion.holdout_fraction must be in [0, 1)");
  }
  if (!(c.resolution > 0.0)) config_error("config: graph.resolution must be positive");
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) { return from_json(io::read_file(path)); }

std::string PipelineConfig::to_json() const { return config_to_json(*this).dump(1) + "\n"; }

std::string PipelineConfig::hash() const { return io::sha256_hex(config_to_json(*this).dump()); }

void PipelineConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) config_error("override must look like section.key=value");
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }
  json j = json::parse(to_json());
  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->contains(key)) config_error("config: unknown key '" + path + "'");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
  *this = from_json(j.dump());
}

// ---------------------------------------------------------------------------
// stages

const std::array<Stage, kStageCount>& all_stages() {
  static const std::array<Stage, kStageCount> stages{
      Stage::kIngestText, Stage::kTrainTfidf, Stage::kTrainLsi,   Stage::kTrainLda, Stage::kVisual,   Stage::kAudio,
      Stage::kMetadata,   Stage::kSimilarity, Stage::kFitWeights, Stage::kFuse,     Stage::kEvaluate, Stage::kGraph};
  return stages;
}

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::kIngestText: return "ingest-text";
    case Stage::kTrainTfidf: return "train-tfidf";
    case Stage::kTrainLsi: return "train-lsi";
    case Stage::kTrainLda: return "train-lda";
    case Stage::kVisual: return "visual";
    case Stage::kAudio: return "audio";
    case Stage::kMetadata: return "metadata";
    case Stage::kSimilarity: return "similarity";
    case Stage::kFitWeights: return "fit-weights";
    case Stage::kFuse: return "fuse";
    case Stage::kEvaluate: return "evaluate";
    case Stage::kGraph: return "graph";
  }
  return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

const std::vector<std::string>& modality_names() {
  static const std::vector<std::string> names{"text", "lsi", "lda", "audio", "music", "video", "metadata"};
  return names;
}

std::string StageSummary::to_json() const {
  ojson j;
  j["stage"] = stage;
  j["status"] = status;
  j["notices"] = notices;
  j["outputs"] = outputs;
  j["seconds"] = seconds;
  j["config_hash"] = config_hash;
  j["metrics"] = ojson::parse(metrics_json);
  return j.dump();
}

struct Pipeline::Context {
  Stage stage;
  std::map<std::string, std::string> inputs;  // name -> sha256
  std::vector<std::string> outputs;
  std::vector<std::string> notices;
  ojson metrics = ojson::object();
};

Pipeline::Pipeline(DatasetManifest manifest, PipelineConfig config, fs::path out_dir, Logger log)
    : manifest_(std::move(manifest)),
      config_(std::move(config)),
      out_(std::move(out_dir)),
      log_(std::move(log)),
      config_hash_(config_.hash()) {}

namespace {

constexpr const char* kFeatureDir = "features";
constexpr const char* kSimilarityDir = "similarity";

std::string rel_name(const fs::path& p) { return p.generic_string(); }

std::string input_name(const fs::path& path, const std::string& movie_id, const char* kind) {
  return movie_id + ":" + kind + ":" + path.filename().generic_string();
}

std::string read_input(std::map<std::string, std::string>& inputs, const fs::path& path, const std::string& name) {
  std::string bytes = io::read_file(path);
  inputs[name] = io::sha256_hex(bytes);
  return bytes;
}

// Error from a module, prefixed with the movie it concerns.
[[noreturn]] void rethrow_for_movie(const std::string& movie_id, const Error& e) {
  throw Error(e.code(), "movie '" + movie_id + "': " + e.detail());
}

}  // namespace

StageSummary Pipeline::run_stage(Stage stage) {
  Context ctx{stage, {}, {}, {}, ojson::object()};
  const auto t0 = std::chrono::steady_clock::now();
  if (log_) log_(std::string("stage ") + std::string(to_string(stage)));
  StageSummary summary;
  switch (stage) {
    case Stage::kIngestText: summary = ingest_text(ctx); break;
    case Stage::kTrainTfidf: summary = train_tfidf(ctx); break;
    case Stage::kTrainLsi: summary = train_lsi(ctx); break;
    case Stage::kTrainLda: summary = train_lda(ctx); break;
    case Stage::kVisual: summary = visual(ctx); break;
    case Stage::kAudio: summary = audio(ctx); break;
    case Stage::kMetadata: summary = metadata(ctx); break;
    case Stage::kSimilarity: summary = similarity(ctx); break;
    case Stage::kFitWeights: summary = fit_weights(ctx); break;
    case Stage::kFuse: summary = fuse(ctx); break;
    case Stage::kEvaluate: summary = evaluate(ctx); break;
    case Stage::kGraph: summary = graph(ctx); break;
  }
  // sidecars, once every input of the stage is known
  ojson inputs = ojson::object();
  for (const auto& [name, sha] : ctx.inputs) inputs[name] = sha;
  for (const auto& out : ctx.outputs) {
    ojson meta;
    meta["stage"] = std::string(to_string(stage));
    meta["config_hash"] = config_hash_;
    meta["inputs"] = inputs;
    io::write_file(out_ / (out + ".meta.json"), meta.dump(1) + "\n");
  }
  summary.stage = std::string(to_string(stage));
  summary.status = summary.status.empty() ? "ok" : summary.status;
  summary.notices = ctx.notices;
  summary.outputs = ctx.outputs;
  summary.config_hash = config_hash_;
  summary.metrics_json = ctx.metrics.dump();
  summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (log_) {
    for (const auto& n : ctx.notices) log_("  notice: " + n);
  }
  return summary;
}

std::vector<StageSummary> Pipeline::run_all() {
  std::vector<StageSummary> out;
  for (Stage s : all_stages()) out.push_back(run_stage(s));
  return out;
}

namespace {

void require(const fs::path& out, const fs::path& rel, Stage producer) {
  if (!fs::exists(out / rel)) {
    throw Error(ErrorCode::kMissingDependency, "missing " + rel_name(rel) + "; run stage '" +
                                                   std::string(to_string(producer)) + "' first");
  }
}

}  // namespace

namespace {

template <typename Ctx>
void emit_file(Ctx& ctx, const fs::path& out, const fs::path& rel, std::string_view content) {
  io::write_file(out / rel, content);
  ctx.outputs.push_back(rel_name(rel));
}

template <typename Ctx>
std::string read_artifact(Ctx& ctx, const fs::path& out, const fs::path& rel) {
  return read_input(ctx.inputs, out / rel, rel_name(rel));
}

template <typename Ctx>
void emit_features(Ctx& ctx, const fs::path& out, const FeatureMatrix& m, std::vector<std::string> columns = {}) {
  emit_file(ctx, out, fs::path(kFeatureDir) / (m.modality + ".csv"), io::to_csv(to_labeled(m, std::move(columns))));
}

// Reorders rows of `m` to the manifest's movie order, filling absent movies with zeros.
FeatureMatrix conform(const FeatureMatrix& m, const std::vector<std::string>& ids) {
  std::map<std::string, Eigen::Index> pos;
  for (std::size_t i = 0; i < m.doc_ids.size(); ++i) pos.emplace(m.doc_ids[i], static_cast<Eigen::Index>(i));
  FeatureMatrix out{m.modality, ids, Matrix::Zero(static_cast<Eigen::Index>(ids.size()), m.values.cols())};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (auto it = pos.find(ids[i]); it != pos.end()) out.values.row(static_cast<Eigen::Index>(i)) = m.values.row(it->second);
  }
  return out;
}

}  // namespace

StageSummary Pipeline::ingest_text(Context& ctx) {
  StageSummary s;
  std::vector<const MovieEntry*> with_text;
  for (const auto& m : manifest_.movies) {
    if (m.subtitle_path) with_text.push_back(&m);
  }
  if (with_text.empty()) {
    ctx.notices.push_back("no subtitles in manifest; text modalities skipped");
    s.status = "skipped";
    return s;
  }
  if (with_text.size() < manifest_.movies.size()) {
    ctx.notices.push_back(std::to_string(manifest_.movies.size() - with_text.size()) +
                          " movie(s) without subtitles get empty documents");
  }
  StopwordSet stopwords;
  if (manifest_.stopword_paths.empty()) {
    stopwords = load_default_stopwords();
    ctx.inputs["stopwords:bundled"] = "bundled";
  } else {
    for (const auto& p : manifest_.stopword_paths) {
      auto more = parse_stopwords(read_input(ctx.inputs, p, "stopwords:" + p.filename().generic_string()));
      stopwords.insert(more.begin(), more.end());
    }
  }
  const auto lemmatizer = make_default_lemmatizer();
  std::vector<TokenStream> streams;
  for (const auto& m : manifest_.movies) {
    if (!m.subtitle_path) {
      streams.push_back(TokenStream{m.movie_id, {}});
      continue;
    }
    try {
      const auto raw = read_input(ctx.inputs, *m.subtitle_path, input_name(*m.subtitle_path, m.movie_id, "subtitle"));
      auto parsed = parse_srt(raw, m.movie_id);
      for (const auto& w : parsed.warnings) ctx.notices.push_back(m.movie_id + ": " + w);
      streams.push_back(tokenize_and_lemmatize(parsed.document, stopwords, *lemmatizer));
    } catch (const Error& e) {
      rethrow_for_movie(m.movie_id, e);
    }
  }
  const Corpus corpus = build_bow(streams, config_.bow);
  emit_file(ctx, out_, "text/corpus/vocabulary.tsv", vocabulary_to_tsv(corpus.vocabulary));
  emit_file(ctx, out_, "text/corpus/bow_triplets.csv", bow_to_triplets_csv(corpus.bow));
  emit_file(ctx, out_, "text/corpus/doc_ids.json", doc_ids_to_json(corpus.bow.doc_ids));
  ctx.metrics["documents"] = corpus.bow.n_docs();
  ctx.metrics["terms"] = corpus.vocabulary.size();
  ctx.metrics["tokens"] = corpus.bow.total_tokens();
  return s;
}

namespace {

template <typename Ctx>
Corpus read_corpus(Ctx& ctx, const fs::path& out) {
  const fs::path dir = "text/corpus";
  for (const char* f : {"vocabulary.tsv", "bow_triplets.csv", "doc_ids.json"}) require(out, dir / f, Stage::kIngestText);
  Corpus corpus;
  corpus.vocabulary = vocabulary_from_tsv(read_artifact(ctx, out, dir / "vocabulary.tsv"));
  corpus.bow = bow_from_triplets_csv(read_artifact(ctx, out, dir / "bow_triplets.csv"),
                                     doc_ids_from_json(read_artifact(ctx, out, dir / "doc_ids.json")),
                                     corpus.vocabulary.size());
  return corpus;
}

}  // namespace

StageSummary Pipeline::train_tfidf(Context& ctx) {
  const Corpus corpus = read_corpus(ctx, out_);
  const auto weights = tfidf(corpus.bow, corpus.vocabulary);
  FeatureMatrix m = project(weights);
  m.modality = "text";
  emit_features(ctx, out_, m, weights.terms);
  ctx.metrics["columns"] = weights.terms.size();
  return {};
}

StageSummary Pipeline::train_lsi(Context& ctx) {
  const Corpus corpus = read_corpus(ctx, out_);
  const auto input = config_.lsi_on_counts ? count_matrix(corpus.bow, corpus.vocabulary) : tfidf(corpus.bow, corpus.vocabulary);
  std::size_t t = config_.lsi_concepts;
  const std::size_t cap = std::min(corpus.bow.n_docs(), corpus.vocabulary.size());
  if (t > cap) {
    ctx.notices.push_back("lsi concepts clamped from " + std::to_string(t) + " to min(N, V) = " + std::to_string(cap));
    t = cap;
  }
  const LsiModel model = fit_lsi(input, t);
  for (const auto& w : model.warnings) ctx.notices.push_back(w);
  save_lsi(out_ / "text/lsi", model);
  for (const char* f : {"header.json", "doc_embedding.csv", "term_concepts.csv"}) {
    ctx.outputs.push_back(rel_name(fs::path("text/lsi") / f));
  }
  FeatureMatrix m = project(model);
  m.modality = "lsi";
  emit_features(ctx, out_, m);
  ctx.metrics["concepts"] = model.n_concepts;
  return {};
}

StageSummary Pipeline::train_lda(Context& ctx) {
  const Corpus corpus = read_corpus(ctx, out_);
  const LdaModel model = fit_lda(corpus.bow, corpus.vocabulary, config_.lda);
  save_lda(out_ / "text/lda", model);
  for (const char* f : {"header.json", "doc_topic.csv", "topic_word.csv"}) {
    ctx.outputs.push_back(rel_name(fs::path("text/lda") / f));
  }
  FeatureMatrix m = project(model);
  m.modality = "lda";
  emit_features(ctx, out_, m);
  ctx.metrics["topics"] = model.n_topics;
  if (!model.log_likelihood.empty()) ctx.metrics["final_log_likelihood"] = model.log_likelihood.back().second;
  return {};
}

namespace {

std::vector<std::vector<FaceBox>> parse_faces(std::string_view text) {
  std::vector<std::vector<FaceBox>> out;
  try {
    for (const auto& frame : json::parse(text)) {
      std::vector<FaceBox> boxes;
      for (const auto& b : frame) {
        const auto v = b.get<std::vector<int>>();
        if (v.size() != 4) throw Error(ErrorCode::kParse, "face box must be [x, y, w, h]");
        boxes.push_back({v[0], v[1], v[2], v[3]});
      }
      out.push_back(std::move(boxes));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("faces JSON: ") + e.what());
  }
  return out;
}

}  // namespace

StageSummary Pipeline::visual(Context& ctx) {
  StageSummary s;
  std::vector<std::string> ids;
  Matrix rows(0, static_cast<Eigen::Index>(vf::kMovieFeatures));
  std::vector<Vector> vectors;
  for (const auto& m : manifest_.movies) {
    if (!m.frames_dir) continue;
    try {
      double fps = config_.fps;
      std::size_t count = 0;
      const fs::path info = *m.frames_dir / "manifest.json";
      if (fs::exists(info)) {
        const auto j = json::parse(read_input(ctx.inputs, info, input_name(info, m.movie_id, "frames")));
        fps = j.value("fps_sampled", fps);
        count = j.value("frame_count", std::size_t{0});
      }
      std::vector<fs::path> frames;
      if (count > 0) {
        for (std::size_t i = 0; i < count; ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "frame_%06zu.ppm", i);
          frames.push_back(*m.frames_dir / name);
        }
      } else {
        for (const auto& e : fs::directory_iterator(*m.frames_dir)) {
          if (e.path().extension() == ".ppm") frames.push_back(e.path());
        }
        std::sort(frames.begin(), frames.end());
      }
      if (frames.empty()) throw Error(ErrorCode::kEmptySequence, "no frames in " + m.frames_dir->string());
      std::vector<std::vector<FaceBox>> faces;
      std::optional<fs::path> faces_path = m.faces_path;
      if (!faces_path && fs::exists(*m.frames_dir / "faces.json")) faces_path = *m.frames_dir / "faces.json";
      if (faces_path) faces = parse_faces(read_input(ctx.inputs, *faces_path, input_name(*faces_path, m.movie_id, "faces")));
      VisualFeatureExtractor extractor(config_.visual);
      for (std::size_t i = 0; i < frames.size(); ++i) {
        Frame f = decode_ppm(read_input(ctx.inputs, frames[i], input_name(frames[i], m.movie_id, "frame")));
        f.timestamp_s = static_cast<double>(i) / fps;
        static const std::vector<FaceBox> none;
        extractor.push(f, i < faces.size() ? std::span<const FaceBox>(faces[i]) : std::span<const FaceBox>(none));
      }
      const auto features = extractor.finish(fps);
      ids.push_back(m.movie_id);
      vectors.push_back(features.vector);
    } catch (const Error& e) {
      rethrow_for_movie(m.movie_id, e);
    } catch (const json::exception& e) {
      rethrow_for_movie(m.movie_id, Error(ErrorCode::kParse, e.what()));
    }
  }
  if (ids.empty()) {
    ctx.notices.push_back("no frame directories in manifest; video modality skipped");
    s.status = "skipped";
    return s;
  }
  FeatureMatrix fm{"video", ids, Matrix(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(vf::kMovieFeatures))};
  for (std::size_t i = 0; i < vectors.size(); ++i) fm.values.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
  if (ids.size() < manifest_.movies.size()) {
    ctx.notices.push_back(std::to_string(manifest_.movies.size() - ids.size()) + " movie(s) without frames get zero video vectors");
  }
  emit_features(ctx, out_, conform(fm, manifest_.ids()), vf::movie_feature_names());
  return s;
}

StageSummary Pipeline::audio(Context& ctx) {
  StageSummary s;
  const auto all_ids = manifest_.ids();
  FeatureMatrix events{"audio", all_ids, Matrix::Zero(static_cast<Eigen::Index>(all_ids.size()), kAudioEventClasses)};
  FeatureMatrix genres{"music", all_ids, Matrix::Zero(static_cast<Eigen::Index>(all_ids.size()), kMusicGenreClasses)};
  std::size_t found = 0;
  for (std::size_t i = 0; i < manifest_.movies.size(); ++i) {
    const auto& m = manifest_.movies[i];
    if (!m.audio_labels_path) continue;
    try {
      auto labels = parse_segment_labels(
          read_input(ctx.inputs, *m.audio_labels_path, input_name(*m.audio_labels_path, m.movie_id, "audio")));
      const auto p = aggregate_labels(labels);
      for (std::size_t c = 0; c < kAudioEventClasses; ++c) events.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = p.events[c];
      for (std::size_t c = 0; c < kMusicGenreClasses; ++c) genres.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = p.genres[c];
      ++found;
    } catch (const Error& e) {
      rethrow_for_movie(m.movie_id, e);
    }
  }
  if (found == 0) {
    ctx.notices.push_back("no audio labels in manifest; audio and music modalities skipped");
    s.status = "skipped";
    return s;
  }
  if (found < all_ids.size()) {
    ctx.notices.push_back(std::to_string(all_ids.size() - found) + " movie(s) without audio labels get zero vectors");
  }
  const auto& en = audio_event_names();
  const auto& gn = music_genre_names();
  emit_features(ctx, out_, events, std::vector<std::string>(en.begin(), en.end()));
  emit_features(ctx, out_, genres, std::vector<std::string>(gn.begin(), gn.end()));
  return s;
}

StageSummary Pipeline::metadata(Context& ctx) {
  StageSummary s;
  std::vector<MovieMetadata> records;
  for (const auto& m : manifest_.movies) {
    MovieMetadata rec = m.metadata.value_or(MovieMetadata{});
    rec.movie_id = m.movie_id;
    records.push_back(std::move(rec));
  }
  const bool any = std::any_of(manifest_.movies.begin(), manifest_.movies.end(), [](const MovieEntry& m) { return m.metadata.has_value(); });
  if (!any) {
    ctx.notices.push_back("no metadata in manifest; metadata modality skipped");
    s.status = "skipped";
    return s;
  }
  ojson manifest_meta = ojson::array();
  for (const auto& r : records) {
    manifest_meta.push_back({{"movie_id", r.movie_id}, {"actors", r.actors}, {"directors", r.directors}, {"genres", r.genres}});
  }
  ctx.inputs["manifest:metadata"] = io::sha256_hex(manifest_meta.dump());
  const TagIndex index = build_index(records);
  const auto result = vectorize(records, index, config_.metadata_lenient);
  for (const auto& w : result.warnings) ctx.notices.push_back(w);
  std::vector<std::string> columns;
  for (const auto& t : index.tags()) columns.push_back(std::string(to_string(t.kind)) + ":" + t.key);
  emit_features(ctx, out_, result.matrix, columns);
  emit_file(ctx, out_, "metadata/tag_index.tsv", tag_index_to_tsv(index));
  ctx.metrics["tags"] = index.size();
  return s;
}

namespace {

template <typename Ctx>
std::vector<SimilarityMatrix> read_similarities(Ctx& ctx, const fs::path& out, bool include_fused) {
  std::vector<SimilarityMatrix> mats;
  std::vector<std::string> names = modality_names();
  if (include_fused) names.push_back("fused");
  for (const auto& name : names) {
    const fs::path rel = fs::path(kSimilarityDir) / (name + ".csv");
    if (!fs::exists(out / rel)) continue;
    mats.push_back(similarity_from_labeled(io::labeled_matrix_from_csv(read_artifact(ctx, out, rel)), name));
  }
  if (mats.empty()) {
    throw Error(ErrorCode::kMissingDependency, "no similarity matrices under " + std::string(kSimilarityDir) +
                                                   "/; run stage 'similarity' first");
  }
  return mats;
}

template <typename Ctx>
GroundTruth read_ground_truth(Ctx& ctx, const DatasetManifest& manifest) {
  if (!manifest.gt_path) {
    throw Error(ErrorCode::kMissingDependency, "manifest has no gt_path; ground truth is required");
  }
  if (!fs::exists(*manifest.gt_path)) {
    throw Error(ErrorCode::kMissingDependency, "ground truth file not found: " + manifest.gt_path->string());
  }
  const auto text = read_input(ctx.inputs, *manifest.gt_path, "ground_truth:" + manifest.gt_path->filename().generic_string());
  auto gt = GroundTruth::from_labeled(io::labeled_matrix_from_csv(text));
  gt.similarity = align_to(gt.similarity, manifest.ids());
  return gt;
}

// Matrices selected for fusion, in canonical order.
std::vector<SimilarityMatrix> fusion_inputs(std::vector<SimilarityMatrix> all, const std::vector<std::string>& wanted,
                                            std::vector<std::string>& notices) {
  std::erase_if(all, [](const SimilarityMatrix& m) { return m.modality == "fused"; });
  if (wanted.empty()) return all;
  std::vector<SimilarityMatrix> out;
  for (const auto& w : wanted) {
    auto it = std::find_if(all.begin(), all.end(), [&](const SimilarityMatrix& m) { return m.modality == w; });
    if (it == all.end()) {
      notices.push_back("fusion modality '" + w + "' unavailable; skipped");
    } else {
      out.push_back(*it);
    }
  }
  return out;
}

}  // namespace

StageSummary Pipeline::similarity(Context& ctx) {
  std::size_t made = 0;
  for (const auto& name : modality_names()) {
    const fs::path rel = fs::path(kFeatureDir) / (name + ".csv");
    if (!fs::exists(out_ / rel)) continue;
    auto features = feature_from_labeled(io::labeled_matrix_from_csv(read_artifact(ctx, out_, rel)), name);
    const auto sim = cosine_matrix(features);
    emit_file(ctx, out_, fs::path(kSimilarityDir) / (name + ".csv"), io::to_csv(to_labeled(sim)));
    ++made;
  }
  if (made == 0) {
    throw Error(ErrorCode::kMissingDependency,
                "no feature matrices under features/; run a modality stage (train-tfidf, train-lsi, train-lda, visual, "
                "audio or metadata) first");
  }
  ctx.metrics["matrices"] = made;
  return {};
}

StageSummary Pipeline::fit_weights(Context& ctx) {
  StageSummary s;
  auto mats = fusion_inputs(read_similarities(ctx, out_, false), config_.fusion_modalities, ctx.notices);
  const GroundTruth gt = read_ground_truth(ctx, manifest_);
  FusionWeights weights;
  if (mats.size() == 1) {
    ctx.notices.push_back("only one modality available; weight 1 assigned without search");
    weights = {{mats.front().modality}, {1.0}};
  } else {
    const Evaluator evaluator(gt);
    const auto result = cinesim::fit_weights(mats, evaluator, config_.fusion);
    weights = result.weights;
    ctx.metrics["method"] = result.method;
    ctx.metrics["candidates"] = result.candidates;
    ctx.metrics["median_rank_1st"] = result.objective.median_rank_1st;
    ctx.metrics["top10_pct_1st"] = result.objective.top10_pct_1st;
    ctx.metrics["median_rank_2nd"] = result.objective.median_rank_2nd;
    ctx.metrics["top10_pct_2nd"] = result.objective.top10_pct_2nd;
    if (result.holdout_report) {
      ctx.metrics["holdout_median_rank_1st"] = result.holdout_report->median_rank_1st;
      ctx.metrics["holdout_top10_pct_1st"] = result.holdout_report->top10_pct_1st;
    }
  }
  emit_file(ctx, out_, "fusion/weights.json", weights.to_json());
  return s;
}

StageSummary Pipeline::fuse(Context& ctx) {
  require(out_, "fusion/weights.json", Stage::kFitWeights);
  const auto weights = FusionWeights::from_json(read_artifact(ctx, out_, "fusion/weights.json"));
  auto all = read_similarities(ctx, out_, false);
  std::vector<SimilarityMatrix> mats;
  for (const auto& name : weights.modalities) {
    auto it = std::find_if(all.begin(), all.end(), [&](const SimilarityMatrix& m) { return m.modality == name; });
    if (it == all.end()) {
      throw Error(ErrorCode::kMissingDependency, "weights reference '" + name + "' but similarity/" + name +
                                                     ".csv is missing; run stage 'similarity' first");
    }
    mats.push_back(align_to(*it, manifest_.ids()));
  }
  auto fused = cinesim::fuse(mats, weights);
  emit_file(ctx, out_, fs::path(kSimilarityDir) / "fused.csv", io::to_csv(to_labeled(fused)));
  return {};
}

namespace {

// Config hash recorded in an artifact's sidecar, if any.
std::optional<std::string> recorded_hash(const fs::path& file) {
  const fs::path meta = file.string() + ".meta.json";
  if (!fs::exists(meta)) return std::nullopt;
  return json::parse(io::read_file(meta)).value("config_hash", std::string{});
}

}  // namespace

StageSummary Pipeline::evaluate(Context& ctx) {
  auto mats = read_similarities(ctx, out_, true);
  std::set<std::string> hashes;
  for (const auto& m : mats) {
    if (auto h = recorded_hash(out_ / kSimilarityDir / (m.modality + ".csv"))) hashes.insert(*h);
  }
  if (hashes.size() > 1) {
    throw Error(ErrorCode::kConfigInvalid, "similarity matrices were produced under different configurations; re-run "
                                           "the upstream stages with one config");
  }
  if (!hashes.empty() && *hashes.begin() != config_hash_) {
    ctx.notices.push_back("similarity matrices were produced under a different config hash");
  }
  const GroundTruth gt = read_ground_truth(ctx, manifest_);
  const Evaluator evaluator(gt);
  std::vector<EvalReport> reports;
  std::vector<std::vector<QueryRanks>> tables;
  for (const auto& m : mats) {
    tables.push_back(evaluator.rank_table(m));
    reports.push_back(Evaluator::summarize(m.modality, tables.back()));
  }
  const auto base = std::find_if(mats.begin(), mats.end(), [&](const SimilarityMatrix& m) { return m.modality == config_.baseline; });
  if (base != mats.end()) {
    const auto b = static_cast<std::size_t>(base - mats.begin());
    for (std::size_t i = 0; i < mats.size(); ++i) {
      if (i != b) reports[i].wilcoxon = compare_models(tables[i], tables[b]);
    }
  } else {
    ctx.notices.push_back("baseline '" + config_.baseline + "' unavailable; no significance tests");
  }
  emit_file(ctx, out_, "evaluation/report.json", reports_to_json(reports));
  emit_file(ctx, out_, "evaluation/report.txt", format_report_table(reports));

  ojson ranks = ojson::object();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    ojson rows = ojson::array();
    for (const auto& r : tables[i]) {
      rows.push_back({{"query", gt.similarity.doc_ids[r.query]},
                      {"first", gt.similarity.doc_ids[r.first]},
                      {"rank_first", r.rank_first},
                      {"second", gt.similarity.doc_ids[r.second]},
                      {"rank_second", r.rank_second}});
    }
    ranks[mats[i].modality] = std::move(rows);
  }
  emit_file(ctx, out_, "evaluation/rankings.json", ranks.dump(1) + "\n");

  std::vector<MovieMetadata> meta;
  for (const auto& m : manifest_.movies) {
    if (m.metadata) meta.push_back(*m.metadata);
  }
  if (!meta.empty()) {
    ojson groups = ojson::object();
    for (const auto& m : mats) {
      ojson per = ojson::object();
      for (auto [label, by] : {std::pair{"genre", GroupBy::kGenre}, std::pair{"director", GroupBy::kDirector}}) {
        ojson arr = ojson::array();
        for (const auto& g : group_differentiation(align_to(m, manifest_.ids()), meta, by, config_.n_recs, config_.min_population)) {
          arr.push_back({{"group", g.group}, {"population", g.population}, {"ratio", g.ratio}, {"low_support", g.low_support}});
        }
        per[label] = std::move(arr);
      }
      groups[m.modality] = std::move(per);
    }
    emit_file(ctx, out_, "evaluation/groups.json", groups.dump(1) + "\n");
  }
  for (const auto& r : reports) {
    ctx.metrics[r.model] = {{"median_rank_1st", r.median_rank_1st},
                            {"top10_pct_1st", r.top10_pct_1st},
                            {"median_rank_2nd", r.median_rank_2nd},
                            {"top10_pct_2nd", r.top10_pct_2nd}};
  }
  if (log_) log_(format_report_table(reports));
  return {};
}

StageSummary Pipeline::graph(Context& ctx) {
  const auto mats = read_similarities(ctx, out_, true);
  std::vector<MovieMetadata> meta;
  for (const auto& m : manifest_.movies) {
    MovieMetadata rec = m.metadata.value_or(MovieMetadata{});
    rec.movie_id = m.movie_id;
    if (rec.title.empty()) rec.title = m.title;
    if (!m.metadata) rec.rating = m.rating;
    meta.push_back(std::move(rec));
  }
  ojson index = ojson::array();
  for (const auto& m : mats) {
    const auto g = build_graph(align_to(m, manifest_.ids()), config_.graph_k, config_.graph_min_weight, meta);
    const auto communities = louvain(g, LouvainOptions{config_.resolution, config_.seed});
    emit_file(ctx, out_, fs::path("graphs") / (m.modality + ".json"), export_json(g, communities));
    index.push_back(m.modality);
    ctx.metrics[m.modality] = {{"edges", g.edges.size()},
                               {"communities", communities.n_communities},
                               {"modularity", communities.modularity}};
  }
  emit_file(ctx, out_, "graphs/index.json", ojson{{"models", index}}.dump(1) + "\n");
  return {};
}

}  // namespace cinesim
