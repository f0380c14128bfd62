#include "cinesim/lda.hpp"

#include "cinesim/error.hpp"
#include "cinesim/io.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cinesim {
namespace {

constexpr double kMinHyper = 1e-6;

double digamma(double x) { return boost::math::digamma(x); }

}  // namespace

LdaSampler::LdaSampler(const BowMatrix& bow, const LdaOptions& options)
    : n_topics_(options.n_topics),
      n_terms_(bow.n_terms),
      doc_words_(bow.n_docs()),
      z_(bow.n_docs()),
      n_dk_(bow.n_docs() * options.n_topics, 0),
      n_kw_(options.n_topics * bow.n_terms, 0),
      n_k_(options.n_topics, 0),
      alpha_(Vector::Constant(static_cast<Eigen::Index>(options.n_topics),
                              options.alpha_init > 0.0 ? options.alpha_init
                                                       : 50.0 / static_cast<double>(options.n_topics))),
      eta_(options.eta_init),
      rng_(options.seed),
      probs_(options.n_topics, 0.0) {
  if (n_topics_ == 0) throw Error(ErrorCode::kInvalidArgument, "LDA needs at least one topic");
  if (n_terms_ == 0) throw Error(ErrorCode::kInvalidArgument, "LDA needs a nonempty vocabulary");
  if (!(eta_ > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eta must be positive");
  for (std::size_t d = 0; d < bow.n_docs(); ++d) {
    for (const auto& e : bow.rows[d]) {
      doc_words_[d].insert(doc_words_[d].end(), e.count, static_cast<std::uint32_t>(e.term));
    }
    z_[d].resize(doc_words_[d].size());
    for (std::size_t n = 0; n < doc_words_[d].size(); ++n) {
      const auto k = static_cast<std::uint32_t>(rng_.index(n_topics_));
      z_[d][n] = k;
      ++n_dk_[d * n_topics_ + k];
      ++n_kw_[k * n_terms_ + doc_words_[d][n]];
      ++n_k_[k];
    }
  }
}

void LdaSampler::sweep() {
  const double v_eta = static_cast<double>(n_terms_) * eta_;
  for (std::size_t d = 0; d < doc_words_.size(); ++d) {
    const auto& words = doc_words_[d];
    auto& zd = z_[d];
    std::uint32_t* ndk = &n_dk_[d * n_topics_];
    for (std::size_t n = 0; n < words.size(); ++n) {
      const std::uint32_t w = words[n];
      const std::uint32_t old = zd[n];
      --ndk[old];
      --n_kw_[old * n_terms_ + w];
      --n_k_[old];

      double total = 0.0;
      for (std::size_t k = 0; k < n_topics_; ++k) {
        total += (ndk[k] + alpha_[static_cast<Eigen::Index>(k)]) * (n_kw_[k * n_terms_ + w] + eta_) /
                 (n_k_[k] + v_eta);
        probs_[k] = total;
      }
      const double u = rng_.uniform() * total;
      std::size_t k = 0;
      while (k + 1 < n_topics_ && probs_[k] <= u) ++k;

      const auto nk = static_cast<std::uint32_t>(k);
      zd[n] = nk;
      ++ndk[nk];
      ++n_kw_[nk * n_terms_ + w];
      ++n_k_[nk];
    }
  }
  ++sweeps_done_;
}

void LdaSampler::optimize_hyperparameters(int iterations) {
  const auto K = static_cast<Eigen::Index>(n_topics_);
  std::vector<std::size_t> doc_len(doc_words_.size());
  for (std::size_t d = 0; d < doc_words_.size(); ++d) doc_len[d] = doc_words_[d].size();

  for (int it = 0; it < iterations; ++it) {
    const double alpha_sum = alpha_.sum();
    double den = 0.0;
    for (auto len : doc_len) {
      if (len > 0) den += digamma(static_cast<double>(len) + alpha_sum) - digamma(alpha_sum);
    }
    if (den <= 0.0) break;
    Vector next = alpha_;
    for (Eigen::Index k = 0; k < K; ++k) {
      double num = 0.0;
      for (std::size_t d = 0; d < doc_words_.size(); ++d) {
        const auto c = n_dk_[d * n_topics_ + static_cast<std::size_t>(k)];
        if (c > 0) num += digamma(c + alpha_[k]) - digamma(alpha_[k]);
      }
      next[k] = std::max(kMinHyper, alpha_[k] * num / den);
    }
    const double change = ((next - alpha_).cwiseAbs().array() / alpha_.array()).maxCoeff();
    alpha_ = next;
    if (change < 1e-6) break;
  }

  const double v = static_cast<double>(n_terms_);
  for (int it = 0; it < iterations; ++it) {
    double num = 0.0;
    for (auto c : n_kw_) {
      if (c > 0) num += digamma(c + eta_) - digamma(eta_);
    }
    double den = 0.0;
    for (auto c : n_k_) den += digamma(c + v * eta_) - digamma(v * eta_);
    den *= v;
    if (den <= 0.0) break;
    const double next = std::max(kMinHyper, eta_ * num / den);
    const double change = std::abs(next - eta_) / eta_;
    eta_ = next;
    if (change < 1e-6) break;
  }
}

double LdaSampler::log_likelihood() const {
  // Zero-count cells contribute lgamma(0 + x) - lgamma(x) = 0 and are skipped.
  const double v_eta = static_cast<double>(n_terms_) * eta_;
  double ll = 0.0;
  for (std::size_t k = 0; k < n_topics_; ++k) {
    ll += std::lgamma(v_eta) - std::lgamma(n_k_[k] + v_eta);
    for (std::size_t w = 0; w < n_terms_; ++w) {
      const auto c = n_kw_[k * n_terms_ + w];
      if (c > 0) ll += std::lgamma(c + eta_) - std::lgamma(eta_);
    }
  }
  const double alpha_sum = alpha_.sum();
  for (std::size_t d = 0; d < doc_words_.size(); ++d) {
    ll += std::lgamma(alpha_sum) - std::lgamma(static_cast<double>(doc_words_[d].size()) + alpha_sum);
    for (std::size_t k = 0; k < n_topics_; ++k) {
      const auto c = n_dk_[d * n_topics_ + k];
      const double a = alpha_[static_cast<Eigen::Index>(k)];
      if (c > 0) ll += std::lgamma(c + a) - std::lgamma(a);
    }
  }
  return ll;
}

Matrix LdaSampler::doc_topic() const {
  const auto N = static_cast<Eigen::Index>(doc_words_.size());
  const auto K = static_cast<Eigen::Index>(n_topics_);
  Matrix theta(N, K);
  const double alpha_sum = alpha_.sum();
  for (Eigen::Index d = 0; d < N; ++d) {
    const double denom = static_cast<double>(doc_words_[static_cast<std::size_t>(d)].size()) + alpha_sum;
    for (Eigen::Index k = 0; k < K; ++k) {
      theta(d, k) = (n_dk_[static_cast<std::size_t>(d) * n_topics_ + static_cast<std::size_t>(k)] + alpha_[k]) / denom;
    }
  }
  return theta;
}

Matrix LdaSampler::topic_word() const {
  const auto K = static_cast<Eigen::Index>(n_topics_);
  const auto V = static_cast<Eigen::Index>(n_terms_);
  Matrix beta(K, V);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double denom = n_k_[static_cast<std::size_t>(k)] + static_cast<double>(n_terms_) * eta_;
    for (Eigen::Index w = 0; w < V; ++w) {
      beta(k, w) = (n_kw_[static_cast<std::size_t>(k) * n_terms_ + static_cast<std::size_t>(w)] + eta_) / denom;
    }
  }
  return beta;
}

LdaModel fit_lda(const BowMatrix& bow, const Vocabulary& vocab, const LdaOptions& options,
                 const LdaObserver& observer) {
  if (options.n_topics < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (options.sweeps <= options.burn_in) throw Error(ErrorCode::kInvalidArgument, "sweeps must exceed burn_in");

  LdaSampler sampler(bow, options);
  LdaModel model;
  Matrix theta_sum, beta_sum;
  std::size_t samples = 0;

  for (std::size_t s = 1; s <= options.sweeps; ++s) {
    sampler.sweep();
    const bool post_burn_in = s > options.burn_in;
    if (options.optimize_hyperparameters && post_burn_in && options.optimize_every > 0 &&
        (s - options.burn_in) % options.optimize_every == 0) {
      sampler.optimize_hyperparameters();
    }
    if (options.loglik_every > 0 && s % options.loglik_every == 0) {
      model.log_likelihood.emplace_back(s, sampler.log_likelihood());
    }
    if (options.average_samples && post_burn_in && options.sample_lag > 0 &&
        (s - options.burn_in) % options.sample_lag == 0) {
      if (samples == 0) {
        theta_sum = sampler.doc_topic();
        beta_sum = sampler.topic_word();
      } else {
        theta_sum += sampler.doc_topic();
        beta_sum += sampler.topic_word();
      }
      ++samples;
    }
    if (observer) observer(sampler);
  }

  model.n_topics = options.n_topics;
  model.doc_ids = bow.doc_ids;
  model.terms = vocab.terms;
  model.alpha = sampler.alpha();
  model.eta = sampler.eta();
  model.seed = options.seed;
  model.sweeps = options.sweeps;
  if (samples > 0) {
    model.doc_topic = theta_sum / static_cast<double>(samples);
    model.topic_word = beta_sum / static_cast<double>(samples);
  } else {
    model.doc_topic = sampler.doc_topic();
    model.topic_word = sampler.topic_word();
  }
  return model;
}

FeatureMatrix project(const LdaModel& m) { return FeatureMatrix{"lda", m.doc_ids, m.doc_topic}; }

std::vector<WeightedTerm> top_terms(const LdaModel& model, std::size_t topic, std::size_t m) {
  if (topic >= model.n_topics) throw Error(ErrorCode::kInvalidArgument, "topic index out of range");
  const auto row = model.topic_word.row(static_cast<Eigen::Index>(topic));
  std::vector<std::size_t> idx(static_cast<std::size_t>(row.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return row(static_cast<Eigen::Index>(a)) > row(static_cast<Eigen::Index>(b));
  });
  idx.resize(std::min(m, idx.size()));
  std::vector<WeightedTerm> out;
  for (auto i : idx) out.emplace_back(model.terms.at(i), row(static_cast<Eigen::Index>(i)));
  return out;
}

void save_lda(const std::filesystem::path& dir, const LdaModel& model) {
  nlohmann::ordered_json header;
  header["kind"] = "lda";
  header["dims"] = {{"docs", model.doc_ids.size()}, {"terms", model.terms.size()}, {"topics", model.n_topics}};
  header["seed"] = model.seed;
  header["sweeps"] = model.sweeps;
  header["alpha"] = std::vector<double>(model.alpha.data(), model.alpha.data() + model.alpha.size());
  header["eta"] = model.eta;
  header["terms"] = model.terms;
  io::write_file(dir / "header.json", header.dump(1) + "\n");
  std::vector<std::string> cols;
  for (std::size_t k = 0; k < model.n_topics; ++k) cols.push_back(std::to_string(k));
  io::write_labeled_matrix(dir / "doc_topic.csv", {model.doc_ids, cols, model.doc_topic});
  io::write_file(dir / "topic_word.csv", io::matrix_to_csv(model.topic_word));
}

LdaModel load_lda(const std::filesystem::path& dir) {
  const auto header = nlohmann::json::parse(io::read_file(dir / "header.json"));
  if (header.value("kind", "") != "lda") throw Error(ErrorCode::kParse, "not an LDA bundle: " + dir.string());
  LdaModel model;
  model.n_topics = header["dims"]["topics"].get<std::size_t>();
  model.seed = header["seed"].get<std::uint64_t>();
  model.sweeps = header["sweeps"].get<std::size_t>();
  auto alpha = header["alpha"].get<std::vector<double>>();
  model.alpha = Eigen::Map<Vector>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  model.eta = header["eta"].get<double>();
  model.terms = header["terms"].get<std::vector<std::string>>();
  auto theta = io::read_labeled_matrix(dir / "doc_topic.csv");
  model.doc_ids = std::move(theta.row_ids);
  model.doc_topic = std::move(theta.values);
  model.topic_word = io::matrix_from_csv(io::read_file(dir / "topic_word.csv"));
  return model;
}

}  // namespace cinesim
