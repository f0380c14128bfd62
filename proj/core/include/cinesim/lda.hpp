#pragma once

#include "cinesim/bow.hpp"
#include "cinesim/random.hpp"
#include "cinesim/text_models.hpp"
#include "cinesim/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace cinesim {

struct LdaOptions {
  std::size_t n_topics = 55;
  std::size_t sweeps = 1000;
  std::size_t burn_in = 100;
  std::uint64_t seed = 42;
  /// Initial symmetric alpha_k; <= 0 selects 50 / K.
  double alpha_init = 0.0;
  double eta_init = 0.01;
  bool optimize_hyperparameters = true;
  /// Minka fixed-point updates run every this many sweeps after burn-in.
  std::size_t optimize_every = 20;
  std::size_t loglik_every = 10;
  /// Average theta/beta over post-burn-in states (every sample_lag sweeps)
  /// instead of using the final state.
  bool average_samples = false;
  std::size_t sample_lag = 10;
};

struct LdaModel {
  std::size_t n_topics = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;
  Vector alpha;         // K
  double eta = 0.0;
  Matrix topic_word;    // K x V, rows sum to 1
  Matrix doc_topic;     // N x K, rows sum to 1
  std::uint64_t seed = 0;
  std::size_t sweeps = 0;
  /// (sweep, collapsed log p(w, z)) pairs.
  std::vector<std::pair<std::size_t, double>> log_likelihood;
};

/// Collapsed Gibbs sampler state. Tokens are laid out per document in term
/// order; counters are kept in lockstep with the assignments.
class LdaSampler {
 public:
  LdaSampler(const BowMatrix& bow, const LdaOptions& options);

  /// Resamples every token once from
  ///   P(z = k) ~ (n_dk + alpha_k) (n_kw + eta) / (n_k + V eta)
  /// with the token's own assignment removed from the counts.
  void sweep();

  /// Minka fixed-point iterations for asymmetric alpha and scalar eta.
  void optimize_hyperparameters(int iterations = 20);

  /// Collapsed joint log-likelihood log p(w, z | alpha, eta).
  double log_likelihood() const;

  /// theta_dk = (n_dk + alpha_k) / (n_d + sum alpha),
  /// beta_kw = (n_kw + eta) / (n_k + V eta).
  Matrix doc_topic() const;
  Matrix topic_word() const;

  std::size_t n_docs() const noexcept { return doc_words_.size(); }
  std::size_t n_topics() const noexcept { return n_topics_; }
  std::size_t n_terms() const noexcept { return n_terms_; }
  std::size_t sweeps_done() const noexcept { return sweeps_done_; }

  const std::vector<std::vector<std::uint32_t>>& words() const noexcept { return doc_words_; }
  const std::vector<std::vector<std::uint32_t>>& assignments() const noexcept { return z_; }
  std::uint32_t doc_topic_count(std::size_t d, std::size_t k) const { return n_dk_[d * n_topics_ + k]; }
  std::uint32_t topic_word_count(std::size_t k, std::size_t w) const { return n_kw_[k * n_terms_ + w]; }
  std::uint32_t topic_count(std::size_t k) const { return n_k_[k]; }
  const Vector& alpha() const noexcept { return alpha_; }
  double eta() const noexcept { return eta_; }

 private:
  std::size_t n_topics_;
  std::size_t n_terms_;
  std::vector<std::vector<std::uint32_t>> doc_words_;
  std::vector<std::vector<std::uint32_t>> z_;
  std::vector<std::uint32_t> n_dk_;  // N x K
  std::vector<std::uint32_t> n_kw_;  // K x V
  std::vector<std::uint32_t> n_k_;   // K
  Vector alpha_;
  double eta_;
  Rng rng_;
  std::vector<double> probs_;
  std::size_t sweeps_done_ = 0;
};

using LdaObserver = std::function<void(const LdaSampler&)>;

/// Runs options.sweeps sweeps, optimizing hyperparameters on the configured
/// cadence. `observer` (if set) is called after every sweep.
LdaModel fit_lda(const BowMatrix& bow, const Vocabulary& vocab, const LdaOptions& options,
                 const LdaObserver& observer = {});

FeatureMatrix project(const LdaModel& m);

/// The m highest-probability terms of topic k, ties to the lower term index.
std::vector<WeightedTerm> top_terms(const LdaModel& model, std::size_t topic, std::size_t m);

void save_lda(const std::filesystem::path& dir, const LdaModel& model);
LdaModel load_lda(const std::filesystem::path& dir);

}  // namespace cinesim
