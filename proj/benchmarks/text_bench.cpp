#include "cinesim/bow.hpp"
#include "cinesim/lda.hpp"
#include "cinesim/random.hpp"
#include "cinesim/text_models.hpp"

#include <benchmark/benchmark.h>

using namespace cinesim;

namespace {

Corpus random_corpus(std::size_t docs, std::size_t terms, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  Corpus c;
  c.vocabulary.doc_freq.assign(terms, 0);
  c.vocabulary.collection_freq.assign(terms, 0);
  for (std::size_t t = 0; t < terms; ++t) {
    c.vocabulary.terms.push_back("w" + std::to_string(t));
    c.vocabulary.term_to_index.emplace(c.vocabulary.terms.back(), t);
  }
  c.bow.n_terms = terms;
  for (std::size_t d = 0; d < docs; ++d) {
    std::vector<std::uint32_t> counts(terms, 0);
    for (std::size_t i = 0; i < length; ++i) ++counts[rng.index(terms)];
    std::vector<BowEntry> row;
    for (std::size_t t = 0; t < terms; ++t) {
      if (counts[t] == 0) continue;
      row.push_back({t, counts[t]});
      ++c.vocabulary.doc_freq[t];
      c.vocabulary.collection_freq[t] += counts[t];
    }
    c.bow.doc_ids.push_back("d" + std::to_string(d));
    c.bow.rows.push_back(std::move(row));
  }
  return c;
}

void BM_LdaSweep(benchmark::State& state) {
  const auto c = random_corpus(160, 2000, 2000, 1);
  LdaOptions o;
  o.n_topics = static_cast<std::size_t>(state.range(0));
  LdaSampler sampler(c.bow, o);
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * c.bow.total_tokens()));
}
BENCHMARK(BM_LdaSweep)->Arg(10)->Arg(55)->Unit(benchmark::kMillisecond);

void BM_TfIdfAndLsi(benchmark::State& state) {
  const auto c = random_corpus(160, 3000, 2000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fit_lsi(tfidf(c.bow, c.vocabulary), 55));
}
BENCHMARK(BM_TfIdfAndLsi)->Unit(benchmark::kMillisecond);

}  // namespace
