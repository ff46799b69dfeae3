#pragma once

// Frequency tables for trigram training and the deleted-interpolation
// estimator for the transition smoothing weights.
//
// Counting convention: every sentence t1..tn is padded to
// BOS BOS t1 .. tn EOS. Each sentence contributes one BOS and one EOS
// pseudo-unigram, the (BOS,BOS) bigram, and the boundary bigrams/trigrams
// that fall out of the padding. Under this convention every observed
// history row of the interpolated transition model sums to exactly 1 over
// tags ∪ {EOS} when the unigram component is normalized by N + S.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semtag/corpus.hpp"
#include "semtag/error.hpp"
#include "semtag/tagset.hpp"

namespace semtag {

/// Extended tag id: 0..n_tags-1 are tagset ids, then BOS, then EOS.
using ExtTagId = std::uint16_t;

struct NgramCounts {
  std::size_t n_tags = 0;
  std::uint64_t token_total = 0;     // N: tokens carrying real tags
  std::uint64_t sentence_total = 0;  // S

  std::vector<std::uint64_t> unigram;                    // size n_tags + 2
  std::map<std::array<ExtTagId, 2>, std::uint64_t> bigram;
  std::map<std::array<ExtTagId, 3>, std::uint64_t> trigram;
  std::map<std::string, std::map<TagId, std::uint64_t>> word_tag;

  ExtTagId bos() const { return static_cast<ExtTagId>(n_tags); }
  ExtTagId eos() const { return static_cast<ExtTagId>(n_tags + 1); }

  std::uint64_t uni(ExtTagId t) const { return unigram[t]; }
  std::uint64_t big(ExtTagId a, ExtTagId b) const {
    auto it = bigram.find({a, b});
    return it == bigram.end() ? 0 : it->second;
  }
  std::uint64_t tri(ExtTagId a, ExtTagId b, ExtTagId c) const {
    auto it = trigram.find({a, b, c});
    return it == trigram.end() ? 0 : it->second;
  }

  std::uint64_t surface_total(const std::string& surface) const {
    auto it = word_tag.find(surface);
    if (it == word_tag.end()) return 0;
    std::uint64_t total = 0;
    for (const auto& [tag, count] : it->second) total += count;
    return total;
  }
};

inline NgramCounts collect_counts(const Corpus& corpus,
                                  const Tagset& tagset = Tagset::builtin()) {
  if (corpus.sentences.empty()) {
    fail(ErrorKind::EmptyCorpus, "cannot collect counts from an empty corpus");
  }
  NgramCounts counts;
  counts.n_tags = tagset.size();
  counts.unigram.assign(counts.n_tags + 2, 0);
  const ExtTagId bos = counts.bos();
  const ExtTagId eos = counts.eos();
  for (const Sentence& sentence : corpus.sentences) {
    if (!sentence.tagged()) {
      fail(ErrorKind::FormatError, "cannot collect counts from an untagged sentence");
    }
    counts.sentence_total += 1;
    counts.unigram[bos] += 1;
    counts.unigram[eos] += 1;

    std::vector<ExtTagId> padded;
    padded.reserve(sentence.size() + 3);
    padded.push_back(bos);
    padded.push_back(bos);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const TagId tag = sentence.tags[i];
      padded.push_back(static_cast<ExtTagId>(tag));
      counts.unigram[tag] += 1;
      counts.token_total += 1;
      counts.word_tag[sentence.tokens[i].surface()][tag] += 1;
    }
    padded.push_back(eos);

    for (std::size_t i = 0; i + 1 < padded.size(); ++i) {
      counts.bigram[{padded[i], padded[i + 1]}] += 1;
    }
    for (std::size_t i = 0; i + 2 < padded.size(); ++i) {
      counts.trigram[{padded[i], padded[i + 1], padded[i + 2]}] += 1;
    }
  }
  return counts;
}

struct Lambdas {
  double l1 = 0.0;  // unigram weight
  double l2 = 0.0;  // bigram weight
  double l3 = 0.0;  // trigram weight
};

namespace detail {

// Leave-one-out relative frequency with the 0/0 := 0 convention.
inline double loo_ratio(std::uint64_t num, std::uint64_t den) {
  if (den <= 1) return 0.0;
  return static_cast<double>(num - 1) / static_cast<double>(den - 1);
}

}  // namespace detail

/// Deleted interpolation: each observed trigram votes its full count for the
/// order whose leave-one-out estimate is largest, ties going to the higher
/// order; the three accumulators are then normalized to sum to 1.
inline Lambdas estimate_lambdas(const NgramCounts& counts) {
  double acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  for (const auto& [key, c] : counts.trigram) {
    const auto [t1, t2, t3] = key;
    const double r3 = detail::loo_ratio(c, counts.big(t1, t2));
    const double r2 = detail::loo_ratio(counts.big(t2, t3), counts.uni(t2));
    const double r1 = detail::loo_ratio(counts.uni(t3), counts.token_total);
    const double weight = static_cast<double>(c);
    if (r3 >= r2 && r3 >= r1) {
      acc3 += weight;
    } else if (r2 >= r1) {
      acc2 += weight;
    } else {
      acc1 += weight;
    }
  }
  const double total = acc1 + acc2 + acc3;
  if (total <= 0.0) {
    fail(ErrorKind::DegenerateCounts, "no trigram evidence to estimate interpolation weights");
  }
  return Lambdas{acc1 / total, acc2 / total, acc3 / total};
}

}  // namespace semtag
