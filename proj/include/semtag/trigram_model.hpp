#pragma once

// Trigram hidden-Markov tagger: interpolated transitions, lexical emissions
// with a suffix model for unknown surfaces, and a beam Viterbi decoder that
// also reports the second-best path score.
//
// Scoring discipline: all path math is in natural-log space, accumulated
// strictly left to right as (... + transition) + emission per token, with a
// final + transition-to-EOS. Any oracle re-scoring a path must use the same
// order to reproduce the exact floating-point values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "semtag/corpus.hpp"
#include "semtag/error.hpp"
#include "semtag/ngram_counts.hpp"
#include "semtag/suffix_model.hpp"
#include "semtag/tagset.hpp"

namespace semtag {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct TrigramConfig {
  std::size_t beam_width = 20;  // states kept per position; 0 = exact search
  std::size_t max_suffix_len = 10;
  std::uint64_t rare_threshold = 10;
};

struct TrigramModel {
  NgramCounts counts;
  Lambdas lambdas;
  SuffixModel suffix;
  std::size_t beam_width = 20;
  const Tagset* tagset = &Tagset::builtin();

  ExtTagId bos() const { return counts.bos(); }
  ExtTagId eos() const { return counts.eos(); }
  std::size_t n_tags() const { return counts.n_tags; }

  /// log(λ1·P̂(t3) + λ2·P̂(t3|t2) + λ3·P̂(t3|t1,t2)); −∞ when all vanish.
  /// The unigram component is normalized by N + S so that each component row
  /// sums to 1 over tags ∪ {EOS} for histories observed in training.
  double transition_logprob(ExtTagId t1, ExtTagId t2, ExtTagId t3) const {
    double p = 0.0;
    const double n_plus_s =
        static_cast<double>(counts.token_total + counts.sentence_total);
    if (n_plus_s > 0.0) {
      p += lambdas.l1 * static_cast<double>(counts.uni(t3)) / n_plus_s;
    }
    if (counts.uni(t2) > 0) {
      p += lambdas.l2 * static_cast<double>(counts.big(t2, t3)) /
           static_cast<double>(counts.uni(t2));
    }
    if (counts.big(t1, t2) > 0) {
      p += lambdas.l3 * static_cast<double>(counts.tri(t1, t2, t3)) /
           static_cast<double>(counts.big(t1, t2));
    }
    return p > 0.0 ? std::log(p) : kNegInf;
  }

  bool known_surface(const std::string& surface) const {
    return counts.word_tag.count(surface) > 0;
  }

  /// Known surfaces: log f(surface,tag)/f(tag). Unknown surfaces: Bayes
  /// inversion of the suffix distribution, log P(tag|suffix)/P(tag), with the
  /// constant word prior dropped.
  double emission_logprob(const std::string& surface, TagId tag) const {
    auto it = counts.word_tag.find(surface);
    if (it != counts.word_tag.end()) {
      auto jt = it->second.find(tag);
      if (jt == it->second.end()) return kNegInf;
      return std::log(static_cast<double>(jt->second) /
                      static_cast<double>(counts.uni(static_cast<ExtTagId>(tag))));
    }
    const std::map<TagId, double>* dist = suffix.lookup(surface);
    if (!dist) return kNegInf;
    auto jt = dist->find(tag);
    if (jt == dist->end() || jt->second <= 0.0) return kNegInf;
    const double p_tag = static_cast<double>(counts.uni(static_cast<ExtTagId>(tag))) /
                         static_cast<double>(counts.token_total);
    if (p_tag <= 0.0) return kNegInf;
    return std::log(jt->second / p_tag);
  }

  /// Corpus-wide most frequent tag; ties go to the lower tag id.
  TagId most_frequent_tag() const {
    TagId best = 0;
    std::uint64_t best_count = 0;
    for (std::size_t t = 0; t < counts.n_tags; ++t) {
      if (counts.unigram[t] > best_count) {
        best_count = counts.unigram[t];
        best = static_cast<TagId>(t);
      }
    }
    return best;
  }
};

inline TrigramModel train_trigram(const Corpus& corpus, const TrigramConfig& config = {},
                                  const Tagset& tagset = Tagset::builtin()) {
  TrigramModel model;
  model.counts = collect_counts(corpus, tagset);
  model.lambdas = estimate_lambdas(model.counts);
  model.suffix = train_suffix_model(model.counts, config.max_suffix_len, config.rare_threshold);
  model.beam_width = config.beam_width;
  model.tagset = &tagset;
  return model;
}

struct DecodeResult {
  std::vector<TagId> tags;
  double best_score = kNegInf;    // joint log-score incl. boundary transitions
  double second_score = kNegInf;  // best score over distinct runner-up paths
  bool used_fallback = false;     // every path was −∞; per-token fallback used
};

namespace detail {

struct ViterbiState {
  ExtTagId u = 0;  // tag at position i−1 (BOS at the first position)
  ExtTagId v = 0;  // tag at position i
  double best = kNegInf;
  double second = kNegInf;  // best among paths into this state that differ from `best`
  std::int32_t bp = -1;     // index of the best predecessor in the previous layer
};

/// Tags along the best path into layers[li][si], earliest first.
inline std::vector<TagId> viterbi_path(const std::vector<std::vector<ViterbiState>>& layers,
                                       std::size_t li, std::int32_t si) {
  std::vector<TagId> tags(li + 1);
  for (std::size_t i = li + 1; i-- > 0;) {
    const ViterbiState& state = layers[i][static_cast<std::size_t>(si)];
    tags[i] = static_cast<TagId>(state.v);
    si = state.bp;
  }
  return tags;
}

/// Per-token fallback when no finite-score path exists: emission argmax,
/// then the corpus-wide most frequent tag; ties go to the lower tag id.
inline std::vector<TagId> fallback_sequence(const TrigramModel& model, const Sentence& sentence) {
  std::vector<TagId> tags;
  tags.reserve(sentence.size());
  for (const Token& token : sentence.tokens) {
    const std::string surface = token.surface();
    TagId best = model.most_frequent_tag();
    double best_score = kNegInf;
    for (std::size_t t = 0; t < model.n_tags(); ++t) {
      const double e = model.emission_logprob(surface, static_cast<TagId>(t));
      if (e > best_score) {
        best_score = e;
        best = static_cast<TagId>(t);
      }
    }
    tags.push_back(best);
  }
  return tags;
}

}  // namespace detail

/// Beam Viterbi over states (t_{i−1}, t_i). Candidate tags per token are
/// those with finite emission score. Score ties between distinct optimal
/// paths resolve to the sequence that is lexicographically smallest in tag
/// ids; `second_score` is the score of the best path different from the
/// returned one (−∞ when no alternative exists).
inline DecodeResult decode(const TrigramModel& model, const Sentence& sentence,
                           std::size_t beam_width) {
  if (sentence.size() == 0) fail(ErrorKind::EmptySentence, "cannot decode an empty sentence");
  using detail::ViterbiState;

  const std::size_t n = sentence.size();
  std::vector<std::string> surfaces(n);
  for (std::size_t i = 0; i < n; ++i) surfaces[i] = sentence.tokens[i].surface();

  // Emission table and candidate sets.
  std::vector<std::vector<ExtTagId>> cands(n);
  std::vector<std::vector<double>> emit(n);
  bool any_empty = false;
  for (std::size_t i = 0; i < n; ++i) {
    emit[i].assign(model.n_tags(), kNegInf);
    for (std::size_t t = 0; t < model.n_tags(); ++t) {
      const double e = model.emission_logprob(surfaces[i], static_cast<TagId>(t));
      emit[i][t] = e;
      if (e > kNegInf) cands[i].push_back(static_cast<ExtTagId>(t));
    }
    if (cands[i].empty()) any_empty = true;
  }

  DecodeResult result;
  if (any_empty) {
    result.tags = detail::fallback_sequence(model, sentence);
    result.used_fallback = true;
    return result;
  }

  const ExtTagId bos = model.bos();
  std::vector<std::vector<ViterbiState>> layers(n);

  layers[0].reserve(cands[0].size());
  for (ExtTagId v : cands[0]) {
    double score = model.transition_logprob(bos, bos, v);
    score += emit[0][v];
    if (score == kNegInf) continue;
    ViterbiState state;
    state.u = bos;
    state.v = v;
    state.best = score;
    layers[0].push_back(state);
  }

  auto prune = [&](std::vector<ViterbiState>& layer) {
    std::sort(layer.begin(), layer.end(), [](const ViterbiState& a, const ViterbiState& b) {
      if (a.best != b.best) return a.best > b.best;
      if (a.u != b.u) return a.u < b.u;
      return a.v < b.v;
    });
    if (beam_width > 0 && layer.size() > beam_width) layer.resize(beam_width);
  };
  prune(layers[0]);

  for (std::size_t i = 1; i < n && !layers[i - 1].empty(); ++i) {
    const std::vector<ViterbiState>& prev = layers[i - 1];
    std::vector<ViterbiState>& cur = layers[i];
    // One merged state per (prev.v, w); index by prev.v for each w.
    for (ExtTagId w : cands[i]) {
      std::map<ExtTagId, std::size_t> by_middle;
      for (std::size_t p = 0; p < prev.size(); ++p) {
        double score = prev[p].best + model.transition_logprob(prev[p].u, prev[p].v, w);
        score += emit[i][w];
        double alt = prev[p].second + model.transition_logprob(prev[p].u, prev[p].v, w);
        alt += emit[i][w];
        if (score == kNegInf) continue;
        auto [it, inserted] = by_middle.try_emplace(prev[p].v, cur.size());
        if (inserted) {
          ViterbiState state;
          state.u = prev[p].v;
          state.v = w;
          state.best = score;
          state.second = alt;
          state.bp = static_cast<std::int32_t>(p);
          cur.push_back(state);
          continue;
        }
        ViterbiState& state = cur[it->second];
        if (score > state.best) {
          state.second = std::max(state.best, alt);
          state.best = score;
          state.bp = static_cast<std::int32_t>(p);
        } else if (score == state.best) {
          // Exact tie between distinct paths: keep the lexicographically
          // smaller prefix, and record the tie as the runner-up score.
          state.second = std::max(state.second, score);
          const auto a = detail::viterbi_path(layers, i - 1, state.bp);
          const auto b = detail::viterbi_path(layers, i - 1, static_cast<std::int32_t>(p));
          if (b < a) state.bp = static_cast<std::int32_t>(p);
          state.second = std::max(state.second, alt);
        } else {
          state.second = std::max(state.second, score);
        }
      }
    }
    prune(cur);
  }

  // Close paths with the transition into EOS.
  std::int32_t best_index = -1;
  double best_total = kNegInf;
  double second_total = kNegInf;
  const std::vector<ViterbiState>& last = layers[n - 1];
  for (std::size_t s = 0; s < last.size(); ++s) {
    const double close = model.transition_logprob(last[s].u, last[s].v, model.eos());
    const double total = last[s].best + close;
    const double alt = last[s].second + close;
    if (total > best_total) {
      second_total = std::max(second_total, best_total);
      best_total = total;
      best_index = static_cast<std::int32_t>(s);
    } else if (total == best_total && total > kNegInf) {
      second_total = std::max(second_total, total);
      const auto a = detail::viterbi_path(layers, n - 1, best_index);
      const auto b = detail::viterbi_path(layers, n - 1, static_cast<std::int32_t>(s));
      if (b < a) best_index = static_cast<std::int32_t>(s);
    } else {
      second_total = std::max(second_total, total);
    }
    second_total = std::max(second_total, alt);
  }

  if (best_index < 0 || best_total == kNegInf) {
    result.tags = detail::fallback_sequence(model, sentence);
    result.used_fallback = true;
    return result;
  }
  result.tags = detail::viterbi_path(layers, n - 1, best_index);
  result.best_score = best_total;
  result.second_score = second_total;
  return result;
}

inline std::vector<TagId> viterbi_decode(const TrigramModel& model, const Sentence& sentence) {
  return decode(model, sentence, model.beam_width).tags;
}

/// Decodes a whole corpus, preserving sentence boundaries.
inline std::vector<std::vector<TagId>> viterbi_decode_corpus(const TrigramModel& model,
                                                             const Corpus& corpus) {
  std::vector<std::vector<TagId>> out;
  out.reserve(corpus.sentences.size());
  for (const Sentence& sentence : corpus.sentences) {
    out.push_back(viterbi_decode(model, sentence));
  }
  return out;
}

}  // namespace semtag
