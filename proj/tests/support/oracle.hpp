#pragma once

// Exhaustive-search decoding oracle. Independent of the production decoder:
// enumerates every tag sequence over the tags observed in training, scores
// each path with the same left-to-right accumulation order the decoder uses,
// and returns the argmax with ties going to the lexicographically smallest
// sequence. Mirrors the decoder's fallback rule when every path is -inf.

#include <string>
#include <vector>

#include "semtag/trigram_model.hpp"

namespace testsupport {

struct OracleResult {
  std::vector<semtag::TagId> tags;
  double score = semtag::kNegInf;
  double second = semtag::kNegInf;  // best score among distinct non-optimal paths
  bool used_fallback = false;
};

/// With `restrict_to_candidates`, each position enumerates only tags whose
/// emission is finite — lossless for the argmax, since a path through an
/// impossible emission scores -inf, and feasible for large tagsets.
inline OracleResult brute_force_decode(const semtag::TrigramModel& model,
                                       const semtag::Sentence& sentence,
                                       bool restrict_to_candidates = false) {
  using semtag::ExtTagId;
  using semtag::TagId;
  const std::size_t n = sentence.size();

  std::vector<std::string> surfaces(n);
  for (std::size_t i = 0; i < n; ++i) surfaces[i] = sentence.tokens[i].surface();

  std::vector<TagId> observed;
  for (std::size_t t = 0; t < model.n_tags(); ++t) {
    if (model.counts.unigram[t] > 0) observed.push_back(static_cast<TagId>(t));
  }
  std::vector<std::vector<TagId>> domain(n, observed);
  bool impossible = observed.empty();
  if (restrict_to_candidates) {
    for (std::size_t i = 0; i < n; ++i) {
      domain[i].clear();
      for (std::size_t t = 0; t < model.n_tags(); ++t) {
        if (model.emission_logprob(surfaces[i], static_cast<TagId>(t)) > semtag::kNegInf) {
          domain[i].push_back(static_cast<TagId>(t));
        }
      }
      if (domain[i].empty()) impossible = true;
    }
  }

  OracleResult result;
  std::vector<std::size_t> pick(n, 0);  // odometer over per-position domains
  bool done = impossible;
  while (!done) {
    double score = 0.0;
    ExtTagId t1 = model.bos(), t2 = model.bos();
    for (std::size_t i = 0; i < n; ++i) {
      const ExtTagId t3 = static_cast<ExtTagId>(domain[i][pick[i]]);
      score += model.transition_logprob(t1, t2, t3);
      score += model.emission_logprob(surfaces[i], domain[i][pick[i]]);
      t1 = t2;
      t2 = t3;
    }
    score += model.transition_logprob(t1, t2, model.eos());

    if (score > result.score) {
      result.second = result.score;
      std::vector<TagId> tags(n);
      for (std::size_t i = 0; i < n; ++i) tags[i] = domain[i][pick[i]];
      result.tags = std::move(tags);
      result.score = score;
    } else {
      // Enumeration ascends lexicographically, so an equal score never
      // replaces the incumbent; it is a distinct runner-up path.
      if (score > result.second) result.second = score;
    }

    std::size_t pos = n;
    while (pos-- > 0) {
      if (++pick[pos] < domain[pos].size()) break;
      pick[pos] = 0;
      if (pos == 0) done = true;
    }
    if (n == 0) done = true;
  }

  if (result.score == semtag::kNegInf) {
    result.used_fallback = true;
    result.tags.clear();
    for (std::size_t i = 0; i < n; ++i) {
      TagId best = 0;
      double best_emit = semtag::kNegInf;
      for (std::size_t t = 0; t < model.n_tags(); ++t) {
        const double e = model.emission_logprob(surfaces[i], static_cast<TagId>(t));
        if (e > best_emit) {
          best_emit = e;
          best = static_cast<TagId>(t);
        }
      }
      if (best_emit == semtag::kNegInf) {
        std::uint64_t top = 0;
        for (std::size_t t = 0; t < model.n_tags(); ++t) {
          if (model.counts.unigram[t] > top) {
            top = model.counts.unigram[t];
            best = static_cast<TagId>(t);
          }
        }
      }
      result.tags.push_back(best);
    }
  }
  return result;
}

}  // namespace testsupport
