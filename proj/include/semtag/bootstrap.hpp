#pragma once

// Self-training: train on the seed, tag the unlabeled pool, promote the
// most confident sentences (predicted tags and all) into the training set,
// retrain. Held-out accuracy both stops the loop when it stalls and picks
// the model that is ultimately returned, so a later, worse iteration can
// never displace an earlier, better one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semtag/corpus.hpp"
#include "semtag/error.hpp"
#include "semtag/eval.hpp"
#include "semtag/tagset.hpp"
#include "semtag/trigram_model.hpp"

namespace semtag {

struct BootstrapConfig {
  std::size_t max_iterations = 5;
  double confidence_threshold = 0.9;  // promote sentences at or above this
  std::size_t promote_cap = 100;      // max promotions per iteration
  double stop_delta = 0.0;            // min held-out gain to keep iterating
};

inline void validate(const BootstrapConfig& config) {
  if (config.max_iterations == 0) {
    fail(ErrorKind::ConfigError, "max_iterations must be positive");
  }
  if (config.promote_cap == 0) fail(ErrorKind::ConfigError, "promote_cap must be positive");
  if (!(config.confidence_threshold > 0.0) || config.confidence_threshold > 1.0) {
    fail(ErrorKind::ConfigError, "confidence_threshold must be in (0, 1]");
  }
  if (config.stop_delta < 0.0) fail(ErrorKind::ConfigError, "stop_delta must be non-negative");
}

/// Length-normalized best-vs-second-best decoding margin mapped into
/// [0, 1]: 1 − exp(−margin/length). A single possible path is fully
/// trusted, a tie (or emission fallback) not at all.
inline double decode_confidence(const DecodeResult& result, std::size_t length) {
  if (result.used_fallback || length == 0) return 0.0;
  if (result.second_score == kNegInf) return 1.0;
  const double margin = result.best_score - result.second_score;
  if (margin <= 0.0) return 0.0;
  return 1.0 - std::exp(-margin / static_cast<double>(length));
}

inline double sentence_confidence(const TrigramModel& model, const Sentence& sentence) {
  return decode_confidence(decode(model, sentence, model.beam_width), sentence.size());
}

struct BootstrapIteration {
  std::uint64_t training_sentences = 0;  // size of the corpus this model saw
  std::uint64_t promoted = 0;            // pool sentences promoted afterwards
  double heldout_accuracy = 0.0;
};

struct BootstrapReport {
  std::vector<BootstrapIteration> iterations;
  std::size_t best_iteration = 0;  // 1-based, earliest on accuracy ties
  Corpus augmented;                // seed plus every promoted sentence
};

struct BootstrapResult {
  TrigramModel model;  // the best-by-held-out iteration's model
  BootstrapReport report;
};

/// Runs the self-training loop. Each iteration trains, scores on the
/// held-out corpus, then promotes up to promote_cap pool sentences with
/// confidence ≥ threshold (ties kept in pool order). The loop ends at
/// max_iterations, on an empty promotion round, or once the held-out gain
/// over the previous iteration falls below stop_delta.
inline BootstrapResult bootstrap(const Corpus& seed, const Corpus& unlabeled,
                                 const Corpus& heldout, const BootstrapConfig& config = {},
                                 const TrigramConfig& tagger_config = {},
                                 const Tagset& tagset = Tagset::builtin()) {
  validate(config);
  if (seed.sentences.empty()) fail(ErrorKind::EmptySeed, "seed corpus is empty");

  BootstrapResult out;
  Corpus training = seed;
  std::vector<Sentence> pool = unlabeled.sentences;

  double best_accuracy = -1.0;
  double previous_accuracy = 0.0;
  for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
    TrigramModel model = train_trigram(training, tagger_config, tagset);
    const EvalReport score = evaluate(heldout, viterbi_decode_corpus(model, heldout), tagset);

    BootstrapIteration row;
    row.training_sentences = training.sentences.size();
    row.heldout_accuracy = score.accuracy;
    if (score.accuracy > best_accuracy) {
      best_accuracy = score.accuracy;
      out.report.best_iteration = iteration;
      out.model = model;
    }
    if (iteration > 1 && score.accuracy - previous_accuracy < config.stop_delta) {
      out.report.iterations.push_back(row);  // stalled: stop before promoting
      break;
    }
    previous_accuracy = score.accuracy;

    // Rank the pool by confidence, pool order breaking ties.
    std::vector<std::pair<double, std::size_t>> ranked;
    std::vector<std::vector<TagId>> predicted(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      Sentence plain;
      plain.tokens = pool[i].tokens;
      DecodeResult result = decode(model, plain, model.beam_width);
      const double confidence = decode_confidence(result, plain.size());
      predicted[i] = std::move(result.tags);
      if (confidence >= config.confidence_threshold) ranked.emplace_back(confidence, i);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (ranked.size() > config.promote_cap) ranked.resize(config.promote_cap);

    std::vector<bool> take(pool.size(), false);
    for (const auto& [confidence, index] : ranked) take[index] = true;
    std::vector<Sentence> kept;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (take[i]) {
        training.sentences.push_back(
            Sentence::tagged_with(pool[i].tokens, std::move(predicted[i])));
      } else {
        kept.push_back(std::move(pool[i]));
      }
    }
    pool = std::move(kept);

    row.promoted = ranked.size();
    out.report.iterations.push_back(row);
    if (row.promoted == 0) break;
  }

  out.report.augmented = std::move(training);
  return out;
}

/// Per-iteration rows in the eval module's tab-separated style.
inline std::string render_bootstrap_text(const BootstrapReport& report) {
  std::string out = "iteration\ttraining\tpromoted\theldout-accuracy\n";
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    const BootstrapIteration& row = report.iterations[i];
    out += std::to_string(i + 1) + "\t" + std::to_string(row.training_sentences) + "\t" +
           std::to_string(row.promoted) + "\t" +
           detail::fmt_double(row.heldout_accuracy, "%.4f") + "\n";
  }
  out += "best-iteration\t" + std::to_string(report.best_iteration) + "\n";
  return out;
}

}  // namespace semtag
