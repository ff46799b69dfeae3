#pragma once

// Scoring of predicted tag sequences against gold corpora: token accuracy,
// per-tag precision/recall/F1, a confusion table, per-meta-tag accuracy, and
// a pairwise report comparison with McNemar-style disagreement cells.

#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "semtag/corpus.hpp"
#include "semtag/error.hpp"
#include "semtag/tagset.hpp"

namespace semtag {

struct TagScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;         // gold occurrences
  bool degenerate_precision = false;  // tag never predicted
  bool degenerate_recall = false;     // tag never in gold
};

struct EvalReport {
  std::uint64_t token_total = 0;
  std::uint64_t correct = 0;
  double accuracy = 0.0;
  std::map<TagId, TagScore> per_tag;  // tags present in gold or predictions
  std::map<std::pair<TagId, TagId>, std::uint64_t> confusion;  // (gold, predicted)
  std::map<MetaId, double> per_meta_accuracy;  // meta-match rate per gold meta
  double meta_accuracy = 0.0;                  // meta-match rate overall
  std::vector<bool> correct_flags;  // one per token in corpus order
};

inline EvalReport evaluate(const Corpus& gold, const std::vector<std::vector<TagId>>& predicted,
                           const Tagset& tagset = Tagset::builtin()) {
  if (predicted.size() != gold.sentences.size()) {
    fail(ErrorKind::AlignmentError,
         "prediction has " + std::to_string(predicted.size()) + " sentences, gold has " +
             std::to_string(gold.sentences.size()));
  }
  EvalReport report;
  std::map<TagId, std::uint64_t> gold_count, pred_count, match_count;
  std::map<MetaId, std::uint64_t> meta_gold, meta_match;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const Sentence& sentence = gold.sentences[s];
    if (!sentence.tagged()) {
      fail(ErrorKind::FormatError, "gold sentence " + std::to_string(s) + " is untagged");
    }
    if (predicted[s].size() != sentence.size()) {
      fail(ErrorKind::AlignmentError,
           "length mismatch at sentence " + std::to_string(s) + ": gold " +
               std::to_string(sentence.size()) + " tokens, predicted " +
               std::to_string(predicted[s].size()));
    }
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      const TagId g = sentence.tags[t];
      const TagId p = predicted[s][t];
      report.token_total += 1;
      gold_count[g] += 1;
      pred_count[p] += 1;
      report.confusion[{g, p}] += 1;
      const bool right = (g == p);
      if (right) {
        report.correct += 1;
        match_count[g] += 1;
      }
      report.correct_flags.push_back(right);
      const MetaId gm = tagset.tag(g).meta;
      meta_gold[gm] += 1;
      if (gm == tagset.tag(p).meta) {
        meta_match[gm] += 1;
        report.meta_accuracy += 1.0;  // running count; normalized below
      }
    }
  }
  if (report.token_total == 0) {
    fail(ErrorKind::EmptyCorpus, "cannot evaluate an empty corpus");
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.token_total);
  report.meta_accuracy /= static_cast<double>(report.token_total);

  std::map<TagId, bool> seen;
  for (const auto& [tag, count] : gold_count) seen[tag] = true;
  for (const auto& [tag, count] : pred_count) seen[tag] = true;
  for (const auto& [tag, unused] : seen) {
    TagScore score;
    const std::uint64_t tp = match_count.count(tag) ? match_count[tag] : 0;
    const std::uint64_t in_gold = gold_count.count(tag) ? gold_count[tag] : 0;
    const std::uint64_t in_pred = pred_count.count(tag) ? pred_count[tag] : 0;
    score.support = in_gold;
    if (in_pred == 0) {
      score.degenerate_precision = true;
    } else {
      score.precision = static_cast<double>(tp) / static_cast<double>(in_pred);
    }
    if (in_gold == 0) {
      score.degenerate_recall = true;
    } else {
      score.recall = static_cast<double>(tp) / static_cast<double>(in_gold);
    }
    if (score.precision + score.recall > 0.0) {
      score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
    }
    report.per_tag[tag] = score;
  }
  for (const auto& [meta, total] : meta_gold) {
    const std::uint64_t hits = meta_match.count(meta) ? meta_match[meta] : 0;
    report.per_meta_accuracy[meta] =
        static_cast<double>(hits) / static_cast<double>(total);
  }
  return report;
}

/// Evaluates a predicted tagged corpus, additionally requiring the surfaces
/// to match the gold corpus token for token.
inline EvalReport evaluate(const Corpus& gold, const Corpus& predicted,
                           const Tagset& tagset = Tagset::builtin()) {
  if (predicted.sentences.size() != gold.sentences.size()) {
    fail(ErrorKind::AlignmentError,
         "prediction has " + std::to_string(predicted.sentences.size()) + " sentences, gold has " +
             std::to_string(gold.sentences.size()));
  }
  std::vector<std::vector<TagId>> tags;
  tags.reserve(predicted.sentences.size());
  for (std::size_t s = 0; s < predicted.sentences.size(); ++s) {
    const Sentence& pred = predicted.sentences[s];
    if (!pred.tagged()) {
      fail(ErrorKind::FormatError, "predicted sentence " + std::to_string(s) + " is untagged");
    }
    if (pred.tokens != gold.sentences[s].tokens) {
      fail(ErrorKind::AlignmentError, "surface mismatch at sentence " + std::to_string(s));
    }
    tags.push_back(pred.tags);
  }
  return evaluate(gold, tags, tagset);
}

struct ComparisonSummary {
  double accuracy_a = 0.0;
  double accuracy_b = 0.0;
  double delta = 0.0;  // accuracy_a − accuracy_b
  std::map<TagId, double> f1_delta;
  std::uint64_t both_right = 0;
  std::uint64_t only_a = 0;
  std::uint64_t only_b = 0;
  std::uint64_t both_wrong = 0;
};

/// Both reports must have been computed against the same gold corpus in the
/// same sentence order; token totals are the proxy check.
inline ComparisonSummary compare(const EvalReport& a, const EvalReport& b) {
  if (a.token_total != b.token_total || a.correct_flags.size() != b.correct_flags.size()) {
    fail(ErrorKind::IncomparableReports,
         "reports cover different corpora: " + std::to_string(a.token_total) + " vs " +
             std::to_string(b.token_total) + " tokens");
  }
  ComparisonSummary summary;
  summary.accuracy_a = a.accuracy;
  summary.accuracy_b = b.accuracy;
  summary.delta = a.accuracy - b.accuracy;
  for (const auto& [tag, score] : a.per_tag) {
    const double other = b.per_tag.count(tag) ? b.per_tag.at(tag).f1 : 0.0;
    summary.f1_delta[tag] = score.f1 - other;
  }
  for (const auto& [tag, score] : b.per_tag) {
    if (!a.per_tag.count(tag)) summary.f1_delta[tag] = 0.0 - score.f1;
  }
  for (std::size_t i = 0; i < a.correct_flags.size(); ++i) {
    const bool ra = a.correct_flags[i], rb = b.correct_flags[i];
    if (ra && rb) {
      summary.both_right += 1;
    } else if (ra) {
      summary.only_a += 1;
    } else if (rb) {
      summary.only_b += 1;
    } else {
      summary.both_wrong += 1;
    }
  }
  return summary;
}

namespace detail {

inline std::string fmt_double(double value, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, value);
  return buf;
}

}  // namespace detail

/// Human-readable report.
inline std::string render_text(const EvalReport& report, const Tagset& tagset = Tagset::builtin()) {
  std::string out;
  out += "tokens\t" + std::to_string(report.token_total) + "\n";
  out += "correct\t" + std::to_string(report.correct) + "\n";
  out += "accuracy\t" + detail::fmt_double(report.accuracy, "%.4f") + "\n";
  out += "meta-accuracy\t" + detail::fmt_double(report.meta_accuracy, "%.4f") + "\n";
  out += "\ntag\tprecision\trecall\tf1\tsupport\n";
  for (const auto& [tag, score] : report.per_tag) {
    out += tagset.tag(tag).code;
    out += "\t" + (score.degenerate_precision ? std::string("-")
                                              : detail::fmt_double(score.precision, "%.4f"));
    out += "\t" + (score.degenerate_recall ? std::string("-")
                                           : detail::fmt_double(score.recall, "%.4f"));
    out += "\t" + detail::fmt_double(score.f1, "%.4f");
    out += "\t" + std::to_string(score.support) + "\n";
  }
  out += "\nmeta\taccuracy\n";
  for (const auto& [meta, value] : report.per_meta_accuracy) {
    out += tagset.meta(meta).code + "\t" + detail::fmt_double(value, "%.4f") + "\n";
  }
  return out;
}

/// Machine-readable `metric<TAB>key<TAB>value` lines, full precision.
inline std::string render_tsv(const EvalReport& report, const Tagset& tagset = Tagset::builtin()) {
  std::string out;
  out += "tokens\t-\t" + std::to_string(report.token_total) + "\n";
  out += "correct\t-\t" + std::to_string(report.correct) + "\n";
  out += "accuracy\t-\t" + detail::fmt_double(report.accuracy) + "\n";
  out += "meta-accuracy\t-\t" + detail::fmt_double(report.meta_accuracy) + "\n";
  for (const auto& [tag, score] : report.per_tag) {
    const std::string& code = tagset.tag(tag).code;
    out += "precision\t" + code + "\t" +
           (score.degenerate_precision ? std::string("-") : detail::fmt_double(score.precision)) +
           "\n";
    out += "recall\t" + code + "\t" +
           (score.degenerate_recall ? std::string("-") : detail::fmt_double(score.recall)) + "\n";
    out += "f1\t" + code + "\t" + detail::fmt_double(score.f1) + "\n";
    out += "support\t" + code + "\t" + std::to_string(score.support) + "\n";
  }
  for (const auto& [meta, value] : report.per_meta_accuracy) {
    out += "meta-accuracy\t" + tagset.meta(meta).code + "\t" + detail::fmt_double(value) + "\n";
  }
  for (const auto& [key, count] : report.confusion) {
    if (key.first == key.second) continue;  // only mistaggings are interesting
    out += "confusion\t" + tagset.tag(key.first).code + ">" + tagset.tag(key.second).code + "\t" +
           std::to_string(count) + "\n";
  }
  return out;
}

inline std::string render_comparison_text(const ComparisonSummary& summary,
                                          const Tagset& tagset = Tagset::builtin()) {
  std::string out;
  out += "accuracy-a\t" + detail::fmt_double(summary.accuracy_a, "%.4f") + "\n";
  out += "accuracy-b\t" + detail::fmt_double(summary.accuracy_b, "%.4f") + "\n";
  out += "delta\t" + detail::fmt_double(summary.delta, "%+.4f") + "\n";
  out += "both-right\t" + std::to_string(summary.both_right) + "\n";
  out += "only-a\t" + std::to_string(summary.only_a) + "\n";
  out += "only-b\t" + std::to_string(summary.only_b) + "\n";
  out += "both-wrong\t" + std::to_string(summary.both_wrong) + "\n";
  out += "\ntag\tf1-delta\n";
  for (const auto& [tag, delta] : summary.f1_delta) {
    out += tagset.tag(tag).code + "\t" + detail::fmt_double(delta, "%+.4f") + "\n";
  }
  return out;
}

/// `metric<TAB>key<TAB>value` lines for the comparison, full precision.
inline std::string render_comparison_tsv(const ComparisonSummary& summary,
                                         const Tagset& tagset = Tagset::builtin()) {
  std::string out;
  out += "accuracy\ta\t" + detail::fmt_double(summary.accuracy_a) + "\n";
  out += "accuracy\tb\t" + detail::fmt_double(summary.accuracy_b) + "\n";
  out += "delta\t-\t" + detail::fmt_double(summary.delta) + "\n";
  out += "cell\tboth-right\t" + std::to_string(summary.both_right) + "\n";
  out += "cell\tonly-a\t" + std::to_string(summary.only_a) + "\n";
  out += "cell\tonly-b\t" + std::to_string(summary.only_b) + "\n";
  out += "cell\tboth-wrong\t" + std::to_string(summary.both_wrong) + "\n";
  for (const auto& [tag, delta] : summary.f1_delta) {
    out += "f1-delta\t" + tagset.tag(tag).code + "\t" + detail::fmt_double(delta) + "\n";
  }
  return out;
}

}  // namespace semtag
