#pragma once

// Unknown-word emission model: tag distributions conditioned on word-final
// character sequences, estimated from rare training words and smoothed by
// successive abstraction toward shorter suffixes.
//
// Two variants are kept, split on the first byte of the full surface
// (A–Z selects the capitalized table). Suffixes are byte sequences taken
// from the last part of a multiword token. Stored distributions are the
// final smoothed P(tag|suffix) values, so lookups never recompute the
// recursion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semtag/ngram_counts.hpp"

namespace semtag {

struct SuffixModel {
  std::size_t max_suffix_len = 10;
  std::uint64_t rare_threshold = 10;
  double theta = 0.0;
  std::map<std::string, std::map<TagId, double>> lower;  // P(tag | suffix)
  std::map<std::string, std::map<TagId, double>> upper;

  bool empty() const { return lower.empty() && upper.empty(); }

  static bool capitalized(const std::string& surface) {
    return !surface.empty() && surface.front() >= 'A' && surface.front() <= 'Z';
  }

  static std::string last_part(const std::string& surface) {
    const std::size_t pos = surface.rfind(kJoiner);
    return pos == std::string::npos ? surface : surface.substr(pos + 1);
  }

  /// Longest-suffix lookup for an unknown surface. Falls back to the other
  /// capitalization variant when the preferred one saw no rare words at all;
  /// returns nullptr only when both tables are empty.
  const std::map<TagId, double>* lookup(const std::string& surface) const {
    const auto* primary = capitalized(surface) ? &upper : &lower;
    const auto* other = capitalized(surface) ? &lower : &upper;
    const auto* table = primary->empty() ? other : primary;
    if (table->empty()) return nullptr;
    const std::string part = last_part(surface);
    for (std::size_t len = std::min(max_suffix_len, part.size());; --len) {
      auto it = table->find(part.substr(part.size() - len));
      if (it != table->end()) return &it->second;
      if (len == 0) break;
    }
    return nullptr;
  }
};

namespace detail {

inline std::map<std::string, std::map<TagId, double>> smooth_suffix_counts(
    const std::map<std::string, std::map<TagId, std::uint64_t>>& raw, double theta) {
  // Order suffixes shortest-first so each parent (the suffix minus its first
  // byte) is always smoothed before its children.
  std::vector<const std::string*> order;
  order.reserve(raw.size());
  for (const auto& [suffix, tags] : raw) order.push_back(&suffix);
  std::sort(order.begin(), order.end(), [](const std::string* a, const std::string* b) {
    if (a->size() != b->size()) return a->size() < b->size();
    return *a < *b;
  });

  std::map<std::string, std::map<TagId, double>> smoothed;
  for (const std::string* key : order) {
    const auto& tag_counts = raw.at(*key);
    std::uint64_t total = 0;
    for (const auto& [tag, count] : tag_counts) total += count;

    const std::map<TagId, double>* parent = nullptr;
    if (!key->empty()) parent = &smoothed.at(key->substr(1));

    std::map<TagId, double> dist;
    auto blend = [&](TagId tag) {
      double ml = 0.0;
      if (auto it = tag_counts.find(tag); it != tag_counts.end()) {
        ml = static_cast<double>(it->second) / static_cast<double>(total);
      }
      if (!parent) {  // empty suffix: unsmoothed ML base of the recursion
        if (ml > 0.0) dist[tag] = ml;
        return;
      }
      double prior = 0.0;
      if (auto it = parent->find(tag); it != parent->end()) prior = it->second;
      const double p = (ml + theta * prior) / (1.0 + theta);
      if (p > 0.0) dist[tag] = p;
    };
    for (const auto& [tag, count] : tag_counts) blend(tag);
    if (parent) {
      for (const auto& [tag, prior] : *parent) {
        if (!dist.count(tag)) blend(tag);
      }
    }
    smoothed[*key] = std::move(dist);
  }
  return smoothed;
}

}  // namespace detail

/// theta is the sample standard deviation of the unconditional tag
/// probabilities over tags observed in training (0 when fewer than two).
inline double suffix_theta(const NgramCounts& counts) {
  std::vector<double> probs;
  for (std::size_t t = 0; t < counts.n_tags; ++t) {
    if (counts.unigram[t] > 0) {
      probs.push_back(static_cast<double>(counts.unigram[t]) /
                      static_cast<double>(counts.token_total));
    }
  }
  if (probs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double p : probs) mean += p;
  mean /= static_cast<double>(probs.size());
  double var = 0.0;
  for (double p : probs) var += (p - mean) * (p - mean);
  var /= static_cast<double>(probs.size() - 1);
  return std::sqrt(var);
}

inline SuffixModel train_suffix_model(const NgramCounts& counts, std::size_t max_suffix_len = 10,
                                      std::uint64_t rare_threshold = 10) {
  SuffixModel model;
  model.max_suffix_len = max_suffix_len;
  model.rare_threshold = rare_threshold;
  model.theta = suffix_theta(counts);

  std::map<std::string, std::map<TagId, std::uint64_t>> raw_lower, raw_upper;
  for (const auto& [surface, tag_counts] : counts.word_tag) {
    std::uint64_t freq = 0;
    for (const auto& [tag, count] : tag_counts) freq += count;
    if (freq > rare_threshold) continue;
    auto& raw = SuffixModel::capitalized(surface) ? raw_upper : raw_lower;
    const std::string part = SuffixModel::last_part(surface);
    const std::size_t limit = std::min(max_suffix_len, part.size());
    for (std::size_t len = 0; len <= limit; ++len) {
      auto& cell = raw[part.substr(part.size() - len)];
      for (const auto& [tag, count] : tag_counts) cell[tag] += count;
    }
  }
  model.lower = detail::smooth_suffix_counts(raw_lower, model.theta);
  model.upper = detail::smooth_suffix_counts(raw_upper, model.theta);
  return model;
}

}  // namespace semtag
