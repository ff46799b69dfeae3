#pragma once

// Most-frequent-tag-per-word baseline: context-free lookup with a corpus-wide
// default for unseen surfaces. All ties break toward the lower tag id.

#include <map>
#include <string>
#include <vector>

#include "semtag/corpus.hpp"
#include "semtag/error.hpp"
#include "semtag/ngram_counts.hpp"
#include "semtag/tagset.hpp"

namespace semtag {

struct BaselineModel {
  std::map<std::string, TagId> best_tag;
  TagId global_default = 0;
  const Tagset* tagset = &Tagset::builtin();
};

inline BaselineModel train_baseline(const Corpus& corpus, const Tagset& tagset = Tagset::builtin()) {
  if (corpus.sentences.empty()) {
    fail(ErrorKind::EmptyCorpus, "cannot train a baseline on an empty corpus");
  }
  NgramCounts counts = collect_counts(corpus, tagset);
  BaselineModel model;
  model.tagset = &tagset;
  for (const auto& [surface, tag_counts] : counts.word_tag) {
    TagId best = 0;
    std::uint64_t best_count = 0;
    for (const auto& [tag, count] : tag_counts) {  // ascending tag id
      if (count > best_count) {
        best_count = count;
        best = tag;
      }
    }
    model.best_tag[surface] = best;
  }
  std::uint64_t best_count = 0;
  for (std::size_t t = 0; t < counts.n_tags; ++t) {
    if (counts.unigram[t] > best_count) {
      best_count = counts.unigram[t];
      model.global_default = static_cast<TagId>(t);
    }
  }
  return model;
}

inline std::vector<TagId> tag_baseline(const BaselineModel& model, const Sentence& sentence) {
  std::vector<TagId> tags;
  tags.reserve(sentence.size());
  for (const Token& token : sentence.tokens) {
    auto it = model.best_tag.find(token.surface());
    tags.push_back(it == model.best_tag.end() ? model.global_default : it->second);
  }
  return tags;
}

inline std::vector<std::vector<TagId>> tag_baseline_corpus(const BaselineModel& model,
                                                           const Corpus& corpus) {
  std::vector<std::vector<TagId>> out;
  out.reserve(corpus.sentences.size());
  for (const Sentence& sentence : corpus.sentences) out.push_back(tag_baseline(model, sentence));
  return out;
}

}  // namespace semtag
