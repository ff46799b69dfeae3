#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "semtag/trigram_model.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/rng.hpp"

using namespace semtag;
using testsupport::brute_force_decode;
using testsupport::gold_fixture;
using testsupport::parse_plain;
using testsupport::parse_tagged;

namespace {

TagId tid(const char* code) { return Tagset::builtin().parse(code).id; }
ExtTagId ext(const char* code) { return static_cast<ExtTagId>(tid(code)); }

std::string repeated_ab(int times) {
  std::string text;
  for (int i = 0; i < times; ++i) text += "a\tDIS\nb\tCON\n\n";
  return text;
}

Sentence plain_sentence(const std::string& line) {
  Corpus c = parse_plain(line + "\n");
  REQUIRE(c.sentences.size() == 1);
  return c.sentences[0];
}

/// Random tagged corpus over the first `n_tags` tag ids and a small shared
/// vocabulary; used for normalization and oracle-equivalence properties.
Corpus random_corpus(testsupport::Rng& rng, std::uint32_t n_tags, std::uint32_t vocab,
                     std::uint32_t n_sentences, std::uint32_t max_len) {
  Corpus corpus;
  for (std::uint32_t s = 0; s < n_sentences; ++s) {
    std::vector<Token> toks;
    std::vector<TagId> tags;
    const std::uint32_t n = rng.uniform(1, max_len);
    for (std::uint32_t t = 0; t < n; ++t) {
      toks.push_back(Token::from_surface("w" + std::to_string(rng.uniform(0, vocab - 1))));
      tags.push_back(static_cast<TagId>(rng.uniform(0, n_tags - 1)));
    }
    corpus.sentences.push_back(Sentence::tagged_with(std::move(toks), std::move(tags)));
  }
  return corpus;
}

}  // namespace

TEST_CASE("transitions of a deterministic corpus are certain") {
  TrigramModel model = train_trigram(parse_tagged(repeated_ab(50)));
  CHECK(model.lambdas.l3 == 1.0);
  // every step of BOS BOS DIS CON EOS is the only continuation observed
  CHECK_THAT(model.transition_logprob(model.bos(), model.bos(), ext("DIS")),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(model.transition_logprob(model.bos(), ext("DIS"), ext("CON")),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(model.transition_logprob(ext("DIS"), ext("CON"), model.eos()),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK(model.transition_logprob(model.bos(), ext("DIS"), ext("CON")) >=
        std::log(model.lambdas.l3));
  // a tag never observed is impossible
  CHECK(model.transition_logprob(model.bos(), model.bos(), ext("EXS")) == kNegInf);
  CHECK(model.transition_logprob(ext("DIS"), ext("CON"), ext("EXS")) == kNegInf);
}

TEST_CASE("transition rows sum to one for observed histories") {
  testsupport::Rng rng(404);
  for (int iter = 0; iter < 25; ++iter) {
    Corpus corpus = random_corpus(rng, rng.uniform(2, 8), rng.uniform(2, 6),
                                  rng.uniform(1, 12), 6);
    TrigramModel model = train_trigram(corpus);
    CHECK_THAT(model.lambdas.l1 + model.lambdas.l2 + model.lambdas.l3,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (const auto& [key, count] : model.counts.bigram) {
      const auto [t1, t2] = key;
      if (t2 == model.eos()) continue;  // EOS never conditions a next tag
      double sum = 0.0;
      for (std::size_t t3 = 0; t3 < model.n_tags(); ++t3) {
        const double lp = model.transition_logprob(t1, t2, static_cast<ExtTagId>(t3));
        if (lp > kNegInf) sum += std::exp(lp);
      }
      const double eos_lp = model.transition_logprob(t1, t2, model.eos());
      if (eos_lp > kNegInf) sum += std::exp(eos_lp);
      CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("known-word emissions are maximum-likelihood ratios") {
  TrigramModel model = train_trigram(parse_tagged("x\tDIS\n\nx\tDIS\n\nx\tDIS\n\nx\tCON\n\ny\tCON\n\ny\tCON\n"));
  CHECK_THAT(model.emission_logprob("x", tid("DIS")), Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(model.emission_logprob("x", tid("CON")),
             Catch::Matchers::WithinAbs(std::log(1.0 / 3.0), 1e-15));
  CHECK_THAT(model.emission_logprob("y", tid("CON")),
             Catch::Matchers::WithinAbs(std::log(2.0 / 3.0), 1e-15));
  // known surface, unseen pairing: impossible, even though the suffix model exists
  CHECK(model.emission_logprob("x", tid("EXS")) == kNegInf);
  CHECK(model.emission_logprob("y", tid("DIS")) == kNegInf);
}

TEST_CASE("suffix emissions rank plausible tags first for unknown words") {
  // 20 rare words: twelve -s verbs (ENS), four bare nouns (CON), four others
  const std::string text =
      "runs\tENS\neats\tENS\nsits\tENS\nhops\tENS\ndigs\tENS\nnaps\tENS\n"
      "jogs\tENS\nbegs\tENS\nhums\tENS\npats\tENS\nrubs\tENS\ntugs\tENS\n"
      "cat\tCON\ndog\tCON\ncup\tCON\npen\tCON\n"
      "red\tIST\nbig\tIST\nnow\tNOW\nhere\tDXP\n";
  TrigramModel model = train_trigram(parse_tagged(text));
  REQUIRE_FALSE(model.known_surface("walks"));

  const double ens = model.emission_logprob("walks", tid("ENS"));
  REQUIRE(ens > kNegInf);
  for (const SemTag& tag : Tagset::builtin().tags()) {
    if (tag.id == tid("ENS")) continue;
    const double other = model.emission_logprob("walks", tag.id);
    CAPTURE(tag.code);
    CHECK(ens > other);
  }

  // unknown single characters fall back to the empty-suffix distribution
  const double q_ens = model.emission_logprob("q", tid("ENS"));
  CHECK(q_ens > kNegInf);
  CHECK(model.emission_logprob("q", tid("CON")) > kNegInf);
  // tags never seen in training stay impossible
  CHECK(model.emission_logprob("q", tid("QUE")) == kNegInf);
}

TEST_CASE("decoding an unambiguous corpus recovers its tags") {
  TrigramModel model = train_trigram(parse_tagged(repeated_ab(50)));
  std::vector<TagId> tags = viterbi_decode(model, plain_sentence("a b"));
  CHECK(tags == std::vector<TagId>{tid("DIS"), tid("CON")});

  DecodeResult result = decode(model, plain_sentence("a b"), 0);
  CHECK_FALSE(result.used_fallback);
  CHECK_THAT(result.best_score, Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK(result.second_score == kNegInf);  // no alternative path exists
}

TEST_CASE("exact decoding equals exhaustive search on random toy models") {
  testsupport::Rng rng(20260819);
  int fallbacks = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const std::uint32_t n_tags = rng.uniform(2, 6);
    const std::uint32_t vocab = rng.uniform(2, 5);
    Corpus corpus = random_corpus(rng, n_tags, vocab, rng.uniform(1, 8), 5);
    TrigramModel model = train_trigram(corpus);

    for (int q = 0; q < 3; ++q) {
      const std::uint32_t n = rng.uniform(1, 5);
      std::vector<Token> toks;
      for (std::uint32_t t = 0; t < n; ++t) {
        // mostly known words, occasionally an unknown one
        const std::uint32_t pick = rng.uniform(0, vocab);
        toks.push_back(Token::from_surface(
            pick == vocab ? "unk" + std::to_string(rng.uniform(0, 2)) : "w" + std::to_string(pick)));
      }
      Sentence sentence = Sentence::plain(std::move(toks));
      DecodeResult got = decode(model, sentence, 0);
      testsupport::OracleResult want = brute_force_decode(model, sentence);
      REQUIRE(got.tags == want.tags);
      CHECK(got.used_fallback == want.used_fallback);
      if (!got.used_fallback) {
        CHECK(got.best_score == want.score);
        CHECK(got.second_score == want.second);
      } else {
        ++fallbacks;
      }
    }
  }
  // the generator must exercise both the normal and the fallback path
  CHECK(fallbacks > 0);
}

TEST_CASE("closed-world fixture decoding reproduces the gold tags") {
  Corpus fixture = gold_fixture();
  TrigramModel model = train_trigram(fixture);
  for (std::size_t s = 0; s < fixture.sentences.size(); ++s) {
    Sentence plain = Sentence::plain(fixture.sentences[s].tokens);
    DecodeResult got = decode(model, plain, 0);
    testsupport::OracleResult want = brute_force_decode(model, plain, /*restrict=*/true);
    CAPTURE(s);
    REQUIRE(got.tags == want.tags);
    CHECK(got.best_score == want.score);
    CHECK(got.tags == fixture.sentences[s].tags);
  }
}

TEST_CASE("score ties resolve to the lexicographically smallest sequence") {
  // perfectly symmetric two-tag model
  TrigramModel model = train_trigram(parse_tagged("x\tALT\n\nx\tXCL\n"));
  const TagId lo = std::min(tid("ALT"), tid("XCL"));

  DecodeResult one = decode(model, plain_sentence("x"), 0);
  CHECK(one.tags == std::vector<TagId>{lo});
  CHECK(one.second_score == one.best_score);  // genuine tie

  DecodeResult two = decode(model, plain_sentence("x x"), 0);
  CHECK(two.tags == std::vector<TagId>{lo, lo});
  CHECK(two.second_score == two.best_score);

  testsupport::OracleResult want = brute_force_decode(model, plain_sentence("x x"));
  CHECK(two.tags == want.tags);
}

TEST_CASE("impossible paths fall back to per-token emission argmax") {
  TrigramModel model = train_trigram(parse_tagged(repeated_ab(50)));
  REQUIRE(model.lambdas.l3 == 1.0);  // unseen histories are truly impossible

  DecodeResult got = decode(model, plain_sentence("b a"), 0);
  CHECK(got.used_fallback);
  CHECK(got.tags == std::vector<TagId>{tid("CON"), tid("DIS")});
  CHECK(got.best_score == kNegInf);

  testsupport::OracleResult want = brute_force_decode(model, plain_sentence("b a"));
  CHECK(want.used_fallback);
  CHECK(got.tags == want.tags);
}

TEST_CASE("sentences with no candidates anywhere use the global fallback") {
  TrigramConfig config;
  config.rare_threshold = 0;  // empty suffix model: unknown words have no candidates
  TrigramModel model = train_trigram(parse_tagged(repeated_ab(50)), config);
  REQUIRE(model.suffix.empty());

  DecodeResult got = decode(model, plain_sentence("zzz a"), 0);
  CHECK(got.used_fallback);
  // zzz: no emission anywhere → corpus-wide most frequent tag (tie → lower id)
  const TagId expect_default = std::min(tid("DIS"), tid("CON"));
  CHECK(got.tags == std::vector<TagId>{expect_default, tid("DIS")});
}

TEST_CASE("beam search narrows the state set but stays deterministic") {
  testsupport::Rng rng(7007);
  Corpus corpus = random_corpus(rng, 6, 4, 30, 6);
  TrigramModel model = train_trigram(corpus);

  Sentence sentence = plain_sentence("w0 w1 w2 w3 w0");
  const std::vector<TagId> exact = decode(model, sentence, 0).tags;
  const std::vector<TagId> wide = decode(model, sentence, 64).tags;
  CHECK(exact == wide);  // beam wider than the state space is exact

  for (std::size_t beam : {1u, 2u, 5u}) {
    const std::vector<TagId> a = decode(model, sentence, beam).tags;
    const std::vector<TagId> b = decode(model, sentence, beam).tags;
    CHECK(a == b);
    CHECK(a.size() == sentence.size());
  }
}

TEST_CASE("training is deterministic") {
  Corpus fixture = gold_fixture();
  TrigramModel a = train_trigram(fixture);
  TrigramModel b = train_trigram(fixture);
  CHECK(a.lambdas.l1 == b.lambdas.l1);
  CHECK(a.lambdas.l2 == b.lambdas.l2);
  CHECK(a.lambdas.l3 == b.lambdas.l3);
  CHECK(a.suffix.theta == b.suffix.theta);
  CHECK(a.suffix.lower == b.suffix.lower);
  CHECK(a.suffix.upper == b.suffix.upper);
  CHECK(a.counts.trigram == b.counts.trigram);

  Sentence plain = Sentence::plain(fixture.sentences[2].tokens);
  CHECK(viterbi_decode(a, plain) == viterbi_decode(b, plain));
}

TEST_CASE("corpus decoding preserves sentence boundaries") {
  TrigramModel model = train_trigram(parse_tagged(repeated_ab(3)));
  Corpus plain = parse_plain("a b\nb a\na\n");
  auto tagged = viterbi_decode_corpus(model, plain);
  REQUIRE(tagged.size() == 3);
  CHECK(tagged[0].size() == 2);
  CHECK(tagged[1].size() == 2);
  CHECK(tagged[2].size() == 1);
}
