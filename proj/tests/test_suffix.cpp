#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "semtag/suffix_model.hpp"
#include "support/fixtures.hpp"
#include "support/rng.hpp"

using namespace semtag;
using testsupport::gold_fixture;
using testsupport::parse_tagged;

namespace {

TagId tid(const char* code) { return Tagset::builtin().parse(code).id; }

std::string repeat_sentences(const std::string& sentence_block, int times) {
  std::string text;
  for (int i = 0; i < times; ++i) text += sentence_block + "\n";
  return text;
}

}  // namespace

TEST_CASE("theta is the sample standard deviation of observed tag probabilities") {
  // tags: DIS 1/4, CON 2/4, EXS 1/4 → mean 1/3, var (2·(1/12)² + (1/6)²)/2 = 1/48
  NgramCounts counts =
      collect_counts(parse_tagged("a\tDIS\nb\tCON\nc\tCON\nd\tEXS\n"));
  CHECK_THAT(suffix_theta(counts), Catch::Matchers::WithinAbs(std::sqrt(1.0 / 48.0), 1e-15));

  NgramCounts one_tag = collect_counts(parse_tagged("a\tDIS\n"));
  CHECK(suffix_theta(one_tag) == 0.0);
}

TEST_CASE("words above the rare threshold do not feed the suffix tables") {
  std::string text = repeat_sentences("the\tDEF", 11);
  text += "walks\tENS\n";
  SuffixModel model = train_suffix_model(collect_counts(parse_tagged(text)));

  // only "walks" is rare, so the lower table holds exactly its suffixes
  std::vector<std::string> keys;
  for (const auto& [suffix, dist] : model.lower) keys.push_back(suffix);
  CHECK(keys == std::vector<std::string>{"", "alks", "ks", "lks", "s", "walks"});
  CHECK(model.upper.empty());
  for (const auto& [suffix, dist] : model.lower) {
    REQUIRE(dist.size() == 1);
    CHECK(dist.count(tid("ENS")) == 1);
    CHECK_THAT(dist.at(tid("ENS")), Catch::Matchers::WithinAbs(1.0, 1e-15));
  }

  // at threshold boundary: frequency == threshold still counts as rare
  SuffixModel boundary =
      train_suffix_model(collect_counts(parse_tagged(repeat_sentences("the\tDEF", 10))));
  CHECK(boundary.lower.count("the") == 1);
}

TEST_CASE("suffix smoothing follows the successive-abstraction recursion") {
  // one sentence: ab/CON b/DIS b/DIS → rare words "ab" (CON×1) and "b" (DIS×2)
  NgramCounts counts = collect_counts(parse_tagged("ab\tCON\nb\tDIS\nb\tDIS\n"));
  SuffixModel model = train_suffix_model(counts);
  const double theta = model.theta;
  CHECK_THAT(theta, Catch::Matchers::WithinAbs(std::sqrt(1.0 / 18.0), 1e-15));

  // ε and "b" pool all three rare tokens: CON 1/3, DIS 2/3
  CHECK_THAT(model.lower.at("").at(tid("CON")), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
  CHECK_THAT(model.lower.at("").at(tid("DIS")), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
  CHECK_THAT(model.lower.at("b").at(tid("CON")), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));

  // "ab" was seen only as CON; the DIS mass comes from the parent via θ
  const double con = model.lower.at("ab").at(tid("CON"));
  const double dis = model.lower.at("ab").at(tid("DIS"));
  CHECK_THAT(con, Catch::Matchers::WithinAbs((1.0 + theta * (1.0 / 3.0)) / (1.0 + theta), 1e-12));
  CHECK_THAT(dis, Catch::Matchers::WithinAbs((theta * (2.0 / 3.0)) / (1.0 + theta), 1e-12));
  CHECK_THAT(con + dis, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("every stored suffix distribution sums to one") {
  auto check_model = [](const SuffixModel& model) {
    for (const auto* table : {&model.lower, &model.upper}) {
      for (const auto& [suffix, dist] : *table) {
        double sum = 0.0;
        for (const auto& [tag, p] : dist) {
          CHECK(p > 0.0);
          sum += p;
        }
        CAPTURE(suffix);
        CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
      }
    }
  };
  check_model(train_suffix_model(collect_counts(gold_fixture())));

  testsupport::Rng rng(31);
  for (int iter = 0; iter < 30; ++iter) {
    Corpus corpus;
    const std::uint32_t n_sentences = rng.uniform(1, 8);
    for (std::uint32_t s = 0; s < n_sentences; ++s) {
      std::vector<Token> toks;
      std::vector<TagId> tags;
      const std::uint32_t n = rng.uniform(1, 5);
      for (std::uint32_t t = 0; t < n; ++t) {
        std::string word;
        const std::uint32_t len = rng.uniform(1, 12);
        for (std::uint32_t c = 0; c < len; ++c) {
          word += static_cast<char>((rng.uniform(0, 1) ? 'a' : 'A') + rng.uniform(0, 25));
        }
        toks.push_back(Token::from_surface(word));
        tags.push_back(static_cast<TagId>(rng.uniform(0, 12)));
      }
      corpus.sentences.push_back(Sentence::tagged_with(std::move(toks), std::move(tags)));
    }
    check_model(train_suffix_model(collect_counts(corpus)));
  }
}

TEST_CASE("capitalization picks the variant, with fallback when one is empty") {
  std::string text = "Paris\tGEO\nvienna\tGEO\nrun\tENS\nRome\tGEO\n";
  SuffixModel model = train_suffix_model(collect_counts(parse_tagged(text)));
  CHECK_FALSE(model.upper.empty());
  CHECK_FALSE(model.lower.empty());

  // capitalized unknown hits the upper table only
  const auto* up = model.lookup("Turin");
  REQUIRE(up != nullptr);
  CHECK(up->count(tid("ENS")) == 0);  // ENS lives only in the lower table
  const auto* low = model.lookup("walk");
  REQUIRE(low != nullptr);
  CHECK(low->count(tid("ENS")) == 1);

  // non-letter first byte counts as uncapitalized
  CHECK_FALSE(SuffixModel::capitalized("100"));
  CHECK(SuffixModel::capitalized("Rome"));

  // a model with only capitalized rare words serves lowercase queries too
  SuffixModel upper_only = train_suffix_model(collect_counts(parse_tagged("Paris\tGEO\nRome\tGEO\n")));
  CHECK(upper_only.lower.empty());
  const auto* fallback = upper_only.lookup("paris");
  REQUIRE(fallback != nullptr);
  CHECK(fallback->count(tid("GEO")) == 1);
}

TEST_CASE("multiword tokens contribute the suffixes of their last part") {
  SuffixModel model = train_suffix_model(collect_counts(parse_tagged("aan~het\tPRG\n")));
  std::vector<std::string> keys;
  for (const auto& [suffix, dist] : model.lower) keys.push_back(suffix);
  CHECK(keys == std::vector<std::string>{"", "et", "het", "t"});
  const auto* dist = model.lookup("zet");
  REQUIRE(dist != nullptr);
  CHECK(dist->count(tid("PRG")) == 1);
}

TEST_CASE("long words are truncated to max_suffix_len") {
  NgramCounts counts = collect_counts(parse_tagged("abcdefghijklmnop\tCON\n"));
  SuffixModel model = train_suffix_model(counts, /*max_suffix_len=*/3);
  std::vector<std::string> keys;
  for (const auto& [suffix, dist] : model.lower) keys.push_back(suffix);
  CHECK(keys == std::vector<std::string>{"", "nop", "op", "p"});
}

TEST_CASE("a zero rare threshold yields an empty model and null lookups") {
  SuffixModel model =
      train_suffix_model(collect_counts(parse_tagged("a\tDIS\nb\tCON\n")), 10, /*rare=*/0);
  CHECK(model.empty());
  CHECK(model.lookup("anything") == nullptr);
}
