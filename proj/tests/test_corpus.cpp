#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "semtag/corpus.hpp"
#include "support/fixtures.hpp"
#include "support/rng.hpp"

using namespace semtag;
using testsupport::gold_fixture;
using testsupport::kGoldFixtureText;
using testsupport::parse_plain;
using testsupport::parse_tagged;

namespace {

auto has_kind(ErrorKind kind) {
  return Catch::Matchers::Predicate<SemtagError>(
      [kind](const SemtagError& e) { return e.kind() == kind; }, "error kind matches");
}

TagId tid(const char* code) { return Tagset::builtin().parse(code).id; }

}  // namespace

TEST_CASE("gold fixture parses into four sentences with known shape") {
  Corpus corpus = gold_fixture();
  REQUIRE(corpus.sentences.size() == 4);
  CHECK(corpus.sentences[0].size() == 8);
  CHECK(corpus.sentences[1].size() == 10);
  CHECK(corpus.sentences[2].size() == 11);
  CHECK(corpus.sentences[3].size() == 9);
  CHECK(corpus.token_count() == 38);
  CHECK(corpus.tagged());

  const Sentence& first = corpus.sentences[0];
  CHECK(first.tokens[6].surface() == "Fenway");
  CHECK(first.tags[6] == tid("GEO"));
  CHECK(first.tokens[4].parts == std::vector<std::string>{"green", "monster"});
  CHECK(first.tokens[4].multiword());
  CHECK(first.tags[4] == tid("ART"));

  const Sentence& second = corpus.sentences[1];
  CHECK(second.tokens[5].parts == std::vector<std::string>{"United", "States"});
  CHECK(second.tags[5] == tid("GPE"));
  // The two "to" tokens carry different tags: relation vs. subordination.
  CHECK(second.tokens[3].surface() == "to");
  CHECK(second.tags[3] == tid("REL"));
  CHECK(second.tokens[6].surface() == "to");
  CHECK(second.tags[6] == tid("SUB"));

  CHECK(corpus.sentences[3].tokens[4].surface() == "$");
  CHECK(corpus.sentences[3].tags[4] == tid("UOM"));
}

TEST_CASE("checked-in sample corpus matches the in-memory fixture") {
  Corpus from_file = read_tagged_file(testsupport::data_path("sample-gold.tsv"));
  Corpus from_text = gold_fixture();
  CHECK(from_file.sentences == from_text.sentences);
}

TEST_CASE("write_tagged is the bit-exact inverse of read_tagged") {
  Corpus corpus = gold_fixture();
  CHECK(write_tagged_string(corpus) == kGoldFixtureText);

  Corpus reread = parse_tagged(write_tagged_string(corpus));
  CHECK(reread.sentences == corpus.sentences);
}

TEST_CASE("multiword reciprocal serializes with the joiner") {
  Corpus corpus;
  corpus.sentences.push_back(Sentence::tagged_with(
      {Token::from_parts({"each", "other"})}, {tid("REF")}));
  CHECK(write_tagged_string(corpus) == "each~other\tREF\n");
  Corpus reread = parse_tagged("each~other\tREF\n");
  REQUIRE(reread.sentences.size() == 1);
  CHECK(reread.sentences[0].tokens[0].parts == std::vector<std::string>{"each", "other"});
}

TEST_CASE("empty corpus serializes to empty text and parses back") {
  Corpus corpus;
  CHECK(write_tagged_string(corpus).empty());
  CHECK(parse_tagged("").sentences.empty());
  CHECK(parse_tagged("\n\n# only a comment\n\n").sentences.empty());
}

TEST_CASE("tagged reader round-trips randomized corpora") {
  testsupport::Rng rng(20260819);
  const Tagset& tagset = Tagset::builtin();
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCXYZ0129'$.,-";
  for (int iter = 0; iter < 200; ++iter) {
    Corpus corpus;
    const std::uint32_t n_sentences = rng.uniform(0, 5);
    for (std::uint32_t s = 0; s < n_sentences; ++s) {
      std::vector<Token> tokens;
      std::vector<TagId> tags;
      const std::uint32_t n_tokens = rng.uniform(1, 7);
      for (std::uint32_t t = 0; t < n_tokens; ++t) {
        std::vector<std::string> parts;
        const std::uint32_t n_parts = rng.uniform(1, 3);
        for (std::uint32_t p = 0; p < n_parts; ++p) {
          std::string part;
          const std::uint32_t len = rng.uniform(1, 6);
          for (std::uint32_t c = 0; c < len; ++c) {
            part += alphabet[rng.uniform(0, static_cast<std::uint32_t>(alphabet.size() - 1))];
          }
          parts.push_back(part);
        }
        // '#' never starts a token here: a record line starting with '#'
        // after a sentence break would read back as a comment.
        if (parts[0][0] == '#') parts[0][0] = 'x';
        tokens.push_back(Token::from_parts(std::move(parts)));
        tags.push_back(static_cast<TagId>(rng.uniform(0, static_cast<std::uint32_t>(tagset.size() - 1))));
      }
      corpus.sentences.push_back(Sentence::tagged_with(std::move(tokens), std::move(tags)));
    }
    std::string text = write_tagged_string(corpus);
    Corpus reread = parse_tagged(text);
    REQUIRE(reread.sentences == corpus.sentences);
    CHECK(write_tagged_string(reread) == text);
  }
}

TEST_CASE("tagged reader reports unknown tags with the line number") {
  CHECK_THROWS_MATCHES(parse_tagged("word\tZZZ\n", "bad.tsv"), SemtagError,
                       has_kind(ErrorKind::UnknownTag));
  try {
    parse_tagged("ok\tCON\nword\tZZZ\n", "bad.tsv");
    FAIL("expected UnknownTag");
  } catch (const SemtagError& e) {
    CHECK(std::string(e.what()).find("bad.tsv:2:") != std::string::npos);
    CHECK(std::string(e.what()).find("ZZZ") != std::string::npos);
  }
}

TEST_CASE("tagged reader rejects malformed records") {
  CHECK_THROWS_MATCHES(parse_tagged("word\n"), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(parse_tagged("word\tCON\textra\n"), SemtagError,
                       has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(parse_tagged("\tCON\n"), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(parse_tagged("~word\tCON\n"), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(parse_tagged("word~\tCON\n"), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(parse_tagged("a~~b\tCON\n"), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(parse_tagged("two words\tCON\n"), SemtagError,
                       has_kind(ErrorKind::FormatError));
  // '#' only introduces a comment between sentences; inside one it is data.
  CHECK_THROWS_MATCHES(parse_tagged("ok\tCON\n# not a comment\n"), SemtagError,
                       has_kind(ErrorKind::FormatError));
}

TEST_CASE("tagged reader tolerates comments, CRLF, and stray blank lines") {
  const std::string text =
      "# header comment\r\n"
      "\r\n"
      "How\tQUE\r\n"
      "?\tQUE\r\n"
      "\r\n"
      "# between sentences\n"
      "\n"
      "ok\tNIL\n"
      "\n"
      "\n";
  Corpus corpus = parse_tagged(text);
  REQUIRE(corpus.sentences.size() == 2);
  CHECK(corpus.sentences[0].size() == 2);
  CHECK(corpus.sentences[1].size() == 1);
  CHECK(corpus.sentences[0].tokens[0].surface() == "How");
}

TEST_CASE("plain reader splits sentences per line and tokens on whitespace") {
  Corpus corpus = parse_plain("He himself can earn $ 100 a day .\n");
  REQUIRE(corpus.sentences.size() == 1);
  CHECK(corpus.sentences[0].size() == 9);
  CHECK_FALSE(corpus.sentences[0].tagged());
  CHECK(corpus.sentences[0].tokens[4].surface() == "$");
  CHECK(corpus.sentences[0].tokens[8].surface() == ".");

  Corpus multi = parse_plain("first  line\n\n# comment\nsecond United~States line\n   \n");
  REQUIRE(multi.sentences.size() == 2);
  CHECK(multi.sentences[0].size() == 2);
  REQUIRE(multi.sentences[1].size() == 3);
  CHECK(multi.sentences[1].tokens[1].parts == std::vector<std::string>{"United", "States"});

  CHECK(parse_plain("").sentences.empty());
  CHECK(parse_plain("\n\n").sentences.empty());
  CHECK_THROWS_MATCHES(parse_plain("bad~~token\n"), SemtagError,
                       has_kind(ErrorKind::FormatError));
}

TEST_CASE("sentence factories enforce their invariants") {
  CHECK_THROWS_MATCHES(Sentence::plain({}), SemtagError, has_kind(ErrorKind::EmptySentence));
  CHECK_THROWS_MATCHES(Sentence::tagged_with({Token::from_surface("a")}, {tid("CON"), tid("NIL")}),
                       SemtagError, has_kind(ErrorKind::AlignmentError));
  CHECK_THROWS_MATCHES(Token::from_parts({}), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(Token::from_parts({"a b"}), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(Token::from_parts({"a~b"}), SemtagError, has_kind(ErrorKind::FormatError));
  CHECK_THROWS_MATCHES(Token::from_surface(""), SemtagError, has_kind(ErrorKind::FormatError));
}

TEST_CASE("reading a missing corpus file raises an I/O error") {
  CHECK_THROWS_MATCHES(read_tagged_file("/nonexistent/path.tsv"), SemtagError,
                       has_kind(ErrorKind::IoError));
  CHECK_THROWS_MATCHES(read_plain_file("/nonexistent/path.txt"), SemtagError,
                       has_kind(ErrorKind::IoError));
}
