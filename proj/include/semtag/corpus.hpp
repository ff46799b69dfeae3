#pragma once

// Tokenized, optionally tagged sentences plus the two interchange formats:
// two-column TSV for tagged corpora and one-sentence-per-line plain text.
// Multiword expressions are single tokens whose parts are joined with `~`.

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semtag/error.hpp"
#include "semtag/tagset.hpp"

namespace semtag {

constexpr char kJoiner = '~';

/// One semantic atom. Multi-part tokens are fixed multiword expressions
/// ("United~States"); parts never contain whitespace or the joiner.
struct Token {
  std::vector<std::string> parts;

  std::string surface() const {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += kJoiner;
      out += parts[i];
    }
    return out;
  }

  bool multiword() const { return parts.size() > 1; }

  /// Splits a serialized surface on the joiner and validates the parts.
  static Token from_surface(std::string_view surface, const std::string& where = "") {
    if (surface.empty()) fail(ErrorKind::FormatError, where + "empty token");
    Token token;
    std::string part;
    for (char c : surface) {
      if (c == kJoiner) {
        if (part.empty()) {
          fail(ErrorKind::FormatError, where + "empty part in token '" + std::string(surface) + "'");
        }
        token.parts.push_back(part);
        part.clear();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        fail(ErrorKind::FormatError, where + "whitespace inside token '" + std::string(surface) + "'");
      }
      part += c;
    }
    if (part.empty()) {
      fail(ErrorKind::FormatError, where + "empty part in token '" + std::string(surface) + "'");
    }
    token.parts.push_back(part);
    return token;
  }

  /// Builds a token from pre-split parts, rejecting joiners inside a part.
  static Token from_parts(std::vector<std::string> parts, const std::string& where = "") {
    if (parts.empty()) fail(ErrorKind::FormatError, where + "token needs at least one part");
    for (const std::string& part : parts) {
      if (part.empty()) fail(ErrorKind::FormatError, where + "empty token part");
      for (char c : part) {
        if (c == kJoiner || std::isspace(static_cast<unsigned char>(c))) {
          fail(ErrorKind::FormatError, where + "invalid character in token part '" + part + "'");
        }
      }
    }
    Token token;
    token.parts = std::move(parts);
    return token;
  }

  bool operator==(const Token& other) const { return parts == other.parts; }
};

/// A non-empty token sequence; `tags` is empty for plain sentences and
/// parallel to `tokens` for tagged ones.
struct Sentence {
  std::vector<Token> tokens;
  std::vector<TagId> tags;

  bool tagged() const { return !tags.empty(); }
  std::size_t size() const { return tokens.size(); }

  static Sentence plain(std::vector<Token> tokens) {
    if (tokens.empty()) fail(ErrorKind::EmptySentence, "sentence has no tokens");
    Sentence s;
    s.tokens = std::move(tokens);
    return s;
  }

  static Sentence tagged_with(std::vector<Token> tokens, std::vector<TagId> tags) {
    if (tokens.empty()) fail(ErrorKind::EmptySentence, "sentence has no tokens");
    if (tags.size() != tokens.size()) {
      fail(ErrorKind::AlignmentError, "tag count does not match token count");
    }
    Sentence s;
    s.tokens = std::move(tokens);
    s.tags = std::move(tags);
    return s;
  }

  bool operator==(const Sentence& other) const {
    return tokens == other.tokens && tags == other.tags;
  }
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::optional<std::string> source_id;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }

  bool tagged() const {
    for (const auto& s : sentences) {
      if (!s.tagged()) return false;
    }
    return true;
  }
};

namespace detail {

inline std::string line_ref(const std::string& origin, int line_no) {
  return origin + ":" + std::to_string(line_no) + ": ";
}

}  // namespace detail

/// Reads the tagged TSV format: `surface<TAB>tag` records, one blank line
/// between sentences, `#` comment lines between sentences only (a record
/// line never starts with `#`).
inline Corpus read_tagged(std::istream& in, const Tagset& tagset = Tagset::builtin(),
                          const std::string& origin = "<stream>") {
  Corpus corpus;
  corpus.source_id = origin;
  std::vector<Token> tokens;
  std::vector<TagId> tags;
  auto flush = [&] {
    if (!tokens.empty()) {
      corpus.sentences.push_back(Sentence::tagged_with(std::move(tokens), std::move(tags)));
      tokens.clear();
      tags.clear();
    }
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#' && tokens.empty()) continue;
    const std::string where = detail::line_ref(origin, line_no);
    auto fields = detail::split(line, '\t');
    if (fields.size() != 2) {
      fail(ErrorKind::FormatError,
           where + "expected 2 tab-separated columns, got " + std::to_string(fields.size()));
    }
    tokens.push_back(Token::from_surface(fields[0], where));
    const SemTag* tag = tagset.find(fields[1]);
    if (!tag) fail(ErrorKind::UnknownTag, where + "unknown sem-tag '" + fields[1] + "'");
    tags.push_back(tag->id);
  }
  flush();
  return corpus;
}

inline Corpus read_tagged_file(const std::string& path, const Tagset& tagset = Tagset::builtin()) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open corpus file: " + path);
  return read_tagged(in, tagset, path);
}

/// Writes the tagged TSV format; bit-exact inverse of read_tagged.
inline void write_tagged(const Corpus& corpus, std::ostream& out,
                         const Tagset& tagset = Tagset::builtin()) {
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const Sentence& sentence = corpus.sentences[i];
    if (!sentence.tagged()) {
      fail(ErrorKind::FormatError, "untagged sentence cannot be serialized as tagged corpus");
    }
    if (i) out << '\n';
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      out << sentence.tokens[t].surface() << '\t' << tagset.tag(sentence.tags[t]).code << '\n';
    }
  }
}

inline std::string write_tagged_string(const Corpus& corpus,
                                       const Tagset& tagset = Tagset::builtin()) {
  std::ostringstream out;
  write_tagged(corpus, out, tagset);
  return out.str();
}

/// Reads the plain format: one sentence per line, tokens whitespace-separated,
/// multiword parts pre-joined with `~`. Blank lines are ignored.
inline Corpus read_plain(std::istream& in, const std::string& origin = "<stream>") {
  Corpus corpus;
  corpus.source_id = origin;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = detail::line_ref(origin, line_no);
    std::vector<Token> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos > start) {
        tokens.push_back(Token::from_surface(std::string_view(line).substr(start, pos - start), where));
      }
    }
    if (!tokens.empty()) corpus.sentences.push_back(Sentence::plain(std::move(tokens)));
  }
  return corpus;
}

inline Corpus read_plain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open corpus file: " + path);
  return read_plain(in, path);
}

}  // namespace semtag
