#pragma once

// Shared test fixtures: the four-sentence gold corpus and small helpers.

#include <sstream>
#include <string>

#include "semtag/corpus.hpp"

namespace testsupport {

// Canonical serialized form (what write_tagged emits: no comments, one blank
// line between sentences, none trailing).
inline const std::string kGoldFixtureText =
    "How\tQUE\n"
    "tall\tDEG\n"
    "is\tNOW\n"
    "the\tDEF\n"
    "green~monster\tART\n"
    "at\tREL\n"
    "Fenway\tGEO\n"
    "?\tQUE\n"
    "\n"
    "My\tHAS\n"
    "sister\tROL\n"
    "went\tEPS\n"
    "to\tREL\n"
    "the\tDEF\n"
    "United~States\tGPE\n"
    "to\tSUB\n"
    "study\tEXS\n"
    "English\tCON\n"
    ".\tNIL\n"
    "\n"
    "Any\tAND\n"
    "contribution\tCON\n"
    "was\tPST\n"
    "appreciated\tEXS\n"
    "but\tBUT\n"
    "we\tPRO\n"
    "have\tNOW\n"
    "n't\tNOT\n"
    "got\tEXT\n"
    "any\tDIS\n"
    ".\tNIL\n"
    "\n"
    "He\tPRO\n"
    "himself\tEMP\n"
    "can\tPOS\n"
    "earn\tEXS\n"
    "$\tUOM\n"
    "100\tQUC\n"
    "a\tAND\n"
    "day\tUOM\n"
    ".\tNIL\n";

inline semtag::Corpus gold_fixture() {
  std::istringstream in(kGoldFixtureText);
  return semtag::read_tagged(in, semtag::Tagset::builtin(), "fixture");
}

inline semtag::Corpus parse_tagged(const std::string& text, const std::string& origin = "inline") {
  std::istringstream in(text);
  return semtag::read_tagged(in, semtag::Tagset::builtin(), origin);
}

inline semtag::Corpus parse_plain(const std::string& text, const std::string& origin = "inline") {
  std::istringstream in(text);
  return semtag::read_plain(in, origin);
}

inline std::string data_path(const std::string& name) {
  return std::string(SEMTAG_DATA_DIR) + "/" + name;
}

}  // namespace testsupport
