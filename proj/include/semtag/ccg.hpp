#pragma once

// CCG syntactic categories with optional thematic-role labels on argument
// slots: S\NP, (S\NP)/NP, S\NP:R1, ... Role labels document which schema
// slot an argument fills; category identity ignores them.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "semtag/error.hpp"

namespace semtag {

struct CcgCategory;
using CcgPtr = std::shared_ptr<const CcgCategory>;

struct CcgCategory {
  // Atomic: `atom` is set and result/argument are null.
  // Functional: result <slash> argument, where slash is '/' or '\'.
  std::string atom;
  CcgPtr result;
  CcgPtr argument;
  char slash = 0;
  std::string role;  // label on this node when it fills an argument slot

  bool atomic() const { return !result; }
};

inline CcgPtr make_atom(std::string name, std::string role = "") {
  auto cat = std::make_shared<CcgCategory>();
  cat->atom = std::move(name);
  cat->role = std::move(role);
  return cat;
}

inline CcgPtr make_func(CcgPtr result, char slash, CcgPtr argument, std::string role = "") {
  auto cat = std::make_shared<CcgCategory>();
  cat->result = std::move(result);
  cat->argument = std::move(argument);
  cat->slash = slash;
  cat->role = std::move(role);
  return cat;
}

/// Renders a category; `with_roles` keeps the :R labels. Arguments and
/// functional results are parenthesized, so output is unambiguous.
inline std::string print_category(const CcgCategory& cat, bool with_roles = true) {
  std::string out;
  if (cat.atomic()) {
    out = cat.atom;
  } else {
    const bool wrap_result = !cat.result->atomic();
    if (wrap_result) out += "(";
    out += print_category(*cat.result, with_roles);
    if (wrap_result) out += ")";
    out += cat.slash;
    const bool wrap_arg = !cat.argument->atomic();
    if (wrap_arg) out += "(";
    out += print_category(*cat.argument, with_roles);
    if (wrap_arg) out += ")";
  }
  if (with_roles && !cat.role.empty()) out += ":" + cat.role;
  return out;
}

/// Category identity ignoring role labels; used as the registry key.
inline std::string category_key(const CcgCategory& cat) { return print_category(cat, false); }

inline bool same_category(const CcgCategory& a, const CcgCategory& b) {
  return category_key(a) == category_key(b);
}

namespace detail {

class CategoryParser {
 public:
  explicit CategoryParser(std::string_view text, std::string where)
      : text_(text), where_(std::move(where)) {}

  CcgPtr parse() {
    CcgPtr cat = parse_category();
    if (pos_ != text_.size()) {
      fail(ErrorKind::FormatError,
           where_ + "trailing characters in category '" + std::string(text_) + "'");
    }
    if (!cat->role.empty()) {
      fail(ErrorKind::FormatError,
           where_ + "role label on a whole category in '" + std::string(text_) + "'");
    }
    return cat;
  }

 private:
  // category := part (slash part)*   (left-associative); role labels stay
  // on the argument node they annotate
  CcgPtr parse_category() {
    CcgPtr left = parse_part(/*argument_slot=*/false);
    while (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == '\\')) {
      const char slash = text_[pos_++];
      CcgPtr right = parse_part(/*argument_slot=*/true);
      left = make_func(std::move(left), slash, std::move(right));
    }
    return left;
  }

  // part := atom [":" role] | "(" category ")" [":" role]
  CcgPtr parse_part(bool argument_slot) {
    if (pos_ >= text_.size()) {
      fail(ErrorKind::FormatError, where_ + "unexpected end of category");
    }
    CcgPtr part;
    if (text_[pos_] == '(') {
      ++pos_;
      part = parse_category();
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        fail(ErrorKind::FormatError, where_ + "unbalanced '(' in category");
      }
      ++pos_;
    } else {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) {
        fail(ErrorKind::FormatError, where_ + "expected category atom at position " +
                                         std::to_string(start) + " in '" + std::string(text_) +
                                         "'");
      }
      std::string atom(text_.substr(start, pos_ - start));
      if (atom != "S" && atom != "N" && atom != "NP" && atom != "PP") {
        fail(ErrorKind::FormatError, where_ + "unknown category atom '" + atom + "'");
      }
      part = make_atom(std::move(atom));
    }
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) {
        fail(ErrorKind::FormatError, where_ + "empty role label in category");
      }
      if (!argument_slot) {
        fail(ErrorKind::FormatError,
             where_ + "role label outside an argument slot in '" + std::string(text_) + "'");
      }
      auto labeled = std::make_shared<CcgCategory>(*part);
      labeled->role = std::string(text_.substr(start, pos_ - start));
      part = labeled;
    }
    return part;
  }

  std::string_view text_;
  std::string where_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `S\NP`, `(S\NP:R1)/NP:R2`, ... Throws FormatError on malformed
/// input or role labels in result position.
inline CcgPtr parse_category(std::string_view text, const std::string& where = "") {
  return detail::CategoryParser(text, where).parse();
}

}  // namespace semtag
