#pragma once

// Maps (sem-tag, CCG category) pairs to lambda-DRS templates. The registry
// is data-driven: one `(<TAG> <category> <template>)` entry per line, with
// `*` as a wildcard category. Templates carry a SYM placeholder for the
// token's predicate symbol and R1/R2/... placeholders for thematic roles;
// instantiate() fills both.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semtag/ccg.hpp"
#include "semtag/corpus.hpp"
#include "semtag/drs.hpp"
#include "semtag/error.hpp"
#include "semtag/tagset.hpp"

namespace semtag {

struct SemSchema {
  TagId tag = 0;
  CcgPtr category;        // null for a wildcard entry
  TermPtr template_term;  // SYM / role placeholders unbound
};

namespace detail {

struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> items;
};

class SexpParser {
 public:
  SexpParser(std::string_view text, std::size_t pos, std::string where)
      : text_(text), pos_(pos), where_(std::move(where)) {}

  Sexp parse() {
    skip_space();
    if (pos_ >= text_.size()) fail(ErrorKind::FormatError, where_ + "unexpected end of template");
    if (text_[pos_] != '(') return parse_atom();
    ++pos_;
    Sexp list;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail(ErrorKind::FormatError, where_ + "unbalanced '('");
      if (text_[pos_] == ')') {
        ++pos_;
        return list;
      }
      list.items.push_back(parse());
    }
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Sexp parse_atom() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (pos_ == start) {
      fail(ErrorKind::FormatError, where_ + "expected atom at position " + std::to_string(pos_));
    }
    Sexp atom;
    atom.is_atom = true;
    atom.atom = std::string(text_.substr(start, pos_ - start));
    return atom;
  }

  std::string_view text_;
  std::size_t pos_;
  std::string where_;
};

inline bool is_role_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'R') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

inline TermPtr term_from_sexp(const Sexp& sexp, const std::string& where) {
  if (sexp.is_atom) return drs::var(sexp.atom);
  if (sexp.items.empty() || !sexp.items[0].is_atom) {
    fail(ErrorKind::FormatError, where + "template list must start with an operator");
  }
  const std::string& head = sexp.items[0].atom;
  const auto arg_terms = [&](std::size_t from) {
    std::vector<TermPtr> terms;
    for (std::size_t i = from; i < sexp.items.size(); ++i) {
      terms.push_back(term_from_sexp(sexp.items[i], where));
    }
    return terms;
  };
  const auto expect_size = [&](std::size_t n) {
    if (sexp.items.size() != n) {
      fail(ErrorKind::FormatError, where + "'" + head + "' takes " + std::to_string(n - 1) +
                                       " operand(s), got " + std::to_string(sexp.items.size() - 1));
    }
  };

  if (head == "lam") {
    expect_size(3);
    if (!sexp.items[1].is_atom) fail(ErrorKind::FormatError, where + "'lam' binder must be a name");
    return drs::lam(sexp.items[1].atom, term_from_sexp(sexp.items[2], where));
  }
  if (head == "app") {
    expect_size(3);
    return drs::app(term_from_sexp(sexp.items[1], where), term_from_sexp(sexp.items[2], where));
  }
  if (head == "box") {
    if (sexp.items.size() < 2 || sexp.items[1].is_atom) {
      fail(ErrorKind::FormatError, where + "'box' needs a referent list");
    }
    std::vector<std::string> refs;
    for (const Sexp& ref : sexp.items[1].items) {
      if (!ref.is_atom) fail(ErrorKind::FormatError, where + "box referents must be names");
      refs.push_back(ref.atom);
    }
    return drs::box(std::move(refs), arg_terms(2));
  }
  if (head == "merge") {
    expect_size(3);
    return drs::merge(term_from_sexp(sexp.items[1], where), term_from_sexp(sexp.items[2], where));
  }
  if (head == "not") {
    expect_size(2);
    return drs::neg(term_from_sexp(sexp.items[1], where));
  }
  if (head == "imp") {
    expect_size(3);
    return drs::imp(term_from_sexp(sexp.items[1], where), term_from_sexp(sexp.items[2], where));
  }
  if (head == "or") {
    expect_size(3);
    return drs::disj(term_from_sexp(sexp.items[1], where), term_from_sexp(sexp.items[2], where));
  }
  if (head == "sym") {
    return drs::sym(arg_terms(1));
  }
  if (head == "role") {
    if (sexp.items.size() < 2 || !sexp.items[1].is_atom || !is_role_name(sexp.items[1].atom)) {
      fail(ErrorKind::FormatError, where + "'role' needs a slot name like R1");
    }
    return drs::role(sexp.items[1].atom, arg_terms(2));
  }
  if (head == "pred") {
    if (sexp.items.size() < 2 || !sexp.items[1].is_atom) {
      fail(ErrorKind::FormatError, where + "'pred' needs a predicate name");
    }
    return drs::pred(sexp.items[1].atom, arg_terms(2));
  }
  fail(ErrorKind::FormatError, where + "unknown template operator '" + head + "'");
}

/// Distinct role slots of a template, in R1 < R2 < ... order.
inline std::vector<std::string> role_slots(const DrsTerm& t) {
  std::set<std::string> seen;
  const auto walk = [&](const DrsTerm& node, const auto& self) -> void {
    if (node.kind == DrsTerm::Kind::Pred && node.pred_kind == DrsTerm::PredKind::Role) {
      seen.insert(node.name);
    }
    for (const TermPtr& child : node.children) self(*child, self);
  };
  walk(t, walk);
  std::vector<std::string> slots(seen.begin(), seen.end());
  std::sort(slots.begin(), slots.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return slots;
}

}  // namespace detail

class SchemaRegistry {
 public:
  /// Parses `(<TAG> <category> <template>)` lines; '#' starts a comment.
  static SchemaRegistry parse(std::istream& in, const Tagset& tagset = Tagset::builtin(),
                              const std::string& origin = "") {
    SchemaRegistry registry;
    registry.tagset_ = &tagset;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string_view view = line;
      while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front()))) {
        view.remove_prefix(1);
      }
      if (view.empty() || view.front() == '#') continue;
      registry.add_line(view, detail::line_ref(origin, line_no));
    }
    return registry;
  }

  static SchemaRegistry parse_string(const std::string& text,
                                     const Tagset& tagset = Tagset::builtin(),
                                     const std::string& origin = "") {
    std::istringstream in(text);
    return parse(in, tagset, origin);
  }

  static SchemaRegistry load_file(const std::string& path,
                                  const Tagset& tagset = Tagset::builtin()) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open schema file " + path);
    return parse(in, tagset, path);
  }

  /// The built-in default registry (the core sem-tag × category rows).
  static const SchemaRegistry& builtin();

  const SemSchema& schema_for(TagId tag, const CcgCategory& category) const {
    const auto entry = entries_.find({tag, category_key(category)});
    if (entry != entries_.end()) return entry->second;
    const auto wildcard = wildcards_.find(tag);
    if (wildcard != wildcards_.end()) return wildcard->second;
    fail(ErrorKind::UnregisteredPair, "no schema for " + tagset_->tag(tag).code + " × " +
                                          print_category(category, /*with_roles=*/false));
  }

  const SemSchema& schema_for(std::string_view tag_code, std::string_view category_text) const {
    const SemTag& tag = tagset_->parse(tag_code);
    const CcgPtr category = parse_category(category_text);
    return schema_for(tag.id, *category);
  }

  bool has(TagId tag, const CcgCategory& category) const {
    return entries_.count({tag, category_key(category)}) > 0 || wildcards_.count(tag) > 0;
  }

  const std::map<std::pair<TagId, std::string>, SemSchema>& entries() const { return entries_; }
  const std::map<TagId, SemSchema>& wildcards() const { return wildcards_; }
  const Tagset& tagset() const { return *tagset_; }

  std::size_t size() const { return entries_.size() + wildcards_.size(); }

 private:
  void add_line(std::string_view view, const std::string& where) {
    if (view.front() != '(' || view.back() != ')') {
      fail(ErrorKind::FormatError, where + "schema entry must be parenthesized");
    }
    std::string_view body = view.substr(1, view.size() - 2);
    std::size_t pos = 0;
    const auto skip_space = [&] {
      while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    };
    const auto read_token = [&] {
      skip_space();
      const std::size_t start = pos;
      while (pos < body.size() && !std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
      if (pos == start) fail(ErrorKind::FormatError, where + "truncated schema entry");
      return std::string(body.substr(start, pos - start));
    };

    const std::string tag_code = read_token();
    const SemTag* tag = tagset_->find(tag_code);
    if (!tag) fail(ErrorKind::UnknownTag, where + "unknown sem-tag '" + tag_code + "'");
    const std::string category_text = read_token();
    skip_space();
    detail::SexpParser parser(body, pos, where);
    const detail::Sexp sexp = parser.parse();
    pos = parser.position();
    skip_space();
    if (pos != body.size()) {
      fail(ErrorKind::FormatError, where + "trailing characters after template");
    }

    SemSchema schema;
    schema.tag = tag->id;
    schema.template_term = detail::term_from_sexp(sexp, where);
    if (category_text == "*") {
      if (!wildcards_.emplace(tag->id, std::move(schema)).second) {
        fail(ErrorKind::FormatError, where + "duplicate wildcard schema for " + tag_code);
      }
      return;
    }
    schema.category = parse_category(category_text, where);
    const std::string key = category_key(*schema.category);
    if (!entries_.emplace(std::make_pair(tag->id, key), std::move(schema)).second) {
      fail(ErrorKind::FormatError,
           where + "duplicate schema for " + tag_code + " × " + key);
    }
  }

  std::map<std::pair<TagId, std::string>, SemSchema> entries_;
  std::map<TagId, SemSchema> wildcards_;
  const Tagset* tagset_ = &Tagset::builtin();
};

namespace detail {

inline const char* builtin_schema_text() {
  return R"sch(# Lexical-semantic schemas: (<TAG> <category> <template>)
# Role labels on category slots (:R1) document which template slot the
# argument fills; category identity ignores them.
(EXS S\NP:R1 (lam P (lam r (app P (lam x (merge (box (e) (sym e) (role R1 e x)) (app r e)))))))
(EXS (S\NP:R1)/NP:R2 (lam Q (lam P (lam r (app P (lam x (app Q (lam y (merge (box (e) (sym e) (role R1 e x) (role R2 e y)) (app r e))))))))))
(CON N (lam x (sym x)))
(CON N/N (lam p (lam x (merge (box () (sym x)) (merge (merge (box (y)) (app p y)) (box () (pred for y x)))))))
(IST N/N (lam p (lam x (merge (box () (sym x)) (app p x)))))
(AND NP/N (lam p (lam q (box () (imp (merge (box (x)) (app p x)) (app q x))))))
(DIS NP/N (lam p (lam q (merge (merge (box (x)) (app p x)) (app q x)))))
(NOT NP/N (lam p (lam q (box () (not (merge (merge (box (x)) (app p x)) (app q x)))))))
(NIL * (lam t t))
(REL (N\N)/NP (lam y (lam x (sym x y))))
(REL PP/NP (lam y (lam x (sym x y))))
)sch";
}

}  // namespace detail

inline const SchemaRegistry& SchemaRegistry::builtin() {
  static const SchemaRegistry registry =
      parse_string(detail::builtin_schema_text(), Tagset::builtin(), "builtin-schemas");
  return registry;
}

/// Fills SYM with `symbol` and the template's role slots with `roles`
/// (R1 first). The role count must match the template exactly.
inline TermPtr instantiate(const SemSchema& schema, const std::string& symbol,
                           const std::vector<std::string>& roles) {
  const std::vector<std::string> slots = detail::role_slots(*schema.template_term);
  if (slots.size() != roles.size()) {
    fail(ErrorKind::ArityMismatch, "schema has " + std::to_string(slots.size()) +
                                       " role slot(s), got " + std::to_string(roles.size()));
  }
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 0; i < slots.size(); ++i) mapping[slots[i]] = roles[i];

  const auto rewrite = [&](const TermPtr& t, const auto& self) -> TermPtr {
    if (t->kind == DrsTerm::Kind::Pred) {
      std::vector<TermPtr> args;
      for (const TermPtr& arg : t->children) args.push_back(self(arg, self));
      if (t->pred_kind == DrsTerm::PredKind::Sym) return drs::pred(symbol, std::move(args));
      if (t->pred_kind == DrsTerm::PredKind::Role) {
        return drs::pred(mapping.at(t->name), std::move(args));
      }
      return drs::pred(t->name, std::move(args));
    }
    if (t->children.empty()) return t;
    auto copy = std::make_shared<DrsTerm>(*t);
    for (TermPtr& child : copy->children) child = self(child, self);
    return TermPtr(copy);
  };
  return rewrite(schema.template_term, rewrite);
}

}  // namespace semtag
