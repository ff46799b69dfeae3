#pragma once

// Lambda-DRS terms: boxes of discourse referents and conditions, closed
// under lambda abstraction/application, box merge (;), negation,
// implication, and disjunction. Referents of a box bind occurrences in its
// own conditions and — through merge and implication — in the right-hand
// operand, which is what makes [x | man(x)] → [e | walk(e), Agent(e,x)] a
// closed universal statement.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semtag/error.hpp"

namespace semtag {

struct DrsTerm;
using TermPtr = std::shared_ptr<const DrsTerm>;

struct DrsTerm {
  enum class Kind { Var, Lam, App, Box, Merge, Not, Imp, Or, Pred };
  // Pred covers ordinary predicates plus the two template placeholders.
  enum class PredKind { Fixed, Sym, Role };

  Kind kind = Kind::Var;
  PredKind pred_kind = PredKind::Fixed;
  std::string name;                // Var name, Lam binder, Pred symbol
  std::vector<std::string> refs;   // Box referents
  std::vector<TermPtr> children;   // Lam body; App f,a; Box conds; operands; Pred args
};

namespace drs {

inline TermPtr var(std::string name) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Var;
  t->name = std::move(name);
  return t;
}

inline TermPtr lam(std::string binder, TermPtr body) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Lam;
  t->name = std::move(binder);
  t->children = {std::move(body)};
  return t;
}

inline TermPtr app(TermPtr f, TermPtr a) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::App;
  t->children = {std::move(f), std::move(a)};
  return t;
}

inline TermPtr box(std::vector<std::string> refs, std::vector<TermPtr> conds) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Box;
  t->refs = std::move(refs);
  t->children = std::move(conds);
  return t;
}

inline TermPtr merge(TermPtr l, TermPtr r) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Merge;
  t->children = {std::move(l), std::move(r)};
  return t;
}

inline TermPtr neg(TermPtr operand) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Not;
  t->children = {std::move(operand)};
  return t;
}

inline TermPtr imp(TermPtr l, TermPtr r) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Imp;
  t->children = {std::move(l), std::move(r)};
  return t;
}

inline TermPtr disj(TermPtr l, TermPtr r) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Or;
  t->children = {std::move(l), std::move(r)};
  return t;
}

inline TermPtr pred(std::string name, std::vector<TermPtr> args,
                    DrsTerm::PredKind kind = DrsTerm::PredKind::Fixed) {
  auto t = std::make_shared<DrsTerm>();
  t->kind = DrsTerm::Kind::Pred;
  t->pred_kind = kind;
  t->name = std::move(name);
  t->children = std::move(args);
  return t;
}

inline TermPtr sym(std::vector<TermPtr> args) {
  return pred("SYM", std::move(args), DrsTerm::PredKind::Sym);
}

inline TermPtr role(std::string name, std::vector<TermPtr> args) {
  return pred(std::move(name), std::move(args), DrsTerm::PredKind::Role);
}

}  // namespace drs

/// True for terms that can stand as a condition inside a box.
inline bool condition_like(const DrsTerm& t) {
  switch (t.kind) {
    case DrsTerm::Kind::Pred:
    case DrsTerm::Kind::Not:
    case DrsTerm::Kind::Imp:
    case DrsTerm::Kind::Or:
      return true;
    default:
      return false;
  }
}

/// Referents a term exports to its right-hand context: a box exports its
/// own, merge and implication pass through both operands' exports.
inline void collect_binders(const DrsTerm& t, std::vector<std::string>& out) {
  switch (t.kind) {
    case DrsTerm::Kind::Box:
      out.insert(out.end(), t.refs.begin(), t.refs.end());
      break;
    case DrsTerm::Kind::Merge:
    case DrsTerm::Kind::Imp:
      collect_binders(*t.children[0], out);
      collect_binders(*t.children[1], out);
      break;
    default:
      break;
  }
}

inline std::vector<std::string> binders(const DrsTerm& t) {
  std::vector<std::string> out;
  collect_binders(t, out);
  return out;
}

namespace detail {

inline void free_vars_into(const DrsTerm& t, std::set<std::string>& bound,
                           std::set<std::string>& out) {
  switch (t.kind) {
    case DrsTerm::Kind::Var:
      if (!bound.count(t.name)) out.insert(t.name);
      break;
    case DrsTerm::Kind::Lam: {
      const bool fresh = bound.insert(t.name).second;
      free_vars_into(*t.children[0], bound, out);
      if (fresh) bound.erase(t.name);
      break;
    }
    case DrsTerm::Kind::Box: {
      std::vector<std::string> added;
      for (const std::string& ref : t.refs) {
        if (bound.insert(ref).second) added.push_back(ref);
      }
      for (const TermPtr& cond : t.children) free_vars_into(*cond, bound, out);
      for (const std::string& ref : added) bound.erase(ref);
      break;
    }
    case DrsTerm::Kind::Merge:
    case DrsTerm::Kind::Imp: {
      free_vars_into(*t.children[0], bound, out);
      std::vector<std::string> added;
      for (const std::string& ref : binders(*t.children[0])) {
        if (bound.insert(ref).second) added.push_back(ref);
      }
      free_vars_into(*t.children[1], bound, out);
      for (const std::string& ref : added) bound.erase(ref);
      break;
    }
    default:
      for (const TermPtr& child : t.children) free_vars_into(*child, bound, out);
      break;
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const DrsTerm& t) {
  std::set<std::string> bound, out;
  detail::free_vars_into(t, bound, out);
  return out;
}

namespace detail {

inline void all_names_into(const DrsTerm& t, std::set<std::string>& out) {
  if (t.kind == DrsTerm::Kind::Var || t.kind == DrsTerm::Kind::Lam) out.insert(t.name);
  for (const std::string& ref : t.refs) out.insert(ref);
  for (const TermPtr& child : t.children) all_names_into(*child, out);
}

inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base;
  while (avoid.count(candidate)) candidate += "'";
  return candidate;
}

/// Renames free occurrences of the variable `from` to `to`; `to` must not
/// occur in `t` (callers pass a fresh name).
inline TermPtr rename_free(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case DrsTerm::Kind::Var:
      return t->name == from ? drs::var(to) : t;
    case DrsTerm::Kind::Lam:
      if (t->name == from) return t;
      return drs::lam(t->name, rename_free(t->children[0], from, to));
    case DrsTerm::Kind::Box: {
      for (const std::string& ref : t->refs) {
        if (ref == from) return t;
      }
      auto copy = std::make_shared<DrsTerm>(*t);
      for (TermPtr& cond : copy->children) cond = rename_free(cond, from, to);
      return copy;
    }
    case DrsTerm::Kind::Merge:
    case DrsTerm::Kind::Imp: {
      auto copy = std::make_shared<DrsTerm>(*t);
      copy->children[0] = rename_free(t->children[0], from, to);
      const std::vector<std::string> left_refs = binders(*t->children[0]);
      bool shadowed = false;
      for (const std::string& ref : left_refs) shadowed = shadowed || ref == from;
      if (!shadowed) copy->children[1] = rename_free(t->children[1], from, to);
      return copy;
    }
    default: {
      auto copy = std::make_shared<DrsTerm>(*t);
      for (TermPtr& child : copy->children) child = rename_free(child, from, to);
      return copy;
    }
  }
}

/// Renames the box referent `from` (the leftmost binder with that name in
/// `t`) to `to`, together with the occurrences it binds inside `t`. The
/// caller renames occurrences in any right-hand siblings that the referent
/// scopes over.
inline TermPtr rename_binder(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case DrsTerm::Kind::Box: {
      auto copy = std::make_shared<DrsTerm>(*t);
      bool found = false;
      for (std::string& ref : copy->refs) {
        if (!found && ref == from) {
          ref = to;
          found = true;
        }
      }
      if (found) {
        for (TermPtr& cond : copy->children) cond = rename_free(cond, from, to);
      }
      return copy;
    }
    case DrsTerm::Kind::Merge:
    case DrsTerm::Kind::Imp: {
      auto copy = std::make_shared<DrsTerm>(*t);
      const std::vector<std::string> left_refs = binders(*t->children[0]);
      bool in_left = false;
      for (const std::string& ref : left_refs) in_left = in_left || ref == from;
      if (in_left) {
        copy->children[0] = rename_binder(t->children[0], from, to);
        copy->children[1] = rename_free(t->children[1], from, to);
      } else {
        copy->children[1] = rename_binder(t->children[1], from, to);
      }
      return copy;
    }
    default:
      return t;
  }
}

inline TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& repl,
                          const std::set<std::string>& repl_free);

/// Freshens every binder of `scoped` (a merge/imp left operand) that would
/// capture a free variable of `repl`, updating `sibling` in step.
inline void avoid_capture(TermPtr& scoped, TermPtr& sibling, const std::set<std::string>& repl_free,
                          const DrsTerm& whole) {
  for (const std::string& ref : binders(*scoped)) {
    if (!repl_free.count(ref)) continue;
    std::set<std::string> avoid = repl_free;
    all_names_into(whole, avoid);
    all_names_into(*scoped, avoid);
    all_names_into(*sibling, avoid);
    const std::string fresh = fresh_name(ref, avoid);
    scoped = rename_binder(scoped, ref, fresh);
    sibling = rename_free(sibling, ref, fresh);
  }
}

inline TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& repl,
                          const std::set<std::string>& repl_free) {
  switch (t->kind) {
    case DrsTerm::Kind::Var:
      return t->name == var ? repl : t;
    case DrsTerm::Kind::Lam: {
      if (t->name == var) return t;
      std::string binder = t->name;
      TermPtr body = t->children[0];
      if (repl_free.count(binder)) {
        std::set<std::string> avoid = repl_free;
        all_names_into(*t, avoid);
        avoid.insert(var);
        const std::string fresh = fresh_name(binder, avoid);
        body = rename_free(body, binder, fresh);
        binder = fresh;
      }
      return drs::lam(binder, substitute(body, var, repl, repl_free));
    }
    case DrsTerm::Kind::Box: {
      for (const std::string& ref : t->refs) {
        if (ref == var) return t;  // occurrences below are bound here
      }
      auto copy = std::make_shared<DrsTerm>(*t);
      for (std::size_t i = 0; i < copy->refs.size(); ++i) {
        if (!repl_free.count(copy->refs[i])) continue;
        std::set<std::string> avoid = repl_free;
        all_names_into(*copy, avoid);
        avoid.insert(var);
        const std::string fresh = fresh_name(copy->refs[i], avoid);
        const std::string old = copy->refs[i];
        copy->refs[i] = fresh;
        for (TermPtr& cond : copy->children) cond = rename_free(cond, old, fresh);
      }
      for (TermPtr& cond : copy->children) cond = substitute(cond, var, repl, repl_free);
      return copy;
    }
    case DrsTerm::Kind::Merge:
    case DrsTerm::Kind::Imp: {
      TermPtr left = t->children[0];
      TermPtr right = t->children[1];
      avoid_capture(left, right, repl_free, *t);
      left = substitute(left, var, repl, repl_free);
      bool shadowed = false;
      for (const std::string& ref : binders(*t->children[0])) shadowed = shadowed || ref == var;
      if (!shadowed) right = substitute(right, var, repl, repl_free);
      auto copy = std::make_shared<DrsTerm>(*t);
      copy->children = {std::move(left), std::move(right)};
      return copy;
    }
    default: {
      auto copy = std::make_shared<DrsTerm>(*t);
      for (TermPtr& child : copy->children) child = substitute(child, var, repl, repl_free);
      return copy;
    }
  }
}

/// Merges two boxes, freshening right-hand referents that collide with the
/// left box or capture free variables of `extra_scope`.
inline TermPtr merge_boxes(const TermPtr& l, const TermPtr& r) {
  TermPtr right = r;
  std::set<std::string> taken(l->refs.begin(), l->refs.end());
  const std::set<std::string> left_free = free_vars(*l);
  taken.insert(left_free.begin(), left_free.end());
  for (const std::string& ref : r->refs) {
    if (taken.count(ref)) {
      std::set<std::string> avoid = taken;
      all_names_into(*l, avoid);
      all_names_into(*right, avoid);
      const std::string fresh = fresh_name(ref, avoid);
      right = rename_binder(right, ref, fresh);
      taken.insert(fresh);
    } else {
      taken.insert(ref);
    }
  }
  std::vector<std::string> refs = l->refs;
  refs.insert(refs.end(), right->refs.begin(), right->refs.end());
  std::vector<TermPtr> conds = l->children;
  conds.insert(conds.end(), right->children.begin(), right->children.end());
  return drs::box(std::move(refs), std::move(conds));
}

/// Single leftmost-outermost reduction step; nullopt at normal form.
inline std::optional<TermPtr> reduce_once(const TermPtr& t) {
  using Kind = DrsTerm::Kind;
  if (t->kind == Kind::App && t->children[0]->kind == Kind::Lam) {
    const TermPtr& fn = t->children[0];
    const TermPtr& arg = t->children[1];
    return substitute(fn->children[0], fn->name, arg, free_vars(*arg));
  }
  if (t->kind == Kind::Merge) {
    const TermPtr& l = t->children[0];
    const TermPtr& r = t->children[1];
    if (l->kind == Kind::Box && r->kind == Kind::Box) return merge_boxes(l, r);
    if (l->kind == Kind::Box && condition_like(*r)) {
      return merge_boxes(l, drs::box({}, {r}));
    }
    if (condition_like(*l) && r->kind == Kind::Box) {
      return merge_boxes(drs::box({}, {l}), r);
    }
    if (condition_like(*l) && condition_like(*r)) return drs::box({}, {l, r});
  }
  for (std::size_t i = 0; i < t->children.size(); ++i) {
    if (std::optional<TermPtr> reduced = reduce_once(t->children[i])) {
      auto copy = std::make_shared<DrsTerm>(*t);
      copy->children[i] = std::move(*reduced);
      return TermPtr(copy);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Reduces to normal form: beta steps plus box-merge resolution. The step
/// budget guards against terms outside the schema fragment (e.g.
/// self-application), for which reduction would never finish.
inline TermPtr beta_reduce(TermPtr term, std::size_t max_steps = 10000) {
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::optional<TermPtr> next = detail::reduce_once(term);
    if (!next) return term;
    term = std::move(*next);
  }
  fail(ErrorKind::NonTerminating,
       "reduction did not reach a normal form within " + std::to_string(max_steps) + " steps");
}

namespace detail {

/// Scope environment for alpha comparison: innermost binding wins.
inline bool alpha_equal_in(const DrsTerm& a, const DrsTerm& b,
                           std::vector<std::pair<std::string, std::string>>& env) {
  using Kind = DrsTerm::Kind;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Var: {
      for (std::size_t i = env.size(); i-- > 0;) {
        const bool la = env[i].first == a.name;
        const bool lb = env[i].second == b.name;
        if (la || lb) return la && lb;
      }
      return a.name == b.name;  // both free
    }
    case Kind::Lam: {
      env.emplace_back(a.name, b.name);
      const bool equal = alpha_equal_in(*a.children[0], *b.children[0], env);
      env.pop_back();
      return equal;
    }
    case Kind::Box: {
      if (a.refs.size() != b.refs.size() || a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.refs.size(); ++i) env.emplace_back(a.refs[i], b.refs[i]);
      bool equal = true;
      for (std::size_t i = 0; equal && i < a.children.size(); ++i) {
        equal = alpha_equal_in(*a.children[i], *b.children[i], env);
      }
      env.resize(env.size() - a.refs.size());
      return equal;
    }
    case Kind::Merge:
    case Kind::Imp: {
      if (!alpha_equal_in(*a.children[0], *b.children[0], env)) return false;
      const std::vector<std::string> left_a = binders(*a.children[0]);
      const std::vector<std::string> left_b = binders(*b.children[0]);
      if (left_a.size() != left_b.size()) return false;
      for (std::size_t i = 0; i < left_a.size(); ++i) env.emplace_back(left_a[i], left_b[i]);
      const bool equal = alpha_equal_in(*a.children[1], *b.children[1], env);
      env.resize(env.size() - left_a.size());
      return equal;
    }
    case Kind::Pred: {
      if (a.pred_kind != b.pred_kind || a.name != b.name) return false;
      [[fallthrough]];
    }
    default: {
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!alpha_equal_in(*a.children[i], *b.children[i], env)) return false;
      }
      return true;
    }
  }
}

}  // namespace detail

inline bool alpha_equal(const DrsTerm& a, const DrsTerm& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return detail::alpha_equal_in(a, b, env);
}

inline bool alpha_equal(const TermPtr& a, const TermPtr& b) { return alpha_equal(*a, *b); }

/// Linear boxed-DRS notation: λP.λr.P(λx.[e | walk(e), Agent(e,x)];r(e))
inline std::string print_term(const DrsTerm& t) {
  using Kind = DrsTerm::Kind;
  switch (t.kind) {
    case Kind::Var:
      return t.name;
    case Kind::Lam:
      return "λ" + t.name + "." + print_term(*t.children[0]);
    case Kind::App: {
      const DrsTerm& f = *t.children[0];
      std::string head = print_term(f);
      if (f.kind != Kind::Var && f.kind != Kind::App && f.kind != Kind::Pred) {
        head = "(" + head + ")";
      }
      return head + "(" + print_term(*t.children[1]) + ")";
    }
    case Kind::Box: {
      std::string out = "[";
      for (std::size_t i = 0; i < t.refs.size(); ++i) {
        if (i > 0) out += ",";
        out += t.refs[i];
      }
      out += " | ";
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i > 0) out += ", ";
        out += print_term(*t.children[i]);
      }
      return out + "]";
    }
    case Kind::Merge:
      return print_term(*t.children[0]) + ";" + print_term(*t.children[1]);
    case Kind::Not: {
      const DrsTerm& operand = *t.children[0];
      std::string body = print_term(operand);
      if (operand.kind != Kind::Box && operand.kind != Kind::Pred) body = "(" + body + ")";
      return "¬" + body;
    }
    case Kind::Imp:
      return print_term(*t.children[0]) + " → " + print_term(*t.children[1]);
    case Kind::Or:
      return print_term(*t.children[0]) + " ∨ " + print_term(*t.children[1]);
    case Kind::Pred: {
      std::string out = t.name + "(";
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i > 0) out += ",";
        out += print_term(*t.children[i]);
      }
      return out + ")";
    }
  }
  return "";
}

inline std::string print_term(const TermPtr& t) { return print_term(*t); }

}  // namespace semtag
