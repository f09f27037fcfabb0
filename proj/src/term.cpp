#include "rwkit/term.hpp"

#include <algorithm>
#include <sstream>

namespace rwkit {

const char* kConsName = "cons";
const char* kNilName = "nil";

void Signature::declare(const std::string& name, int arity) {
  auto it = arities_.find(name);
  if (it != arities_.end()) {
    if (it->second != arity) {
      throw ArityMismatch("symbol '" + name + "' redeclared with arity " +
                          std::to_string(arity) + " (was " +
                          std::to_string(it->second) + ")");
    }
    return;
  }
  arities_[name] = arity;
}

bool Signature::knows(const std::string& name) const {
  return arities_.count(name) != 0;
}

int Signature::arity(const std::string& name) const {
  auto it = arities_.find(name);
  if (it == arities_.end()) throw UnknownSymbol("unknown symbol '" + name + "'");
  return it->second;
}

Symbol Signature::symbol(const std::string& name) const {
  return Symbol{name, arity(name)};
}

std::vector<Symbol> Signature::all() const {
  std::vector<Symbol> out;
  out.reserve(arities_.size());
  for (const auto& [n, a] : arities_) out.push_back(Symbol{n, a});
  return out;
}

TermPtr Term::var(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->is_var_ = true;
  t->name_ = std::move(name);
  return t;
}

TermPtr Term::app(Symbol head, std::vector<TermPtr> children) {
  if (static_cast<int>(children.size()) != head.arity) {
    throw ArityMismatch("symbol '" + head.name + "' has arity " +
                        std::to_string(head.arity) + " but got " +
                        std::to_string(children.size()) + " children");
  }
  auto t = std::shared_ptr<Term>(new Term());
  t->head_ = std::move(head);
  t->children_ = std::move(children);
  return t;
}

void Substitution::bind(const std::string& var, TermPtr t) {
  if (t->is_var() && t->var_name() == var) return;  // sigma(x) != x
  map_[var] = std::move(t);
}

bool Substitution::binds(const std::string& var) const {
  return map_.count(var) != 0;
}

TermPtr Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : it->second;
}

TermPtr Substitution::apply(const TermPtr& t) const {
  if (t->is_var()) {
    if (auto b = lookup(t->var_name())) return b;
    return t;
  }
  if (t->children().empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children().size());
  bool changed = false;
  for (const auto& c : t->children()) {
    TermPtr c2 = apply(c);
    changed = changed || c2.get() != c.get();
    kids.push_back(std::move(c2));
  }
  if (!changed) return t;
  return Term::app(t->head(), std::move(kids));
}

int term_compare(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->is_var() != b->is_var()) return a->is_var() ? -1 : 1;
  if (a->is_var()) return a->var_name().compare(b->var_name());
  if (int c = a->head().name.compare(b->head().name)) return c < 0 ? -1 : 1;
  if (a->arity() != b->arity()) return a->arity() < b->arity() ? -1 : 1;
  for (int i = 0; i < a->arity(); ++i) {
    if (int c = term_compare(a->children()[i], b->children()[i])) return c;
  }
  return 0;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  return term_compare(a, b) == 0;
}

bool term_less(const TermPtr& a, const TermPtr& b) {
  return term_compare(a, b) < 0;
}

bool is_ground(const TermPtr& t) {
  if (t->is_var()) return false;
  for (const auto& c : t->children()) {
    if (!is_ground(c)) return false;
  }
  return true;
}

static void collect_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->is_var()) {
    out.insert(t->var_name());
    return;
  }
  for (const auto& c : t->children()) collect_vars(c, out);
}

std::set<std::string> vars_of(const TermPtr& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

static bool match_rec(const TermPtr& pattern, const TermPtr& subject,
                      Substitution& sigma) {
  if (pattern->is_var()) {
    if (auto prev = sigma.lookup(pattern->var_name())) {
      return term_equal(prev, subject);
    }
    sigma.bind(pattern->var_name(), subject);
    return true;
  }
  if (subject->is_var()) return false;
  if (!(pattern->head() == subject->head())) return false;
  for (int i = 0; i < pattern->arity(); ++i) {
    if (!match_rec(pattern->children()[i], subject->children()[i], sigma)) {
      return false;
    }
  }
  return true;
}

std::optional<Substitution> match_at_root(const TermPtr& pattern,
                                          const TermPtr& subject) {
  Substitution sigma;
  if (!match_rec(pattern, subject, sigma)) return std::nullopt;
  return sigma;
}

TermPtr subterm_at(const TermPtr& t, const Position& p) {
  TermPtr cur = t;
  for (int idx : p) {
    if (cur->is_var() || idx < 1 || idx > cur->arity()) {
      throw InvalidPosition("position index " + std::to_string(idx) +
                            " invalid in " + to_text(cur));
    }
    cur = cur->children()[idx - 1];
  }
  return cur;
}

TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& s) {
  if (p.empty()) return s;
  int idx = p.front();
  if (t->is_var() || idx < 1 || idx > t->arity()) {
    throw InvalidPosition("position index " + std::to_string(idx) +
                          " invalid in " + to_text(t));
  }
  std::vector<TermPtr> kids = t->children();
  kids[idx - 1] = replace_at(kids[idx - 1], Position(p.begin() + 1, p.end()), s);
  return Term::app(t->head(), std::move(kids));
}

bool is_list_term(const TermPtr& t) {
  if (t->is_var()) return false;
  if (t->head().name == kNilName && t->arity() == 0) return true;
  return t->head().name == kConsName && t->arity() == 2;
}

TermPtr make_list(const std::vector<TermPtr>& items) {
  TermPtr out = Term::app(Symbol{kNilName, 0}, {});
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    out = Term::app(Symbol{kConsName, 2}, {*it, out});
  }
  return out;
}

std::vector<TermPtr> list_items(const TermPtr& t) {
  std::vector<TermPtr> out;
  TermPtr cur = t;
  while (!cur->is_var() && cur->head().name == kConsName && cur->arity() == 2) {
    out.push_back(cur->children()[0]);
    cur = cur->children()[1];
  }
  return out;
}

/// True when t is a proper nil-terminated cons chain.
static bool is_proper_list(const TermPtr& t) {
  TermPtr cur = t;
  while (!cur->is_var() && cur->head().name == kConsName && cur->arity() == 2) {
    cur = cur->children()[1];
  }
  return !cur->is_var() && cur->head().name == kNilName && cur->arity() == 0;
}

static void print_rec(const TermPtr& t, std::ostringstream& os) {
  if (t->is_var()) {
    os << '?' << t->var_name();
    return;
  }
  if (is_proper_list(t)) {
    os << '[';
    bool first = true;
    for (const auto& item : list_items(t)) {
      if (!first) os << ',';
      first = false;
      print_rec(item, os);
    }
    os << ']';
    return;
  }
  os << t->head().name;
  if (!t->children().empty()) {
    os << '(';
    bool first = true;
    for (const auto& c : t->children()) {
      if (!first) os << ',';
      first = false;
      print_rec(c, os);
    }
    os << ')';
  }
}

std::string to_text(const TermPtr& t) {
  std::ostringstream os;
  print_rec(t, os);
  return os.str();
}

}  // namespace rwkit
