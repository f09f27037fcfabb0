#include "rwkit/theory.hpp"

#include <algorithm>

namespace rwkit {

void EquationalTheory::declare_assoc(const std::string& symbol) {
  flags_[symbol].assoc = true;
}

void EquationalTheory::declare_comm(const std::string& symbol) {
  flags_[symbol].comm = true;
}

void EquationalTheory::declare_ac(const std::string& symbol) {
  flags_[symbol].assoc = true;
  flags_[symbol].comm = true;
}

bool EquationalTheory::is_assoc(const std::string& symbol) const {
  auto it = flags_.find(symbol);
  return it != flags_.end() && it->second.assoc;
}

bool EquationalTheory::is_comm(const std::string& symbol) const {
  auto it = flags_.find(symbol);
  return it != flags_.end() && it->second.comm;
}

std::vector<std::string> EquationalTheory::ac_symbols() const {
  std::vector<std::string> out;
  for (const auto& [name, f] : flags_) {
    if (f.assoc && f.comm) out.push_back(name);
  }
  return out;
}

namespace {

// x+y = y+x with distinct variables
bool is_comm_axiom(const TermPtr& l, const TermPtr& r, std::string& symbol) {
  if (l->is_var() || r->is_var()) return false;
  if (!(l->head() == r->head()) || l->arity() != 2) return false;
  const auto& a = l->children();
  const auto& b = r->children();
  if (!a[0]->is_var() || !a[1]->is_var()) return false;
  if (a[0]->var_name() == a[1]->var_name()) return false;
  if (!b[0]->is_var() || !b[1]->is_var()) return false;
  if (b[0]->var_name() != a[1]->var_name()) return false;
  if (b[1]->var_name() != a[0]->var_name()) return false;
  symbol = l->head().name;
  return true;
}

// (x+y)+z = x+(y+z) with distinct variables
bool is_assoc_axiom(const TermPtr& l, const TermPtr& r, std::string& symbol) {
  auto shaped = [](const TermPtr& t, bool left_nested, std::string& f,
                   std::vector<std::string>& vars) {
    if (t->is_var() || t->arity() != 2) return false;
    f = t->head().name;
    const TermPtr& nested = left_nested ? t->children()[0] : t->children()[1];
    const TermPtr& lone = left_nested ? t->children()[1] : t->children()[0];
    if (nested->is_var() || nested->arity() != 2 ||
        nested->head().name != f) {
      return false;
    }
    if (!nested->children()[0]->is_var() || !nested->children()[1]->is_var() ||
        !lone->is_var()) {
      return false;
    }
    if (left_nested) {
      vars = {nested->children()[0]->var_name(),
              nested->children()[1]->var_name(), lone->var_name()};
    } else {
      vars = {lone->var_name(), nested->children()[0]->var_name(),
              nested->children()[1]->var_name()};
    }
    return true;
  };
  std::string f1, f2;
  std::vector<std::string> v1, v2;
  bool ok = false;
  if (shaped(l, true, f1, v1) && shaped(r, false, f2, v2)) ok = true;
  if (!ok && shaped(l, false, f1, v1) && shaped(r, true, f2, v2)) ok = true;
  if (!ok || f1 != f2 || v1 != v2) return false;
  if (v1[0] == v1[1] || v1[1] == v1[2] || v1[0] == v1[2]) return false;
  symbol = f1;
  return true;
}

}  // namespace

EquationalTheory EquationalTheory::from_axioms(
    const std::vector<std::pair<TermPtr, TermPtr>>& axioms) {
  EquationalTheory E;
  for (const auto& [l, r] : axioms) {
    std::string symbol;
    if (is_comm_axiom(l, r, symbol)) {
      E.declare_comm(symbol);
    } else if (is_assoc_axiom(l, r, symbol)) {
      E.declare_assoc(symbol);
    } else {
      throw UnsupportedAxiom("axiom '" + to_text(l) + " = " + to_text(r) +
                             "' is not an A/C shape");
    }
  }
  return E;
}

static void flatten_into(const TermPtr& t, const Symbol& head,
                         const EquationalTheory& E,
                         std::vector<TermPtr>& out) {
  if (!t->is_var() && t->head() == head && head.name != E.memory_symbol) {
    for (const auto& c : t->children()) flatten_into(c, head, E, out);
    return;
  }
  out.push_back(t);
}

std::vector<TermPtr> ac_siblings(const TermPtr& t, const EquationalTheory& E) {
  if (t->is_var()) return {};
  if (!E.is_assoc(t->head().name) || t->head().name == E.memory_symbol) {
    return t->children();
  }
  std::vector<TermPtr> out;
  for (const auto& c : t->children()) flatten_into(c, t->head(), E, out);
  return out;
}

TermPtr ac_rebuild(const Symbol& head, std::vector<TermPtr> siblings,
                   const EquationalTheory& E) {
  if (siblings.empty()) {
    throw RwError("cannot rebuild '" + head.name + "' from no siblings");
  }
  if (E.is_comm(head.name)) {
    std::stable_sort(siblings.begin(), siblings.end(), TermLess{});
  }
  TermPtr acc = siblings.back();
  for (auto it = siblings.rbegin() + 1; it != siblings.rend(); ++it) {
    acc = Term::app(head, {*it, acc});
  }
  return acc;
}

TermPtr ac_canonical(const TermPtr& t, const EquationalTheory& E) {
  if (t->is_var() || t->children().empty() || E.trivial()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) kids.push_back(ac_canonical(c, E));
  TermPtr node = Term::app(t->head(), std::move(kids));
  const std::string& f = t->head().name;
  if (f == E.memory_symbol) return node;
  if (E.is_assoc(f)) {
    std::vector<TermPtr> sibs = ac_siblings(node, E);
    return ac_rebuild(node->head(), std::move(sibs), E);
  }
  if (E.is_comm(f)) {
    std::vector<TermPtr> sibs = node->children();
    std::stable_sort(sibs.begin(), sibs.end(), TermLess{});
    return Term::app(node->head(), std::move(sibs));
  }
  return node;
}

bool ac_equal(const TermPtr& a, const TermPtr& b, const EquationalTheory& E) {
  return term_equal(ac_canonical(a, E), ac_canonical(b, E));
}

void TermSet::insert(const TermPtr& t, const EquationalTheory& E) {
  TermPtr c = ac_canonical(t, E);
  items_.emplace(to_text(c), c);
}

bool TermSet::contains(const TermPtr& t, const EquationalTheory& E) const {
  return items_.count(to_text(ac_canonical(t, E))) != 0;
}

std::vector<TermPtr> TermSet::items() const {
  std::vector<TermPtr> out;
  out.reserve(items_.size());
  for (const auto& [k, v] : items_) out.push_back(v);
  return out;
}

void TermSet::merge(const TermSet& other) {
  for (const auto& [k, v] : other.items_) items_.emplace(k, v);
}

bool TermSet::same(const TermSet& other) const {
  if (items_.size() != other.items_.size()) return false;
  auto a = items_.begin();
  auto b = other.items_.begin();
  for (; a != items_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
  }
  return true;
}

}  // namespace rwkit
