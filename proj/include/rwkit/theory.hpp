#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rwkit/term.hpp"

namespace rwkit {

struct UnsupportedAxiom : RwError {
  using RwError::RwError;
};

/// Finitary equational theory restricted to associativity and/or
/// commutativity flags per symbol. Axioms of any other shape are
/// rejected at load time.
class EquationalTheory {
public:
  static EquationalTheory none() { return {}; }

  void declare_assoc(const std::string& symbol);
  void declare_comm(const std::string& symbol);
  void declare_ac(const std::string& symbol);

  /// Recognizes x+y=y+x and (x+y)+z=x+(y+z) axiom shapes.
  static EquationalTheory from_axioms(
      const std::vector<std::pair<TermPtr, TermPtr>>& axioms);

  bool is_assoc(const std::string& symbol) const;
  bool is_comm(const std::string& symbol) const;
  bool is_ac(const std::string& symbol) const {
    return is_assoc(symbol) && is_comm(symbol);
  }
  bool trivial() const { return flags_.empty(); }
  std::vector<std::string> ac_symbols() const;

  /// Memory nodes are never flattened or reordered.
  std::string memory_symbol = "M";

private:
  struct Flags {
    bool assoc = false;
    bool comm = false;
  };
  std::map<std::string, Flags> flags_;
};

/// Maximal same-symbol sibling list under an associative head; plain
/// children otherwise.
std::vector<TermPtr> ac_siblings(const TermPtr& t, const EquationalTheory& E);

/// Rebuilds an associative node from a sibling list (right-nested,
/// sorted first when the symbol is also commutative).
TermPtr ac_rebuild(const Symbol& head, std::vector<TermPtr> siblings,
                   const EquationalTheory& E);

/// Canonical representative of the AC-equivalence class: flattened,
/// sorted, right-nested. Identity for symbols outside the theory.
TermPtr ac_canonical(const TermPtr& t, const EquationalTheory& E);

bool ac_equal(const TermPtr& a, const TermPtr& b, const EquationalTheory& E);

/// Finite set of terms deduplicated modulo AC-canonical form, iterated
/// in canonical-text order.
class TermSet {
public:
  void insert(const TermPtr& t, const EquationalTheory& E);
  bool contains(const TermPtr& t, const EquationalTheory& E) const;
  bool empty() const { return items_.empty(); }
  size_t size() const { return items_.size(); }
  std::vector<TermPtr> items() const;
  void merge(const TermSet& other);
  bool same(const TermSet& other) const;

private:
  std::map<std::string, TermPtr> items_;  // canonical text -> canonical term
};

}  // namespace rwkit
