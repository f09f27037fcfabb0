#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwkit {

struct RwError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArityMismatch : RwError {
  using RwError::RwError;
};

struct InvalidPosition : RwError {
  using RwError::RwError;
};

struct UnknownSymbol : RwError {
  using RwError::RwError;
};

/// A function symbol: name plus fixed arity. Rewrite variables are a
/// separate syntactic class and never appear in a Signature.
struct Symbol {
  std::string name;
  int arity = 0;

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.name == b.name && a.arity == b.arity;
  }
};

/// Set of declared function symbols. Redeclaring a name with a different
/// arity is an error; unknown names are errors at parse time.
class Signature {
public:
  void declare(const std::string& name, int arity);
  bool knows(const std::string& name) const;
  int arity(const std::string& name) const;
  Symbol symbol(const std::string& name) const;
  std::vector<Symbol> all() const;

private:
  std::map<std::string, int> arities_;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable ranked tree: either a rewrite variable leaf or an
/// application of a Symbol to exactly arity-many children.
class Term {
public:
  static TermPtr var(std::string name);
  static TermPtr app(Symbol head, std::vector<TermPtr> children);
  static TermPtr leaf(const Symbol& head) { return app(head, {}); }

  bool is_var() const { return is_var_; }
  const std::string& var_name() const { return name_; }
  const Symbol& head() const { return head_; }
  const std::vector<TermPtr>& children() const { return children_; }
  int arity() const { return static_cast<int>(children_.size()); }

private:
  Term() = default;
  bool is_var_ = false;
  std::string name_;  // variable name when is_var_
  Symbol head_;
  std::vector<TermPtr> children_;
};

/// 1-based path of child indices from the root; empty = root.
using Position = std::vector<int>;

/// Finite map from rewrite-variable names to terms, applied
/// simultaneously and extended homomorphically over applications.
class Substitution {
public:
  void bind(const std::string& var, TermPtr t);
  bool binds(const std::string& var) const;
  TermPtr lookup(const std::string& var) const;  // nullptr when unbound
  const std::map<std::string, TermPtr>& bindings() const { return map_; }
  bool empty() const { return map_.empty(); }

  TermPtr apply(const TermPtr& t) const;

private:
  std::map<std::string, TermPtr> map_;
};

bool term_equal(const TermPtr& a, const TermPtr& b);
/// Total structural order; vars sort before applications.
int term_compare(const TermPtr& a, const TermPtr& b);
bool term_less(const TermPtr& a, const TermPtr& b);

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return term_less(a, b);
  }
};

bool is_ground(const TermPtr& t);
std::set<std::string> vars_of(const TermPtr& t);

/// Syntactic one-sided matching at the root. Returns the unique
/// substitution with subst(pattern) == subject, or nullopt.
std::optional<Substitution> match_at_root(const TermPtr& pattern,
                                          const TermPtr& subject);

TermPtr subterm_at(const TermPtr& t, const Position& p);
TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& s);

/// Canonical text form: `name(child,...)`, `?name` for variables, bare
/// name for nullary symbols. List chains print as `[a,b,c]`.
std::string to_text(const TermPtr& t);

/// List encoding used by grammar fields: cons/nil chains.
extern const char* kConsName;
extern const char* kNilName;
bool is_list_term(const TermPtr& t);
TermPtr make_list(const std::vector<TermPtr>& items);
std::vector<TermPtr> list_items(const TermPtr& t);

}  // namespace rwkit
