#include "rwkit/grammar.hpp"

#include "rwkit/parser.hpp"

namespace rwkit {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Region: return "Region";
    case Kind::Function: return "Function";
    case Kind::Variable: return "Variable";
    case Kind::BoundaryCond: return "BoundaryCondition";
    case Kind::Any: return "Any";
  }
  return "?";
}

std::string GrammarViolation::describe() const {
  std::string pos = "[";
  for (size_t i = 0; i < where.size(); ++i) {
    if (i) pos += ",";
    pos += std::to_string(where[i]);
  }
  pos += "]";
  return "grammar violation at " + pos + ": " + reason;
}

namespace {
const char* kOps[] = {"plus", "minus", "times", "divide", "pow"};
const char* kTags[] = {"Unknown", "Test", "Known", "BotType"};
const char* kBcKinds[] = {"dirichlet", "neumann", "periodic", "antiperiodic",
                          "transmission"};
}  // namespace

GrammarSignature::GrammarSignature() {
  sig_.declare("Reg", 5);
  sig_.declare("Fun", 4);
  sig_.declare("Var", 2);
  sig_.declare("BC", 3);
  sig_.declare("Oper", 5);
  sig_.declare("IndexedFun", 2);
  sig_.declare("IndexedReg", 2);
  sig_.declare("IndexedVar", 2);
  sig_.declare("M", 2);
  sig_.declare(kConsName, 2);
  sig_.declare(kNilName, 0);
  sig_.declare("BotR", 0);
  sig_.declare("BotF", 0);
  for (const char* t : kTags) sig_.declare(t, 0);
  for (const char* b : kBcKinds) sig_.declare(b, 0);
  for (const char* o : kOps) sig_.declare(o, 2);
  sig_.declare("neg", 1);
}

void GrammarSignature::add_region_name(const std::string& name) {
  sig_.declare(name, 0);
  regions_.insert(name);
}
void GrammarSignature::add_var_name(const std::string& name) {
  sig_.declare(name, 0);
  vars_.insert(name);
}
void GrammarSignature::add_fun_name(const std::string& name) {
  sig_.declare(name, 0);
  funs_.insert(name);
}
void GrammarSignature::add_oper_name(const std::string& name) {
  sig_.declare(name, 0);
  opers_.insert(name);
}
void GrammarSignature::add_cons_name(const std::string& name) {
  sig_.declare(name, 0);
  cons_.insert(name);
}

bool GrammarSignature::is_region_name(const std::string& n) const {
  return regions_.count(n) != 0;
}
bool GrammarSignature::is_var_name(const std::string& n) const {
  return vars_.count(n) != 0;
}
bool GrammarSignature::is_fun_name(const std::string& n) const {
  return funs_.count(n) != 0;
}
bool GrammarSignature::is_oper_name(const std::string& n) const {
  return opers_.count(n) != 0;
}
bool GrammarSignature::is_cons_name(const std::string& n) const {
  return cons_.count(n) != 0 || is_numeral(n);
}
bool GrammarSignature::is_op(const std::string& n) const {
  for (const char* o : kOps) {
    if (n == o) return true;
  }
  return n == "neg";
}
bool GrammarSignature::is_type_tag(const std::string& n) const {
  for (const char* t : kTags) {
    if (n == t) return true;
  }
  return false;
}
bool GrammarSignature::is_bc_kind(const std::string& n) const {
  for (const char* b : kBcKinds) {
    if (n == b) return true;
  }
  return false;
}

namespace {

struct Checker {
  const GrammarSignature& g;

  std::optional<GrammarViolation> fail(Position where, std::string why) {
    return GrammarViolation{std::move(where), std::move(why)};
  }

  std::optional<GrammarViolation> list_of(const TermPtr& t, Position pos,
                                          Kind k, const char* what) {
    if (t->is_var()) return std::nullopt;
    if (!is_list_term(t)) {
      return fail(pos, std::string("expected a list of ") + what);
    }
    TermPtr cur = t;
    int i = 1;
    while (!cur->is_var() && cur->head().name == kConsName) {
      Position at = pos;
      at.push_back(i);
      if (auto v = check(cur->children()[0], at, k)) return v;
      cur = cur->children()[1];
      ++i;
    }
    return std::nullopt;
  }

  std::optional<GrammarViolation> name_slot(
      const TermPtr& t, Position pos, bool (GrammarSignature::*pred)(
                                          const std::string&) const,
      const char* what) {
    if (t->is_var()) return std::nullopt;
    if (t->arity() != 0 || !(g.*pred)(t->head().name)) {
      return fail(pos, std::string("expected a ") + what + " name");
    }
    return std::nullopt;
  }

  std::optional<GrammarViolation> numeral_list(const TermPtr& t,
                                               Position pos) {
    if (t->is_var()) return std::nullopt;
    if (!is_list_term(t)) return fail(pos, "expected a direction list");
    TermPtr cur = t;
    int i = 1;
    while (!cur->is_var() && cur->head().name == kConsName) {
      const TermPtr& d = cur->children()[0];
      Position at = pos;
      at.push_back(i);
      if (!d->is_var() && !(d->arity() == 0 && is_numeral(d->head().name))) {
        return fail(at, "expected a space-direction numeral");
      }
      cur = cur->children()[1];
      ++i;
    }
    return std::nullopt;
  }

  std::optional<GrammarViolation> cons_list(const TermPtr& t, Position pos) {
    if (t->is_var()) return std::nullopt;
    if (!is_list_term(t)) return fail(pos, "expected a parameter list");
    TermPtr cur = t;
    int i = 1;
    while (!cur->is_var() && cur->head().name == kConsName) {
      const TermPtr& d = cur->children()[0];
      Position at = pos;
      at.push_back(i);
      if (!d->is_var() &&
          !(d->arity() == 0 && g.is_cons_name(d->head().name))) {
        return fail(at, "expected a constant parameter");
      }
      cur = cur->children()[1];
      ++i;
    }
    return std::nullopt;
  }

  std::optional<GrammarViolation> check(const TermPtr& t, Position pos,
                                        Kind want) {
    if (t->is_var()) return std::nullopt;
    const std::string& h = t->head().name;
    switch (want) {
      case Kind::Region: {
        if (h == "BotR" && t->arity() == 0) return std::nullopt;
        if (h == "Reg") {
          if (auto v = name_slot(t->children()[0], sub(pos, 1),
                                 &GrammarSignature::is_region_name, "region"))
            return v;
          if (auto v = numeral_list(t->children()[1], sub(pos, 2))) return v;
          if (auto v = list_of(t->children()[2], sub(pos, 3), Kind::Region,
                               "subregions"))
            return v;
          if (auto v = check(t->children()[3], sub(pos, 4), Kind::Region))
            return v;
          const TermPtr& nrm = t->children()[4];
          if (!(!nrm->is_var() && nrm->head().name == "BotF" &&
                nrm->arity() == 0)) {
            if (auto v = check(nrm, sub(pos, 5), Kind::Function)) return v;
          }
          return std::nullopt;
        }
        if (h == "IndexedReg") {
          // base may be a region or a function term (the productions
          // index functions; regions appear indexed in the extensions)
          auto as_region = check(t->children()[0], sub(pos, 1), Kind::Region);
          if (as_region) {
            if (auto v =
                    check(t->children()[0], sub(pos, 1), Kind::Function)) {
              return as_region;
            }
          }
          return check(t->children()[1], sub(pos, 2), Kind::Variable);
        }
        if (h == "M" && t->arity() == 2) {
          if (auto v = check(t->children()[0], sub(pos, 1), Kind::Region))
            return v;
          return check(t->children()[1], sub(pos, 2), Kind::Region);
        }
        return fail(pos, "expected a region term, found '" + h + "'");
      }
      case Kind::Variable: {
        if (h == "Var") {
          if (auto v = name_slot(t->children()[0], sub(pos, 1),
                                 &GrammarSignature::is_var_name, "variable"))
            return v;
          return check(t->children()[1], sub(pos, 2), Kind::Region);
        }
        if (h == "IndexedVar") {
          if (auto v = check(t->children()[0], sub(pos, 1), Kind::Variable))
            return v;
          return check(t->children()[1], sub(pos, 2), Kind::Variable);
        }
        if (h == "M" && t->arity() == 2) {
          if (auto v = check(t->children()[0], sub(pos, 1), Kind::Variable))
            return v;
          return check(t->children()[1], sub(pos, 2), Kind::Variable);
        }
        return fail(pos, "expected a variable term, found '" + h + "'");
      }
      case Kind::BoundaryCond: {
        if (h == "BC") {
          const TermPtr& kind = t->children()[0];
          if (!kind->is_var() &&
              !(kind->arity() == 0 && g.is_bc_kind(kind->head().name))) {
            return fail(sub(pos, 1), "expected a boundary-condition kind");
          }
          if (auto v = check(t->children()[1], sub(pos, 2), Kind::Region))
            return v;
          return check(t->children()[2], sub(pos, 3), Kind::Function);
        }
        if (h == "M" && t->arity() == 2) {
          if (auto v =
                  check(t->children()[0], sub(pos, 1), Kind::BoundaryCond))
            return v;
          return check(t->children()[1], sub(pos, 2), Kind::BoundaryCond);
        }
        return fail(pos, "expected a boundary-condition term, found '" + h +
                             "'");
      }
      case Kind::Function:
      case Kind::Any:
        break;
    }
    // Function production (also the fallthrough for Any on non-var roots).
    if (h == "BotF" && t->arity() == 0) return std::nullopt;
    if (t->arity() == 0 && g.is_cons_name(h)) return std::nullopt;
    if (g.is_op(h)) {
      for (int i = 0; i < t->arity(); ++i) {
        if (auto v = check(t->children()[i], sub(pos, i + 1), Kind::Function))
          return v;
      }
      return std::nullopt;
    }
    if (h == "Var" || h == "IndexedVar") {
      return check(t, pos, Kind::Variable);
    }
    if (h == "Fun") {
      if (auto v = name_slot(t->children()[0], sub(pos, 1),
                             &GrammarSignature::is_fun_name, "function"))
        return v;
      if (auto v = list_of(t->children()[1], sub(pos, 2), Kind::Variable,
                           "variables"))
        return v;
      if (auto v = list_of(t->children()[2], sub(pos, 3), Kind::BoundaryCond,
                           "boundary conditions"))
        return v;
      const TermPtr& tag = t->children()[3];
      if (!tag->is_var() &&
          !(tag->arity() == 0 && g.is_type_tag(tag->head().name))) {
        return fail(sub(pos, 4), "expected a function nature tag");
      }
      return std::nullopt;
    }
    if (h == "IndexedFun") {
      if (auto v = check(t->children()[0], sub(pos, 1), Kind::Function))
        return v;
      return check(t->children()[1], sub(pos, 2), Kind::Variable);
    }
    if (h == "Oper") {
      if (auto v = name_slot(t->children()[0], sub(pos, 1),
                             &GrammarSignature::is_oper_name, "operator"))
        return v;
      // the argument slot holds one function term or a list of them
      const TermPtr& args = t->children()[1];
      if (!args->is_var() && is_list_term(args)) {
        if (auto v = list_of(args, sub(pos, 2), Kind::Function, "arguments"))
          return v;
      } else {
        if (auto v = check(args, sub(pos, 2), Kind::Function)) return v;
      }
      if (auto v = list_of(t->children()[2], sub(pos, 3), Kind::Variable,
                           "domain variables"))
        return v;
      if (auto v = list_of(t->children()[3], sub(pos, 4), Kind::Variable,
                           "codomain variables"))
        return v;
      return cons_list(t->children()[4], sub(pos, 5));
    }
    if (h == "M" && t->arity() == 2) {
      if (auto v = check(t->children()[0], sub(pos, 1), Kind::Function))
        return v;
      return check(t->children()[1], sub(pos, 2), Kind::Function);
    }
    return fail(pos, "term '" + h + "' fits no grammar production");
  }

  static Position sub(Position p, int i) {
    p.push_back(i);
    return p;
  }
};

Kind principal_kind(const TermPtr& t) {
  if (t->is_var()) return Kind::Any;
  const std::string& h = t->head().name;
  if (h == "Reg" || h == "IndexedReg" || h == "BotR") return Kind::Region;
  if (h == "Var" || h == "IndexedVar") return Kind::Variable;
  if (h == "BC") return Kind::BoundaryCond;
  if (h == "M" && t->arity() == 2) return principal_kind(t->children()[0]);
  return Kind::Function;
}

}  // namespace

std::optional<GrammarViolation> validate_as(const GrammarSignature& g,
                                            const TermPtr& t, Kind k) {
  Checker c{g};
  return c.check(t, {}, k);
}

std::variant<Kind, GrammarViolation> validate(const GrammarSignature& g,
                                              const TermPtr& t) {
  Kind k = principal_kind(t);
  if (k == Kind::Any) return k;  // bare rewrite variable
  if (auto v = validate_as(g, t, k)) return *v;
  return k;
}

Kind validate_or_throw(const GrammarSignature& g, const TermPtr& t) {
  auto r = validate(g, t);
  if (auto* v = std::get_if<GrammarViolation>(&r)) {
    throw GrammarViolationError(*v);
  }
  return std::get<Kind>(r);
}

namespace {

TermPtr oper(const GrammarSignature& g, const std::string& name, TermPtr args,
             std::vector<TermPtr> dom, std::vector<TermPtr> cod,
             std::vector<TermPtr> params) {
  TermPtr t = Term::app(g.signature().symbol("Oper"),
                        {Term::leaf(g.signature().symbol(name)), args,
                         make_list(dom), make_list(cod), make_list(params)});
  validate_or_throw(g, t);
  return t;
}

}  // namespace

TermPtr mk_integral(const GrammarSignature& g, TermPtr u, TermPtr x) {
  return oper(g, "Integral", std::move(u), {std::move(x)}, {}, {});
}

TermPtr mk_partial(const GrammarSignature& g, TermPtr u, TermPtr x) {
  return oper(g, "Partial", std::move(u), {x}, {x}, {});
}

TermPtr mk_trace(const GrammarSignature& g, TermPtr u, TermPtr x,
                 TermPtr xp) {
  return oper(g, "Restriction", std::move(u), {std::move(x)},
              {std::move(xp)}, {});
}

TermPtr mk_two_scale(const GrammarSignature& g, TermPtr u, TermPtr x,
                     std::vector<TermPtr> codomain, TermPtr eps) {
  return oper(g, "T", std::move(u), {std::move(x)}, std::move(codomain),
              {std::move(eps)});
}

TermPtr mk_two_scale_adjoint(const GrammarSignature& g, TermPtr v,
                             std::vector<TermPtr> domain, TermPtr x,
                             TermPtr eps) {
  return oper(g, "Tstar", std::move(v), std::move(domain), {std::move(x)},
              {std::move(eps)});
}

TermPtr mk_smooth_adjoint(const GrammarSignature& g, TermPtr v,
                          std::vector<TermPtr> domain, TermPtr x,
                          TermPtr eps) {
  return oper(g, "B", std::move(v), std::move(domain), {std::move(x)},
              {std::move(eps)});
}

TermPtr mk_sum(const GrammarSignature& g, TermPtr u, TermPtr i) {
  return oper(g, "Sum", std::move(u), {std::move(i)}, {}, {});
}

}  // namespace rwkit
