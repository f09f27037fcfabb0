#include "rwkit/acmatch.hpp"

#include <algorithm>
#include <sstream>

namespace rwkit {

namespace {

struct Budget {
  long long left;
  void spend() {
    if (--left < 0) throw AcMatchLimit();
  }
};

struct Matcher {
  const EquationalTheory& E;
  Budget budget;

  std::vector<Substitution> node(const TermPtr& p, const TermPtr& s,
                                 const Substitution& sigma) {
    budget.spend();
    if (p->is_var()) {
      if (auto prev = sigma.lookup(p->var_name())) {
        if (ac_equal(prev, s, E)) return {sigma};
        return {};
      }
      Substitution next = sigma;
      next.bind(p->var_name(), ac_canonical(s, E));
      return {next};
    }
    if (s->is_var()) return {};
    if (p->head().name != s->head().name) return {};
    const std::string& f = p->head().name;
    if (f != E.memory_symbol) {
      if (E.is_ac(f)) {
        std::vector<ACMatch> ms = ac_node(p->head(), ac_siblings(p, E),
                                          ac_siblings(s, E), sigma, false);
        std::vector<Substitution> out;
        out.reserve(ms.size());
        for (auto& m : ms) out.push_back(std::move(m.sigma));
        return out;
      }
      if (E.is_assoc(f)) {
        return assoc_node(p->head(), ac_siblings(p, E), ac_siblings(s, E),
                          sigma);
      }
      if (E.is_comm(f) && p->arity() == 2 && s->arity() == 2) {
        std::vector<Substitution> out = positional(p->children(),
                                                   s->children(), sigma);
        std::vector<TermPtr> swapped{s->children()[1], s->children()[0]};
        for (auto& m : positional(p->children(), swapped, sigma)) {
          out.push_back(std::move(m));
        }
        return out;
      }
    }
    if (p->arity() != s->arity()) return {};
    return positional(p->children(), s->children(), sigma);
  }

  std::vector<Substitution> positional(const std::vector<TermPtr>& ps,
                                       const std::vector<TermPtr>& ss,
                                       const Substitution& sigma) {
    std::vector<Substitution> acc{sigma};
    for (size_t i = 0; i < ps.size() && !acc.empty(); ++i) {
      std::vector<Substitution> next;
      for (const auto& sg : acc) {
        for (auto& ext : node(ps[i], ss[i], sg)) {
          next.push_back(std::move(ext));
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

  /// AC assignment: structured pattern items take single subject
  /// elements, variables take nonempty sub-multisets. Subjects arrive
  /// canonicalized so duplicate elements sit together.
  std::vector<ACMatch> ac_node(const Symbol& head,
                               const std::vector<TermPtr>& pitems,
                               std::vector<TermPtr> sitems,
                               const Substitution& sigma,
                               bool allow_remainder) {
    for (auto& s : sitems) s = ac_canonical(s, E);
    std::stable_sort(sitems.begin(), sitems.end(), TermLess{});
    // structured items first, variables afterwards
    std::vector<TermPtr> ordered;
    std::vector<TermPtr> vars;
    for (const auto& p : pitems) {
      (p->is_var() ? vars : ordered).push_back(p);
    }
    ordered.insert(ordered.end(), vars.begin(), vars.end());
    std::vector<ACMatch> out;
    std::vector<bool> used(sitems.size(), false);
    assign(head, ordered, 0, sitems, used, sigma, allow_remainder, out);
    return out;
  }

  void assign(const Symbol& head, const std::vector<TermPtr>& pitems,
              size_t pi, const std::vector<TermPtr>& sitems,
              std::vector<bool>& used, const Substitution& sigma,
              bool allow_remainder, std::vector<ACMatch>& out) {
    budget.spend();
    if (pi == pitems.size()) {
      std::vector<TermPtr> rest;
      for (size_t i = 0; i < sitems.size(); ++i) {
        if (!used[i]) rest.push_back(sitems[i]);
      }
      if (!rest.empty() && !allow_remainder) return;
      out.push_back(ACMatch{sigma, std::move(rest)});
      return;
    }
    const TermPtr& p = pitems[pi];
    if (!p->is_var()) {
      const TermPtr* last = nullptr;
      for (size_t i = 0; i < sitems.size(); ++i) {
        if (used[i]) continue;
        if (last && term_equal(*last, sitems[i])) continue;
        last = &sitems[i];
        for (const auto& ext : node(p, sitems[i], sigma)) {
          used[i] = true;
          assign(head, pitems, pi + 1, sitems, used, ext, allow_remainder,
                 out);
          used[i] = false;
        }
      }
      return;
    }
    if (auto prev = sigma.lookup(p->var_name())) {
      // bound variable: remove its flattened elements from the pool
      std::vector<TermPtr> need;
      if (!prev->is_var() && E.is_ac(prev->head().name)) {
        need = ac_siblings(prev, E);
      } else {
        need.push_back(prev);
      }
      std::vector<size_t> taken;
      bool ok = true;
      for (const auto& n : need) {
        bool found = false;
        for (size_t i = 0; i < sitems.size(); ++i) {
          if (used[i]) continue;
          if (ac_equal(sitems[i], n, E)) {
            used[i] = true;
            taken.push_back(i);
            found = true;
            break;
          }
        }
        if (!found) {
          ok = false;
          break;
        }
      }
      if (ok) {
        assign(head, pitems, pi + 1, sitems, used, sigma, allow_remainder,
               out);
      }
      for (size_t i : taken) used[i] = false;
      return;
    }
    // unbound variable: enumerate nonempty subsets of the free elements
    std::vector<size_t> free;
    for (size_t i = 0; i < sitems.size(); ++i) {
      if (!used[i]) free.push_back(i);
    }
    if (free.empty()) return;
    bool last_item = (pi + 1 == pitems.size());
    auto bind_and_go = [&](const std::vector<size_t>& chosen) {
      std::vector<TermPtr> parts;
      parts.reserve(chosen.size());
      for (size_t i : chosen) parts.push_back(sitems[i]);
      TermPtr bound = parts.size() == 1 ? parts[0]
                                        : ac_rebuild(head, parts, E);
      Substitution next = sigma;
      next.bind(p->var_name(), bound);
      for (size_t i : chosen) used[i] = true;
      assign(head, pitems, pi + 1, sitems, used, next, allow_remainder, out);
      for (size_t i : chosen) used[i] = false;
    };
    if (last_item && !allow_remainder) {
      bind_and_go(free);  // must cover everything that is left
      return;
    }
    if (free.size() > 20) throw AcMatchLimit();
    for (unsigned long long mask = 1; mask < (1ull << free.size()); ++mask) {
      budget.spend();
      std::vector<size_t> chosen;
      for (size_t b = 0; b < free.size(); ++b) {
        if (mask & (1ull << b)) chosen.push_back(free[b]);
      }
      bind_and_go(chosen);
    }
  }

  /// Associative-only: ordered segmentation of the flattened lists.
  std::vector<Substitution> assoc_node(const Symbol& head,
                                       const std::vector<TermPtr>& pitems,
                                       const std::vector<TermPtr>& sitems,
                                       const Substitution& sigma) {
    std::vector<Substitution> out;
    assoc_assign(head, pitems, 0, sitems, 0, sigma, out);
    return out;
  }

  void assoc_assign(const Symbol& head, const std::vector<TermPtr>& pitems,
                    size_t pi, const std::vector<TermPtr>& sitems, size_t si,
                    const Substitution& sigma,
                    std::vector<Substitution>& out) {
    budget.spend();
    if (pi == pitems.size()) {
      if (si == sitems.size()) out.push_back(sigma);
      return;
    }
    const TermPtr& p = pitems[pi];
    size_t rest_patterns = pitems.size() - pi - 1;
    if (!p->is_var()) {
      if (si >= sitems.size()) return;
      for (const auto& ext : node(p, sitems[si], sigma)) {
        assoc_assign(head, pitems, pi + 1, sitems, si + 1, ext, out);
      }
      return;
    }
    for (size_t take = 1; si + take + rest_patterns <= sitems.size();
         ++take) {
      std::vector<TermPtr> parts(sitems.begin() + si,
                                 sitems.begin() + si + take);
      TermPtr seg =
          parts.size() == 1 ? parts[0] : ac_rebuild(head, parts, E);
      if (auto prev = sigma.lookup(p->var_name())) {
        if (!ac_equal(prev, seg, E)) continue;
        assoc_assign(head, pitems, pi + 1, sitems, si + take, sigma, out);
      } else {
        Substitution next = sigma;
        next.bind(p->var_name(), seg);
        assoc_assign(head, pitems, pi + 1, sitems, si + take, next, out);
      }
    }
  }

};

std::string match_key(const ACMatch& m) {
  std::ostringstream os;
  for (const auto& [v, t] : m.sigma.bindings()) {
    os << v << "=" << to_text(t) << ";";
  }
  os << "|";
  for (const auto& r : m.remainder) os << to_text(r) << ";";
  return os.str();
}

}  // namespace

std::vector<ACMatch> match_modulo_full(const TermPtr& pattern,
                                       const TermPtr& subject,
                                       const EquationalTheory& E,
                                       bool allow_remainder, long long cap) {
  Matcher m{E, Budget{cap}};
  std::vector<ACMatch> raw;
  TermPtr subj = ac_canonical(subject, E);
  if (!pattern->is_var() && !subj->is_var() &&
      pattern->head().name == subj->head().name &&
      E.is_ac(pattern->head().name) &&
      pattern->head().name != E.memory_symbol) {
    raw = m.ac_node(pattern->head(), ac_siblings(pattern, E),
                    ac_siblings(subj, E), Substitution{}, allow_remainder);
  } else {
    for (auto& sg : m.node(pattern, subj, Substitution{})) {
      raw.push_back(ACMatch{std::move(sg), {}});
    }
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const ACMatch& a, const ACMatch& b) {
                     return match_key(a) < match_key(b);
                   });
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const ACMatch& a, const ACMatch& b) {
                          return match_key(a) == match_key(b);
                        }),
            raw.end());
  return raw;
}

std::vector<Substitution> match_modulo(const TermPtr& pattern,
                                       const TermPtr& subject,
                                       const EquationalTheory& E) {
  std::vector<Substitution> out;
  for (auto& m : match_modulo_full(pattern, subject, E, false)) {
    out.push_back(std::move(m.sigma));
  }
  return out;
}

}  // namespace rwkit
