#pragma once

#include <vector>

#include "rwkit/theory.hpp"

namespace rwkit {

inline constexpr long long kAcSplitCap = 10000;

struct AcMatchLimit : RwError {
  AcMatchLimit()
      : RwError("AC matching exceeded the candidate-split cap") {}
};

/// One way of matching a pattern against a subject modulo the theory.
/// When the pattern root is an AC symbol, the match may cover only a
/// sub-multiset of the flattened siblings; the untouched ones are the
/// remainder and must be recombined with the rewritten part.
struct ACMatch {
  Substitution sigma;
  std::vector<TermPtr> remainder;
};

/// All matches of pattern against the ground subject modulo E, sorted
/// and deduplicated by binding canonical forms. allow_remainder permits
/// sub-multiset coverage at an AC pattern root (rule application sites).
std::vector<ACMatch> match_modulo_full(const TermPtr& pattern,
                                       const TermPtr& subject,
                                       const EquationalTheory& E,
                                       bool allow_remainder,
                                       long long cap = kAcSplitCap);

/// Full-coverage matches only (no remainder), substitutions alone.
std::vector<Substitution> match_modulo(const TermPtr& pattern,
                                       const TermPtr& subject,
                                       const EquationalTheory& E);

}  // namespace rwkit
