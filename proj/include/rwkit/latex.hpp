#pragma once

#include <string>

#include "rwkit/term.hpp"

namespace rwkit {

/// Renders a domain term as LaTeX source: integrals, partial
/// derivatives, the two-scale operators, traces and sums come out in
/// the usual mathematical notation; names are prettified (x1 -> x^1,
/// xsharp -> x^\sharp, eps -> \varepsilon, ...).
std::string to_latex(const TermPtr& t);

}  // namespace rwkit
