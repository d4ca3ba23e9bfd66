#pragma once

#include <string>
#include <string_view>

#include "setforge/formula.hpp"

namespace setforge {

/// Line-oriented fully parenthesized prefix syntax:
///
///   (mem a b)  (eq a b)  (not f)  (and f g ...)  (or f g ...)
///   (ball v bound f)  (bex v bound f)  (ex v f)  (all v f)
///   (atom subset a b)  or, for registered atoms, just (subset a b)
///   (imp f g) and (iff f g) desugar to not/and/or at parse time
///
/// Terms: identifiers are variables, `#3` is the model constant 3,
/// `@p @c @d7` are the expanded-signature constants. Parsed formulas are
/// alpha-normalized; the printer is a right inverse of the parser.
Formula parse_formula(std::string_view text,
                      const AtomRegistry& reg = AtomRegistry::global());

Term parse_term(std::string_view text);

std::string print_term(const Term& t);
std::string print_formula(const Formula& phi,
                          const AtomRegistry& reg = AtomRegistry::global());

}  // namespace setforge
