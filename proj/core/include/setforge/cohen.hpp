#pragma once

#include <vector>

#include "setforge/generic.hpp"

namespace setforge::cohen {

/// Finite binary strings coded by prepending a 1 bit and subtracting one:
/// "" -> 0, "0" -> 1, "1" -> 2, "00" -> 3, ... Monotone in length and
/// lexicographic within a length, so least code = shortest-then-lex-least.
Nat code_of(const std::vector<bool>& s);
std::vector<bool> string_of(const Nat& code);

bool is_prefix(const std::vector<bool>& a, const std::vector<bool>& b);

/// The Cohen forcing poset 2^{<omega}: longer strings are stronger,
/// compatibility is comparability.
AbstractPoset poset();

/// D_n = { s : |s| >= n }.
AbstractPoset::DenseSet length_dense(std::size_t n);
/// E_s = { t : t extends s or t is incompatible with s }.
AbstractPoset::DenseSet decision_dense(const std::vector<bool>& s);

}  // namespace setforge::cohen
