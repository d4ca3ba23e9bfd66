#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "setforge/formula.hpp"
#include "setforge/oracle.hpp"
#include "setforge/poset.hpp"

namespace setforge::hf {

/// Ackermann-coded hereditarily finite sets: m is a member of n exactly when
/// bit m of n is set. Members always have smaller codes; extensionality is
/// literal equality of codes. HF satisfies ZF minus Infinity, which is the
/// fragment all desk-scale verification relies on.
using Code = Nat;

class overflow : public error {
 public:
  using error::error;
};

/// Element codes may not exceed this bit-position bound (so set codes stay
/// below 2^bound; default 2^22). Configurable through SETFORGE_HF_MAX_BITS;
/// pairing and powerset escape any fixed word size quickly, hence the guard.
std::uint64_t max_code_bits();
void set_max_code_bits(std::uint64_t bits);

std::vector<Code> elements(const Code& x);
std::size_t cardinality(const Code& x);
bool contains(const Code& x, const Code& member);

Code encode_set(const std::vector<Code>& xs);
Code singleton(const Code& x);
Code unordered_pair(const Code& x, const Code& y);
Code union_of(const Code& x);
Code powerset(const Code& x);
Code kuratowski_pair(const Code& x, const Code& y);
/// Empty when p does not have the {{x},{x,y}} shape.
std::optional<std::pair<Code, Code>> kuratowski_unpair(const Code& p);
/// ({0} x X) u ({1} x Y) with Kuratowski products.
Code morse_pair(const Code& x, const Code& y);
Code von_neumann(unsigned n);

std::string to_set_builder(const Code& x);  // {{},{{}}} style

// Direct structural algorithms for the basic predicates; these are the
// independent counterparts of the catalog formulas.
bool is_empty_set(const Code& x);
bool is_subset(const Code& x, const Code& y);
bool is_unordered_pair_of(const Code& x, const Code& y, const Code& z);
bool is_union_of(const Code& x, const Code& y);
bool is_pair_code(const Code& x);
bool is_relation_code(const Code& x);
bool is_function_code(const Code& x);
bool is_transitive_code(const Code& x);
bool is_ordinal_code(const Code& x);
bool is_inductive_code(const Code& x);
bool is_omega_code(const Code& x);

/// Reference semantic evaluator. Delta0 sentences are always decided;
/// unbounded existentials search witnesses below `budget` and report
/// OutOfBudget when none is found, unbounded universals dually refute.
Answer eval(const Formula& sentence, Budget budget,
            const AtomRegistry& reg = AtomRegistry::global());

/// A forcing notion installed inside HF: the conditions plus the five
/// handle constants (P, its order as a set of Kuratowski pairs, the order's
/// complement in P^2, the incompatibility set, and the family of every
/// dense subset of P).
struct InstalledPoset {
  FinitePoset poset;
  Code p_code;
  Code leq_code;
  Code leq_complement_code;
  Code perp_code;
  Code dense_family_code;
  std::vector<Code> dense_sets;  // ascending code order

  PosetHandle handle() const {
    return PosetHandle{p_code, leq_code, leq_complement_code, perp_code,
                       dense_family_code};
  }
  const Nat& max_label() const { return poset.label(poset.max_index()); }
};

/// Throws malformed_error unless leq (reflexive closure taken) is a partial
/// order with a maximum on the given conditions.
InstalledPoset install_poset(const std::vector<Code>& conditions,
                             const std::vector<std::pair<Code, Code>>& leq);

/// The HF diagram oracle: Full level, budget-limited beyond Delta0.
OraclePtr oracle();
/// HF as a base presentation (identity provenance).
Presentation presentation();

}  // namespace setforge::hf
