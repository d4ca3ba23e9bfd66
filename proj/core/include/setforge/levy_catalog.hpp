#pragma once

#include <string>
#include <vector>

#include "setforge/formula.hpp"

namespace setforge::catalog {

// Hand-written Delta0 defining formulas for the standard basic predicates,
// parameterized by variable names. These back the preloaded atoms of
// AtomRegistry::global() and double as building blocks for the forcing
// compiler.

Formula is_empty(const std::string& x);
Formula subset(const std::string& x, const std::string& y);
Formula unordered_pair_eq(const std::string& x, const std::string& y,
                          const std::string& z);  // x = {y, z}
Formula union_eq(const std::string& x, const std::string& y);  // x = U y
/// x = { var in y : phi(var) } for a Delta0 phi.
Formula separation_instance(const std::string& x, const std::string& y,
                            const std::string& var, const Formula& phi);
Formula is_kuratowski_pair(const std::string& x);
Formula is_relation(const std::string& x);  // set of ordered pairs
Formula is_function(const std::string& x);
Formula is_transitive(const std::string& x);
Formula is_ordinal(const std::string& x);
Formula is_inductive(const std::string& x);
Formula is_omega(const std::string& x);

// Building blocks.
Formula singleton_eq(const std::string& u, const std::string& a);  // u = {a}
Formula kuratowski_eq(const std::string& p, const std::string& a,
                      const std::string& b);  // p = <a, b>
Formula succ_eq(const std::string& z, const std::string& y);  // z = y u {y}
/// Same shapes over arbitrary terms instead of variable names.
Formula kuratowski_eq_t(const Term& p, const Term& a, const Term& b);
Formula subset_t(const Term& x, const Term& y);

struct CatalogEntry {
  std::string name;
  Formula formula;  // canonical variable names x, y, z
};

/// The twelve-entry catalog: empty, subset, unordered pair, union, a
/// separation instance, ordered pair, set of ordered pairs, function,
/// transitive, ordinal, inductive, omega.
std::vector<CatalogEntry> lemma_catalog();

}  // namespace setforge::catalog
