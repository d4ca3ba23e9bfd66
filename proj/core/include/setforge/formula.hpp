#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace setforge {

/// Natural numbers of unbounded size. Domain elements of presentations,
/// Ackermann codes and Goedel numbers all live here.
using Nat = mpz_class;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that does not satisfy a documented precondition or file format.
class malformed_error : public error {
 public:
  using error::error;
};

/// A runtime contract was violated (dishonest witness, mismatched handle, ...).
class contract_error : public error {
 public:
  using error::error;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

/// Terms of the three signatures: variables, model constants (#n, denoting
/// domain elements of a presentation), and the expanded-signature constants
/// @p, @c, @d<j>.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, SigP, SigC, SigD };

  static Term var(std::string name);
  static Term constant(Nat code);
  static Term constant(unsigned long code) { return constant(Nat(code)); }
  static Term sig_p();
  static Term sig_c();
  static Term sig_d(std::uint64_t j);

  Kind kind() const { return kind_; }
  const std::string& var_name() const;
  const Nat& code() const;
  std::uint64_t d_index() const;

  bool is_constant_like() const { return kind_ != Kind::Var; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  Term() = default;
  friend struct FormulaNode;
  Kind kind_ = Kind::Var;
  std::string name_;
  Nat code_;
  std::uint64_t d_ = 0;
};

// ---------------------------------------------------------------------------
// Levy classes
// ---------------------------------------------------------------------------

/// A point of the Levy hierarchy lattice: Delta0, Sigma(n) or Pi(n), n >= 1.
struct LevyClass {
  enum class Kind : std::uint8_t { Delta0, Sigma, Pi };
  Kind kind = Kind::Delta0;
  unsigned level = 0;  // 0 for Delta0, >= 1 otherwise

  static LevyClass delta0() { return {Kind::Delta0, 0}; }
  static LevyClass sigma(unsigned n);
  static LevyClass pi(unsigned n);

  bool is_delta0() const { return kind == Kind::Delta0; }
  /// Inclusion in the lattice: Delta0 <= everything, Sigma(n)/Pi(n) <=
  /// Sigma(m) and Pi(m) for m > n, and each class <= itself.
  bool subsumed_by(const LevyClass& o) const;

  bool operator==(const LevyClass& o) const {
    return kind == o.kind && level == o.level;
  }
  bool operator!=(const LevyClass& o) const { return !(*this == o); }
  std::string str() const;
};

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct AtomId {
  std::uint32_t value = 0;
  bool operator==(const AtomId& o) const { return value == o.value; }
  auto operator<=>(const AtomId& o) const { return value <=> o.value; }
};

struct FormulaNode;

/// Immutable formula over the set-theoretic / Levy / expanded signatures.
/// Ten constructors; implication and biconditional are desugared by the
/// parser. Values are cheap shared handles.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    Member,
    Equal,
    Atom,
    Not,
    And,
    Or,
    BoundedExists,
    BoundedForall,
    Exists,
    Forall,
  };

  static Formula member(Term lhs, Term rhs);
  static Formula equal(Term lhs, Term rhs);
  static Formula atom(AtomId id, std::vector<Term> args);
  static Formula negation(Formula body);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  /// Rejects a bound term that mentions the bound variable.
  static Formula bounded_exists(std::string var, Term bound, Formula body);
  static Formula bounded_forall(std::string var, Term bound, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  /// Conjunction / disjunction over a list; empty lists are rejected.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  Kind kind() const;
  const Term& lhs() const;
  const Term& rhs() const;
  AtomId atom_id() const;
  const std::vector<Term>& atom_args() const;
  Formula body() const;   // Not and all quantifiers
  Formula left() const;   // And/Or
  Formula right() const;  // And/Or
  const std::string& quant_var() const;
  const Term& quant_bound() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
  friend struct FormulaNode;
};

// ---------------------------------------------------------------------------
// Syntactic operations
// ---------------------------------------------------------------------------

/// Least Levy class syntactically containing phi. Bounded quantifiers are
/// transparent (the Levy convention). Formulas that are conjunctions of a
/// proper Sigma(n) and a proper Pi(n) part have no least class in the
/// lattice; the classifier settles such ties on Sigma(n+1).
LevyClass classify(const Formula& phi);

std::set<std::string> free_vars(const Formula& phi);

/// Capture-avoiding substitution of a term for a free variable.
Formula substitute(const Formula& phi, const std::string& var, const Term& t);

/// Renames bound variables so they are pairwise distinct and distinct from
/// all free variables. Original names are kept where already distinct.
Formula alpha_normalize(const Formula& phi);

bool is_alpha_normal(const Formula& phi);

/// True when the formula is a single Member/Equal atom over constant-like
/// terms, i.e. a sentence of the plain atomic diagram.
bool is_atomic_sentence(const Formula& phi);

bool is_closed(const Formula& phi);

/// Prenex normalization via the collection rewrite: all unbounded
/// quantifiers are moved outermost over a Delta0 matrix, hoisting them
/// through bounded quantifiers with fresh collection bounds. Equivalent in
/// ZF - Infinity and classification-preserving. Delta0 input is returned
/// unchanged.
Formula normalize_collection(const Formula& phi);

/// True when no unbounded quantifier occurs under a bounded quantifier or
/// connective.
bool is_prenex(const Formula& phi);

// ---------------------------------------------------------------------------
// Goedel coding
// ---------------------------------------------------------------------------

/// Cantor pairing; the basis of the coding scheme. Stable across releases.
Nat cantor_pair(const Nat& a, const Nat& b);
std::pair<Nat, Nat> cantor_unpair(const Nat& z);

Nat godel_code(const Term& t);
Nat godel_code(const Formula& phi);
Term decode_term(const Nat& code);
Formula decode_formula(const Nat& code);

// ---------------------------------------------------------------------------
// Levy-atom registry
// ---------------------------------------------------------------------------

struct AtomInfo {
  std::string name;                 // primary textual name
  Formula definition;               // Delta0 defining formula
  std::vector<std::string> params;  // its free variables, in argument order
};

/// Append-only table of registered Delta0 predicates R_phi. Registration is
/// atomic; registering a formula that is already present (up to renaming of
/// its parameters) returns the existing id.
class AtomRegistry {
 public:
  AtomRegistry() = default;
  AtomRegistry(const AtomRegistry&) = delete;
  AtomRegistry& operator=(const AtomRegistry&) = delete;

  /// Requires classify(definition) == Delta0 and free_vars(definition) ==
  /// params. Throws malformed_error on arity mismatch.
  AtomId register_atom(const std::string& name, const Formula& definition,
                       const std::vector<std::string>& params);

  const AtomInfo& info(AtomId id) const;
  std::optional<AtomId> by_name(const std::string& name) const;
  std::size_t size() const;

  /// Process-wide registry, preloaded with the standard Delta0 catalog
  /// (see levy_catalog.hpp).
  static AtomRegistry& global();

 private:
  mutable std::mutex mu_;
  std::vector<AtomInfo> atoms_;
  std::vector<std::pair<Nat, AtomId>> by_key_;  // canonical code -> id
  std::vector<std::pair<std::string, AtomId>> by_name_;
};

/// Replaces every LevyAtom by its registered definition, recursively, until
/// none remain. Classification-preserving. Throws contract_error for an
/// unregistered id.
Formula expand_levy_atoms(const Formula& phi,
                          const AtomRegistry& reg = AtomRegistry::global());

}  // namespace setforge
