#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "setforge/formula.hpp"

namespace setforge {

/// Search depth for semi-decidable queries: an exclusive upper bound on the
/// codes tried as witnesses for unbounded quantifiers.
using Budget = std::uint64_t;

enum class Answer : std::uint8_t { True, False, OutOfBudget };

std::string answer_str(Answer a);

/// Levels at which a diagram can be queried, ordered
/// Atomic < Delta0 < Sigma(1) < Sigma(2) < ... < Full. A Sigma(n) level
/// also serves Pi(n) sentences, which it decides through their negations.
struct QueryLevel {
  enum class Kind : std::uint8_t { Atomic, Delta0, Sigma, Full };
  Kind kind = Kind::Atomic;
  unsigned n = 0;  // Sigma only

  static QueryLevel atomic() { return {Kind::Atomic, 0}; }
  static QueryLevel delta0() { return {Kind::Delta0, 0}; }
  static QueryLevel sigma(unsigned n);
  static QueryLevel full() { return {Kind::Full, 0}; }

  bool operator==(const QueryLevel& o) const {
    return kind == o.kind && n == o.n;
  }
  bool operator!=(const QueryLevel& o) const { return !(*this == o); }
  bool operator<=(const QueryLevel& o) const;
  bool operator<(const QueryLevel& o) const { return *this <= o && *this != o; }
  std::string str() const;
};

/// Least level able to answer the sentence: Atomic for membership/equality
/// between constants, Delta0 for bounded sentences, Sigma(n) for Sigma(n)
/// and Pi(n) alike.
QueryLevel required_level(const Formula& sentence);

class level_violation : public error {
 public:
  using error::error;
};

/// A presentation of a countable structure on the naturals, queried through
/// sentences of its signature at a declared level.
///
/// Contracts all implementations keep: answers are deterministic, monotone
/// in budget once True/False, and never affirm both a sentence and its
/// negation. Oracles are pure; concurrent read-only use is safe.
class DiagramOracle {
 public:
  virtual ~DiagramOracle() = default;

  QueryLevel level() const { return level_; }
  bool budget_limited() const { return budget_limited_; }

  /// Throws level_violation when the sentence needs more than level(), and
  /// malformed_error when it has free variables.
  Answer query(const Formula& sentence, Budget budget) const;

  /// Exclusive upper bound for the domain numbers that can denote members
  /// of the set denoted by `set_code`. This is what makes the paper's
  /// run-through-all-naturals searches terminate at desk scale.
  virtual Nat member_scan_bound(const Nat& set_code) const = 0;

 protected:
  DiagramOracle(QueryLevel level, bool budget_limited)
      : level_(level), budget_limited_(budget_limited) {}
  virtual Answer do_query(const Formula& sentence, Budget budget) const = 0;

 private:
  QueryLevel level_;
  bool budget_limited_;
};

using OraclePtr = std::shared_ptr<const DiagramOracle>;

/// Restricts an oracle to a lower level; answers are unchanged on sentences
/// within the new level. Idempotent.
OraclePtr restrict_oracle(OraclePtr base, QueryLevel level);

// ---------------------------------------------------------------------------
// Permutations
// ---------------------------------------------------------------------------

/// A finitely-supported bijection of the naturals.
class Permutation {
 public:
  Permutation() = default;  // identity

  /// Disjoint transpositions a <-> b. Throws malformed_error when supports
  /// overlap ("not injective on its support").
  static Permutation from_swaps(const std::vector<std::pair<Nat, Nat>>& swaps);
  /// Explicit graph {a -> b}; must be a bijection of its support.
  static Permutation from_mapping(const std::vector<std::pair<Nat, Nat>>& pairs);

  Nat apply(const Nat& x) const;
  Nat apply_inverse(const Nat& x) const;
  Permutation inverse() const;
  /// (g.compose(f))(x) = g(f(x)).
  Permutation compose(const Permutation& inner) const;
  bool is_identity() const { return fwd_.empty(); }
  /// Largest element moved, plus one; 0 for the identity.
  Nat support_bound() const;
  const std::map<Nat, Nat>& graph() const { return fwd_; }

  Formula relabel(const Formula& sentence) const;
  Term relabel(const Term& t) const;

 private:
  std::map<Nat, Nat> fwd_, inv_;
};

/// A presentation: an oracle together with how it was obtained from the
/// base copy. The recorded bijection is bookkeeping for tests and label
/// arithmetic; all model information still flows through oracle queries.
struct Presentation {
  OraclePtr oracle;
  Permutation from_base;  // identity for a base presentation
  bool permuted = false;

  Nat label_of_base(const Nat& base_code) const { return from_base.apply(base_code); }
  Nat base_of_label(const Nat& label) const { return from_base.apply_inverse(label); }
};

/// Relabels a presentation through f: queries on the result equal queries
/// on the base with all model constants relabeled through the inverse.
Presentation permute(const Presentation& pres, const Permutation& f);

// ---------------------------------------------------------------------------
// Recording wrapper
// ---------------------------------------------------------------------------

/// Counts queries per required level and keeps the atomic transcript; the
/// level-discipline tests are built on it.
class RecordingOracle : public DiagramOracle {
 public:
  explicit RecordingOracle(OraclePtr base);

  std::uint64_t count_at(QueryLevel level) const;
  std::uint64_t count_above(QueryLevel level) const;
  std::uint64_t total() const;
  std::map<std::string, std::uint64_t> counts_by_level() const;
  void reset() const;

  /// Writes the membership transcript as `MEM a b` / `NOTMEM a b` lines.
  void dump_atomic_transcript(std::ostream& os) const;

  Nat member_scan_bound(const Nat& set_code) const override;

 protected:
  Answer do_query(const Formula& sentence, Budget budget) const override;

 private:
  OraclePtr base_;
  mutable std::mutex mu_;
  mutable std::vector<std::pair<QueryLevel, std::uint64_t>> counts_;
  mutable std::vector<std::tuple<Nat, Nat, Answer>> atomic_log_;
};

/// Replays a recorded finite fragment of an atomic diagram. Unrecorded
/// queries answer OutOfBudget.
class TranscriptOracle : public DiagramOracle {
 public:
  static std::shared_ptr<TranscriptOracle> parse(std::istream& is);

  Nat member_scan_bound(const Nat& set_code) const override;

 protected:
  TranscriptOracle() : DiagramOracle(QueryLevel::atomic(), true) {}
  Answer do_query(const Formula& sentence, Budget budget) const override;

 private:
  std::map<std::pair<Nat, Nat>, bool> facts_;
};

}  // namespace setforge
