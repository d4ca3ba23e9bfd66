#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "setforge/oracle.hpp"
#include "setforge/oracle_decode.hpp"
#include "setforge/poset.hpp"

namespace setforge {

class undecided_error : public error {
 public:
  using error::error;
};

/// An M-generic filter, backed by its logged descending sequence of
/// conditions and the decision dichotomy: q is in the filter when some
/// logged condition is at or below it, out when some logged condition is
/// incompatible with it. Sealed after construction; member is pure.
class GenericFilter {
 public:
  const std::vector<Nat>& sequence() const { return seq_; }
  const std::string& mode() const { return mode_; }

  /// Throws contract_error when q is not a condition, undecided_error when
  /// the logged sequence cannot settle q (impossible on genuine finite
  /// input).
  bool member(const Nat& q) const;
  std::optional<bool> try_member(const Nat& q) const;

  GenericFilter(std::string mode, std::vector<Nat> seq,
                std::function<bool(const Nat&)> contains,
                std::function<std::optional<bool>(const Nat&)> decide)
      : mode_(std::move(mode)),
        seq_(std::move(seq)),
        contains_(std::move(contains)),
        decide_(std::move(decide)) {}

 private:
  std::string mode_;
  std::vector<Nat> seq_;
  std::function<bool(const Nat&)> contains_;
  std::function<std::optional<bool>(const Nat&)> decide_;
};

/// Enumerates the pairs (p, q) whose Kuratowski code lies in the relation
/// set, unwrapping the pairing through atomic queries. Non-pair members are
/// never emitted. Complete at desk scale thanks to the scan bounds.
std::vector<std::pair<Nat, Nat>> decode_pairs(const DiagramOracle& atomic,
                                              const Nat& relation_set);

/// Decides p <=_P q from the order set and its complement, by running both
/// decoders. Throws contract_error when p or q is not a condition or when
/// the two sets fail to cover the pair.
bool decide_leq(const DiagramOracle& atomic, const PosetHandle& h, const Nat& p,
                const Nat& q);

/// Theorem-style generic construction from the atomic diagram: enumerate
/// the dense family in ascending domain order, take the first-encountered
/// element of D0, then the least-numbered condition below the current one
/// inside each next dense set. Issues only atomic-level queries.
GenericFilter build_generic(OraclePtr atomic, const PosetHandle& h);

/// A poset given by predicates rather than a model, with its dense sets
/// arriving as membership tests plus extension witnesses.
struct AbstractPoset {
  std::function<bool(const Nat&)> contains;
  std::function<bool(const Nat&, const Nat&)> leq;  // first argument stronger
  std::function<bool(const Nat&, const Nat&)> compatible;

  struct DenseSet {
    std::function<bool(const Nat&)> contains;
    /// Returns a member of the dense set at or below the given condition.
    std::function<Nat(const Nat&)> extend_into;
  };
  std::function<std::optional<DenseSet>(std::size_t)> dense_stream;
};

/// The uniform construction over an abstract poset: first-encountered
/// starting condition, then witness extensions through dense sets
/// 0..n_dense-1 in order. Witnesses violating their contract raise
/// contract_error.
GenericFilter build_generic_abstract(const AbstractPoset& P, std::size_t n_dense);

/// A definable dense subclass together with an honest extension witness.
struct DenseClassWitness {
  Formula defining;  // one free variable "x"; parameters as constants
  std::function<Nat(const Nat&)> extend_into;
};

/// First-order class forcing data: Delta0 formulas (free variables "x" and
/// "y", first argument stronger in leq) defining the conditions, the order
/// and optionally compatibility, plus the maximum element.
struct ClassForcingSpec {
  Formula contains;                   // free "x"
  Formula leq;                        // free "x", "y"
  std::optional<Formula> compatible;  // free "x", "y"
  Nat max_element;
};

/// Class-forcing generic loop: the same descending construction with the
/// dense classes supplied as witnessed inputs. Witness honesty is checked
/// with Delta0 queries.
GenericFilter build_generic_class(OraclePtr delta0, const ClassForcingSpec& cls,
                                  const std::vector<DenseClassWitness>& dense);

}  // namespace setforge
