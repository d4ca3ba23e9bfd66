#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "setforge/extension.hpp"
#include "setforge/generic.hpp"
#include "setforge/hf.hpp"
#include "setforge/oracle.hpp"

namespace setforge {

/// A presentation in the expanded signature. The constant p denotes the
/// forcing notion through its order set (the set of Kuratowski pairs of
/// the order; the underlying set is its field, recovered Delta0-wise from
/// the reflexive pairs). The d_j name the dense subsets. The internal
/// choice constant is carried as a capability consulted per set: its graph
/// cannot be written down under Ackermann coding (pairing a subset of the
/// notion into a set outruns any memory), but each choice is validated
/// against the model with a membership query, which is all the procedure
/// ever needs of it.
struct ExpandedPresentation {
  Presentation base;
  Nat p;
  std::function<Nat(const Nat&)> choose;  // label of a nonempty set -> label
  std::function<std::optional<Nat>(std::size_t)> d;

  /// Resolves @p and @d<j> to their labels, then queries the base. The @c
  /// constant has no literal label at desk scale and is rejected.
  Answer query(const Formula& sentence, Budget budget) const;
};

ExpandedPresentation permute_expanded(const ExpandedPresentation& e,
                                      const Permutation& f);

struct PhiObject {
  std::vector<Nat> sequence;     // descending conditions, as labels
  GenericFilter filter;          // over presentation labels
  hf::InstalledPoset installed;  // the forcing notion, decoded to base codes
  QuotientPresentation fragment;
};

/// The prescribed-method functor on objects: find the maximum through its
/// Delta0 definition, then repeatedly let the choice constant pick from the
/// Delta0-definable set {q in d_s : q <= p_s}. Every search target is
/// uniquely determined, which is what makes the procedure
/// presentation-invariant.
PhiObject phi_object(const ExpandedPresentation& e, std::size_t steps,
                     unsigned rank_bound, std::size_t size_bound);

/// Checks that f is an isomorphism of expanded presentations on the
/// inspected fragment: the order constant and the dense constants map
/// across, membership is preserved below the label bound, and the choice
/// capabilities correspond on the nonempty subsets of the notion.
bool expanded_morphism_ok(const ExpandedPresentation& e,
                          const ExpandedPresentation& e_star,
                          const Permutation& f, const Nat& label_bound,
                          std::size_t d_count);

/// The functor on morphisms: index-to-index map between the two extension
/// fragments, [sigma]_G to [f sigma]_{G*}. Throws contract_error when f
/// fails a spot check or a class escapes the target fragment. Set
/// `verify` false to skip the spot checks when they were already run.
std::vector<std::size_t> phi_morphism(const ExpandedPresentation& e,
                                      const ExpandedPresentation& e_star,
                                      const Permutation& f,
                                      const PhiObject& obj,
                                      const PhiObject& obj_star,
                                      const Nat& label_bound,
                                      std::size_t d_count, bool verify = true);

// ---------------------------------------------------------------------------
// Pointwise-definable canonical listings
// ---------------------------------------------------------------------------

struct DefinabilityOracle {
  /// The element defined by the k-th definition, or nothing when that
  /// definition defines no element.
  std::function<std::optional<Nat>(std::size_t)> defined_element;
  std::size_t count = 0;
};

/// m_0, m_1, ...: the elements in definition order; duplicates are kept.
std::vector<std::optional<Nat>> canonical_listing(const DefinabilityOracle& defin);

/// The induced listing for feeding the generic loop: defined values with
/// later duplicates dropped.
std::vector<Nat> first_occurrence_listing(const std::vector<std::optional<Nat>>& listing);

// ---------------------------------------------------------------------------
// Order-sensitivity demonstrations
// ---------------------------------------------------------------------------

struct SensitivityReport {
  std::vector<Nat> seq_a, seq_b;
  std::vector<std::pair<Nat, bool>> filter_a, filter_b;  // label, membership
  std::optional<Nat> first_difference;                   // least differing label
  bool generic_a = false, generic_b = false;
};

/// Runs the descending-sequence construction under two different search
/// orders of the domain (the order in which "the naturals" are tried) and
/// reports where the filters part ways. Orders are priority lists of
/// condition indices; unlisted conditions follow in label order.
SensitivityReport order_sensitivity_demo(const FinitePoset& P,
                                         const std::vector<std::uint64_t>& dense_masks,
                                         const std::vector<std::size_t>& order_a,
                                         const std::vector<std::size_t>& order_b);

struct CohenSensitivityReport {
  std::vector<bool> branch_a, branch_b;
  std::optional<std::size_t> first_difference;  // bit position
};

/// The same phenomenon from reordering the dense sets of the Cohen poset.
CohenSensitivityReport order_sensitivity_demo_cohen(
    const std::vector<AbstractPoset::DenseSet>& dense,
    const std::vector<std::size_t>& order_a,
    const std::vector<std::size_t>& order_b);

}  // namespace setforge
