#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "setforge/formula.hpp"

namespace setforge {

/// A finite partial order with maximum on at most 64 conditions, used both
/// as the installed form of a forcing notion and as the scaffolding of the
/// forcing recursion. Conditions are identified by index; each index carries
/// the label (domain element / HF code) it had in its presentation.
/// `p <= q` means p is the stronger condition.
class FinitePoset {
 public:
  /// `leq` lists (p, q) label pairs with p <= q; the reflexive closure is
  /// taken automatically. Throws malformed_error unless the result is a
  /// partial order with a maximum element.
  static FinitePoset from_relation(std::vector<Nat> labels,
                                   const std::vector<std::pair<Nat, Nat>>& leq);

  std::size_t size() const { return labels_.size(); }
  const std::vector<Nat>& labels() const { return labels_; }
  const Nat& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(const Nat& label) const;

  std::size_t max_index() const { return max_index_; }
  bool leq(std::size_t p, std::size_t q) const;  // p is stronger
  bool compatible(std::size_t p, std::size_t q) const;
  /// Bitmask of conditions r with r <= p.
  std::uint64_t below_mask(std::size_t p) const { return below_[p]; }
  std::uint64_t all_mask() const;

  bool is_dense(std::uint64_t mask) const;
  /// Every dense subset, as bitmasks, in mask order.
  std::vector<std::uint64_t> all_dense_masks() const;
  std::vector<std::size_t> minimal_elements() const;

 private:
  std::vector<Nat> labels_;
  std::vector<std::uint64_t> below_;
  std::size_t max_index_ = 0;
};

/// The indices a model must supply for Theorem-style generic construction:
/// the forcing notion, its order, the order's complement in P x P, the
/// incompatibility relation and the family of dense subsets. All five are
/// domain elements (labels) of the presentation at hand.
struct PosetHandle {
  Nat p;
  Nat leq;
  Nat leq_complement;
  Nat perp;
  Nat dense_family;
};

}  // namespace setforge
