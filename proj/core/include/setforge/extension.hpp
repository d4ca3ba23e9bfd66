#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "setforge/forcing.hpp"
#include "setforge/generic.hpp"
#include "setforge/hf.hpp"
#include "setforge/names.hpp"

namespace setforge {

/// The recursive interpretation sigma_G, valid over the well-founded HF
/// test bed. This is the independent brute-force oracle the quotient
/// construction is checked against.
hf::Code evaluate_recursive(const GenericFilter& G, const Name& sigma);

/// Same recursion with the filter given as a condition bitmask.
hf::Code evaluate_with_mask(const FinitePoset& P, std::uint64_t filter_mask,
                            const Name& sigma);

/// sigma =_G tau / sigma in_G tau: some condition of the filter forces the
/// atomic relation.
bool eq_g(ForcingContext& ctx, const GenericFilter& G, const Name& sigma,
          const Name& tau);
bool in_g(ForcingContext& ctx, const GenericFilter& G, const Name& sigma,
          const Name& tau);

/// The forcing extension M[G] presented on an initial segment of the
/// naturals: index i denotes the class of the i-th least representative
/// name under =_G, membership induced by in_G. The enumeration bounds are
/// part of the presentation's identity.
class QuotientPresentation {
 public:
  std::size_t size() const { return reps_.size(); }
  const Name& representative(std::size_t i) const { return reps_.at(i); }
  std::optional<Nat> representative_label(std::size_t i) const;
  unsigned rank_bound() const { return rank_bound_; }
  std::size_t size_bound() const { return size_bound_; }

  bool membership(std::size_t i, std::size_t j) const;

  /// Index of the class of an arbitrary name, when its class is
  /// represented within the bounds.
  std::optional<std::size_t> class_of(const Name& n) const;

  /// Index of [x-check]_G; throws contract_error when x-check escapes the
  /// enumeration bounds.
  std::size_t canonical_embedding(const hf::Code& x) const;

  /// Answers a sentence over quotient-index constants by compiling it
  /// through the forcing relation and searching the filter. Delta0
  /// sentences are always decided.
  Answer diagram_query(const Formula& s, QueryLevel level, Budget budget) const;

  QuotientPresentation(std::shared_ptr<ForcingContext> ctx, GenericFilter G,
                       std::vector<Name> reps, unsigned rank_bound,
                       std::size_t size_bound, Permutation label_map);

  const GenericFilter& generic() const { return G_; }
  ForcingContext& context() const { return *ctx_; }

 private:
  std::shared_ptr<ForcingContext> ctx_;
  GenericFilter G_;
  std::vector<Name> reps_;
  unsigned rank_bound_;
  std::size_t size_bound_;
  Permutation label_map_;
  std::vector<Nat> filter_labels_;  // conditions in G, fixed at build time
};

/// Builds the bounded quotient: enumerate the names within the bounds in
/// ascending label order, keep the least representative of each =_G class,
/// and validate materializable names against the Delta0 oracle (Delta0
/// queries only).
QuotientPresentation build_quotient(const Presentation& delta0,
                                    const hf::InstalledPoset& P,
                                    const GenericFilter& G, unsigned rank_bound,
                                    std::size_t size_bound);

}  // namespace setforge
