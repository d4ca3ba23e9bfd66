#pragma once

#include <optional>
#include <vector>

#include "setforge/hf.hpp"
#include "setforge/oracle.hpp"
#include "setforge/poset.hpp"

namespace setforge {

/// A P-name in structural form: a finite set of (child name, condition)
/// pairs, conditions given as base-presentation codes. Values are canonical
/// (entries sorted and deduplicated) immutable shared handles.
///
/// Ackermann codes of names outgrow any machine word after two pairing
/// steps, so ordering is computed symbolically and codes are materialized
/// only on request.
class Name;

struct NameEntry;

class Name {
 public:
  Name();  // the empty name
  static Name make(std::vector<NameEntry> entries);
  static Name single(const Name& child, const Nat& cond);

  const std::vector<NameEntry>& entries() const;
  unsigned rank() const;
  bool is_empty() const;
  std::size_t max_entries_per_level() const;

  /// Exact Ackermann-code order, computed without materializing codes.
  static int compare(const Name& a, const Name& b);
  /// Order of the names' labels in the presentation permuted by f.
  static int compare_labels(const Name& a, const Name& b, const Permutation& f);

  bool operator==(const Name& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Name& o) const { return compare(*this, o) != 0; }
  bool operator<(const Name& o) const { return compare(*this, o) < 0; }

  /// The literal Ackermann code; throws hf::overflow past the bit bound.
  hf::Code code() const;
  std::optional<hf::Code> try_code() const;

  std::string str() const;  // { (sigma, p), ... }

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct NameEntry {
  Name child;
  Nat cond;
};

/// x-check: the canonical name {<y-check, 1_P> : y in x} evaluating to x
/// under every filter containing the maximum.
Name check_name(const hf::Code& x, const Nat& max_label);

/// Decodes an HF code into a name over the given poset; empty when the code
/// does not satisfy the recursive definition (the direct-recursion route).
std::optional<Name> name_from_code(const hf::Code& x, const FinitePoset& P);

/// Rank of an HF set (finite von Neumann rank).
unsigned set_rank(const hf::Code& x);

/// Certificate that the recursive P-name definition holds (positive: the
/// tree of the search, represented by its node set) or fails (negative: a
/// descent set ending in a violation). Validity is one Delta0 query.
struct NameCertificate {
  Nat tree;
  bool positive = true;
};

struct PName {
  Name structure;
  /// The name's number in the presentation, when it fits the code bound.
  std::optional<Nat> code;
  std::optional<NameCertificate> certificate;
};

struct IsNameResult {
  bool is_name = false;
  /// Absent only when the certificate set itself overflows the code bound.
  std::optional<NameCertificate> certificate;
};

/// Decides whether x is a P-name by running the certificate search against
/// the Delta0 oracle of the presentation, returning whichever certificate
/// is found. Issues only Delta0-level queries.
IsNameResult is_name(const Presentation& pres, const PosetHandle& h, const Nat& x);

/// Checks a certificate against the model with a single Delta0 query.
bool certificate_valid(const DiagramOracle& delta0, const PosetHandle& h,
                       const Nat& x, const NameCertificate& cert);

/// All names over P of rank <= rank_bound with <= size_bound entries per
/// level, in ascending code order (structural route; complete for finite
/// posets).
std::vector<Name> enumerate_names_structural(const FinitePoset& P,
                                             unsigned rank_bound,
                                             std::size_t size_bound);

/// Oracle-facing enumeration: decodes the conditions from the handle, then
/// streams the structural enumeration in ascending label order, attaching
/// codes and positive certificates where they materialize.
std::vector<PName> enumerate_names(const Presentation& pres, const PosetHandle& h,
                                   unsigned rank_bound, std::size_t size_bound);

}  // namespace setforge
