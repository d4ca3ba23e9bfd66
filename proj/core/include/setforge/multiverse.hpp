#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "setforge/cohen.hpp"
#include "setforge/generic.hpp"
#include "setforge/oracle.hpp"

namespace setforge {

/// Tuples of Cohen strings, one per column of a product poset.
using Tuple = std::vector<std::vector<bool>>;

/// A dense subset of the product poset over a listed column set, with a
/// minimal-extension witness (ties broken lexicographically least by the
/// supplier).
struct ProductDense {
  std::vector<std::size_t> columns;  // the A with D subseteq P_A; A in family
  std::function<bool(const Tuple&)> contains;
  std::function<Tuple(const Tuple&)> extend_into;
};

struct AmalgamationSpec {
  std::size_t columns = 0;  // I = {0, ..., columns-1}
  /// Must contain all singletons and be closed under subsets.
  std::vector<std::vector<std::size_t>> family;
  std::function<std::optional<ProductDense>(std::size_t)> dense_stream;
  std::function<bool(std::size_t)> z;
};

struct MatrixStep {
  std::size_t dense_index = 0;
  std::vector<std::size_t> columns;   // the A_n that was extended
  std::size_t ext_start = 0;          // rows [ext_start, ones_row) are the
  std::size_t ones_row = 0;           // extension-plus-padding block
  std::size_t z_row = 0;
  bool z_bit = false;
};

/// The omega x I matrix of the amalgamation construction. All columns have
/// equal height after every step; the two rows appended last in each step
/// are the all-1 coding row and the all-z(n) row.
struct Matrix {
  std::vector<std::vector<bool>> cols;
  std::vector<MatrixStep> log;
  std::vector<std::vector<std::size_t>> family;

  std::size_t height() const { return cols.empty() ? 0 : cols[0].size(); }
  std::string dump() const;  // one row of 0/1 characters per line
};

/// Runs `steps` rounds of the construction: extend the scheduled columns to
/// meet the scheduled dense set with the witnessed minimal extension, pad
/// them with 1s and the others with 0s to a common height, then append the
/// all-1 row and the all-z(n) row.
Matrix build_matrix(const AmalgamationSpec& spec, std::size_t steps);

/// Recovers z(0..prefix_len-1) from the rows where every column of A shows
/// a 1, walking the logged extension lengths. Throws malformed_error when A
/// belongs to the family (its coding rows are not isolable) and
/// contract_error when the matrix does not show the expected coding shape.
std::vector<bool> decode_z(const Matrix& m, const std::vector<std::size_t>& A,
                           std::size_t prefix_len);

// ---------------------------------------------------------------------------
// z-coded generics (single Cohen column)
// ---------------------------------------------------------------------------

struct CodedGeneric {
  GenericFilter filter;                  // over cohen::poset()
  std::vector<bool> branch;              // union of the sequence
  std::vector<std::size_t> ext_lengths;  // logged per-step extension lengths
};

/// Starts with <z(0)>, then alternates witnessed minimal extensions into
/// the dense sets with coding bits z(1), z(2), ...
CodedGeneric z_coded_generic(
    const std::function<std::optional<AbstractPoset::DenseSet>(std::size_t)>& dense,
    const std::function<bool(std::size_t)>& z, std::size_t steps);

/// The paired decoder: branch plus logged extension lengths back to z.
std::vector<bool> decode_coded_generic(const std::vector<bool>& branch,
                                       const std::vector<std::size_t>& ext_lengths,
                                       std::size_t nbits);

// ---------------------------------------------------------------------------
// Catastrophic reals and grounds
// ---------------------------------------------------------------------------

/// The characteristic bit stream of the membership relation under Cantor
/// pairing of indices: bit <m, n> answers "m is a member of n". No outer
/// model of the presented structure can contain this real.
std::function<bool(const Nat&)> catastrophic_real(OraclePtr atomic);

/// The ground-definability capability: answers instances of the uniform
/// ground formula. Genuine instances are not computable, so implementations
/// are mocks declaring a geology.
class GroundOracle {
 public:
  virtual ~GroundOracle() = default;
  virtual Answer ground_membership(const Nat& x, const Nat& r,
                                   Budget budget) const = 0;
};

struct GroundEntry {
  std::size_t index = 0;
  Nat parameter;
  std::function<Answer(const Nat&, Budget)> membership;
};

/// Probes parameters r = 0, 1, ... below the budget with "is the empty set
/// in the ground of r", emitting a membership predicate for each nonempty
/// ground. Throws undecided_error when a probe runs out of budget.
std::vector<GroundEntry> enumerate_grounds(
    const std::shared_ptr<const GroundOracle>& pi2, Budget budget);

}  // namespace setforge
