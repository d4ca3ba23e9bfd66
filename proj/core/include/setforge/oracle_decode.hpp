#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "setforge/oracle.hpp"

namespace setforge::decode {

/// Asks a question the oracle must decide; OutOfBudget is a contract
/// violation here.
bool ask(const DiagramOracle& o, const Formula& sentence);

Formula mem_cc(const Nat& a, const Nat& b);

/// The members of a coded set, found by scanning the domain up to the
/// oracle's member bound. Ascending.
std::vector<Nat> members(const DiagramOracle& o, const Nat& set_label);

/// Computational inspection of the Kuratowski ordered pair: recovers (a, b)
/// from the label of {{a},{a,b}} through membership queries alone, or
/// nothing if the label is not pair-shaped.
std::optional<std::pair<Nat, Nat>> unpair(const DiagramOracle& o, const Nat& label);

}  // namespace setforge::decode
