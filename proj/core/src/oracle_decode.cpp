#include "setforge/oracle_decode.hpp"

namespace setforge::decode {

bool ask(const DiagramOracle& o, const Formula& sentence) {
  Answer a = o.query(sentence, 1);
  if (a == Answer::OutOfBudget)
    throw contract_error("oracle failed to decide an in-level sentence");
  return a == Answer::True;
}

Formula mem_cc(const Nat& a, const Nat& b) {
  return Formula::member(Term::constant(a), Term::constant(b));
}

std::vector<Nat> members(const DiagramOracle& o, const Nat& set_label) {
  std::vector<Nat> out;
  Nat bound = o.member_scan_bound(set_label);
  for (Nat e = 0; e < bound; ++e)
    if (ask(o, mem_cc(e, set_label))) out.push_back(e);
  return out;
}

std::optional<std::pair<Nat, Nat>> unpair(const DiagramOracle& o, const Nat& label) {
  std::vector<Nat> outer = members(o, label);
  if (outer.empty() || outer.size() > 2) return std::nullopt;
  std::vector<std::vector<Nat>> inner;
  inner.reserve(outer.size());
  for (const Nat& u : outer) inner.push_back(members(o, u));
  if (outer.size() == 1) {
    if (inner[0].size() != 1) return std::nullopt;
    return std::make_pair(inner[0][0], inner[0][0]);
  }
  const std::vector<Nat>* sing = nullptr;
  const std::vector<Nat>* doub = nullptr;
  if (inner[0].size() == 1 && inner[1].size() == 2) {
    sing = &inner[0];
    doub = &inner[1];
  } else if (inner[1].size() == 1 && inner[0].size() == 2) {
    sing = &inner[1];
    doub = &inner[0];
  } else {
    return std::nullopt;
  }
  const Nat& a = (*sing)[0];
  if ((*doub)[0] == a) return std::make_pair(a, (*doub)[1]);
  if ((*doub)[1] == a) return std::make_pair(a, (*doub)[0]);
  return std::nullopt;
}

}  // namespace setforge::decode
