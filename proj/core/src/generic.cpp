#include "setforge/generic.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace setforge {

bool GenericFilter::member(const Nat& q) const {
  if (!contains_(q))
    throw contract_error("not a condition: " + q.get_str());
  std::optional<bool> d = decide_(q);
  if (!d)
    throw undecided_error("the logged sequence does not settle condition " +
                          q.get_str());
  return *d;
}

std::optional<bool> GenericFilter::try_member(const Nat& q) const {
  if (!contains_(q)) return false;
  return decide_(q);
}

// ---------------------------------------------------------------------------
// Decoding the handle through the atomic diagram
// ---------------------------------------------------------------------------

std::vector<std::pair<Nat, Nat>> decode_pairs(const DiagramOracle& atomic,
                                              const Nat& relation_set) {
  std::vector<std::pair<Nat, Nat>> out;
  for (const Nat& x : decode::members(atomic, relation_set)) {
    auto pq = decode::unpair(atomic, x);
    if (pq) out.push_back(*pq);
  }
  return out;
}

bool decide_leq(const DiagramOracle& atomic, const PosetHandle& h, const Nat& p,
                const Nat& q) {
  if (!decode::ask(atomic, decode::mem_cc(p, h.p)))
    throw contract_error("decide_leq: " + p.get_str() + " is not a condition");
  if (!decode::ask(atomic, decode::mem_cc(q, h.p)))
    throw contract_error("decide_leq: " + q.get_str() + " is not a condition");
  for (const auto& [a, b] : decode_pairs(atomic, h.leq))
    if (a == p && b == q) return true;
  for (const auto& [a, b] : decode_pairs(atomic, h.leq_complement))
    if (a == p && b == q) return false;
  throw contract_error("order and complement fail to cover (" + p.get_str() +
                       ", " + q.get_str() + ")");
}

// ---------------------------------------------------------------------------
// Theorem-style construction from the atomic diagram
// ---------------------------------------------------------------------------

GenericFilter build_generic(OraclePtr oracle, const PosetHandle& h) {
  const DiagramOracle& atomic = *oracle;
  // Run through the domain and collect the dense family in ascending order.
  std::vector<Nat> dense = decode::members(atomic, h.dense_family);
  if (dense.empty())
    throw contract_error("the dense family is empty; no D0 to start from");

  // Decode the order data once; every later decision is a table lookup.
  auto leq_pairs = std::make_shared<std::set<std::pair<Nat, Nat>>>();
  auto comp_pairs = std::make_shared<std::set<std::pair<Nat, Nat>>>();
  auto perp_pairs = std::make_shared<std::set<std::pair<Nat, Nat>>>();
  for (const auto& pr : decode_pairs(atomic, h.leq)) leq_pairs->insert(pr);
  for (const auto& pr : decode_pairs(atomic, h.leq_complement))
    comp_pairs->insert(pr);
  for (const auto& pr : decode_pairs(atomic, h.perp)) perp_pairs->insert(pr);
  auto leq = [leq_pairs, comp_pairs](const Nat& a, const Nat& b) {
    if (leq_pairs->count({a, b})) return true;
    if (comp_pairs->count({a, b})) return false;
    throw contract_error("order and complement fail to cover a pair");
  };

  std::vector<Nat> seq;
  for (std::size_t n = 0; n < dense.size(); ++n) {
    std::optional<Nat> next;
    for (const Nat& c : decode::members(atomic, dense[n])) {
      if (seq.empty() || leq(c, seq.back())) {
        next = c;
        break;  // members() ascends, so this is the least-numbered choice
      }
    }
    if (!next)
      throw contract_error("dense set " + std::to_string(n) +
                           " has no extension below the sequence");
    seq.push_back(*next);
  }

  Nat p_label = h.p;
  auto contains = [oracle, p_label](const Nat& q) {
    return decode::ask(*oracle, decode::mem_cc(q, p_label));
  };
  std::vector<Nat> seq_copy = seq;
  auto decide = [seq_copy, leq_pairs, perp_pairs](const Nat& q) -> std::optional<bool> {
    for (const Nat& p : seq_copy) {
      if (leq_pairs->count({p, q})) return true;
      if (perp_pairs->count({p, q})) return false;
    }
    return std::nullopt;
  };
  return GenericFilter("model-atomic", std::move(seq), std::move(contains),
                       std::move(decide));
}

// ---------------------------------------------------------------------------
// Abstract posets
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kFirstConditionScanCap = 1u << 20;

}  // namespace

GenericFilter build_generic_abstract(const AbstractPoset& P, std::size_t n_dense) {
  std::optional<Nat> p0;
  for (std::uint64_t c = 0; c < kFirstConditionScanCap; ++c) {
    if (P.contains(Nat(static_cast<unsigned long>(c)))) {
      p0 = Nat(static_cast<unsigned long>(c));
      break;
    }
  }
  if (!p0) throw contract_error("no condition found below the scan cap");

  std::vector<Nat> seq{*p0};
  for (std::size_t n = 0; n < n_dense; ++n) {
    auto D = P.dense_stream(n);
    if (!D) break;
    Nat w = D->extend_into(seq.back());
    if (!P.contains(w) || !P.leq(w, seq.back()) || !D->contains(w))
      throw contract_error("dense-set witness " + std::to_string(n) +
                           " violated its contract");
    seq.push_back(w);
  }

  auto contains = P.contains;
  auto leq = P.leq;
  auto compatible = P.compatible;
  std::vector<Nat> seq_copy = seq;
  auto decide = [seq_copy, leq, compatible](const Nat& q) -> std::optional<bool> {
    for (const Nat& p : seq_copy) {
      if (leq(p, q)) return true;
      if (!compatible(p, q)) return false;
    }
    return std::nullopt;
  };
  return GenericFilter("abstract", std::move(seq), std::move(contains),
                       std::move(decide));
}

// ---------------------------------------------------------------------------
// First-order class forcing with witnessed dense classes
// ---------------------------------------------------------------------------

namespace {

Formula plug1(const Formula& f, const Nat& a) {
  return substitute(f, "x", Term::constant(a));
}

Formula plug2(const Formula& f, const Nat& a, const Nat& b) {
  return substitute(substitute(f, "x", Term::constant(a)), "y",
                    Term::constant(b));
}

}  // namespace

GenericFilter build_generic_class(OraclePtr delta0, const ClassForcingSpec& cls,
                                  const std::vector<DenseClassWitness>& dense) {
  if (!classify(cls.contains).is_delta0() || !classify(cls.leq).is_delta0())
    throw malformed_error("class forcing needs Delta0 class and order formulas");
  auto query = [delta0](const Formula& f) { return decode::ask(*delta0, f); };

  if (!query(plug1(cls.contains, cls.max_element)))
    throw contract_error("the declared maximum is not in the class");

  std::vector<Nat> seq{cls.max_element};
  for (std::size_t n = 0; n < dense.size(); ++n) {
    const DenseClassWitness& D = dense[n];
    Nat w = D.extend_into(seq.back());
    bool honest = query(plug1(cls.contains, w)) &&
                  query(plug2(cls.leq, w, seq.back()));
    if (honest && classify(D.defining).is_delta0())
      honest = query(plug1(D.defining, w));
    if (!honest)
      throw contract_error("dense-class witness " + std::to_string(n) +
                           " violated its contract");
    seq.push_back(w);
  }

  Formula contains_f = cls.contains;
  auto contains = [delta0, contains_f](const Nat& q) {
    return decode::ask(*delta0, plug1(contains_f, q));
  };
  std::vector<Nat> seq_copy = seq;
  Formula leq_f = cls.leq;
  std::optional<Formula> comp_f = cls.compatible;
  auto decide = [delta0, seq_copy, leq_f, comp_f](const Nat& q) -> std::optional<bool> {
    for (const Nat& p : seq_copy) {
      if (decode::ask(*delta0, plug2(leq_f, p, q))) return true;
      if (comp_f && !decode::ask(*delta0, plug2(*comp_f, p, q))) return false;
    }
    return std::nullopt;
  };
  return GenericFilter("class", std::move(seq), std::move(contains),
                       std::move(decide));
}

}  // namespace setforge
