#include "setforge/hf.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <sstream>

namespace setforge::hf {

namespace {

std::atomic<std::uint64_t> g_max_bits = [] {
  if (const char* env = std::getenv("SETFORGE_HF_MAX_BITS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
  }
  return std::uint64_t{1} << 22;
}();

void check_element(const Code& x) {
  if (x < 0) throw malformed_error("negative code");
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 64 ||
      x > Nat(static_cast<unsigned long>(g_max_bits.load())))
    throw overflow("element code " +
                   (mpz_sizeinbase(x.get_mpz_t(), 2) > 64
                        ? std::string("(") +
                              std::to_string(mpz_sizeinbase(x.get_mpz_t(), 2)) +
                              " bits)"
                        : x.get_str()) +
                   " exceeds the configured bit bound " +
                   std::to_string(g_max_bits.load()));
}

unsigned long to_bit(const Code& x) {
  check_element(x);
  return x.get_ui();
}

}  // namespace

std::uint64_t max_code_bits() { return g_max_bits.load(); }
void set_max_code_bits(std::uint64_t bits) {
  if (bits == 0) throw malformed_error("bit bound must be positive");
  g_max_bits.store(bits);
}

std::vector<Code> elements(const Code& x) {
  std::vector<Code> out;
  mp_bitcnt_t pos = mpz_scan1(x.get_mpz_t(), 0);
  while (pos != static_cast<mp_bitcnt_t>(-1)) {
    out.emplace_back(static_cast<unsigned long>(pos));
    pos = mpz_scan1(x.get_mpz_t(), pos + 1);
  }
  return out;
}

std::size_t cardinality(const Code& x) {
  return mpz_popcount(x.get_mpz_t());
}

bool contains(const Code& x, const Code& member) {
  if (member < 0) return false;
  if (!member.fits_ulong_p())
    return false;  // bit positions beyond any representable length
  return mpz_tstbit(x.get_mpz_t(), member.get_ui()) != 0;
}

Code encode_set(const std::vector<Code>& xs) {
  Code out = 0;
  for (const Code& x : xs) {
    mpz_setbit(out.get_mpz_t(), to_bit(x));
  }
  return out;
}

Code singleton(const Code& x) { return encode_set({x}); }

Code unordered_pair(const Code& x, const Code& y) { return encode_set({x, y}); }

Code union_of(const Code& x) {
  Code out = 0;
  for (const Code& e : elements(x)) out |= e;
  return out;
}

Code powerset(const Code& x) {
  std::vector<Code> elems = elements(x);
  if (elems.size() > 24) throw overflow("powerset of a set with 2^24+ subsets");
  Code out = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << elems.size()); ++mask) {
    Code subset = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) mpz_setbit(subset.get_mpz_t(), to_bit(elems[i]));
    }
    mpz_setbit(out.get_mpz_t(), to_bit(subset));
  }
  return out;
}

Code kuratowski_pair(const Code& x, const Code& y) {
  return unordered_pair(singleton(x), unordered_pair(x, y));
}

std::optional<std::pair<Code, Code>> kuratowski_unpair(const Code& p) {
  std::vector<Code> outer = elements(p);
  if (outer.size() == 1) {
    // {{x}} encodes (x, x).
    std::vector<Code> inner = elements(outer[0]);
    if (inner.size() != 1) return std::nullopt;
    return std::make_pair(inner[0], inner[0]);
  }
  if (outer.size() != 2) return std::nullopt;
  std::vector<Code> a = elements(outer[0]);
  std::vector<Code> b = elements(outer[1]);
  const std::vector<Code>* sing = a.size() == 1 ? &a : b.size() == 1 ? &b : nullptr;
  const std::vector<Code>* doub = a.size() == 2 ? &a : b.size() == 2 ? &b : nullptr;
  if (!sing || !doub) return std::nullopt;
  const Code& x = (*sing)[0];
  if ((*doub)[0] == x) return std::make_pair(x, (*doub)[1]);
  if ((*doub)[1] == x) return std::make_pair(x, (*doub)[0]);
  return std::nullopt;
}

Code morse_pair(const Code& x, const Code& y) {
  Code zero = 0, one = von_neumann(1);
  Code out = 0;
  for (const Code& e : elements(x))
    mpz_setbit(out.get_mpz_t(), to_bit(kuratowski_pair(zero, e)));
  for (const Code& e : elements(y))
    mpz_setbit(out.get_mpz_t(), to_bit(kuratowski_pair(one, e)));
  return out;
}

Code von_neumann(unsigned n) {
  Code out = 0;
  for (unsigned i = 0; i < n; ++i) out = out | (Code(1) << to_bit(out));
  return out;
}

std::string to_set_builder(const Code& x) {
  std::string out = "{";
  bool first = true;
  for (const Code& e : elements(x)) {
    if (!first) out += ",";
    first = false;
    out += to_set_builder(e);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Direct structural predicates
// ---------------------------------------------------------------------------

bool is_empty_set(const Code& x) { return x == 0; }

bool is_subset(const Code& x, const Code& y) {
  Code diff = x & ~y;
  return diff == 0;
}

bool is_unordered_pair_of(const Code& x, const Code& y, const Code& z) {
  return x == unordered_pair(y, z);
}

bool is_union_of(const Code& x, const Code& y) { return x == union_of(y); }

bool is_pair_code(const Code& x) { return kuratowski_unpair(x).has_value(); }

bool is_relation_code(const Code& x) {
  for (const Code& e : elements(x))
    if (!is_pair_code(e)) return false;
  return true;
}

bool is_function_code(const Code& x) {
  if (!is_relation_code(x)) return false;
  std::map<Code, Code> seen;
  for (const Code& e : elements(x)) {
    auto pq = kuratowski_unpair(e);
    auto [it, fresh] = seen.emplace(pq->first, pq->second);
    if (!fresh && it->second != pq->second) return false;
  }
  return true;
}

bool is_transitive_code(const Code& x) {
  for (const Code& e : elements(x))
    if (!is_subset(e, x)) return false;
  return true;
}

bool is_ordinal_code(const Code& x) {
  if (!is_transitive_code(x)) return false;
  for (const Code& e : elements(x))
    if (!is_transitive_code(e)) return false;
  return true;
}

bool is_inductive_code(const Code& x) {
  if (!contains(x, 0)) return false;
  for (const Code& e : elements(x)) {
    Code succ = e | (Code(1) << to_bit(e));
    if (!contains(x, succ)) return false;
  }
  return true;
}

bool is_omega_code(const Code& x) {
  // No HF set is omega; computed faithfully all the same.
  if (!is_transitive_code(x) || !is_inductive_code(x)) return false;
  for (const Code& e : elements(x)) {
    if (!is_ordinal_code(e)) return false;
    if (e == 0) continue;
    bool succ = false;
    for (const Code& z : elements(e)) {
      if (e == (z | (Code(1) << to_bit(z)))) succ = true;
    }
    if (!succ) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

namespace {

struct Env {
  std::map<std::string, Code> vars;
};

Code term_value(const Term& t, const Env& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = env.vars.find(t.var_name());
      if (it == env.vars.end())
        throw malformed_error("unbound variable in evaluation: " + t.var_name());
      return it->second;
    }
    case Term::Kind::Const:
      return t.code();
    default:
      throw malformed_error(
          "signature constants need an expanded presentation to evaluate");
  }
}

Answer neg(Answer a) {
  if (a == Answer::True) return Answer::False;
  if (a == Answer::False) return Answer::True;
  return Answer::OutOfBudget;
}

Answer eval_impl(const Formula& f, Env& env, Budget budget,
                 const AtomRegistry& reg) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
      return contains(term_value(f.rhs(), env), term_value(f.lhs(), env))
                 ? Answer::True
                 : Answer::False;
    case K::Equal:
      return term_value(f.lhs(), env) == term_value(f.rhs(), env)
                 ? Answer::True
                 : Answer::False;
    case K::Atom: {
      const AtomInfo& info = reg.info(f.atom_id());
      if (info.params.size() != f.atom_args().size())
        throw contract_error("atom argument count mismatch: " + info.name);
      Env inner;
      for (std::size_t i = 0; i < info.params.size(); ++i)
        inner.vars[info.params[i]] = term_value(f.atom_args()[i], env);
      return eval_impl(info.definition, inner, budget, reg);
    }
    case K::Not:
      return neg(eval_impl(f.body(), env, budget, reg));
    case K::And: {
      Answer a = eval_impl(f.left(), env, budget, reg);
      if (a == Answer::False) return Answer::False;
      Answer b = eval_impl(f.right(), env, budget, reg);
      if (b == Answer::False) return Answer::False;
      if (a == Answer::OutOfBudget || b == Answer::OutOfBudget)
        return Answer::OutOfBudget;
      return Answer::True;
    }
    case K::Or: {
      Answer a = eval_impl(f.left(), env, budget, reg);
      if (a == Answer::True) return Answer::True;
      Answer b = eval_impl(f.right(), env, budget, reg);
      if (b == Answer::True) return Answer::True;
      if (a == Answer::OutOfBudget || b == Answer::OutOfBudget)
        return Answer::OutOfBudget;
      return Answer::False;
    }
    case K::BoundedExists:
    case K::BoundedForall: {
      bool ex = f.kind() == K::BoundedExists;
      Code bound = term_value(f.quant_bound(), env);
      auto saved = env.vars.find(f.quant_var());
      std::optional<Code> prev;
      if (saved != env.vars.end()) prev = saved->second;
      bool out_of_budget = false;
      Answer result = ex ? Answer::False : Answer::True;
      for (const Code& e : elements(bound)) {
        env.vars[f.quant_var()] = e;
        Answer a = eval_impl(f.body(), env, budget, reg);
        if (ex && a == Answer::True) {
          result = Answer::True;
          break;
        }
        if (!ex && a == Answer::False) {
          result = Answer::False;
          break;
        }
        if (a == Answer::OutOfBudget) out_of_budget = true;
      }
      if (prev)
        env.vars[f.quant_var()] = *prev;
      else
        env.vars.erase(f.quant_var());
      if (out_of_budget && result == (ex ? Answer::False : Answer::True))
        return Answer::OutOfBudget;
      return result;
    }
    case K::Exists:
    case K::Forall: {
      bool ex = f.kind() == K::Exists;
      auto saved = env.vars.find(f.quant_var());
      std::optional<Code> prev;
      if (saved != env.vars.end()) prev = saved->second;
      Answer result = Answer::OutOfBudget;
      for (Budget c = 0; c < budget; ++c) {
        env.vars[f.quant_var()] = Code(static_cast<unsigned long>(c));
        Answer a = eval_impl(f.body(), env, budget, reg);
        if (ex && a == Answer::True) {
          result = Answer::True;
          break;
        }
        if (!ex && a == Answer::False) {
          result = Answer::False;
          break;
        }
      }
      if (prev)
        env.vars[f.quant_var()] = *prev;
      else
        env.vars.erase(f.quant_var());
      return result;
    }
  }
  throw error("unreachable");
}

}  // namespace

Answer eval(const Formula& sentence, Budget budget, const AtomRegistry& reg) {
  if (!is_closed(sentence))
    throw malformed_error("eval needs a closed sentence");
  Env env;
  return eval_impl(sentence, env, budget, reg);
}

// ---------------------------------------------------------------------------
// Poset installation
// ---------------------------------------------------------------------------

InstalledPoset install_poset(const std::vector<Code>& conditions,
                             const std::vector<std::pair<Code, Code>>& leq) {
  InstalledPoset out;
  out.poset = FinitePoset::from_relation(conditions, leq);
  const FinitePoset& P = out.poset;
  std::size_t n = P.size();

  out.p_code = encode_set(conditions);

  std::vector<Code> leq_pairs, comp_pairs, perp_pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Code pr = kuratowski_pair(P.label(i), P.label(j));
      if (P.leq(i, j))
        leq_pairs.push_back(pr);
      else
        comp_pairs.push_back(pr);
      if (!P.compatible(i, j)) perp_pairs.push_back(pr);
    }
  }
  out.leq_code = encode_set(leq_pairs);
  out.leq_complement_code = encode_set(comp_pairs);
  out.perp_code = encode_set(perp_pairs);

  std::vector<Code> dense;
  for (std::uint64_t mask : P.all_dense_masks()) {
    std::vector<Code> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) members.push_back(P.label(i));
    dense.push_back(encode_set(members));
  }
  std::sort(dense.begin(), dense.end());
  out.dense_sets = dense;
  out.dense_family_code = encode_set(dense);
  return out;
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

namespace {

class HfOracle : public DiagramOracle {
 public:
  HfOracle() : DiagramOracle(QueryLevel::full(), true) {}

  Nat member_scan_bound(const Nat& set_code) const override {
    // Members are bit positions, so the bit length bounds them.
    if (set_code == 0) return 0;
    return Nat(static_cast<unsigned long>(mpz_sizeinbase(set_code.get_mpz_t(), 2)));
  }

 protected:
  Answer do_query(const Formula& sentence, Budget budget) const override {
    return eval(sentence, budget);
  }
};

}  // namespace

OraclePtr oracle() {
  static OraclePtr o = std::make_shared<HfOracle>();
  return o;
}

Presentation presentation() {
  Presentation p;
  p.oracle = oracle();
  p.from_base = Permutation();
  p.permuted = false;
  return p;
}

}  // namespace setforge::hf
