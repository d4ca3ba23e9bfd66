#include "setforge/names.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "setforge/levy_catalog.hpp"
#include "setforge/oracle_decode.hpp"

namespace setforge {

// ---------------------------------------------------------------------------
// Symbolic Ackermann values
//
// The code of a name is 2^(pair code) summed over entries, and pair codes
// sit two exponential levels higher than their components. Comparisons stay
// feasible because Ackermann order is computable structurally: X < Y iff
// the largest element of the symmetric difference lies in Y.
// ---------------------------------------------------------------------------

namespace {

struct Sym {
  bool is_num = false;
  Nat num;                 // numeric leaf
  std::vector<Sym> elems;  // set form: sorted descending, deduplicated

  static Sym number(Nat n) {
    Sym s;
    s.is_num = true;
    s.num = std::move(n);
    return s;
  }
};

int sym_cmp(const Sym& a, const Sym& b);

std::vector<Sym> num_elems_desc(const Nat& n) {
  std::vector<Sym> out;
  std::vector<hf::Code> elems = hf::elements(n);
  for (std::size_t i = elems.size(); i-- > 0;)
    out.push_back(Sym::number(elems[i]));
  return out;
}

int list_cmp_desc(const std::vector<Sym>& a, const std::vector<Sym>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = sym_cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  // Shared prefix: the longer set owns the largest leftover element.
  return a.size() < b.size() ? -1 : 1;
}

int sym_cmp(const Sym& a, const Sym& b) {
  if (a.is_num && b.is_num) {
    int c = cmp(a.num, b.num);
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  std::vector<Sym> ta, tb;
  if (a.is_num) ta = num_elems_desc(a.num);
  if (b.is_num) tb = num_elems_desc(b.num);
  return list_cmp_desc(a.is_num ? ta : a.elems, b.is_num ? tb : b.elems);
}

void sort_dedupe_desc(std::vector<Sym>& v) {
  std::sort(v.begin(), v.end(), [](const Sym& x, const Sym& y) {
    return sym_cmp(x, y) > 0;
  });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const Sym& x, const Sym& y) { return sym_cmp(x, y) == 0; }),
          v.end());
}

Sym set_of(std::vector<Sym> elems) {
  Sym s;
  sort_dedupe_desc(elems);
  s.elems = std::move(elems);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Name
// ---------------------------------------------------------------------------

struct Name::Node {
  std::vector<NameEntry> entries;
  unsigned rank = 0;
  Sym sym;  // symbolic value, built once
};

namespace {

Sym sym_of_pair(const Sym& child, const Nat& cond) {
  Sym cnum = Sym::number(cond);
  Sym single = set_of({child});
  Sym doub = set_of({child, cnum});
  return set_of({single, doub});
}

}  // namespace

Name::Name() {
  static const std::shared_ptr<const Node> empty = [] {
    auto n = std::make_shared<Node>();
    n->rank = 0;
    n->sym = set_of({});
    return n;
  }();
  node_ = empty;
}

Name Name::make(std::vector<NameEntry> entries) {
  if (entries.empty()) return Name();
  for (const NameEntry& e : entries)
    if (e.cond < 0) throw malformed_error("negative condition in a name");
  auto node = std::make_shared<Node>();
  // Canonical entry order: by pair value.
  std::vector<std::pair<Sym, NameEntry>> keyed;
  keyed.reserve(entries.size());
  for (NameEntry& e : entries) {
    Sym k = sym_of_pair(e.child.node_->sym, e.cond);
    keyed.emplace_back(std::move(k), std::move(e));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    return sym_cmp(x.first, y.first) < 0;
  });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& x, const auto& y) {
                            return sym_cmp(x.first, y.first) == 0;
                          }),
              keyed.end());
  std::vector<Sym> pair_syms;
  for (auto& [k, e] : keyed) {
    node->rank = std::max(node->rank, e.child.rank() + 1);
    node->entries.push_back(std::move(e));
    pair_syms.push_back(std::move(k));
  }
  node->sym = set_of(std::move(pair_syms));
  Name out;
  out.node_ = std::move(node);
  return out;
}

Name Name::single(const Name& child, const Nat& cond) {
  return make({NameEntry{child, cond}});
}

const std::vector<NameEntry>& Name::entries() const { return node_->entries; }
unsigned Name::rank() const { return node_->rank; }
bool Name::is_empty() const { return node_->entries.empty(); }

std::size_t Name::max_entries_per_level() const {
  std::size_t m = node_->entries.size();
  for (const NameEntry& e : node_->entries)
    m = std::max(m, e.child.max_entries_per_level());
  return m;
}

int Name::compare(const Name& a, const Name& b) {
  if (a.node_ == b.node_) return 0;
  return sym_cmp(a.node_->sym, b.node_->sym);
}

int Name::compare_labels(const Name& a, const Name& b, const Permutation& f) {
  auto label_sym = [&](const Name& n) -> Sym {
    for (const auto& [src, dst] : f.graph()) {
      if (sym_cmp(n.node_->sym, Sym::number(src)) == 0) return Sym::number(dst);
    }
    return n.node_->sym;
  };
  if (f.is_identity()) return compare(a, b);
  Sym sa = label_sym(a), sb = label_sym(b);
  return sym_cmp(sa, sb);
}

hf::Code Name::code() const {
  std::vector<hf::Code> pairs;
  pairs.reserve(node_->entries.size());
  for (const NameEntry& e : node_->entries)
    pairs.push_back(hf::kuratowski_pair(e.child.code(), e.cond));
  return hf::encode_set(pairs);
}

std::optional<hf::Code> Name::try_code() const {
  try {
    return code();
  } catch (const hf::overflow&) {
    return std::nullopt;
  }
}

std::string Name::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const NameEntry& e : node_->entries) {
    if (!first) os << ", ";
    first = false;
    os << "(" << e.child.str() << ", " << e.cond.get_str() << ")";
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// Check names, decoding, ranks
// ---------------------------------------------------------------------------

Name check_name(const hf::Code& x, const Nat& max_label) {
  std::vector<NameEntry> entries;
  for (const hf::Code& y : hf::elements(x))
    entries.push_back({check_name(y, max_label), max_label});
  return Name::make(std::move(entries));
}

std::optional<Name> name_from_code(const hf::Code& x, const FinitePoset& P) {
  std::vector<NameEntry> entries;
  for (const hf::Code& e : hf::elements(x)) {
    auto pq = hf::kuratowski_unpair(e);
    if (!pq) return std::nullopt;
    if (!P.index_of(pq->second)) return std::nullopt;
    auto child = name_from_code(pq->first, P);
    if (!child) return std::nullopt;
    entries.push_back({*child, pq->second});
  }
  return Name::make(std::move(entries));
}

unsigned set_rank(const hf::Code& x) {
  unsigned r = 0;
  for (const hf::Code& e : hf::elements(x)) r = std::max(r, set_rank(e) + 1);
  return r;
}

// ---------------------------------------------------------------------------
// Certificate search over the oracle
// ---------------------------------------------------------------------------

namespace {

using decode::ask;
using decode::mem_cc;

Nat label_of_set(const Presentation& pres, const std::vector<Nat>& member_labels) {
  std::vector<Nat> base;
  base.reserve(member_labels.size());
  for (const Nat& l : member_labels) base.push_back(pres.base_of_label(l));
  return pres.label_of_base(hf::encode_set(base));
}

}  // namespace

IsNameResult is_name(const Presentation& pres, const PosetHandle& h, const Nat& x) {
  const DiagramOracle& o = *pres.oracle;
  // The positive and negative certificate searches share one traversal: the
  // breadth-first closure either saturates (positive tree) or runs into a
  // violation, whose ancestor chain is the negative descent set.
  std::vector<Nat> visited;
  std::map<Nat, Nat> parent;  // child label -> a node it came from
  std::deque<Nat> work;
  work.push_back(x);
  visited.push_back(x);
  auto seen = [&](const Nat& l) {
    return std::find(visited.begin(), visited.end(), l) != visited.end();
  };
  auto descent_set = [&](const Nat& bad) -> std::optional<NameCertificate> {
    std::vector<Nat> w;
    Nat cur = bad;
    w.push_back(cur);
    while (cur != x) {
      cur = parent.at(cur);
      w.push_back(cur);
    }
    try {
      return NameCertificate{label_of_set(pres, w), false};
    } catch (const hf::overflow&) {
      return std::nullopt;
    }
  };

  while (!work.empty()) {
    Nat y = work.front();
    work.pop_front();
    for (const Nat& e : decode::members(o, y)) {
      auto pq = decode::unpair(o, e);
      bool good = pq && ask(o, mem_cc(pq->second, h.p));
      if (!good) {
        return {false, descent_set(y)};
      }
      if (!seen(pq->first)) {
        visited.push_back(pq->first);
        parent[pq->first] = y;
        work.push_back(pq->first);
      }
    }
  }
  try {
    return {true, NameCertificate{label_of_set(pres, visited), true}};
  } catch (const hf::overflow&) {
    return {true, std::nullopt};
  }
}

namespace {

// e is a Kuratowski pair <a, b> with chi(a, b).
Formula pair_shape(const std::string& e,
                   const std::function<Formula(const std::string&, const std::string&)>& chi) {
  using namespace catalog;
  Formula body = Formula::conj(
      kuratowski_eq_t(Term::var(e), Term::var(e + "_a"), Term::var(e + "_b")),
      chi(e + "_a", e + "_b"));
  return Formula::bounded_exists(
      e + "_u", Term::var(e),
      Formula::bounded_exists(
          e + "_a", Term::var(e + "_u"),
          Formula::bounded_exists(
              e + "_v", Term::var(e),
              Formula::bounded_exists(e + "_b", Term::var(e + "_v"), body))));
}

}  // namespace

bool certificate_valid(const DiagramOracle& delta0, const PosetHandle& h,
                       const Nat& x, const NameCertificate& cert) {
  Term T = Term::constant(cert.tree);
  Term X = Term::constant(x);
  Term P = Term::constant(h.p);
  Formula valid = [&] {
    if (cert.positive) {
      // x in T, and every element of every node is a pair into T whose
      // condition lies in P.
      Formula node_ok = Formula::bounded_forall(
          "nz", T,
          Formula::bounded_forall(
              "ne", Term::var("nz"),
              pair_shape("ne", [&](const std::string& a, const std::string& b) {
                return Formula::conj(
                    Formula::member(Term::var(a), T),
                    Formula::member(Term::var(b), P));
              })));
      return Formula::conj(Formula::member(X, T), node_ok);
    }
    // x in W, and every node of W has an element that is either not a pair
    // with condition in P, or a pair descending back into W.
    Formula bad_or_descend = Formula::disj(
        Formula::negation(
            pair_shape("ne", [&](const std::string&, const std::string& b) {
              return Formula::member(Term::var(b), P);
            })),
        pair_shape("ne", [&](const std::string& a, const std::string&) {
          return Formula::member(Term::var(a), T);
        }));
    Formula node_bad = Formula::bounded_forall(
        "nz", T,
        Formula::bounded_exists("ne", Term::var("nz"), bad_or_descend));
    return Formula::conj(Formula::member(X, T), node_bad);
  }();
  return ask(delta0, alpha_normalize(valid));
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

void subsets_up_to(const std::vector<NameEntry>& pool, std::size_t size_bound,
                   std::vector<NameEntry>& cur, std::size_t start,
                   std::vector<Name>& out) {
  out.push_back(Name::make(cur));
  if (cur.size() >= size_bound) return;
  for (std::size_t i = start; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    subsets_up_to(pool, size_bound, cur, i + 1, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Name> enumerate_names_structural(const FinitePoset& P,
                                             unsigned rank_bound,
                                             std::size_t size_bound) {
  std::vector<Name> level = {Name()};
  for (unsigned r = 0; r < rank_bound; ++r) {
    std::vector<NameEntry> pool;
    for (const Name& n : level)
      for (const Nat& c : P.labels()) pool.push_back({n, c});
    std::vector<Name> next;
    std::vector<NameEntry> cur;
    subsets_up_to(pool, size_bound, cur, 0, next);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

std::vector<PName> enumerate_names(const Presentation& pres, const PosetHandle& h,
                                   unsigned rank_bound, std::size_t size_bound) {
  const DiagramOracle& o = *pres.oracle;
  // Decode the conditions, then work structurally over their base codes.
  std::vector<Nat> cond_labels = decode::members(o, h.p);
  std::vector<Nat> cond_base;
  for (const Nat& l : cond_labels) cond_base.push_back(pres.base_of_label(l));
  FinitePoset trivialized = FinitePoset::from_relation(
      cond_base, [&] {
        std::vector<std::pair<Nat, Nat>> refl;
        Nat top = cond_base.front();
        for (const Nat& c : cond_base) {
          refl.emplace_back(c, c);
          refl.emplace_back(c, top);
        }
        return refl;
      }());
  // Only the condition set matters for which codes are names.
  std::vector<Name> names =
      enumerate_names_structural(trivialized, rank_bound, size_bound);
  std::sort(names.begin(), names.end(), [&](const Name& a, const Name& b) {
    return Name::compare_labels(a, b, pres.from_base) < 0;
  });
  std::vector<PName> out;
  out.reserve(names.size());
  for (const Name& n : names) {
    PName pn;
    pn.structure = n;
    if (auto code = n.try_code()) {
      pn.code = pres.label_of_base(*code);
      // Positive certificate: the name closure, as a set in the model.
      std::vector<Nat> closure_labels;
      std::deque<Name> work{n};
      std::vector<Name> seen{n};
      while (!work.empty()) {
        Name cur = work.front();
        work.pop_front();
        if (auto c = cur.try_code())
          closure_labels.push_back(pres.label_of_base(*c));
        for (const auto& e : cur.entries()) {
          if (std::find(seen.begin(), seen.end(), e.child) == seen.end()) {
            seen.push_back(e.child);
            work.push_back(e.child);
          }
        }
      }
      if (closure_labels.size() == seen.size()) {
        try {
          std::vector<Nat> base;
          for (const Nat& l : closure_labels)
            base.push_back(pres.base_of_label(l));
          pn.certificate =
              NameCertificate{pres.label_of_base(hf::encode_set(base)), true};
        } catch (const hf::overflow&) {
          // The closure set itself does not materialize; leave the
          // certificate empty.
        }
      }
    }
    out.push_back(std::move(pn));
  }
  return out;
}

}  // namespace setforge
