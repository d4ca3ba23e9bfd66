#include "setforge/oracle.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace setforge {

std::string answer_str(Answer a) {
  switch (a) {
    case Answer::True: return "True";
    case Answer::False: return "False";
    case Answer::OutOfBudget: return "OutOfBudget";
  }
  return "?";
}

QueryLevel QueryLevel::sigma(unsigned n) {
  if (n == 0) throw malformed_error("Sigma(0) level is spelled Delta0");
  return {Kind::Sigma, n};
}

bool QueryLevel::operator<=(const QueryLevel& o) const {
  auto rank = [](const QueryLevel& l) -> std::uint64_t {
    switch (l.kind) {
      case Kind::Atomic: return 0;
      case Kind::Delta0: return 1;
      case Kind::Sigma: return 1 + l.n;
      case Kind::Full: return ~std::uint64_t{0};
    }
    return 0;
  };
  return rank(*this) <= rank(o);
}

std::string QueryLevel::str() const {
  switch (kind) {
    case Kind::Atomic: return "Atomic";
    case Kind::Delta0: return "Delta0";
    case Kind::Sigma: return "Sigma" + std::to_string(n);
    case Kind::Full: return "Full";
  }
  return "?";
}

QueryLevel required_level(const Formula& sentence) {
  if (is_atomic_sentence(sentence)) return QueryLevel::atomic();
  LevyClass c = classify(sentence);
  if (c.is_delta0()) return QueryLevel::delta0();
  return QueryLevel::sigma(c.level);
}

Answer DiagramOracle::query(const Formula& sentence, Budget budget) const {
  if (!is_closed(sentence))
    throw malformed_error("oracle query has free variables");
  QueryLevel need = required_level(sentence);
  if (!(need <= level_))
    throw level_violation("query needs level " + need.str() +
                          " but oracle answers " + level_.str());
  return do_query(sentence, budget);
}

// ---------------------------------------------------------------------------
// Restriction
// ---------------------------------------------------------------------------

namespace {

class RestrictedOracle : public DiagramOracle {
 public:
  RestrictedOracle(OraclePtr base, QueryLevel level)
      : DiagramOracle(level, base->budget_limited()), base_(std::move(base)) {}

  Nat member_scan_bound(const Nat& set_code) const override {
    return base_->member_scan_bound(set_code);
  }

 protected:
  Answer do_query(const Formula& sentence, Budget budget) const override {
    return base_->query(sentence, budget);
  }

 private:
  OraclePtr base_;
};

}  // namespace

OraclePtr restrict_oracle(OraclePtr base, QueryLevel level) {
  if (!(level <= base->level()))
    throw level_violation("cannot restrict " + base->level().str() + " up to " +
                          level.str());
  if (level == base->level()) return base;
  return std::make_shared<RestrictedOracle>(std::move(base), level);
}

// ---------------------------------------------------------------------------
// Permutation
// ---------------------------------------------------------------------------

Permutation Permutation::from_swaps(const std::vector<std::pair<Nat, Nat>>& swaps) {
  Permutation f;
  for (const auto& [a, b] : swaps) {
    if (a < 0 || b < 0) throw malformed_error("negative swap entry");
    if (f.fwd_.count(a) || f.fwd_.count(b) || (a != b && (f.inv_.count(a) || f.inv_.count(b))))
      throw malformed_error("swap list is not injective on its support");
    if (a == b) continue;
    f.fwd_[a] = b;
    f.fwd_[b] = a;
    f.inv_[a] = b;
    f.inv_[b] = a;
  }
  return f;
}

Permutation Permutation::from_mapping(const std::vector<std::pair<Nat, Nat>>& pairs) {
  Permutation f;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0) throw malformed_error("negative mapping entry");
    if (a == b) continue;
    if (f.fwd_.count(a) || f.inv_.count(b))
      throw malformed_error("mapping is not injective on its support");
    f.fwd_[a] = b;
    f.inv_[b] = a;
  }
  // The graph must be a bijection of its support: every moved element must
  // also be hit.
  for (const auto& [a, b] : f.fwd_) {
    (void)b;
    if (!f.inv_.count(a))
      throw malformed_error("mapping support is not closed (misses " +
                            a.get_str() + ")");
  }
  for (const auto& [b, a] : f.inv_) {
    (void)a;
    if (!f.fwd_.count(b))
      throw malformed_error("mapping support is not closed (misses " +
                            b.get_str() + ")");
  }
  return f;
}

Nat Permutation::apply(const Nat& x) const {
  auto it = fwd_.find(x);
  return it == fwd_.end() ? x : it->second;
}

Nat Permutation::apply_inverse(const Nat& x) const {
  auto it = inv_.find(x);
  return it == inv_.end() ? x : it->second;
}

Permutation Permutation::inverse() const {
  Permutation f;
  f.fwd_ = inv_;
  f.inv_ = fwd_;
  return f;
}

Permutation Permutation::compose(const Permutation& inner) const {
  std::vector<std::pair<Nat, Nat>> graph;
  std::map<Nat, bool> support;
  for (const auto& [a, _] : inner.fwd_) support[a] = true;
  for (const auto& [a, _] : fwd_) support[a] = true;
  for (const auto& [a, _] : support) {
    Nat image = apply(inner.apply(a));
    graph.emplace_back(a, image);
  }
  return from_mapping(graph);
}

Nat Permutation::support_bound() const {
  Nat bound = 0;
  for (const auto& [a, b] : fwd_) {
    if (a >= bound) bound = a + 1;
    if (b >= bound) bound = b + 1;
  }
  return bound;
}

Term Permutation::relabel(const Term& t) const {
  if (t.kind() == Term::Kind::Const) return Term::constant(apply(t.code()));
  return t;
}

Formula Permutation::relabel(const Formula& f) const {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Member:
      return Formula::member(relabel(f.lhs()), relabel(f.rhs()));
    case K::Equal:
      return Formula::equal(relabel(f.lhs()), relabel(f.rhs()));
    case K::Atom: {
      std::vector<Term> args;
      for (const Term& t : f.atom_args()) args.push_back(relabel(t));
      return Formula::atom(f.atom_id(), std::move(args));
    }
    case K::Not:
      return Formula::negation(relabel(f.body()));
    case K::And:
      return Formula::conj(relabel(f.left()), relabel(f.right()));
    case K::Or:
      return Formula::disj(relabel(f.left()), relabel(f.right()));
    case K::BoundedExists:
      return Formula::bounded_exists(f.quant_var(), relabel(f.quant_bound()),
                                     relabel(f.body()));
    case K::BoundedForall:
      return Formula::bounded_forall(f.quant_var(), relabel(f.quant_bound()),
                                     relabel(f.body()));
    case K::Exists:
      return Formula::exists(f.quant_var(), relabel(f.body()));
    case K::Forall:
      return Formula::forall(f.quant_var(), relabel(f.body()));
  }
  throw error("unreachable");
}

namespace {

class PermutedOracle : public DiagramOracle {
 public:
  PermutedOracle(OraclePtr base, Permutation f)
      : DiagramOracle(base->level(), base->budget_limited()),
        base_(std::move(base)),
        f_(std::move(f)),
        finv_(f_.inverse()) {}

  Nat member_scan_bound(const Nat& set_code) const override {
    Nat base_bound = base_->member_scan_bound(f_.apply_inverse(set_code));
    return std::max(base_bound, f_.support_bound());
  }

 protected:
  Answer do_query(const Formula& sentence, Budget budget) const override {
    return base_->query(finv_.relabel(sentence), budget);
  }

 private:
  OraclePtr base_;
  Permutation f_;
  Permutation finv_;
};

}  // namespace

Presentation permute(const Presentation& pres, const Permutation& f) {
  Presentation out;
  out.oracle = std::make_shared<PermutedOracle>(pres.oracle, f);
  out.from_base = f.compose(pres.from_base);
  out.permuted = true;
  return out;
}

// ---------------------------------------------------------------------------
// Recording
// ---------------------------------------------------------------------------

RecordingOracle::RecordingOracle(OraclePtr base)
    : DiagramOracle(base->level(), base->budget_limited()),
      base_(std::move(base)) {}

Answer RecordingOracle::do_query(const Formula& sentence, Budget budget) const {
  Answer a = base_->query(sentence, budget);
  QueryLevel lvl = required_level(sentence);
  std::lock_guard<std::mutex> lock(mu_);
  bool found = false;
  for (auto& [l, c] : counts_) {
    if (l == lvl) {
      ++c;
      found = true;
      break;
    }
  }
  if (!found) counts_.emplace_back(lvl, 1);
  if (lvl == QueryLevel::atomic() && sentence.kind() == Formula::Kind::Member) {
    atomic_log_.emplace_back(sentence.lhs().code(), sentence.rhs().code(), a);
  }
  return a;
}

std::uint64_t RecordingOracle::count_at(QueryLevel level) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [l, c] : counts_)
    if (l == level) return c;
  return 0;
}

std::uint64_t RecordingOracle::count_above(QueryLevel level) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::uint64_t total = 0;
  for (const auto& [l, c] : counts_)
    if (!(l <= level)) total += c;
  return total;
}

std::uint64_t RecordingOracle::total() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::uint64_t total = 0;
  for (const auto& [l, c] : counts_) total += c;
  return total;
}

std::map<std::string, std::uint64_t> RecordingOracle::counts_by_level() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<std::string, std::uint64_t> out;
  for (const auto& [l, c] : counts_) out[l.str()] += c;
  return out;
}

void RecordingOracle::reset() const {
  std::lock_guard<std::mutex> lock(mu_);
  counts_.clear();
  atomic_log_.clear();
}

void RecordingOracle::dump_atomic_transcript(std::ostream& os) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [a, b, ans] : atomic_log_) {
    if (ans == Answer::True)
      os << "MEM " << a.get_str() << " " << b.get_str() << "\n";
    else if (ans == Answer::False)
      os << "NOTMEM " << a.get_str() << " " << b.get_str() << "\n";
  }
}

Nat RecordingOracle::member_scan_bound(const Nat& set_code) const {
  return base_->member_scan_bound(set_code);
}

// ---------------------------------------------------------------------------
// Transcript replay
// ---------------------------------------------------------------------------

std::shared_ptr<TranscriptOracle> TranscriptOracle::parse(std::istream& is) {
  auto out = std::shared_ptr<TranscriptOracle>(new TranscriptOracle());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, a, b;
    auto numeric = [](const std::string& s) {
      return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    };
    if (!(ls >> tag >> a >> b) || (tag != "MEM" && tag != "NOTMEM") ||
        !numeric(a) || !numeric(b))
      throw malformed_error("bad transcript line " + std::to_string(lineno) +
                            ": " + line);
    out->facts_[{Nat(a), Nat(b)}] = tag == "MEM";
  }
  return out;
}

Answer TranscriptOracle::do_query(const Formula& sentence, Budget) const {
  if (sentence.kind() == Formula::Kind::Member) {
    auto it = facts_.find({sentence.lhs().code(), sentence.rhs().code()});
    if (it != facts_.end()) return it->second ? Answer::True : Answer::False;
    return Answer::OutOfBudget;
  }
  // Equality between labels of a presentation is label identity.
  return sentence.lhs().code() == sentence.rhs().code() ? Answer::True
                                                        : Answer::False;
}

Nat TranscriptOracle::member_scan_bound(const Nat&) const {
  Nat bound = 0;
  for (const auto& [key, val] : facts_) {
    (void)val;
    if (key.first >= bound) bound = key.first + 1;
  }
  return bound;
}

}  // namespace setforge
