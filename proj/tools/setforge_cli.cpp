// Command-line front end: reproducible forcing experiments over the HF test
// bed with stable textual input/output formats. Exit codes: 0 success, 1
// contract violation, 2 malformed input.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "setforge/cohen.hpp"
#include "setforge/extension.hpp"
#include "setforge/forcing.hpp"
#include "setforge/functor.hpp"
#include "setforge/generic.hpp"
#include "setforge/hf.hpp"
#include "setforge/multiverse.hpp"
#include "setforge/names.hpp"
#include "setforge/oracle_decode.hpp"
#include "setforge/parse.hpp"

using namespace setforge;

namespace {

struct Block {
  explicit Block(const std::string& kind) { std::cout << "--- BEGIN " << kind << " ---\n"; }
  ~Block() { std::cout << "--- END ---\n"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw malformed_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hf::InstalledPoset read_poset(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Nat> conds;
  std::vector<std::pair<Nat, Nat>> leq;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto num = [&]() {
      std::string tok;
      if (!(ls >> tok) || tok.find_first_not_of("0123456789") != std::string::npos)
        throw malformed_error(path + ":" + std::to_string(lineno) +
                              ": expected a number");
      return Nat(tok);
    };
    if (tag == "COND") {
      conds.push_back(num());
    } else if (tag == "LEQ") {
      Nat a = num(), b = num();
      leq.emplace_back(a, b);
    } else {
      throw malformed_error(path + ":" + std::to_string(lineno) +
                            ": unknown line tag " + tag);
    }
  }
  return hf::install_poset(conds, leq);
}

Permutation parse_swaps(const std::string& spec) {
  std::vector<std::pair<Nat, Nat>> swaps;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw malformed_error("bad swap: " + item + " (want a:b)");
    std::string a = item.substr(0, colon), b = item.substr(colon + 1);
    if (a.empty() || b.empty() ||
        a.find_first_not_of("0123456789") != std::string::npos ||
        b.find_first_not_of("0123456789") != std::string::npos)
      throw malformed_error("bad swap: " + item);
    swaps.emplace_back(Nat(a), Nat(b));
  }
  return Permutation::from_swaps(swaps);
}

// Name syntax: { (name, cond), ... }
class NameParser {
 public:
  explicit NameParser(std::string_view text) : text_(text) {}

  Name parse() {
    Name n = name();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return n;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  [[noreturn]] void fail(const std::string& m) {
    throw malformed_error("name syntax error at offset " + std::to_string(pos_) +
                          ": " + m);
  }
  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  Name name() {
    expect('{');
    std::vector<NameEntry> entries;
    if (!peek('}')) {
      while (true) {
        expect('(');
        Name child = name();
        expect(',');
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
        if (start == pos_) fail("expected a condition number");
        Nat cond(std::string(text_.substr(start, pos_ - start)));
        expect(')');
        entries.push_back({child, cond});
        if (peek(',')) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect('}');
    return Name::make(std::move(entries));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<std::pair<std::string, Name>> read_names(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, Name>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, var;
    ls >> tag >> var;
    if (tag != "NAME" || var.empty())
      throw malformed_error(path + ":" + std::to_string(lineno) +
                            ": expected NAME <var> <name>");
    std::string rest;
    std::getline(ls, rest);
    out.emplace_back(var, NameParser(rest).parse());
  }
  return out;
}

std::vector<bool> read_z_hex(const std::string& path) {
  std::string text = read_file(path);
  std::vector<bool> bits;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
    else throw malformed_error("bad hex digit in " + path);
    for (int k = 3; k >= 0; --k) bits.push_back((v >> k) & 1);
  }
  return bits;
}

std::vector<std::vector<std::size_t>> read_family(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::size_t>> family;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "A") throw malformed_error("family lines start with A");
    std::vector<std::size_t> subset;
    std::size_t i;
    while (ls >> i) subset.push_back(i);
    family.push_back(subset);
  }
  return family;
}

std::vector<std::size_t> parse_order(const std::string& spec, std::size_t n_conditions,
                                     const FinitePoset& P) {
  // Letters name the non-maximum conditions in ascending label order;
  // numeric comma lists give labels directly.
  std::vector<std::size_t> out;
  if (spec.find_first_not_of("abcdefghijklmnopqrstuvwxyz") == std::string::npos) {
    std::vector<std::size_t> lettered;
    std::vector<std::size_t> idx(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return P.label(a) < P.label(b);
    });
    for (std::size_t i : idx)
      if (i != P.max_index()) lettered.push_back(i);
    for (char c : spec) {
      std::size_t k = static_cast<std::size_t>(c - 'a');
      if (k >= lettered.size()) throw malformed_error("order letter out of range");
      out.push_back(lettered[k]);
    }
    return out;
  }
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw malformed_error("bad order entry: " + item);
    auto i = P.index_of(Nat(item));
    if (!i) throw malformed_error("order names a non-condition: " + item);
    out.push_back(*i);
  }
  (void)n_conditions;
  return out;
}

void print_counts(const RecordingOracle& rec) {
  Block b("QUERY COUNTS");
  for (const auto& [level, count] : rec.counts_by_level())
    std::cout << level << " " << count << "\n";
  std::cout << "total " << rec.total() << "\n";
}

std::string name_or_code(const Name& n) {
  auto code = n.try_code();
  if (code && mpz_sizeinbase(code->get_mpz_t(), 2) <= 64) return code->get_str();
  return n.str();
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_hf_eval(const std::string& text, Budget budget) {
  Formula f = parse_formula(text);
  Answer a = hf::eval(f, budget);
  Block b("HF EVAL");
  std::cout << "sentence " << print_formula(f) << "\n";
  std::cout << "budget " << budget << "\n";
  std::cout << "answer " << answer_str(a) << "\n";
  return 0;
}

int cmd_generic_build(const std::string& poset_path, const std::string& permute_spec) {
  hf::InstalledPoset P = read_poset(poset_path);
  Permutation f = permute_spec.empty() ? Permutation() : parse_swaps(permute_spec);
  Presentation pres = permute(hf::presentation(), f);
  auto rec = std::make_shared<RecordingOracle>(
      restrict_oracle(pres.oracle, QueryLevel::atomic()));
  PosetHandle h = P.handle();
  PosetHandle hp{pres.label_of_base(h.p), pres.label_of_base(h.leq),
                 pres.label_of_base(h.leq_complement), pres.label_of_base(h.perp),
                 pres.label_of_base(h.dense_family)};
  GenericFilter G = build_generic(rec, hp);
  {
    Block b("GENERIC SEQUENCE");
    for (std::size_t n = 0; n < G.sequence().size(); ++n)
      std::cout << "p" << n << " " << G.sequence()[n].get_str() << "\n";
  }
  {
    Block b("FILTER");
    std::vector<Nat> labels;
    for (const Nat& c : P.poset.labels()) labels.push_back(f.apply(c));
    std::sort(labels.begin(), labels.end());
    for (const Nat& l : labels)
      std::cout << l.get_str() << " " << (G.member(l) ? "in" : "out") << "\n";
  }
  print_counts(*rec);
  return 0;
}

int cmd_force_query(const std::string& poset_path, const std::string& cond,
                    const std::string& phi_path, const std::string& names_path,
                    Budget budget) {
  hf::InstalledPoset P = read_poset(poset_path);
  Formula phi = parse_formula(read_file(phi_path));
  std::vector<std::pair<std::string, Name>> names;
  if (!names_path.empty()) names = read_names(names_path);
  if (cond.find_first_not_of("0123456789") != std::string::npos)
    throw malformed_error("bad condition: " + cond);
  Answer a = forces(P, Nat(cond), phi, names, budget);
  Block b("FORCE QUERY");
  std::cout << "condition " << cond << "\n";
  std::cout << "phi " << print_formula(phi) << "\n";
  for (const auto& [var, n] : names)
    std::cout << "name " << var << " " << n.str() << "\n";
  std::cout << "answer " << answer_str(a) << "\n";
  return 0;
}

int cmd_extend(const std::string& poset_path, unsigned rank, std::size_t size,
               const std::string& filter_spec) {
  hf::InstalledPoset P = read_poset(poset_path);
  auto rec = std::make_shared<RecordingOracle>(
      restrict_oracle(hf::oracle(), QueryLevel::delta0()));
  Presentation pres{rec, Permutation(), false};

  GenericFilter G = [&]() {
    if (filter_spec == "auto") {
      auto arec = std::make_shared<RecordingOracle>(
          restrict_oracle(hf::oracle(), QueryLevel::atomic()));
      return build_generic(arec, P.handle());
    }
    std::istringstream in(filter_spec);
    std::string item;
    std::uint64_t mask = 0;
    while (std::getline(in, item, ',')) {
      auto i = P.poset.index_of(Nat(item));
      if (!i) throw malformed_error("filter names a non-condition: " + item);
      mask |= std::uint64_t{1} << *i;
    }
    std::vector<Nat> seq;
    for (std::size_t i = 0; i < P.poset.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) seq.push_back(P.poset.label(i));
    FinitePoset Q = P.poset;
    auto contains = [Q](const Nat& q) { return Q.index_of(q).has_value(); };
    auto decide = [Q, mask](const Nat& q) -> std::optional<bool> {
      auto i = Q.index_of(q);
      if (!i) return std::nullopt;
      return (mask & (std::uint64_t{1} << *i)) != 0;
    };
    return GenericFilter("given", std::move(seq), contains, decide);
  }();

  QuotientPresentation Q = build_quotient(pres, P, G, rank, size);
  {
    Block b("QUOTIENT");
    std::cout << "classes " << Q.size() << "\n";
    std::cout << "rank-bound " << rank << " size-bound " << size << "\n";
    for (std::size_t i = 0; i < Q.size(); ++i) {
      std::cout << "rep " << i << " " << name_or_code(Q.representative(i))
                << "\n";
    }
  }
  {
    Block b("MEMBERSHIP");
    for (std::size_t i = 0; i < Q.size(); ++i) {
      for (std::size_t j = 0; j < Q.size(); ++j)
        std::cout << (Q.membership(i, j) ? '1' : '0');
      std::cout << "\n";
    }
  }
  {
    Block b("CANONICAL EMBEDDING");
    for (unsigned long x = 0; x < 4; ++x) {
      try {
        std::cout << x << " -> " << Q.canonical_embedding(x) << "\n";
      } catch (const contract_error&) {
        std::cout << x << " -> out-of-bounds\n";
      }
    }
  }
  print_counts(*rec);
  return 0;
}

int cmd_matrix_build(std::size_t columns, const std::string& family_path,
                     const std::string& z_path, std::size_t steps,
                     const std::string& out_path) {
  AmalgamationSpec spec;
  spec.columns = columns;
  spec.family = read_family(family_path);
  std::vector<bool> z = read_z_hex(z_path);
  if (z.size() < steps) throw malformed_error("z file has fewer bits than steps");
  spec.z = [z](std::size_t n) { return z.at(n); };
  // The scheduled dense sets: rotate through the non-empty family members,
  // demanding longer columns each round.
  std::vector<std::vector<std::size_t>> schedule;
  for (const auto& A : spec.family)
    if (!A.empty()) schedule.push_back(A);
  if (schedule.empty()) throw malformed_error("family has no nonempty member");
  spec.dense_stream = [schedule](std::size_t n) -> std::optional<ProductDense> {
    const auto& A = schedule[n % schedule.size()];
    std::size_t L = n + 1;
    auto contains = [L](const Tuple& t) {
      for (const auto& col : t)
        if (col.size() < L) return false;
      return true;
    };
    auto extend = [L](const Tuple& t) {
      Tuple out = t;
      for (auto& col : out)
        while (col.size() < L) col.push_back(false);
      return out;
    };
    return ProductDense{A, contains, extend};
  };
  Matrix m = build_matrix(spec, steps);

  std::ostringstream dump;
  dump << "COLUMNS " << columns << "\n";
  for (const auto& A : spec.family) {
    dump << "A";
    for (std::size_t i : A) dump << " " << i;
    dump << "\n";
  }
  for (const auto& s : m.log) {
    dump << "STEP " << s.dense_index << " start " << s.ext_start << " ones "
         << s.ones_row << " z " << s.z_row << " bit " << (s.z_bit ? 1 : 0)
         << " cols";
    for (std::size_t i : s.columns) dump << " " << i;
    dump << "\n";
  }
  dump << "ROWS\n" << m.dump();

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw malformed_error("cannot write " + out_path);
    out << dump.str();
  }
  Block b("MATRIX");
  std::cout << dump.str();
  return 0;
}

Matrix read_matrix(const std::string& path) {
  std::istringstream in(read_file(path));
  Matrix m;
  std::string line;
  std::size_t columns = 0;
  bool rows = false;
  std::vector<std::string> row_lines;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (rows) {
      row_lines.push_back(line);
      continue;
    }
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "COLUMNS") {
      ls >> columns;
    } else if (tag == "A") {
      std::vector<std::size_t> subset;
      std::size_t i;
      while (ls >> i) subset.push_back(i);
      m.family.push_back(subset);
    } else if (tag == "STEP") {
      MatrixStep s;
      std::string word;
      ls >> s.dense_index >> word >> s.ext_start >> word >> s.ones_row >>
          word >> s.z_row >> word;
      int bit;
      ls >> bit >> word;
      s.z_bit = bit != 0;
      std::size_t i;
      while (ls >> i) s.columns.push_back(i);
      m.log.push_back(s);
    } else if (tag == "ROWS") {
      rows = true;
    } else {
      throw malformed_error("bad matrix line: " + line);
    }
  }
  if (columns == 0) throw malformed_error("matrix dump has no columns");
  m.cols.assign(columns, {});
  for (const std::string& r : row_lines) {
    if (r.size() != columns) throw malformed_error("bad matrix row: " + r);
    for (std::size_t i = 0; i < columns; ++i) {
      if (r[i] != '0' && r[i] != '1') throw malformed_error("bad matrix bit");
      m.cols[i].push_back(r[i] == '1');
    }
  }
  return m;
}

int cmd_matrix_decode(const std::string& in_path, const std::string& a_spec,
                      std::size_t bits) {
  Matrix m = read_matrix(in_path);
  std::vector<std::size_t> A;
  std::istringstream in(a_spec);
  std::string item;
  while (std::getline(in, item, ',')) A.push_back(std::stoull(item));
  std::vector<bool> z = decode_z(m, A, bits);
  Block b("DECODED Z");
  for (bool bit : z) std::cout << (bit ? '1' : '0');
  std::cout << "\n";
  return 0;
}

int cmd_functor_run(const std::string& poset_path, const std::string& choice,
                    std::size_t steps, bool check_laws) {
  hf::InstalledPoset P = read_poset(poset_path);
  Presentation pres = hf::presentation();
  auto choose = [choice, pres](const Nat& x) -> Nat {
    std::vector<Nat> members = decode::members(*pres.oracle, x);
    if (members.empty()) throw contract_error("choice from an empty set");
    if (choice == "least") return members.front();
    if (choice == "greatest") return members.back();
    throw malformed_error("choice must be least or greatest");
  };
  ExpandedPresentation e;
  e.base = pres;
  e.p = P.leq_code;
  e.choose = choose;
  std::vector<Nat> dense = P.dense_sets;
  e.d = [dense](std::size_t j) -> std::optional<Nat> {
    if (j >= dense.size()) return std::nullopt;
    return dense[j];
  };
  PhiObject obj = phi_object(e, steps, 1, 2);
  {
    Block b("FUNCTOR OBJECT");
    for (std::size_t n = 0; n < obj.sequence.size(); ++n)
      std::cout << "p" << n << " " << obj.sequence[n].get_str() << "\n";
    for (const Nat& c : P.poset.labels())
      std::cout << "cond " << c.get_str() << " "
                << (obj.filter.member(c) ? "in" : "out") << "\n";
    std::cout << "fragment-classes " << obj.fragment.size() << "\n";
  }
  if (check_laws) {
    Block b("FUNCTOR LAWS");
    Permutation id;
    auto ident = phi_morphism(e, e, id, obj, obj, 4, dense.size());
    bool id_ok = true;
    for (std::size_t i = 0; i < ident.size(); ++i)
      if (ident[i] != i) id_ok = false;
    std::cout << "identity " << (id_ok ? "ok" : "FAIL") << "\n";

    Permutation f = Permutation::from_swaps({{3, 5}});
    Permutation g = Permutation::from_swaps({{4, 6}});
    ExpandedPresentation ef = permute_expanded(e, f);
    ExpandedPresentation egf = permute_expanded(ef, g);
    PhiObject of = phi_object(ef, steps, 1, 2);
    PhiObject ogf = phi_object(egf, steps, 1, 2);
    auto m1 = phi_morphism(e, ef, f, obj, of, 8, dense.size());
    auto m2 = phi_morphism(ef, egf, g, of, ogf, 8, dense.size());
    auto m12 = phi_morphism(e, egf, g.compose(f), obj, ogf, 8, dense.size());
    bool comp_ok = true;
    for (std::size_t i = 0; i < m12.size(); ++i)
      if (m12[i] != m2[m1[i]]) comp_ok = false;
    std::cout << "composition " << (comp_ok ? "ok" : "FAIL") << "\n";
    if (!id_ok || !comp_ok) return 1;
  }
  return 0;
}

int cmd_demo_nonfunctorial(const std::string& poset_path,
                           std::vector<std::string> orders, bool use_cohen) {
  if (orders.size() != 2) throw malformed_error("exactly two orders expected");
  if (use_cohen) {
    std::vector<AbstractPoset::DenseSet> dense;
    for (std::size_t n = 1; n <= 6; ++n) dense.push_back(cohen::length_dense(n));
    dense.push_back(cohen::decision_dense({true, true}));
    dense.push_back(cohen::decision_dense({false, false, false}));
    auto ord = [&](const std::string& spec) {
      std::vector<std::size_t> out;
      std::istringstream in(spec);
      std::string item;
      while (std::getline(in, item, ',')) out.push_back(std::stoull(item));
      for (std::size_t i : out)
        if (i >= dense.size()) throw malformed_error("order index out of range");
      return out;
    };
    CohenSensitivityReport r =
        order_sensitivity_demo_cohen(dense, ord(orders[0]), ord(orders[1]));
    Block b("ORDER SENSITIVITY");
    auto show = [](const std::vector<bool>& bits) {
      std::string s;
      for (bool x : bits) s += x ? '1' : '0';
      return s;
    };
    std::cout << "branch-a " << show(r.branch_a) << "\n";
    std::cout << "branch-b " << show(r.branch_b) << "\n";
    if (r.first_difference)
      std::cout << "diverge-at-bit " << *r.first_difference << "\n";
    else
      std::cout << "agreement certified\n";
    return 0;
  }
  hf::InstalledPoset P = read_poset(poset_path);
  std::vector<std::uint64_t> dense = P.poset.all_dense_masks();
  SensitivityReport r = order_sensitivity_demo(
      P.poset, dense, parse_order(orders[0], P.poset.size(), P.poset),
      parse_order(orders[1], P.poset.size(), P.poset));
  Block b("ORDER SENSITIVITY");
  std::cout << "generic-a " << (r.generic_a ? "yes" : "no") << "\n";
  std::cout << "generic-b " << (r.generic_b ? "yes" : "no") << "\n";
  for (std::size_t i = 0; i < r.filter_a.size(); ++i) {
    std::cout << "cond " << r.filter_a[i].first.get_str() << " "
              << (r.filter_a[i].second ? "in" : "out") << " "
              << (r.filter_b[i].second ? "in" : "out") << "\n";
  }
  if (r.first_difference)
    std::cout << "diverge-at " << r.first_difference->get_str() << "\n";
  else
    std::cout << "agreement certified\n";
  return 0;
}

int cmd_grounds_list(const std::string& mock, Budget budget) {
  class Trivial : public GroundOracle {
   public:
    Answer ground_membership(const Nat&, const Nat& r, Budget) const override {
      return r == 0 ? Answer::True : Answer::False;
    }
  };
  class Parity : public GroundOracle {
   public:
    Answer ground_membership(const Nat& x, const Nat& r, Budget) const override {
      if (r > 1) return Answer::False;
      if (x == 0) return Answer::True;
      bool even = mpz_tstbit(x.get_mpz_t(), 0) == 0;
      return (r == 0 || even) ? Answer::True : Answer::False;
    }
  };
  std::shared_ptr<const GroundOracle> oracle;
  if (mock == "trivial") oracle = std::make_shared<Trivial>();
  else if (mock == "parity") oracle = std::make_shared<Parity>();
  else throw malformed_error("mock must be trivial or parity");
  auto grounds = enumerate_grounds(oracle, budget);
  Block b("GROUNDS");
  for (const auto& g : grounds) {
    std::cout << "ground " << g.index << " parameter " << g.parameter.get_str();
    std::cout << " sample";
    for (unsigned long x = 0; x < 8; ++x)
      std::cout << " " << (g.membership(x, budget) == Answer::True ? '1' : '0');
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forcing extensions of set-theoretic structures from diagram oracles"};
  app.require_subcommand(1);

  std::string formula_text, poset_path, model = "hf", cond, phi_path, names_path;
  std::string filter_spec = "auto", family_path, z_path, out_path, matrix_path;
  std::string a_spec, choice = "least", mock = "trivial";
  std::vector<std::string> orders;
  Budget budget = 64;
  unsigned rank = 2;
  std::size_t size = 2, steps = 16, columns = 3, bits = 16;
  bool check_laws = false, use_cohen = false;

  auto* hf_eval = app.add_subcommand("hf-eval", "evaluate a sentence over HF");
  hf_eval->add_option("sentence", formula_text)->required();
  hf_eval->add_option("--budget", budget);

  auto* gb = app.add_subcommand("generic-build",
                                "build a generic filter from the atomic diagram");
  gb->add_option("--model", model, "must be hf")->check(CLI::IsMember({"hf"}))->required();
  gb->add_option("--poset", poset_path)->required();
  std::string gb_permute;
  gb->add_option("--permute", gb_permute, "swaps a:b,c:d");

  auto* fq = app.add_subcommand("force-query", "decide a forcing assertion");
  fq->add_option("--poset", poset_path)->required();
  fq->add_option("--p", cond)->required();
  fq->add_option("--phi", phi_path)->required();
  fq->add_option("--names", names_path);
  fq->add_option("--budget", budget);
  auto* force = app.add_subcommand("force", "forcing relation commands");
  auto* fq2 = force->add_subcommand("query", "decide a forcing assertion");
  fq2->add_option("--poset", poset_path)->required();
  fq2->add_option("--p", cond)->required();
  fq2->add_option("--phi", phi_path)->required();
  fq2->add_option("--names", names_path);
  fq2->add_option("--budget", budget);

  auto* ext = app.add_subcommand("extend", "build the quotient presentation");
  ext->add_option("--poset", poset_path)->required();
  ext->add_option("--rank", rank);
  ext->add_option("--size", size);
  ext->add_option("--filter", filter_spec, "auto or comma-listed conditions");

  auto* mb = app.add_subcommand("matrix-build", "run the amalgamation matrix");
  mb->add_option("--columns", columns);
  mb->add_option("--family", family_path)->required();
  mb->add_option("--z", z_path)->required();
  mb->add_option("--steps", steps);
  mb->add_option("--out", out_path);

  auto* md = app.add_subcommand("matrix-decode", "recover z from a matrix dump");
  md->add_option("--in", matrix_path)->required();
  md->add_option("--A", a_spec)->required();
  md->add_option("--bits", bits);

  auto* fr = app.add_subcommand("functor-run", "run the expanded-signature functor");
  fr->add_option("--poset", poset_path)->required();
  fr->add_option("--choice", choice)->check(CLI::IsMember({"least", "greatest"}));
  fr->add_option("--steps", steps);
  fr->add_flag("--check-laws", check_laws);

  auto* dnf = app.add_subcommand("demo-nonfunctorial",
                                 "order-sensitivity demonstration");
  dnf->add_option("--poset", poset_path);
  dnf->add_option("--orders", orders)->expected(2);
  dnf->add_flag("--cohen", use_cohen);
  auto* demo = app.add_subcommand("demo", "demonstrations");
  auto* dnf2 = demo->add_subcommand("nonfunctorial", "order-sensitivity demonstration");
  dnf2->add_option("--poset", poset_path);
  dnf2->add_option("--orders", orders)->expected(2);
  dnf2->add_flag("--cohen", use_cohen);

  auto* gl = app.add_subcommand("grounds-list", "mock-backed ground enumeration");
  gl->add_option("--mock", mock)->check(CLI::IsMember({"trivial", "parity"}));
  gl->add_option("--budget", budget);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (hf_eval->parsed()) return cmd_hf_eval(formula_text, budget);
    if (gb->parsed()) return cmd_generic_build(poset_path, gb_permute);
    if (fq->parsed() || fq2->parsed())
      return cmd_force_query(poset_path, cond, phi_path, names_path, budget);
    if (ext->parsed()) return cmd_extend(poset_path, rank, size, filter_spec);
    if (mb->parsed())
      return cmd_matrix_build(columns, family_path, z_path, steps, out_path);
    if (md->parsed()) return cmd_matrix_decode(matrix_path, a_spec, bits);
    if (fr->parsed()) return cmd_functor_run(poset_path, choice, steps, check_laws);
    if (dnf->parsed() || dnf2->parsed())
      return cmd_demo_nonfunctorial(poset_path, orders, use_cohen);
    if (gl->parsed()) return cmd_grounds_list(mock, budget);
  } catch (const malformed_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const level_violation& e) {
    std::cerr << "level violation: " << e.what() << "\n";
    return 1;
  } catch (const hf::overflow& e) {
    std::cerr << "code overflow: " << e.what() << "\n";
    return 1;
  } catch (const error& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
