#include "setforge/parse.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace setforge {

namespace {

struct Sexp {
  // Either a symbol-like token or a list.
  std::string token;
  std::vector<Sexp> items;
  bool is_list = false;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Sexp parse() {
    Sexp e = parse_one();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw malformed_error("parse error at offset " + std::to_string(pos_) +
                          ": " + msg);
  }

  Sexp parse_one() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '(') {
      ++pos_;
      Sexp e;
      e.is_list = true;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) fail("unclosed parenthesis");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(parse_one());
      }
    }
    if (text_[pos_] == ')') fail("unexpected ')'");
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    Sexp e;
    e.token = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'')
      return false;
  }
  return true;
}

Term term_from(const Sexp& e) {
  if (e.is_list) throw malformed_error("expected a term, got a list");
  const std::string& t = e.token;
  if (t.empty()) throw malformed_error("empty term");
  if (t[0] == '#') {
    std::string digits = t.substr(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw malformed_error("bad model constant: " + t);
    return Term::constant(Nat(digits));
  }
  if (t[0] == '@') {
    if (t == "@p") return Term::sig_p();
    if (t == "@c") return Term::sig_c();
    if (t.size() > 2 && t[1] == 'd' &&
        t.find_first_not_of("0123456789", 2) == std::string::npos)
      return Term::sig_d(std::stoull(t.substr(2)));
    throw malformed_error("bad signature constant: " + t);
  }
  if (!valid_identifier(t)) throw malformed_error("bad variable name: " + t);
  return Term::var(t);
}

Formula formula_from(const Sexp& e, const AtomRegistry& reg) {
  if (!e.is_list || e.items.empty() || e.items[0].is_list)
    throw malformed_error("expected a (head ...) formula");
  const std::string& head = e.items[0].token;
  auto arity = [&](std::size_t n) {
    if (e.items.size() != n + 1)
      throw malformed_error("'" + head + "' expects " + std::to_string(n) +
                            " arguments");
  };
  auto at_least = [&](std::size_t n) {
    if (e.items.size() < n + 1)
      throw malformed_error("'" + head + "' expects at least " +
                            std::to_string(n) + " arguments");
  };
  auto sub = [&](std::size_t i) { return formula_from(e.items[i], reg); };

  if (head == "mem") {
    arity(2);
    return Formula::member(term_from(e.items[1]), term_from(e.items[2]));
  }
  if (head == "eq") {
    arity(2);
    return Formula::equal(term_from(e.items[1]), term_from(e.items[2]));
  }
  if (head == "not") {
    arity(1);
    return Formula::negation(sub(1));
  }
  if (head == "and" || head == "or") {
    at_least(2);
    Formula acc = sub(1);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      acc = head == "and" ? Formula::conj(acc, sub(i)) : Formula::disj(acc, sub(i));
    }
    return acc;
  }
  if (head == "imp") {
    arity(2);
    return Formula::disj(Formula::negation(sub(1)), sub(2));
  }
  if (head == "iff") {
    arity(2);
    Formula a = sub(1), b = sub(2);
    return Formula::conj(Formula::disj(Formula::negation(a), b),
                         Formula::disj(Formula::negation(b), a));
  }
  if (head == "ball" || head == "bex") {
    arity(3);
    if (e.items[1].is_list || !valid_identifier(e.items[1].token))
      throw malformed_error("'" + head + "' needs a variable");
    Term bound = term_from(e.items[2]);
    Formula body = sub(3);
    return head == "ball"
               ? Formula::bounded_forall(e.items[1].token, bound, body)
               : Formula::bounded_exists(e.items[1].token, bound, body);
  }
  if (head == "all" || head == "ex") {
    arity(2);
    if (e.items[1].is_list || !valid_identifier(e.items[1].token))
      throw malformed_error("'" + head + "' needs a variable");
    Formula body = sub(2);
    return head == "all" ? Formula::forall(e.items[1].token, body)
                         : Formula::exists(e.items[1].token, body);
  }
  if (head == "atom") {
    at_least(1);
    if (e.items[1].is_list) throw malformed_error("'atom' needs a name");
    auto id = reg.by_name(e.items[1].token);
    if (!id) throw malformed_error("unregistered atom: " + e.items[1].token);
    std::vector<Term> args;
    for (std::size_t i = 2; i < e.items.size(); ++i)
      args.push_back(term_from(e.items[i]));
    if (args.size() != reg.info(*id).params.size())
      throw malformed_error("atom arity mismatch: " + e.items[1].token);
    return Formula::atom(*id, std::move(args));
  }
  // Registered atom names may be used directly as heads.
  if (auto id = reg.by_name(head)) {
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i)
      args.push_back(term_from(e.items[i]));
    if (args.size() != reg.info(*id).params.size())
      throw malformed_error("atom arity mismatch: " + head);
    return Formula::atom(*id, std::move(args));
  }
  throw malformed_error("unknown formula head: " + head);
}

}  // namespace

Formula parse_formula(std::string_view text, const AtomRegistry& reg) {
  Lexer lx(text);
  return alpha_normalize(formula_from(lx.parse(), reg));
}

Term parse_term(std::string_view text) {
  Lexer lx(text);
  return term_from(lx.parse());
}

std::string print_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.var_name();
    case Term::Kind::Const: return "#" + t.code().get_str();
    case Term::Kind::SigP: return "@p";
    case Term::Kind::SigC: return "@c";
    case Term::Kind::SigD: return "@d" + std::to_string(t.d_index());
  }
  return "?";
}

std::string print_formula(const Formula& phi, const AtomRegistry& reg) {
  using K = Formula::Kind;
  std::ostringstream os;
  switch (phi.kind()) {
    case K::Member:
      os << "(mem " << print_term(phi.lhs()) << " " << print_term(phi.rhs()) << ")";
      break;
    case K::Equal:
      os << "(eq " << print_term(phi.lhs()) << " " << print_term(phi.rhs()) << ")";
      break;
    case K::Atom: {
      os << "(atom " << reg.info(phi.atom_id()).name;
      for (const Term& t : phi.atom_args()) os << " " << print_term(t);
      os << ")";
      break;
    }
    case K::Not:
      os << "(not " << print_formula(phi.body(), reg) << ")";
      break;
    case K::And:
      os << "(and " << print_formula(phi.left(), reg) << " "
         << print_formula(phi.right(), reg) << ")";
      break;
    case K::Or:
      os << "(or " << print_formula(phi.left(), reg) << " "
         << print_formula(phi.right(), reg) << ")";
      break;
    case K::BoundedExists:
      os << "(bex " << phi.quant_var() << " " << print_term(phi.quant_bound())
         << " " << print_formula(phi.body(), reg) << ")";
      break;
    case K::BoundedForall:
      os << "(ball " << phi.quant_var() << " " << print_term(phi.quant_bound())
         << " " << print_formula(phi.body(), reg) << ")";
      break;
    case K::Exists:
      os << "(ex " << phi.quant_var() << " " << print_formula(phi.body(), reg) << ")";
      break;
    case K::Forall:
      os << "(all " << phi.quant_var() << " " << print_formula(phi.body(), reg) << ")";
      break;
  }
  return os.str();
}

}  // namespace setforge
