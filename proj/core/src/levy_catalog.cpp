#include "setforge/levy_catalog.hpp"

namespace setforge::catalog {

namespace {

Term V(const std::string& s) { return Term::var(s); }

Formula mem(const Term& a, const Term& b) { return Formula::member(a, b); }
Formula eq(const Term& a, const Term& b) { return Formula::equal(a, b); }

}  // namespace

Formula is_empty(const std::string& x) {
  // forall y in x, not (y = y)
  return Formula::bounded_forall("ce_y", V(x),
                                 Formula::negation(eq(V("ce_y"), V("ce_y"))));
}

Formula subset(const std::string& x, const std::string& y) {
  return Formula::bounded_forall("cs_z", V(x), mem(V("cs_z"), V(y)));
}

Formula subset_t(const Term& x, const Term& y) {
  return Formula::bounded_forall("cs_z", x, mem(V("cs_z"), y));
}

Formula unordered_pair_eq(const std::string& x, const std::string& y,
                          const std::string& z) {
  return Formula::conj_all(
      {mem(V(y), V(x)), mem(V(z), V(x)),
       Formula::bounded_forall(
           "cu_w", V(x),
           Formula::disj(eq(V("cu_w"), V(y)), eq(V("cu_w"), V(z))))});
}

Formula union_eq(const std::string& x, const std::string& y) {
  Formula fwd = Formula::bounded_forall(
      "cn_z", V(x),
      Formula::bounded_exists("cn_w", V(y), mem(V("cn_z"), V("cn_w"))));
  Formula bwd = Formula::bounded_forall(
      "cn_w2", V(y),
      Formula::bounded_forall("cn_z2", V("cn_w2"), mem(V("cn_z2"), V(x))));
  return Formula::conj(fwd, bwd);
}

Formula separation_instance(const std::string& x, const std::string& y,
                            const std::string& var, const Formula& phi) {
  if (!classify(phi).is_delta0())
    throw malformed_error("separation instance needs a Delta0 formula");
  Formula fwd = Formula::bounded_forall(
      var, V(x), Formula::conj(mem(V(var), V(y)), phi));
  Formula bwd = Formula::bounded_forall(
      var, V(y), Formula::disj(Formula::negation(phi), mem(V(var), V(x))));
  return Formula::conj(fwd, bwd);
}

Formula singleton_eq(const std::string& u, const std::string& a) {
  return Formula::conj(
      mem(V(a), V(u)),
      Formula::bounded_forall("cg_w", V(u), eq(V("cg_w"), V(a))));
}

namespace {

Formula singleton_eq_t(const Term& u, const Term& a) {
  return Formula::conj(
      mem(a, u), Formula::bounded_forall("cg_w", u, eq(V("cg_w"), a)));
}

Formula upair_eq_t(const Term& v, const Term& a, const Term& b) {
  return Formula::conj_all(
      {mem(a, v), mem(b, v),
       Formula::bounded_forall(
           "cu_w", v, Formula::disj(eq(V("cu_w"), a), eq(V("cu_w"), b)))});
}

}  // namespace

Formula kuratowski_eq(const std::string& p, const std::string& a,
                      const std::string& b) {
  return kuratowski_eq_t(V(p), V(a), V(b));
}

Formula kuratowski_eq_t(const Term& p, const Term& a, const Term& b) {
  // p = {{a}, {a,b}}: both elements present, and nothing else in p.
  Formula has_sing = Formula::bounded_exists("ck_u", p, singleton_eq_t(V("ck_u"), a));
  Formula has_pair = Formula::bounded_exists("ck_v", p, upair_eq_t(V("ck_v"), a, b));
  Formula only = Formula::bounded_forall(
      "ck_w", p,
      Formula::disj(singleton_eq_t(V("ck_w"), a), upair_eq_t(V("ck_w"), a, b)));
  return Formula::conj_all({has_sing, has_pair, only});
}

Formula is_kuratowski_pair(const std::string& x) {
  // exists a, b inside x with x = <a, b>
  Formula inner = Formula::bounded_exists(
      "ck_v2", V(x),
      Formula::bounded_exists("ck_b", V("ck_v2"),
                              kuratowski_eq_t(V(x), V("ck_a"), V("ck_b"))));
  return Formula::bounded_exists(
      "ck_u2", V(x), Formula::bounded_exists("ck_a", V("ck_u2"), inner));
}

Formula is_relation(const std::string& x) {
  return Formula::bounded_forall("cr_p", V(x), is_kuratowski_pair("cr_p"));
}

Formula is_function(const std::string& x) {
  // Functionality: matching first coordinates force equal second coordinates.
  Formula agree = Formula::bounded_forall(
      "cf_p", V(x),
      Formula::bounded_forall(
          "cf_q", V(x),
          Formula::bounded_forall(
              "cf_u", V("cf_p"),
              Formula::bounded_forall(
                  "cf_a", V("cf_u"),
                  Formula::bounded_forall(
                      "cf_v", V("cf_p"),
                      Formula::bounded_forall(
                          "cf_b", V("cf_v"),
                          Formula::bounded_forall(
                              "cf_v2", V("cf_q"),
                              Formula::bounded_forall(
                                  "cf_c", V("cf_v2"),
                                  Formula::disj_all(
                                      {Formula::negation(kuratowski_eq_t(
                                           V("cf_p"), V("cf_a"), V("cf_b"))),
                                       Formula::negation(kuratowski_eq_t(
                                           V("cf_q"), V("cf_a"), V("cf_c"))),
                                       eq(V("cf_b"), V("cf_c"))})))))))));
  return Formula::conj(is_relation(x), agree);
}

Formula is_transitive(const std::string& x) {
  return Formula::bounded_forall(
      "ct_y", V(x),
      Formula::bounded_forall("ct_z", V("ct_y"), mem(V("ct_z"), V(x))));
}

Formula is_ordinal(const std::string& x) {
  return Formula::conj(
      is_transitive(x),
      Formula::bounded_forall("co_y", V(x), is_transitive("co_y")));
}

Formula succ_eq(const std::string& z, const std::string& y) {
  // z = y u {y}
  return Formula::conj_all(
      {mem(V(y), V(z)),
       Formula::bounded_forall(
           "cc_w", V(z),
           Formula::disj(mem(V("cc_w"), V(y)), eq(V("cc_w"), V(y)))),
       Formula::bounded_forall("cc_w2", V(y), mem(V("cc_w2"), V(z)))});
}

Formula is_inductive(const std::string& x) {
  Formula has_empty = Formula::bounded_exists("ci_z", V(x), is_empty("ci_z"));
  Formula closed = Formula::bounded_forall(
      "ci_y", V(x),
      Formula::bounded_exists("ci_s", V(x), succ_eq("ci_s", "ci_y")));
  return Formula::conj(has_empty, closed);
}

Formula is_omega(const std::string& x) {
  // Transitive, inductive, and every element is an ordinal that is zero or a
  // successor of one of its elements.
  Formula elems = Formula::bounded_forall(
      "cw_y", V(x),
      Formula::conj(is_ordinal("cw_y"),
                    Formula::disj(is_empty("cw_y"),
                                  Formula::bounded_exists(
                                      "cw_z", V("cw_y"),
                                      succ_eq("cw_y", "cw_z")))));
  return Formula::conj_all({is_transitive(x), is_inductive(x), elems});
}

std::vector<CatalogEntry> lemma_catalog() {
  std::vector<CatalogEntry> out;
  out.push_back({"empty", is_empty("x")});
  out.push_back({"subset", subset("x", "y")});
  out.push_back({"upair", unordered_pair_eq("x", "y", "z")});
  out.push_back({"unionof", union_eq("x", "y")});
  out.push_back({"separation(empty)",
                 separation_instance("x", "y", "s", is_empty("s"))});
  out.push_back({"ispair", is_kuratowski_pair("x")});
  out.push_back({"relset", is_relation("x")});
  out.push_back({"isfunc", is_function("x")});
  out.push_back({"transitive", is_transitive("x")});
  out.push_back({"ordinal", is_ordinal("x")});
  out.push_back({"inductive", is_inductive("x")});
  out.push_back({"isomega", is_omega("x")});
  return out;
}

}  // namespace setforge::catalog

namespace setforge::detail {

void preload_catalog(AtomRegistry& reg) {
  using namespace setforge::catalog;
  reg.register_atom("empty", is_empty("x"), {"x"});
  reg.register_atom("subset", subset("x", "y"), {"x", "y"});
  reg.register_atom("upair", unordered_pair_eq("x", "y", "z"), {"x", "y", "z"});
  reg.register_atom("unionof", union_eq("x", "y"), {"x", "y"});
  reg.register_atom("ispair", is_kuratowski_pair("x"), {"x"});
  reg.register_atom("relset", is_relation("x"), {"x"});
  reg.register_atom("isfunc", is_function("x"), {"x"});
  reg.register_atom("transitive", is_transitive("x"), {"x"});
  reg.register_atom("ordinal", is_ordinal("x"), {"x"});
  reg.register_atom("inductive", is_inductive("x"), {"x"});
  reg.register_atom("isomega", is_omega("x"), {"x"});
  // Extensional equality as a Levy atom.
  reg.register_atom("eqv",
                    Formula::conj(subset("x", "y"), subset("y", "x")),
                    {"x", "y"});
}

}  // namespace setforge::detail
