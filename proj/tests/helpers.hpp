#pragma once

#include <random>
#include <vector>

#include "setforge/formula.hpp"
#include "setforge/hf.hpp"

namespace testutil {

using namespace setforge;

/// Seeded generator of alpha-normal formulas over variables and small model
/// constants.
class FormulaGen {
 public:
  explicit FormulaGen(std::uint64_t seed, bool closed = false)
      : rng_(seed), closed_(closed) {}

  Formula operator()(unsigned depth = 3) {
    var_counter_ = 0;
    return alpha_normalize(gen(depth, {}));
  }

 private:
  Term term(const std::vector<std::string>& scope) {
    if (!scope.empty() && (closed_ || coin(2))) {
      return Term::var(scope[rng_() % scope.size()]);
    }
    if (closed_ && scope.empty()) return Term::constant(rng_() % 64);
    if (coin(2)) return Term::constant(rng_() % 64);
    static const char* pool[] = {"x", "y", "z", "w"};
    return Term::var(pool[rng_() % 4]);
  }

  bool coin(unsigned n) { return rng_() % n == 0; }

  std::string fresh_var() { return "v" + std::to_string(var_counter_++); }

  Formula gen(unsigned depth, std::vector<std::string> scope) {
    if (depth == 0 || coin(4)) {
      Term a = term(scope), b = term(scope);
      return coin(2) ? Formula::equal(a, b) : Formula::member(a, b);
    }
    switch (rng_() % 8) {
      case 0: return Formula::negation(gen(depth - 1, scope));
      case 1: return Formula::conj(gen(depth - 1, scope), gen(depth - 1, scope));
      case 2: return Formula::disj(gen(depth - 1, scope), gen(depth - 1, scope));
      case 3: {
        std::string v = fresh_var();
        Term bound = term(scope);
        scope.push_back(v);
        return Formula::bounded_exists(v, bound, gen(depth - 1, scope));
      }
      case 4: {
        std::string v = fresh_var();
        Term bound = term(scope);
        scope.push_back(v);
        return Formula::bounded_forall(v, bound, gen(depth - 1, scope));
      }
      case 5: {
        std::string v = fresh_var();
        scope.push_back(v);
        return Formula::exists(v, gen(depth - 1, scope));
      }
      case 6: {
        std::string v = fresh_var();
        scope.push_back(v);
        return Formula::forall(v, gen(depth - 1, scope));
      }
      default: {
        Term a = term(scope), b = term(scope);
        return Formula::member(a, b);
      }
    }
  }

  std::mt19937_64 rng_;
  bool closed_;
  unsigned var_counter_ = 0;
};

/// The V-shaped three-condition poset: a and b below the maximum,
/// incompatible with each other. Labels: max = 0, a = 1, b = 2 (small codes
/// keep every derived object materializable).
inline hf::InstalledPoset v_poset() {
  return hf::install_poset({0, 1, 2}, {{1, 0}, {2, 0}});
}

inline hf::InstalledPoset trivial_poset() { return hf::install_poset({0}, {}); }

inline hf::InstalledPoset chain3_poset() {
  return hf::install_poset({0, 1, 2}, {{1, 0}, {2, 1}, {2, 0}});
}

/// All labeled partial orders with maximum on conditions {0, ..., n-1}.
inline std::vector<hf::InstalledPoset> all_posets_up_to(std::size_t max_n) {
  std::vector<hf::InstalledPoset> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::vector<Nat> labels;
    for (std::size_t i = 0; i < n; ++i) labels.emplace_back(i);
    // Enumerate relations as bit sets over ordered pairs (i != j).
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) slots.emplace_back(i, j);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size());
         ++mask) {
      std::vector<std::pair<Nat, Nat>> leq;
      for (std::size_t k = 0; k < slots.size(); ++k)
        if (mask & (std::uint64_t{1} << k))
          leq.emplace_back(slots[k].first, slots[k].second);
      try {
        out.push_back(hf::install_poset(labels, leq));
      } catch (const malformed_error&) {
        // not a partial order with maximum
      }
    }
  }
  return out;
}

}  // namespace testutil
