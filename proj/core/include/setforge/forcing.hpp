#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "setforge/hf.hpp"
#include "setforge/names.hpp"
#include "setforge/oracle.hpp"
#include "setforge/poset.hpp"

namespace setforge {

enum class ForcingKind : std::uint8_t { MemberF, EqualF, SubsetF };

/// Memoized atomic forcing over a finite poset. The recursion is the
/// standard unramified one:
///
///   p forces sigma subset tau  iff  for every <rho, r> in sigma and every
///                                   q <= p, r: q forces rho in tau;
///   p forces sigma = tau       iff  both inclusions;
///   p forces sigma in tau      iff  {q : exists <rho, r> in tau with
///                                   q <= r and q forces rho = sigma} is
///                                   dense below p.
///
/// Results are bitmasks over conditions; the memo table is shared and
/// thread-safe.
class ForcingContext {
 public:
  explicit ForcingContext(FinitePoset P) : P_(std::move(P)) {}
  ForcingContext(const ForcingContext&) = delete;
  ForcingContext& operator=(const ForcingContext&) = delete;

  const FinitePoset& poset() const { return P_; }

  std::size_t intern(const Name& n);
  const Name& name_of(std::size_t id) const;
  std::size_t pool_size() const;

  /// Mask of conditions forcing (a REL b).
  std::uint64_t force_mask(ForcingKind k, std::size_t a, std::size_t b);
  bool forces(ForcingKind k, std::size_t cond, std::size_t a, std::size_t b);

 private:
  std::uint64_t compute(ForcingKind k, std::size_t a, std::size_t b);
  void grow_memo();
  std::size_t slot(int k, std::size_t a, std::size_t b) const {
    return (static_cast<std::size_t>(k) * cap_ + a) * cap_ + b;
  }

  FinitePoset P_;
  mutable std::recursive_mutex mu_;
  std::vector<Name> pool_;
  std::map<Name, std::size_t> ids_;
  // Dense memo over (kind, a, b); rebuilt when the pool outgrows it.
  std::size_t cap_ = 0;
  std::vector<std::uint64_t> memo_val_;
  std::vector<unsigned char> memo_set_;
};

/// One-shot atomic forcing query over an installed poset. Entries of the
/// names must use condition labels of the poset.
bool forces_atomic(const hf::InstalledPoset& P, const Nat& p_label,
                   const Name& sigma, const Name& tau, ForcingKind kind);

// ---------------------------------------------------------------------------
// The formula compiler
// ---------------------------------------------------------------------------

/// force_phi: the ground-model formula defining "p forces phi(names)".
/// Free variables: kCond (the condition), kP / kL (the forcing notion and
/// its order, as parameters), plus the source formula's free variables,
/// which now range over names. Delta0 sources compile to a Sigma(1)/Pi(1)
/// pair; Sigma(n) and Pi(n) sources keep their level.
struct CompiledForcing {
  Formula source;
  Formula sigma_form;
  std::optional<Formula> pi_form;  // the other half of the Delta1 pair
  LevyClass complexity;
  std::vector<std::string> name_params;

  static constexpr const char* kCond = "fc_p";
  static constexpr const char* kP = "fc_P";
  static constexpr const char* kL = "fc_L";
};

CompiledForcing compile_forcing(const Formula& phi,
                                const AtomRegistry& reg = AtomRegistry::global());

/// The Sigma(1) formula saying "x is a P-name" (tree-certificate form), with
/// the forcing notion's underlying set as second parameter.
Formula name_predicate_sigma(const std::string& x, const std::string& pvar);

// ---------------------------------------------------------------------------
// Deciding the forcing relation for compound formulas
// ---------------------------------------------------------------------------

/// Decides "p forces phi(bindings)" over an installed poset by the forcing
/// recursion; unbounded existentials search name witnesses in enumeration
/// order below the budget and report OutOfBudget when unresolved. Model
/// constants in phi denote ground elements, i.e. their check names.
Answer forces(ForcingContext& ctx, std::size_t cond, const Formula& phi,
              const std::vector<std::pair<std::string, Name>>& bindings,
              Budget budget, const AtomRegistry& reg = AtomRegistry::global());

Answer forces(const hf::InstalledPoset& P, const Nat& p_label, const Formula& phi,
              const std::vector<std::pair<std::string, Name>>& bindings,
              Budget budget, const AtomRegistry& reg = AtomRegistry::global());

}  // namespace setforge
