#include "setforge/poset.hpp"

#include <algorithm>

namespace setforge {

FinitePoset FinitePoset::from_relation(
    std::vector<Nat> labels, const std::vector<std::pair<Nat, Nat>>& leq) {
  FinitePoset P;
  if (labels.empty()) throw malformed_error("poset needs at least one condition");
  if (labels.size() > 64) throw malformed_error("at most 64 conditions supported");
  for (const Nat& l : labels)
    if (l < 0) throw malformed_error("negative condition label");
  P.labels_ = std::move(labels);
  std::size_t n = P.labels_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (P.labels_[i] == P.labels_[j])
        throw malformed_error("duplicate condition label " + P.labels_[i].get_str());

  P.below_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) P.below_[i] |= std::uint64_t{1} << i;
  for (const auto& [a, b] : leq) {
    auto i = P.index_of(a);
    auto j = P.index_of(b);
    if (!i || !j)
      throw malformed_error("order pair mentions a non-condition: " +
                            a.get_str() + " <= " + b.get_str());
    P.below_[*j] |= std::uint64_t{1} << *i;
  }

  // Transitivity and antisymmetry are requirements, not closures we take.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(P.below_[j] & (std::uint64_t{1} << k))) continue;
      std::uint64_t missing = P.below_[k] & ~P.below_[j];
      if (missing) throw malformed_error("order relation is not transitive");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool ij = P.below_[j] & (std::uint64_t{1} << i);
      bool ji = P.below_[i] & (std::uint64_t{1} << j);
      if (ij && ji) throw malformed_error("order relation is not antisymmetric");
    }
  }

  std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  bool has_max = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (P.below_[j] == all) {
      P.max_index_ = j;
      has_max = true;
      break;
    }
  }
  if (!has_max) throw malformed_error("poset has no maximum element");
  return P;
}

std::optional<std::size_t> FinitePoset::index_of(const Nat& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

bool FinitePoset::leq(std::size_t p, std::size_t q) const {
  return below_[q] & (std::uint64_t{1} << p);
}

bool FinitePoset::compatible(std::size_t p, std::size_t q) const {
  return (below_[p] & below_[q]) != 0;
}

std::uint64_t FinitePoset::all_mask() const {
  return size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1;
}

bool FinitePoset::is_dense(std::uint64_t mask) const {
  for (std::size_t p = 0; p < size(); ++p)
    if ((below_[p] & mask) == 0) return false;
  return true;
}

std::vector<std::uint64_t> FinitePoset::all_dense_masks() const {
  std::vector<std::uint64_t> out;
  if (size() > 20) throw malformed_error("dense-family enumeration needs <= 20 conditions");
  for (std::uint64_t mask = 0; mask <= all_mask(); ++mask)
    if (is_dense(mask)) out.push_back(mask);
  return out;
}

std::vector<std::size_t> FinitePoset::minimal_elements() const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < size(); ++p)
    if (below_[p] == (std::uint64_t{1} << p)) out.push_back(p);
  return out;
}

}  // namespace setforge
