#include "setforge/multiverse.hpp"

#include <algorithm>
#include <sstream>

namespace setforge::cohen {

Nat code_of(const std::vector<bool>& s) {
  Nat code = 1;
  for (bool b : s) code = code * 2 + (b ? 1 : 0);
  return code - 1;
}

std::vector<bool> string_of(const Nat& code) {
  Nat c = code + 1;
  std::vector<bool> out;
  while (c > 1) {
    out.push_back(mpz_tstbit(c.get_mpz_t(), 0) != 0);
    c /= 2;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

bool is_prefix(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

AbstractPoset poset() {
  AbstractPoset P;
  P.contains = [](const Nat& c) { return c >= 0; };
  P.leq = [](const Nat& s, const Nat& t) {
    return is_prefix(string_of(t), string_of(s));
  };
  P.compatible = [](const Nat& s, const Nat& t) {
    std::vector<bool> a = string_of(s), b = string_of(t);
    return is_prefix(a, b) || is_prefix(b, a);
  };
  P.dense_stream = [](std::size_t) { return std::nullopt; };
  return P;
}

AbstractPoset::DenseSet length_dense(std::size_t n) {
  AbstractPoset::DenseSet D;
  D.contains = [n](const Nat& c) { return string_of(c).size() >= n; };
  D.extend_into = [n](const Nat& c) {
    std::vector<bool> s = string_of(c);
    while (s.size() < n) s.push_back(false);
    return code_of(s);
  };
  return D;
}

AbstractPoset::DenseSet decision_dense(const std::vector<bool>& s) {
  AbstractPoset::DenseSet D;
  std::vector<bool> target = s;
  D.contains = [target](const Nat& c) {
    std::vector<bool> t = string_of(c);
    bool comparable = is_prefix(target, t) || is_prefix(t, target);
    return is_prefix(target, t) || !comparable;
  };
  D.extend_into = [target](const Nat& c) {
    std::vector<bool> t = string_of(c);
    if (is_prefix(target, t)) return code_of(t);   // already extends s
    if (!is_prefix(t, target)) return code_of(t);  // already incompatible
    // t is a proper prefix of the target. One appended bit settles it: the
    // against-bit goes incompatible; when only one bit is missing, the 0
    // bit is the lexicographically least of the two equal-length escapes.
    std::vector<bool> ext = t;
    ext.push_back(t.size() + 1 == target.size() ? false : !target[t.size()]);
    return code_of(ext);
  };
  return D;
}

}  // namespace setforge::cohen

namespace setforge {

// ---------------------------------------------------------------------------
// The amalgamation matrix
// ---------------------------------------------------------------------------

namespace {

bool in_family(const std::vector<std::vector<std::size_t>>& family,
               std::vector<std::size_t> A) {
  std::sort(A.begin(), A.end());
  for (std::vector<std::size_t> F : family) {
    std::sort(F.begin(), F.end());
    if (F == A) return true;
  }
  return false;
}

}  // namespace

std::string Matrix::dump() const {
  std::ostringstream os;
  for (std::size_t row = 0; row < height(); ++row) {
    for (const auto& col : cols) os << (col[row] ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

Matrix build_matrix(const AmalgamationSpec& spec, std::size_t steps) {
  if (spec.columns == 0) throw malformed_error("matrix needs at least one column");
  for (std::size_t i = 0; i < spec.columns; ++i) {
    if (!in_family(spec.family, {i}))
      throw malformed_error("family misses the singleton {" + std::to_string(i) + "}");
  }
  Matrix m;
  m.cols.assign(spec.columns, {});
  m.family = spec.family;

  for (std::size_t n = 0; n < steps; ++n) {
    auto D = spec.dense_stream(n);
    if (!D) break;
    if (!in_family(spec.family, D->columns))
      throw malformed_error("scheduled column set is outside the family");
    MatrixStep step;
    step.dense_index = n;
    step.columns = D->columns;
    step.ext_start = m.height();

    Tuple restriction;
    for (std::size_t i : D->columns) restriction.push_back(m.cols[i]);
    Tuple extended = D->extend_into(restriction);
    if (extended.size() != D->columns.size())
      throw contract_error("witness returned a tuple of the wrong width");
    for (std::size_t k = 0; k < extended.size(); ++k) {
      if (!cohen::is_prefix(restriction[k], extended[k]))
        throw contract_error("witness does not extend the current column");
    }
    if (!D->contains(extended))
      throw contract_error("witness missed its dense set");

    for (std::size_t k = 0; k < extended.size(); ++k)
      m.cols[D->columns[k]] = extended[k];

    std::size_t H = 0;
    for (const auto& col : m.cols) H = std::max(H, col.size());
    for (std::size_t i = 0; i < spec.columns; ++i) {
      bool scheduled = std::find(D->columns.begin(), D->columns.end(), i) !=
                       D->columns.end();
      while (m.cols[i].size() < H) m.cols[i].push_back(scheduled);
    }

    step.ones_row = H;
    step.z_row = H + 1;
    step.z_bit = spec.z(n);
    for (std::size_t i = 0; i < spec.columns; ++i) {
      m.cols[i].push_back(true);
      m.cols[i].push_back(step.z_bit);
    }
    m.log.push_back(step);
  }
  return m;
}

std::vector<bool> decode_z(const Matrix& m, const std::vector<std::size_t>& A,
                           std::size_t prefix_len) {
  if (in_family(m.family, A))
    throw malformed_error("coding rows are not isolable for a family member");
  for (std::size_t i : A)
    if (i >= m.cols.size()) throw malformed_error("column index out of range");
  if (prefix_len > m.log.size())
    throw malformed_error("matrix too short for the requested prefix");

  auto all_one = [&](std::size_t row) {
    for (std::size_t i : A)
      if (!m.cols[i][row]) return false;
    return true;
  };
  std::vector<bool> out;
  for (std::size_t n = 0; n < prefix_len; ++n) {
    // Walk past the extension block: its length is what the construction
    // log provides the decoder (the paper reads it off the full diagram).
    std::size_t ones = m.log[n].ones_row;
    if (!all_one(ones))
      throw contract_error("expected coding row is not all ones");
    for (std::size_t r = m.log[n].ext_start; r < ones; ++r) {
      if (all_one(r))
        throw contract_error("stray all-one row inside an extension block");
    }
    std::size_t zr = m.log[n].z_row;
    bool bit = m.cols[A.front()][zr];
    for (std::size_t i : A) {
      if (m.cols[i][zr] != bit)
        throw contract_error("coding row disagrees across the columns");
    }
    out.push_back(bit);
  }
  return out;
}

// ---------------------------------------------------------------------------
// z-coded generics
// ---------------------------------------------------------------------------

CodedGeneric z_coded_generic(
    const std::function<std::optional<AbstractPoset::DenseSet>(std::size_t)>& dense,
    const std::function<bool(std::size_t)>& z, std::size_t steps) {
  std::vector<bool> branch{z(0)};
  std::vector<std::size_t> ext_lengths;
  std::vector<Nat> seq{cohen::code_of(branch)};

  for (std::size_t n = 0; n < steps; ++n) {
    auto D = dense(n);
    if (!D) break;
    Nat cur = cohen::code_of(branch);
    Nat extended = D->extend_into(cur);
    std::vector<bool> ext = cohen::string_of(extended);
    if (!cohen::is_prefix(branch, ext) || !D->contains(extended))
      throw contract_error("dense-set witness " + std::to_string(n) +
                           " violated its contract");
    ext_lengths.push_back(ext.size() - branch.size());
    branch = ext;
    seq.push_back(cohen::code_of(branch));
    branch.push_back(z(n + 1));
    seq.push_back(cohen::code_of(branch));
  }

  AbstractPoset P = cohen::poset();
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
  GenericFilter G("z-coded", seq, contains, decide);
  return CodedGeneric{std::move(G), std::move(branch), std::move(ext_lengths)};
}

std::vector<bool> decode_coded_generic(const std::vector<bool>& branch,
                                       const std::vector<std::size_t>& ext_lengths,
                                       std::size_t nbits) {
  std::vector<bool> out;
  if (nbits == 0) return out;
  if (branch.empty()) throw malformed_error("empty branch");
  out.push_back(branch[0]);
  std::size_t pos = 1;
  for (std::size_t n = 0; n + 1 < nbits; ++n) {
    if (n >= ext_lengths.size())
      throw malformed_error("log too short for the requested bits");
    pos += ext_lengths[n];
    if (pos >= branch.size())
      throw malformed_error("branch too short for the logged lengths");
    out.push_back(branch[pos]);
    ++pos;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Catastrophic reals and grounds
// ---------------------------------------------------------------------------

std::function<bool(const Nat&)> catastrophic_real(OraclePtr atomic) {
  return [atomic](const Nat& k) {
    auto [m, n] = cantor_unpair(k);
    return decode::ask(*atomic, decode::mem_cc(m, n));
  };
}

std::vector<GroundEntry> enumerate_grounds(
    const std::shared_ptr<const GroundOracle>& pi2, Budget budget) {
  std::vector<GroundEntry> out;
  for (Budget r = 0; r < budget; ++r) {
    Nat param(static_cast<unsigned long>(r));
    Answer probe = pi2->ground_membership(0, param, budget);
    if (probe == Answer::OutOfBudget)
      throw undecided_error("ground probe for parameter " + param.get_str() +
                            " ran out of budget");
    if (probe != Answer::True) continue;
    GroundEntry entry;
    entry.index = out.size();
    entry.parameter = param;
    entry.membership = [pi2, param](const Nat& x, Budget b) {
      return pi2->ground_membership(x, param, b);
    };
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace setforge
