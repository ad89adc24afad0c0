#pragma once

// Combinatorics of the inserted chain of projective lines: partitions of
// [1,r] coming from sorted exponents, the bundle pattern on each chain
// component, the index bijection between chain degrees and strata (I, J),
// and the admissibility test (no nonzero section vanishing at both ends).

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gieseker/equivariance.hpp"

namespace gieseker {

/// Consecutive blocks D_1, ..., D_m of [1, r]. D_1 may be empty.
struct Partition {
  int r = 0;
  std::vector<int> block_sizes;

  int m() const { return static_cast<int>(block_sizes.size()); }

  void validate() const {
    if (r < 1) throw DomainError("partition rank must be positive");
    if (block_sizes.empty()) throw DomainError("partition needs at least one block");
    if (block_sizes[0] < 0) throw DomainError("first block size is negative");
    for (std::size_t i = 1; i < block_sizes.size(); ++i)
      if (block_sizes[i] < 1) throw DomainError("block " + std::to_string(i + 1) + " is empty");
    if (std::accumulate(block_sizes.begin(), block_sizes.end(), 0) != r)
      throw DomainError("block sizes do not sum to r");
  }

  /// 0-based first index of block nu (0-based).
  int block_start(int nu) const {
    return std::accumulate(block_sizes.begin(), block_sizes.begin() + nu, 0);
  }

  /// 0-based block number of each 0-based index.
  std::vector<int> block_of_index() const {
    std::vector<int> out;
    for (int nu = 0; nu < m(); ++nu) out.insert(out.end(), block_sizes[nu], nu);
    return out;
  }

  /// dim F_i(V) = |D_1| + ... + |D_i|, i = 0..m.
  std::vector<int> dims_V() const {
    std::vector<int> d{0};
    for (int s : block_sizes) d.push_back(d.back() + s);
    return d;
  }
  /// dim F_i(W) = |D_{m-i+1}| + ... + |D_m|, i = 0..m.
  std::vector<int> dims_W() const {
    std::vector<int> d{0};
    for (auto it = block_sizes.rbegin(); it != block_sizes.rend(); ++it) d.push_back(d.back() + *it);
    return d;
  }

  bool operator==(const Partition&) const = default;
};

inline Partition partition_from_exponents(const ExponentVector& exps) {
  exps.validate();
  Partition part{exps.rank(), {0}};
  for (std::size_t i = 0; i < exps.a.size(); ++i) {
    if (exps.a[i] == 0)
      ++part.block_sizes[0];
    else if (i > 0 && exps.a[i] == exps.a[i - 1])
      ++part.block_sizes.back();
    else
      part.block_sizes.push_back(1);
  }
  return part;
}

/// n components P^1 with a degree 0 or 1 per index, and n-1 constant glue
/// matrices: glue[c] sends the fiber at y_{c+1} to the fiber at x_{c+2}
/// (1-based component numbering).
struct ProjectiveChain {
  int r = 0;
  std::vector<std::vector<int>> degrees;
  std::vector<ConstMatrix> glue;

  int length() const { return static_cast<int>(degrees.size()); }

  int degree(int c) const { return std::accumulate(degrees[c].begin(), degrees[c].end(), 0); }

  void validate(Residue p) const {
    if (r < 1) throw DomainError("chain rank must be positive");
    if (degrees.empty()) throw DomainError("chain has no components");
    for (const auto& pattern : degrees) {
      if (static_cast<int>(pattern.size()) != r) throw DomainError("degree pattern has wrong length");
      for (int d : pattern)
        if (d != 0 && d != 1) throw DomainError("per-index degree must be 0 or 1");
    }
    if (glue.size() + 1 != degrees.size()) throw DomainError("need one glue matrix per inner node");
    for (const auto& g : glue) {
      if (g.rows() != r || g.cols() != r) throw DomainError("glue matrix has wrong shape");
      if (g(0, 0).modulus() != p) throw DomainError("glue matrix over the wrong field");
      if (!is_invertible(g)) throw DomainError("glue matrix is singular");
    }
  }
};

enum class Summand { trivial, degree_one, degree_minus_one };

/// The bundles E_0, ..., E_m of the construction: E_0 on the s-branch,
/// E_1..E_{m-1} on the inserted lines, E_m on the t-branch.
struct ChainBundleDescription {
  Partition partition;
  std::vector<std::vector<Summand>> components;  // m + 1 entries
  std::vector<ConstMatrix> glue;                 // between consecutive lines, m - 2 entries when m >= 2

  int m() const { return partition.m(); }

  /// Degrees of the inserted lines R_1..R_{m-1}.
  std::vector<int> degrees() const {
    std::vector<int> d;
    for (int c = 1; c + 1 < static_cast<int>(components.size()); ++c)
      d.push_back(static_cast<int>(std::count(components[c].begin(), components[c].end(), Summand::degree_one)));
    return d;
  }

  /// The projective part as input for the admissibility check; empty when m = 1.
  std::optional<ProjectiveChain> projective_part() const {
    if (m() < 2) return std::nullopt;
    ProjectiveChain chain{partition.r, {}, glue};
    for (int c = 1; c < m(); ++c) {
      std::vector<int> pattern;
      for (Summand s : components[c]) pattern.push_back(s == Summand::degree_one ? 1 : 0);
      chain.degrees.push_back(std::move(pattern));
    }
    return chain;
  }
};

inline ChainBundleDescription canonical_chain(const Partition& part, Residue p) {
  part.validate();
  const int m = part.m();
  const auto block = part.block_of_index();
  ChainBundleDescription out{part, {}, {}};
  std::vector<Summand> e0;
  for (int b : block) e0.push_back(b == 0 ? Summand::trivial : Summand::degree_minus_one);
  out.components.push_back(std::move(e0));
  for (int c = 1; c < m; ++c) {
    std::vector<Summand> ec;
    for (int b : block) ec.push_back(b == c ? Summand::degree_one : Summand::trivial);
    out.components.push_back(std::move(ec));
  }
  out.components.emplace_back(part.r, Summand::trivial);
  for (int c = 1; c + 1 < m; ++c) out.glue.push_back(identity_const(part.r, p));
  return out;
}

/// True iff every component has positive degree and the only global section
/// vanishing at x_1 and y_n is zero. A section is described by its values at
/// both ends of each component: a degree-one summand has independent values
/// at x_c and y_c, a trivial summand a single constant.
inline bool check_admissible(const ProjectiveChain& chain, Residue p) {
  chain.validate(p);
  const int n = chain.length(), r = chain.r;
  for (int c = 0; c < n; ++c)
    if (chain.degree(c) < 1) return false;

  // column index of the unknown giving the value of index i at x (end 0) or y (end 1)
  std::vector<std::vector<std::array<int, 2>>> var(n, std::vector<std::array<int, 2>>(r));
  int unknowns = 0;
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < r; ++i) {
      if (chain.degrees[c][i] == 1) {
        var[c][i] = {unknowns, unknowns + 1};
        unknowns += 2;
      } else {
        var[c][i] = {unknowns, unknowns};
        ++unknowns;
      }
    }

  std::vector<std::vector<Fp>> rows;
  auto blank = [&] { return std::vector<Fp>(unknowns, Fp::zero(p)); };
  for (int i = 0; i < r; ++i) {
    auto row = blank();
    row[var[0][i][0]] = Fp::one(p);
    rows.push_back(row);
    row = blank();
    row[var[n - 1][i][1]] = Fp::one(p);
    rows.push_back(row);
  }
  for (int c = 0; c + 1 < n; ++c) {
    const ConstMatrix& g = chain.glue[c];
    for (int i = 0; i < r; ++i) {
      auto row = blank();
      row[var[c + 1][i][0]] += Fp::one(p);
      for (int j = 0; j < r; ++j) row[var[c][j][1]] -= g(i, j);
      rows.push_back(row);
    }
  }

  ConstMatrix system(static_cast<int>(rows.size()), unknowns, Fp::zero(p));
  for (int i = 0; i < system.rows(); ++i)
    for (int j = 0; j < unknowns; ++j) system(i, j) = rows[i][j];
  return rank(system) == unknowns;
}

/// Pair of index sets labelling a stratum O_{I,J}.
struct Stratum {
  std::vector<int> I;
  std::vector<int> J;

  bool operator==(const Stratum&) const = default;

  /// Strictly increasing subsets of [0, r-1] with min(I) + min(J) >= r,
  /// where min of the empty set is r.
  bool is_valid(int r) const {
    auto ok = [r](const std::vector<int>& s) {
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < 0 || s[k] >= r) return false;
        if (k && s[k] <= s[k - 1]) return false;
      }
      return true;
    };
    const int min_i = I.empty() ? r : I.front();
    const int min_j = J.empty() ? r : J.front();
    return ok(I) && ok(J) && min_i + min_j >= r;
  }

  void validate(int r) const {
    if (r < 1) throw DomainError("rank must be positive");
    if (!is_valid(r)) throw DomainError("(I, J) is not a stratum for r = " + std::to_string(r));
  }
};

/// Chain data of a Gieseker bundle datum: n1 lines before the distinguished
/// node, n2 after it, and the degree of each line.
struct ChainIndices {
  int n1 = 0;
  int n2 = 0;
  std::vector<int> degrees;

  bool operator==(const ChainIndices&) const = default;
};

inline Stratum stratum_indices_from_chain(int r, int n1, int n2, const std::vector<int>& d) {
  if (r < 1) throw DomainError("rank must be positive");
  if (n1 < 0 || n2 < 0) throw DomainError("negative chain length");
  if (static_cast<int>(d.size()) != n1 + n2) throw DomainError("need n1 + n2 degrees");
  for (int x : d)
    if (x < 1) throw DomainError("chain degrees must be at least 1");
  if (std::accumulate(d.begin(), d.end(), 0) > r) throw DomainError("chain degrees sum to more than r");
  const int n = n1 + n2;
  Stratum s;
  // d is 0-based here: d[i-1] is d_i
  for (int nu = 1; nu <= n1; ++nu) {
    int sum = 0;
    for (int i = nu; i <= n1; ++i) sum += d[i - 1];
    s.I.push_back(r - sum);
  }
  for (int nu = 1; nu <= n2; ++nu) {
    int sum = 0;
    for (int i = n1 + 1; i <= n - nu + 1; ++i) sum += d[i - 1];
    s.J.push_back(r - sum);
  }
  s.validate(r);
  return s;
}

inline ChainIndices chain_from_stratum(int r, const Stratum& s) {
  s.validate(r);
  ChainIndices out{static_cast<int>(s.I.size()), static_cast<int>(s.J.size()), {}};
  for (int nu = 0; nu < out.n1; ++nu) {
    const int next = nu + 1 < out.n1 ? s.I[nu + 1] : r;
    out.degrees.push_back(next - s.I[nu]);
  }
  // d_{n1+k} = j_{n2-k+2} - j_{n2-k+1}, j_{n2+1} = r
  for (int k = 1; k <= out.n2; ++k) {
    const int hi = k == 1 ? r : s.J[out.n2 - k + 1];
    out.degrees.push_back(hi - s.J[out.n2 - k]);
  }
  return out;
}

/// All strata for rank r, ordered by (|I|+|J|, |J|, I, J).
inline std::vector<Stratum> enumerate_strata(int r) {
  if (r < 1) throw DomainError("rank must be positive");
  if (r > 20) throw DomainError("rank too large to enumerate strata");
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) s.push_back(i);
    subsets.push_back(std::move(s));
  }
  std::vector<Stratum> out;
  for (const auto& I : subsets)
    for (const auto& J : subsets) {
      Stratum s{I, J};
      if (s.is_valid(r)) out.push_back(std::move(s));
    }
  std::sort(out.begin(), out.end(), [](const Stratum& x, const Stratum& y) {
    const auto key = [](const Stratum& s) { return std::make_tuple(s.I.size() + s.J.size(), s.J.size()); };
    if (key(x) != key(y)) return key(x) < key(y);
    if (x.I != y.I) return x.I < y.I;
    return x.J < y.J;
  });
  return out;
}

/// A reduced fraction num/den.
struct Weight {
  int num = 0;
  int den = 1;
  bool operator==(const Weight&) const = default;
};

struct ParabolicFlag {
  std::vector<int> dims;        ///< 0 = dims[0] <= ... <= dims[m] = r
  std::vector<Weight> weights;  ///< one per block, a_nu / e
};

/// Flag of the sorted exponent blocks at a smooth marked point; the first
/// block (exponent 0) may be empty.
inline ParabolicFlag parabolic_flag(std::span<const int> alpha, int e) {
  const SortedExponents sorted = sort_exponents(alpha, e);
  const Partition part = partition_from_exponents(sorted.exps);
  ParabolicFlag out{part.dims_V(), {}};
  for (int nu = 0; nu < part.m(); ++nu) {
    const int value = nu == 0 ? 0 : sorted.exps.a[part.block_start(nu)];
    const int g = std::gcd(value, e);
    out.weights.push_back(value == 0 ? Weight{0, 1} : Weight{value / g, e / g});
  }
  return out;
}

}  // namespace gieseker
