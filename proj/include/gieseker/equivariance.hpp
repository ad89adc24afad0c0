#pragma once

// The cyclic group action at the node and everything that is computed from
// it: twisting of series matrices, the equivariance conditions on the glue
// matrix, diagonalization of the action cocycle, exponent sorting and the
// passage from the glue matrix F to the matrices H^1, H^2 over the
// invariant rings k((s)), k((t)).

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "gieseker/nodal.hpp"

namespace gieseker {

enum class Branch { u, v };

/// A generator of Z/e acting by u -> zeta*u, v -> zeta^{-1}*v.
struct GammaAction {
  int e = 1;
  Fp zeta;

  /// The action with the canonical root zeta = g^((p-1)/e).
  static GammaAction canonical(Residue p, int e) { return {e, primitive_eth_root(p, e)}; }

  Residue modulus() const { return zeta.modulus(); }

  void validate() const {
    if (e < 1) throw DomainError("group order must be positive");
    if (zeta.is_zero() || multiplicative_order(zeta) != e)
      throw DomainError("zeta = " + std::to_string(zeta.value()) + " is not a primitive " +
                        std::to_string(e) + "-th root of unity");
  }

  /// Eigenvalue of the generator on the tangent line of a branch.
  Fp branch_root(Branch b) const { return b == Branch::u ? zeta : zeta.inverse(); }

  /// The same group seen after exchanging the branches: zeta^{-1} takes
  /// the role of zeta.
  GammaAction swapped() const { return {e, zeta.inverse()}; }
};

/// Sorted exponent data: alpha are residues mod e (in [0, e)) and a their
/// lifts, weakly increasing.
struct ExponentVector {
  int e = 1;
  std::vector<int> alpha;
  std::vector<int> a;

  int rank() const { return static_cast<int>(a.size()); }

  void validate() const {
    if (alpha.size() != a.size()) throw DomainError("exponent vector: alpha and a differ in length");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0 || a[i] >= e) throw DomainError("exponent a_i outside [0, e)");
      if (floor_mod(a[i] - alpha[i], e) != 0) throw DomainError("a_i is not congruent to alpha_i");
      if (i && a[i] < a[i - 1]) throw DomainError("exponents are not sorted");
    }
  }
};

inline LaurentSeries apply_gamma(const LaurentSeries& x, const GammaAction& act, Branch b, int power = 1) {
  return x.scale_variable(act.branch_root(b).pow(power));
}
inline PowerSeries apply_gamma(const PowerSeries& x, const GammaAction& act, Branch b, int power = 1) {
  return x.scale_variable(act.branch_root(b).pow(power));
}

/// gamma^power applied entrywise on both branches.
inline QuotientMatrix apply_gamma(const QuotientMatrix& m, const GammaAction& act, int power = 1) {
  return {m.u.map([&](const LaurentSeries& x) { return apply_gamma(x, act, Branch::u, power); }),
          m.v.map([&](const LaurentSeries& x) { return apply_gamma(x, act, Branch::v, power); })};
}
inline NodalMatrix apply_gamma(const NodalMatrix& m, const GammaAction& act, int power = 1) {
  return {m.u.map([&](const PowerSeries& x) { return apply_gamma(x, act, Branch::u, power); }),
          m.v.map([&](const PowerSeries& x) { return apply_gamma(x, act, Branch::v, power); })};
}

/// diag(zeta^alpha_1, ..., zeta^alpha_r).
inline ConstMatrix root_diagonal(std::span<const int> alpha, const GammaAction& act) {
  std::vector<Fp> d;
  for (int x : alpha) d.push_back(act.zeta.pow(x));
  return ConstMatrix::diagonal(d, Fp::zero(act.modulus()));
}

inline QuotientMatrix scale_columns(const QuotientMatrix& m, const ConstMatrix& diag) {
  QuotientMatrix out = m;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      out.u(i, j) = m.u(i, j) * diag(j, j);
      out.v(i, j) = m.v(i, j) * diag(j, j);
    }
  return out;
}

/// gamma(F) == F * diag(zeta^alpha) on both branches.
inline bool is_equivariant(const QuotientMatrix& f, std::span<const int> alpha, const GammaAction& act) {
  if (static_cast<int>(alpha.size()) != f.size()) throw DomainError("exponent count differs from rank");
  return apply_gamma(f, act) == scale_columns(f, root_diagonal(alpha, act));
}

/// gamma(F) == F * a for a cocycle a that is not yet diagonal.
inline bool is_equivariant(const QuotientMatrix& f, const NodalMatrix& a, const GammaAction& act) {
  return apply_gamma(f, act) == f * QuotientMatrix::from(a);
}

/// gamma^0(a) gamma^1(a) ... gamma^{e-1}(a), in this order.
inline NodalMatrix cocycle_norm(const NodalMatrix& a, const GammaAction& act) {
  NodalMatrix prod = a;
  for (int j = 1; j < act.e; ++j) prod = prod * apply_gamma(a, act, j);
  return prod;
}

inline bool cocycle_norm_check(const NodalMatrix& a, const GammaAction& act) {
  if (!a.is_invertible()) throw DomainError("cocycle is not invertible");
  const int prec = std::min(precision_of(a.u), precision_of(a.v));
  return cocycle_norm(a, act) == NodalMatrix::identity(a.size(), act.modulus(), prec);
}

struct ResidueDiagonalization {
  ConstMatrix c;  ///< invertible, columns are eigenvectors
  ConstMatrix z;  ///< diagonal of e-th roots of unity, abar * c == c * z
  std::vector<int> alpha;  ///< z = diag(zeta^alpha)
};

/// Diagonalizes a constant matrix of order dividing e by the eigenprojectors
/// P_k = e^{-1} sum_j zeta^{-kj} abar^j, k = 0..e-1. Eigenvalues come out
/// sorted by k; each eigenspace basis is rref-normalized.
inline ResidueDiagonalization residue_diagonalize(const ConstMatrix& abar, const GammaAction& act) {
  const Residue p = act.modulus();
  const int r = abar.rows();
  if (!abar.square()) throw DomainError("residue matrix must be square");
  const ConstMatrix id = identity_const(r, p);
  if (matrix_power(abar, act.e) != id)
    throw DomainError("residue matrix does not satisfy abar^e = 1 for e = " + std::to_string(act.e));

  std::vector<ConstMatrix> powers{id};
  for (int j = 1; j < act.e; ++j) powers.push_back(powers.back() * abar);
  const Fp e_inv = Fp(act.e, p).inverse();

  std::vector<ConstMatrix> bases;
  std::vector<Fp> eigen;
  std::vector<int> alpha;
  for (int k = 0; k < act.e; ++k) {
    ConstMatrix proj(r, r, Fp::zero(p));
    for (int j = 0; j < act.e; ++j) proj = proj + powers[j].scaled(act.zeta.pow(-k * j));
    const ConstMatrix basis = column_space_basis(proj.scaled(e_inv));
    for (int col = 0; col < basis.cols(); ++col) {
      eigen.push_back(act.zeta.pow(k));
      alpha.push_back(k);
    }
    bases.push_back(basis);
  }
  ConstMatrix c = hconcat(bases, r, p);
  if (c.cols() != r) throw DomainError("residue matrix is not diagonalizable over F_p");
  return {std::move(c), ConstMatrix::diagonal(eigen, Fp::zero(p)), std::move(alpha)};
}

struct DiagonalizedAction {
  NodalMatrix b;  ///< a * gamma(b) == b * z
  ConstMatrix z;
  std::vector<int> alpha;  ///< z = diag(zeta^alpha)
};

/// Constructive diagonalization of an equivariant cocycle: with c from the
/// residue, a' = c^{-1} a c and
///   b' = sum_{i=0}^{e-1} (prod_{j=0}^{i-1} gamma^j(a')) z^{-i},
/// the matrix b = c b' satisfies a gamma(b) = b z.
inline DiagonalizedAction diagonalize_action(const NodalMatrix& a, const GammaAction& act) {
  const Residue p = act.modulus();
  if (Fp(act.e, p).is_zero()) throw DomainError("group order is divisible by the characteristic");
  if (!cocycle_norm_check(a, act)) throw DomainError("cocycle norm condition fails");
  const int prec = std::min(precision_of(a.u), precision_of(a.v));
  const int r = a.size();

  ResidueDiagonalization rd = residue_diagonalize(a.residue(), act);
  const NodalMatrix c = NodalMatrix::constant(rd.c, prec);
  const NodalMatrix c_inv = NodalMatrix::constant(inverse(rd.c), prec);
  const NodalMatrix a_prime = c_inv * a * c;
  const NodalMatrix z_inv = NodalMatrix::constant(inverse(rd.z), prec);

  NodalMatrix partial = NodalMatrix::identity(r, p, prec);  // prod_{j<i} gamma^j(a')
  NodalMatrix z_pow = NodalMatrix::identity(r, p, prec);    // z^{-i}
  NodalMatrix b_prime = partial * z_pow;
  for (int i = 1; i < act.e; ++i) {
    partial = partial * apply_gamma(a_prime, act, i - 1);
    z_pow = z_pow * z_inv;
    b_prime = b_prime + partial * z_pow;
  }
  if (!b_prime.is_invertible()) throw CheckFailure("b' is not invertible");
  return {c * b_prime, std::move(rd.z), std::move(rd.alpha)};
}

struct SortedExponents {
  ExponentVector exps;
  std::vector<int> perm;  ///< position j holds original column perm[j] (0-based)
};

/// Lifts alpha to [0, e) and sorts stably; the permutation is applied to
/// column indices.
inline SortedExponents sort_exponents(std::span<const int> alpha, int e) {
  if (e < 1) throw DomainError("group order must be positive");
  const int r = static_cast<int>(alpha.size());
  std::vector<int> lifts(r);
  for (int i = 0; i < r; ++i) lifts[i] = static_cast<int>(floor_mod(alpha[i], e));
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) { return lifts[x] < lifts[y]; });
  ExponentVector exps{e, {}, {}};
  for (int j : perm) {
    exps.alpha.push_back(lifts[j]);
    exps.a.push_back(lifts[j]);
  }
  return {std::move(exps), std::move(perm)};
}

struct GlueMatrices {
  LaurentMatrix h1;  ///< over k((s))
  LaurentMatrix h2;  ///< over k((t))
};

/// Factors F^1_{ij}(u) = u^{a_j} H^1_{ij}(u^e) and
/// F^2_{ij}(v) = v^{-a_j} H^2_{ij}(v^e). Throws on a support violation.
inline GlueMatrices extract_H(const QuotientMatrix& f, const ExponentVector& exps) {
  const int r = f.size();
  if (exps.rank() != r) throw DomainError("exponent count differs from rank");
  const Residue p = f.u.zero().modulus();
  GlueMatrices h{LaurentMatrix(r, r, LaurentSeries::exact_zero(p)),
                 LaurentMatrix(r, r, LaurentSeries::exact_zero(p))};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      h.h1(i, j) = extract_subseries(f.u(i, j), exps.a[j], exps.e);
      h.h2(i, j) = extract_subseries(f.v(i, j), -exps.a[j], exps.e);
    }
  return h;
}

/// Inverse of extract_H.
inline QuotientMatrix assemble_F(const GlueMatrices& h, const ExponentVector& exps) {
  const int r = h.h1.rows();
  QuotientMatrix f{h.h1, h.h2};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      f.u(i, j) = expand_subseries(h.h1(i, j), exps.a[j], exps.e);
      f.v(i, j) = expand_subseries(h.h2(i, j), -exps.a[j], exps.e);
    }
  return f;
}

}  // namespace gieseker
