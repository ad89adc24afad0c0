#pragma once

// Well-definedness of the forward map, as executable identities: changing
// the coordinates at the node, exchanging the two branches, and changing
// either trivialization must transform H in the predicted way and must
// leave the stratum point where it was.

#include <string>
#include <utility>
#include <vector>

#include "gieseker/random.hpp"

namespace gieseker {

struct CheckResult {
  std::string name;
  bool passed = false;
};

struct TransformResult {
  GiesekerGermDatum datum;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

inline LaurentMatrix scale_columns(const LaurentMatrix& m, const std::vector<LaurentSeries>& d) {
  LaurentMatrix out = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) * d[j];
  return out;
}

inline bool same_datum_point(const GiesekerGermDatum& x, const GiesekerGermDatum& y) {
  return x.partition == y.partition && same_point(x.point, y.point);
}

/// M(u^e) for a matrix M over k((s)).
inline LaurentMatrix in_cover_variable(const LaurentMatrix& m, int e) {
  return m.map([e](const LaurentSeries& x) { return expand_subseries(x, 0, e); });
}

inline LaurentMatrix power_to_laurent(const PowerMatrix& m) { return to_laurent_matrix(m); }

}  // namespace detail

// ---------------------------------------------------------------------------
// coordinate change at the node

/// New coordinates with s = s' sigma(s'), t = t' tau(t'), where sigma = pi^e
/// and tau = omega^e; on the cover u = u' pi(u'^e), v = v' omega(v'^e).
struct NodeReparam {
  PowerSeries pi;
  PowerSeries omega;

  void validate() const {
    if (!pi.is_unit() || !omega.is_unit()) throw DomainError("reparametrization series must be units");
  }
  PowerSeries sigma(int e) const { return pi.pow(e); }
  PowerSeries tau(int e) const { return omega.pow(e); }
};

struct ReparamResult : TransformResult {
  ConstMatrix fiber_p1;  // diag(pi(0)^{-a})
  ConstMatrix fiber_p2;  // diag(omega(0)^{a})
};

/// H~1_ij(s) = pi^{a_j} H1_ij(s sigma), H~2_ij(t) = omega^{-a_j} H2_ij(t tau).
inline ReparamResult reparam_transform(const GiesekerGermDatum& datum, const NodeReparam& rp) {
  rp.validate();
  const int e = datum.exps.e, r = datum.rank();
  const Residue p = datum.action.modulus();
  const auto& a = datum.exps.a;
  const PowerSeries s_arg = PowerSeries::variable(p, rp.pi.precision()) * rp.sigma(e);
  const PowerSeries t_arg = PowerSeries::variable(p, rp.omega.precision()) * rp.tau(e);

  const LaurentMatrix h1_sub = datum.H.h1.map([&](const LaurentSeries& x) { return compose(x, s_arg); });
  const LaurentMatrix h2_sub = datum.H.h2.map([&](const LaurentSeries& x) { return compose(x, t_arg); });
  std::vector<LaurentSeries> pi_pow, omega_pow, pi_inv_pow, omega_inv_pow;
  for (int j = 0; j < r; ++j) {
    pi_pow.push_back(rp.pi.pow(a[j]).to_laurent());
    pi_inv_pow.push_back(rp.pi.pow(-a[j]).to_laurent());
    omega_pow.push_back(rp.omega.pow(a[j]).to_laurent());
    omega_inv_pow.push_back(rp.omega.pow(-a[j]).to_laurent());
  }
  GlueMatrices h{detail::scale_columns(h1_sub, pi_pow), detail::scale_columns(h2_sub, omega_inv_pow)};

  ReparamResult res;
  // the square: scaling H~ back by the inverse unit powers gives H at the substituted argument
  res.checks.push_back({"commuting square",
                        detail::scale_columns(h.h1, pi_inv_pow) == h1_sub &&
                            detail::scale_columns(h.h2, omega_pow) == h2_sub});

  // independent route: substitute in F on the cover and factor again
  const QuotientMatrix f = assemble_F(datum.H, datum.exps);
  // u pi(u^e) has valuation exactly 1 whatever the precision of F; compose
  // caps the result at the precision of each entry
  const PowerSeries pi_e = rp.pi.substitute_power(e), omega_e = rp.omega.substitute_power(e);
  const PowerSeries u_arg = PowerSeries::variable(p, pi_e.precision() + 1) * pi_e;
  const PowerSeries v_arg = PowerSeries::variable(p, omega_e.precision() + 1) * omega_e;
  const QuotientMatrix f_new{f.u.map([&](const LaurentSeries& x) { return compose(x, u_arg); }),
                             f.v.map([&](const LaurentSeries& x) { return compose(x, v_arg); })};
  bool cover_ok = is_equivariant(f_new, datum.exps.alpha, datum.action);
  if (cover_ok) {
    const GlueMatrices h_cover = extract_H(f_new, datum.exps);
    cover_ok = h_cover.h1 == h.h1 && h_cover.h2 == h.h2;
  }
  res.checks.push_back({"substitution on the cover", cover_ok});

  std::vector<Fp> d1, d2;
  for (int j = 0; j < r; ++j) {
    d1.push_back(rp.pi.constant_term().pow(-a[j]));
    d2.push_back(rp.omega.constant_term().pow(a[j]));
  }
  res.fiber_p1 = ConstMatrix::diagonal(d1, Fp::zero(p));
  res.fiber_p2 = ConstMatrix::diagonal(d2, Fp::zero(p));
  res.checks.push_back({"fiber isomorphisms fix the point",
                        same_point(transport(datum.point, res.fiber_p1, res.fiber_p2), datum.point)});

  res.datum = datum_from_invertible_glue(datum.exps, datum.action, std::move(h), datum.perm);
  res.checks.push_back({"stratum point unchanged", detail::same_datum_point(res.datum, datum)});
  return res;
}

// ---------------------------------------------------------------------------
// exchanging the branches

struct BranchSwapData {
  std::vector<int> lambda;  // 0-based involution, Lambda(lambda(j), j) = 1
  ExponentVector exps;      // a~
  GlueMatrices h;
};

/// a~_i = a_i on D_1, e - a_{r+i1+1-i} after; H~1 = H2 Lambda diag(I, s^-1),
/// H~2 = H1 Lambda diag(I, t).
inline BranchSwapData swap_branches(const GiesekerGermDatum& datum) {
  const int r = datum.rank(), e = datum.exps.e;
  const int i1 = datum.partition.block_sizes[0];
  const Residue p = datum.action.modulus();
  BranchSwapData out;
  out.exps.e = e;
  for (int j = 0; j < r; ++j) {
    out.lambda.push_back(j < i1 ? j : r + i1 - 1 - j);
    const int at = j < i1 ? datum.exps.a[j] : e - datum.exps.a[out.lambda[j]];
    out.exps.a.push_back(at);
    out.exps.alpha.push_back(at);
  }
  std::vector<LaurentSeries> d_s, d_t;
  for (int j = 0; j < r; ++j) {
    d_s.push_back(LaurentSeries::exact_monomial(Fp::one(p), j < i1 ? 0 : -1));
    d_t.push_back(LaurentSeries::exact_monomial(Fp::one(p), j < i1 ? 0 : 1));
  }
  out.h.h1 = detail::scale_columns(datum.H.h2.permute_columns(out.lambda), d_s);
  out.h.h2 = detail::scale_columns(datum.H.h1.permute_columns(out.lambda), d_t);
  return out;
}

inline GiesekerGermDatum swapped_datum(const GiesekerGermDatum& datum, const BranchSwapData& sw) {
  std::vector<int> perm;
  for (int j = 0; j < datum.rank(); ++j) perm.push_back(datum.perm[sw.lambda[j]]);
  return datum_from_invertible_glue(sw.exps, datum.action.swapped(), sw.h, std::move(perm));
}

inline TransformResult branch_swap_transform(const GiesekerGermDatum& datum) {
  const int r = datum.rank(), e = datum.exps.e;
  const int i1 = datum.partition.block_sizes[0];
  const Residue p = datum.action.modulus();
  const BranchSwapData sw = swap_branches(datum);
  TransformResult res;

  bool sorted = true;
  for (int j = 0; j < r; ++j)
    if (sw.exps.a[j] < 0 || sw.exps.a[j] >= e || (j && sw.exps.a[j] < sw.exps.a[j - 1])) sorted = false;
  res.checks.push_back({"swapped exponents sorted", sorted});
  if (!sorted) {
    res.datum = datum;
    return res;
  }

  // the glue square read backwards: H~ diag(I, s) Lambda^{-1} recovers H
  std::vector<int> lambda_inv(r);
  for (int j = 0; j < r; ++j) lambda_inv[sw.lambda[j]] = j;
  std::vector<LaurentSeries> up_s, down_t;
  for (int j = 0; j < r; ++j) {
    up_s.push_back(LaurentSeries::exact_monomial(Fp::one(p), j < i1 ? 0 : 1));
    down_t.push_back(LaurentSeries::exact_monomial(Fp::one(p), j < i1 ? 0 : -1));
  }
  res.checks.push_back(
      {"glue diagram",
       detail::scale_columns(sw.h.h1, up_s).permute_columns(lambda_inv) == datum.H.h2 &&
           detail::scale_columns(sw.h.h2, down_t).permute_columns(lambda_inv) == datum.H.h1});

  // F~ = (F2, F1) Lambda is equivariant for zeta^{-1} with a~ and factors to H~
  const QuotientMatrix f = assemble_F(datum.H, datum.exps);
  const QuotientMatrix f_new{f.v.permute_columns(sw.lambda), f.u.permute_columns(sw.lambda)};
  bool cover_ok = is_equivariant(f_new, sw.exps.alpha, datum.action.swapped());
  if (cover_ok) {
    const GlueMatrices h_cover = extract_H(f_new, sw.exps);
    cover_ok = h_cover.h1 == sw.h.h1 && h_cover.h2 == sw.h.h2;
  }
  res.checks.push_back({"swapped glue matrix on the cover", cover_ok});

  res.datum = swapped_datum(datum, sw);
  const Partition& old_part = datum.partition;
  const Partition& new_part = res.datum.partition;
  bool blocks_ok = new_part.m() == old_part.m() && new_part.block_sizes[0] == old_part.block_sizes[0];
  if (blocks_ok) {
    const int m = old_part.m();
    const auto old_block = old_part.block_of_index();
    const auto new_block = new_part.block_of_index();
    // D~_1 = D_1 and D~_i = lambda(D_{m+2-i}) (1-based)
    for (int j = 0; j < r; ++j) {
      const int b = old_block[j];
      const int expected = b == 0 ? 0 : m - b;
      if (new_block[sw.lambda[j]] != expected) blocks_ok = false;
    }
  }
  res.checks.push_back({"partition reflected", blocks_ok});

  const BranchSwapData back = swap_branches(res.datum);
  const GiesekerGermDatum twice = swapped_datum(res.datum, back);
  res.checks.push_back({"double swap is the identity",
                        twice.exps.a == datum.exps.a && twice.H.h1 == datum.H.h1 && twice.H.h2 == datum.H.h2 &&
                            twice.perm == datum.perm && twice.action.zeta == datum.action.zeta &&
                            detail::same_datum_point(twice, datum)});
  return res;
}

// ---------------------------------------------------------------------------
// changing the trivialization of the generic bundle

/// The generic frame changes by M over k((s)) x k((t)), so H~ = M H.
inline TransformResult xi_triv_transform(const GiesekerGermDatum& datum, const GlueMatrices& m) {
  if (!is_invertible(m.h1) || !is_invertible(m.h2)) throw DomainError("frame change is not invertible");
  const int e = datum.exps.e;
  GlueMatrices h{m.h1 * datum.H.h1, m.h2 * datum.H.h2};
  TransformResult res;

  const QuotientMatrix f = assemble_F(datum.H, datum.exps);
  const QuotientMatrix f_new{detail::in_cover_variable(m.h1, e) * f.u, detail::in_cover_variable(m.h2, e) * f.v};
  bool cover_ok = is_equivariant(f_new, datum.exps.alpha, datum.action);
  if (cover_ok) {
    const GlueMatrices h_cover = extract_H(f_new, datum.exps);
    cover_ok = h_cover.h1 == h.h1 && h_cover.h2 == h.h2;
  }
  res.checks.push_back({"frame change on the cover", cover_ok});
  res.datum = datum_from_invertible_glue(datum.exps, datum.action, std::move(h), datum.perm);
  res.checks.push_back({"stratum point unchanged", detail::same_datum_point(res.datum, datum)});
  return res;
}

// ---------------------------------------------------------------------------
// changing the trivialization of the bundle on the cover

/// A = A0 + u A1(u) + v A2(v) with
///   u A1(u) = diag(u^-a) B1(u^e) diag(u^a),  v A2(v) = diag(v^a) B2(v^e) diag(v^-a),
/// A0 block diagonal over the partition, B1_ij(0) = 0 unless a_j > a_i and
/// B2_ij(0) = 0 unless a_i > a_j.
struct EtaTrivChange {
  std::vector<ConstMatrix> a0_blocks;  // one per block, 0 x 0 for an empty D_1
  PowerMatrix b1;
  PowerMatrix b2;
};

inline ConstMatrix assemble_A0(const EtaTrivChange& chg, const Partition& part, Residue p) {
  ConstMatrix a0(part.r, part.r, Fp::zero(p));
  for (int nu = 0; nu < part.m(); ++nu) {
    const int start = part.block_start(nu), n = part.block_sizes[nu];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a0(start + i, start + j) = chg.a0_blocks[nu](i, j);
  }
  return a0;
}

inline void validate_change(const EtaTrivChange& chg, const ExponentVector& exps, const Partition& part) {
  const int r = part.r;
  if (static_cast<int>(chg.a0_blocks.size()) != part.m()) throw DomainError("need one A0 block per partition block");
  for (int nu = 0; nu < part.m(); ++nu) {
    const ConstMatrix& b = chg.a0_blocks[nu];
    if (b.rows() != part.block_sizes[nu] || b.cols() != part.block_sizes[nu])
      throw DomainError("A0 block " + std::to_string(nu + 1) + " has the wrong size");
    if (b.rows() > 0 && !is_invertible(b)) throw DomainError("A0 block " + std::to_string(nu + 1) + " is singular");
  }
  if (chg.b1.rows() != r || chg.b1.cols() != r || chg.b2.rows() != r || chg.b2.cols() != r)
    throw DomainError("B matrices must be r x r");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (exps.a[j] - exps.a[i] <= 0 && !chg.b1(i, j).constant_term().is_zero())
        throw DomainError("B1(0) must vanish where a_j <= a_i");
      if (exps.a[i] - exps.a[j] <= 0 && !chg.b2(i, j).constant_term().is_zero())
        throw DomainError("B2(0) must vanish where a_i <= a_j");
    }
}

inline NodalMatrix assemble_A(const EtaTrivChange& chg, const ExponentVector& exps, const Partition& part,
                              int precision) {
  validate_change(chg, exps, part);
  const Residue p = chg.b1.zero().modulus();
  const int r = part.r, e = exps.e;
  const ConstMatrix a0 = assemble_A0(chg, part, p);
  PowerMatrix u = to_power_matrix(a0, precision), v = to_power_matrix(a0, precision);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const int du = exps.a[j] - exps.a[i];
      u(i, j) = u(i, j) + expand_subseries(chg.b1(i, j).to_laurent(), du, e).to_power_series();
      v(i, j) = v(i, j) + expand_subseries(chg.b2(i, j).to_laurent(), -du, e).to_power_series();
    }
  return {u, v};
}

/// A = diag(zeta^alpha) gamma(A) diag(zeta^-alpha): exactly the condition for
/// F A to be equivariant with the same exponents.
inline bool satisfies_change_condition(const NodalMatrix& a, const ExponentVector& exps, const GammaAction& act) {
  const int prec = std::min(precision_of(a.u), precision_of(a.v));
  const NodalMatrix d = NodalMatrix::constant(root_diagonal(exps.alpha, act), prec);
  const NodalMatrix d_inv = NodalMatrix::constant(inverse(root_diagonal(exps.alpha, act)), prec);
  return a == d * apply_gamma(a, act) * d_inv;
}

inline EtaTrivChange sample_eta_change(const ExponentVector& exps, const Partition& part, Sampler& rng,
                                       int precision) {
  const int r = part.r;
  const Residue p = rng.modulus();
  EtaTrivChange chg;
  for (int size : part.block_sizes)
    chg.a0_blocks.push_back(size ? rng.invertible_const(size) : ConstMatrix(0, 0, Fp::zero(p)));
  chg.b1 = PowerMatrix(r, r, PowerSeries(p, precision));
  chg.b2 = chg.b1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      chg.b1(i, j) = exps.a[j] > exps.a[i] ? rng.series(precision) : rng.series_in_ideal(precision);
      chg.b2(i, j) = exps.a[i] > exps.a[j] ? rng.series(precision) : rng.series_in_ideal(precision);
    }
  return chg;
}

/// H~1 = H1 (A0 + B1(s)), H~2 = H2 (A0 + B2(t)); the constant parts
/// A0 + B1(0) (block upper triangular) and A0 + B2(0) (block lower
/// triangular) act on the fibers at p_1 and p_2 and must fix the point.
inline TransformResult eta_triv_transform(const GiesekerGermDatum& datum, const EtaTrivChange& chg) {
  const Residue p = datum.action.modulus();
  const ExponentVector& exps = datum.exps;
  validate_change(chg, exps, datum.partition);
  const ConstMatrix a0 = assemble_A0(chg, datum.partition, p);
  const int prec_b = std::min(precision_of(chg.b1), precision_of(chg.b2));
  const PowerMatrix a0_series = to_power_matrix(a0, prec_b);
  GlueMatrices h{datum.H.h1 * detail::power_to_laurent(a0_series + chg.b1),
                 datum.H.h2 * detail::power_to_laurent(a0_series + chg.b2)};
  TransformResult res;

  const QuotientMatrix f = assemble_F(datum.H, exps);
  const int prec_a = std::max(precision_of(f.u), precision_of(f.v));
  const NodalMatrix a = assemble_A(chg, exps, datum.partition, prec_a);
  res.checks.push_back({"change condition on A", satisfies_change_condition(a, exps, datum.action)});

  const QuotientMatrix f_new = f * QuotientMatrix::from(a);
  bool cover_ok = is_equivariant(f_new, exps.alpha, datum.action);
  if (cover_ok) {
    const GlueMatrices h_cover = extract_H(f_new, exps);
    cover_ok = h_cover.h1 == h.h1 && h_cover.h2 == h.h2;
  }
  res.checks.push_back({"frame change on the cover", cover_ok});

  const ConstMatrix g1 = a0 + constant_term(chg.b1);
  const ConstMatrix g2 = a0 + constant_term(chg.b2);
  res.checks.push_back({"fiber maps fix the point", same_point(transport(datum.point, g1, g2), datum.point)});

  res.datum = datum_from_invertible_glue(exps, datum.action, std::move(h), datum.perm);
  res.checks.push_back({"stratum point unchanged", detail::same_datum_point(res.datum, datum)});
  return res;
}

}  // namespace gieseker
