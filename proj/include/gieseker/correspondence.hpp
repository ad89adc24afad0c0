#pragma once

// From a chart germ of a twisted bundle at the node to Gieseker data and
// back: normalization of the group action, the forward pipeline
// (sort, factor, partition, stratum point, chain) and the explicit inverse.

#include <optional>
#include <vector>

#include "gieseker/kgl.hpp"

namespace gieseker {

/// Chart data at the node: the glue matrix F over k((u)) x k((v)), either
/// with diagonal action exponents alpha or with a raw action cocycle.
struct LocalChartGerm {
  Residue p = 13;
  int e = 1;
  Fp zeta;
  std::vector<int> alpha;  // unused while raw_action is set
  QuotientMatrix F;
  std::optional<NodalMatrix> raw_action;

  GammaAction action() const { return {e, zeta}; }
  int rank() const { return F.size(); }

  void validate() const {
    require_prime(p);
    if (zeta.modulus() != p) throw DomainError("zeta lies in the wrong field");
    if (e < 1 || (p - 1) % static_cast<Residue>(e) != 0)
      throw DomainError("e = " + std::to_string(e) + " does not divide p - 1 = " + std::to_string(p - 1));
    action().validate();
    if (F.u.rows() != F.u.cols() || F.u.rows() == 0) throw DomainError("glue matrix must be square and nonempty");
    if (!F.is_invertible()) throw DomainError("glue matrix is not invertible");
    if (raw_action) {
      if (raw_action->size() != rank()) throw DomainError("action cocycle has the wrong size");
      if (!cocycle_norm_check(*raw_action, action())) throw DomainError("action cocycle fails the norm condition");
      if (!is_equivariant(F, *raw_action, action())) throw DomainError("glue matrix is not equivariant for the cocycle");
    } else {
      if (static_cast<int>(alpha.size()) != rank()) throw DomainError("need one exponent per column");
      if (!is_equivariant(F, alpha, action())) throw DomainError("glue matrix is not equivariant for alpha");
    }
  }
};

struct NormalizedChart {
  LocalChartGerm germ;  // diagonal action
  NodalMatrix change;   // b with F_new = F b and a = b z gamma(b)^{-1}
};

/// Replaces the frame by one in which the group acts diagonally.
inline NormalizedChart normalize_chart(const LocalChartGerm& raw) {
  if (!raw.raw_action) throw DomainError("germ carries no action cocycle to normalize");
  raw.validate();
  const GammaAction act = raw.action();
  DiagonalizedAction d = diagonalize_action(*raw.raw_action, act);
  LocalChartGerm out = raw;
  out.raw_action.reset();
  out.alpha = d.alpha;
  out.F = raw.F * QuotientMatrix::from(d.b);
  if (!is_equivariant(out.F, out.alpha, act)) throw CheckFailure("normalized glue matrix is not equivariant");
  return {std::move(out), std::move(d.b)};
}

struct GiesekerGermDatum {
  Partition partition;
  ChainBundleDescription chain;
  GlueMatrices H;
  KGLPoint point;
  std::vector<int> perm;  // column j of the sorted F is column perm[j] of the input
  ExponentVector exps;
  GammaAction action;

  int rank() const { return partition.r; }
};

/// For H already known to be invertible, e.g. a product of invertible
/// factors. Truncation can hide that: once columns of different valuation
/// are mixed, the determinant may fall below the available precision.
inline GiesekerGermDatum datum_from_invertible_glue(const ExponentVector& exps, const GammaAction& act,
                                                   GlueMatrices h, std::vector<int> perm) {
  const Partition part = partition_from_exponents(exps);
  return {part, canonical_chain(part, act.modulus()), std::move(h), kgl_point_from_partition(part, act.modulus()),
          std::move(perm), exps, act};
}

/// Builds the datum from sorted exponents and glue matrices H.
inline GiesekerGermDatum datum_from_glue(const ExponentVector& exps, const GammaAction& act, GlueMatrices h,
                                         std::vector<int> perm) {
  if (!is_invertible(h.h1) || !is_invertible(h.h2))
    throw CheckFailure("glue matrices H are not invertible at the available precision");
  return datum_from_invertible_glue(exps, act, std::move(h), std::move(perm));
}

inline GiesekerGermDatum forward(const LocalChartGerm& germ) {
  if (germ.raw_action) return forward(normalize_chart(germ).germ);
  germ.validate();
  const SortedExponents sorted = sort_exponents(germ.alpha, germ.e);
  const QuotientMatrix f = germ.F.permute_columns(sorted.perm);
  return datum_from_glue(sorted.exps, germ.action(), extract_H(f, sorted.exps), sorted.perm);
}

/// Smallest e >= m dividing p - 1.
inline int choose_group_order(int m, Residue p) {
  for (Residue e = std::max(m, 1); e <= p - 1; ++e)
    if ((p - 1) % e == 0) return static_cast<int>(e);
  throw DomainError("no e >= " + std::to_string(m) + " divides p - 1 = " + std::to_string(p - 1) +
                    "; choose a larger prime");
}

/// Germ whose forward image is the given J-empty point, read in its adapted
/// bases: a_i = nu - 1 on D_nu and F = (diag(u^a), diag(v^-a)).
inline LocalChartGerm inverse(const KGLPoint& pt, Residue p, std::optional<int> e_override = std::nullopt,
                              int precision = 16) {
  require_prime(p);
  if (pt.modulus() != p) throw DomainError("point is defined over a different field");
  const AdaptedBases ab = adapted_bases(pt);
  const Partition& part = ab.partition;
  const int m = part.m();
  int e = e_override ? *e_override : choose_group_order(m, p);
  if (e < m) throw DomainError("group order e = " + std::to_string(e) + " is smaller than m = " + std::to_string(m));
  if (e - 1 > precision) throw DomainError("precision is below the largest exponent");

  LocalChartGerm g;
  g.p = p;
  g.e = e;
  g.zeta = primitive_eth_root(p, e);
  const int r = part.r;
  g.F = {LaurentMatrix(r, r, LaurentSeries::exact_zero(p)), LaurentMatrix(r, r, LaurentSeries::exact_zero(p))};
  const auto block = part.block_of_index();
  for (int i = 0; i < r; ++i) {
    g.alpha.push_back(block[i]);
    g.F.u(i, i) = LaurentSeries::monomial(Fp::one(p), block[i], precision);
    g.F.v(i, i) = LaurentSeries::monomial(Fp::one(p), -block[i], precision);
  }
  g.validate();
  return g;
}

struct RoundtripResult {
  bool partition_matches = false;
  bool point_matches = false;
  GiesekerGermDatum datum;

  bool passed() const { return partition_matches && point_matches; }
};

/// forward(inverse(point)) moved back through the adapted bases must give
/// the input point.
inline RoundtripResult roundtrip_check(const KGLPoint& pt, Residue p, std::optional<int> e_override = std::nullopt,
                                       int precision = 16) {
  const AdaptedBases ab = adapted_bases(pt);
  GiesekerGermDatum d = forward(inverse(pt, p, e_override, precision));
  RoundtripResult res{d.partition == ab.partition, same_point(transport(d.point, ab.v, ab.w), pt), std::move(d)};
  return res;
}

}  // namespace gieseker
