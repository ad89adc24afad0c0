#pragma once

// Seeded generators for series, matrices, cocycles and germs. Everything is
// driven by one std::mt19937_64 so a seed fixes the whole sample.

#include <algorithm>
#include <random>
#include <vector>

#include "gieseker/correspondence.hpp"

namespace gieseker {

class Sampler {
 public:
  Sampler(std::uint64_t seed, Residue p) : rng_(seed), p_(p) {}

  Residue modulus() const { return p_; }
  std::mt19937_64& engine() { return rng_; }

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform_int(0, 1) == 1; }

  Fp element() { return Fp(uniform_int(0, static_cast<int>(p_) - 1), p_); }
  Fp nonzero() { return Fp(uniform_int(1, static_cast<int>(p_) - 1), p_); }

  PowerSeries series(int precision) {
    std::vector<std::int64_t> c;
    for (int k = 0; k <= precision; ++k) c.push_back(element().value());
    return PowerSeries::from_coeffs(p_, c, precision);
  }
  /// Nonzero constant term, other coefficients uniform.
  PowerSeries unit_series(int precision) {
    PowerSeries x = series(precision);
    std::vector<std::int64_t> c;
    for (int k = 0; k <= precision; ++k) c.push_back(x.coeff(k).value());
    c[0] = nonzero().value();
    return PowerSeries::from_coeffs(p_, c, precision);
  }
  /// Vanishing constant term.
  PowerSeries series_in_ideal(int precision) {
    PowerSeries x = series(precision);
    std::vector<std::int64_t> c;
    for (int k = 0; k <= precision; ++k) c.push_back(k == 0 ? 0 : x.coeff(k).value());
    return PowerSeries::from_coeffs(p_, c, precision);
  }
  LaurentSeries laurent(int lowest, int precision) {
    std::vector<std::int64_t> c;
    for (int k = lowest; k <= precision; ++k) c.push_back(element().value());
    return LaurentSeries::from_coeffs(p_, lowest, c, precision);
  }

  ConstMatrix const_matrix(int rows, int cols) {
    ConstMatrix m(rows, cols, Fp::zero(p_));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = element();
    return m;
  }
  ConstMatrix invertible_const(int r) {
    for (;;) {
      ConstMatrix m = const_matrix(r, r);
      if (is_invertible(m)) return m;
    }
  }
  std::vector<int> permutation(int r) {
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng_);
    return perm;
  }

  PowerMatrix power_matrix(int r, int precision) {
    PowerMatrix m(r, r, PowerSeries(p_, precision));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) m(i, j) = series(precision);
    return m;
  }

  /// Invertible matrix over k[[u,v]]/(uv): an invertible residue plus
  /// random higher terms on each branch.
  NodalMatrix invertible_nodal(int r, int precision) {
    const ConstMatrix c = invertible_const(r);
    PowerMatrix u = to_power_matrix(c, precision), v = to_power_matrix(c, precision);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        u(i, j) = u(i, j) + series_in_ideal(precision);
        v(i, j) = v(i, j) + series_in_ideal(precision);
      }
    return {u, v};
  }

  /// Invertible matrix over k((s)): P(s) diag(s^k) with P invertible over
  /// k[[s]] and |k| <= spread.
  LaurentMatrix invertible_laurent(int r, int precision, int spread = 1) {
    const ConstMatrix c = invertible_const(r);
    LaurentMatrix m(r, r, LaurentSeries::exact_zero(p_));
    for (int j = 0; j < r; ++j) {
      const int k = uniform_int(-spread, spread);
      for (int i = 0; i < r; ++i) {
        const PowerSeries entry = PowerSeries::constant(c(i, j), precision) + series_in_ideal(precision);
        m(i, j) = entry.to_laurent().shifted(k);
      }
    }
    return m;
  }

  /// Sorted exponents in [0, e) for rank r.
  ExponentVector exponents(int r, int e) {
    std::vector<int> alpha;
    for (int i = 0; i < r; ++i) alpha.push_back(uniform_int(0, e - 1));
    return sort_exponents(alpha, e).exps;
  }

 private:
  std::mt19937_64 rng_;
  Residue p_;
};

/// a = b0 z gamma(b0)^{-1} for random invertible b0 and z = diag(zeta^alpha);
/// such a satisfies the norm condition.
struct RandomCocycle {
  NodalMatrix a;
  NodalMatrix b0;
  std::vector<int> alpha;
};

inline RandomCocycle random_cocycle(Sampler& rng, int r, const GammaAction& act, int precision) {
  RandomCocycle out;
  out.b0 = rng.invertible_nodal(r, precision);
  for (int i = 0; i < r; ++i) out.alpha.push_back(rng.uniform_int(0, act.e - 1));
  const NodalMatrix z = NodalMatrix::constant(root_diagonal(out.alpha, act), precision);
  out.a = out.b0 * z * apply_gamma(out.b0, act).inverse();
  return out;
}

/// Precision in s for H such that F = u^a H(u^e) is known to about N.
inline int invariant_precision(int precision, int e) { return std::max(1, (precision + 1) / e - 1); }

/// Forward-ready germ: random sorted exponents (possibly permuted) and
/// random invertible H over k((s)), k((t)) assembled into F.
inline LocalChartGerm random_germ(Sampler& rng, int r, int e, int precision, bool shuffle = true) {
  const Residue p = rng.modulus();
  const int hp = invariant_precision(precision, e);
  LocalChartGerm g;
  g.p = p;
  g.e = e;
  g.zeta = primitive_eth_root(p, e);
  const ExponentVector exps = rng.exponents(r, e);
  const GlueMatrices h{rng.invertible_laurent(r, hp), rng.invertible_laurent(r, hp)};
  QuotientMatrix f = assemble_F(h, exps);
  std::vector<int> alpha = exps.alpha;
  if (shuffle) {
    const auto perm = rng.permutation(r);
    f = f.permute_columns(perm);
    std::vector<int> shuffled(r);
    for (int j = 0; j < r; ++j) shuffled[j] = alpha[perm[j]];
    alpha = shuffled;
  }
  g.alpha = alpha;
  g.F = f;
  return g;
}

/// Germ with a non-diagonal action: F = F0 b0^{-1} where F0 is equivariant
/// for the exponents of the cocycle.
inline LocalChartGerm random_raw_germ(Sampler& rng, int r, int e, int precision) {
  LocalChartGerm g;
  g.p = rng.modulus();
  g.e = e;
  g.zeta = primitive_eth_root(g.p, e);
  const RandomCocycle cyc = random_cocycle(rng, r, g.action(), precision);
  // assemble_F only needs a_j per column, unsorted is fine here
  const ExponentVector exps{e, cyc.alpha, cyc.alpha};
  const int hp = invariant_precision(precision, e);
  const GlueMatrices h{rng.invertible_laurent(r, hp), rng.invertible_laurent(r, hp)};
  const QuotientMatrix f0 = assemble_F(h, exps);
  g.F = f0 * QuotientMatrix::from(cyc.b0.inverse());
  g.raw_action = cyc.a;
  return g;
}

}  // namespace gieseker
