#pragma once

// The complete local ring k[[u,v]]/(uv) and its total quotient ring
// k((u)) x k((v)). An element of the local ring is a pair of power series
// with a common constant term; matrices over either ring are pairs of
// branch matrices.

#include "gieseker/matrix.hpp"

namespace gieseker {

struct NodalRingElement {
  PowerSeries f_u;
  PowerSeries g_v;

  NodalRingElement(PowerSeries u_branch, PowerSeries v_branch)
      : f_u(std::move(u_branch)), g_v(std::move(v_branch)) {
    if (f_u.constant_term() != g_v.constant_term())
      throw DomainError("nodal ring element: branch constant terms differ");
  }

  NodalRingElement operator+(const NodalRingElement& o) const { return {f_u + o.f_u, g_v + o.g_v}; }
  NodalRingElement operator*(const NodalRingElement& o) const { return {f_u * o.f_u, g_v * o.g_v}; }
  bool is_unit() const { return f_u.is_unit(); }
  NodalRingElement inverse() const { return {f_u.inverse(), g_v.inverse()}; }
  bool operator==(const NodalRingElement& o) const { return f_u == o.f_u && g_v == o.g_v; }
};

struct NodalQuotientElement {
  LaurentSeries f_u;
  LaurentSeries g_v;

  static NodalQuotientElement from(const NodalRingElement& x) {
    return {x.f_u.to_laurent(), x.g_v.to_laurent()};
  }
  NodalQuotientElement operator+(const NodalQuotientElement& o) const {
    return {f_u + o.f_u, g_v + o.g_v};
  }
  NodalQuotientElement operator*(const NodalQuotientElement& o) const {
    return {f_u * o.f_u, g_v * o.g_v};
  }
  NodalQuotientElement inverse() const { return {f_u.inverse(), g_v.inverse()}; }
  bool operator==(const NodalQuotientElement& o) const { return f_u == o.f_u && g_v == o.g_v; }
};

/// Matrix over k[[u,v]]/(uv): the two branch matrices share their constant
/// term.
struct NodalMatrix {
  PowerMatrix u;
  PowerMatrix v;

  NodalMatrix() = default;
  NodalMatrix(PowerMatrix u_branch, PowerMatrix v_branch) : u(std::move(u_branch)), v(std::move(v_branch)) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
      throw DomainError("nodal matrix: branch shapes differ");
    if (constant_term(u) != constant_term(v))
      throw DomainError("nodal matrix: branch constant terms differ");
  }

  static NodalMatrix constant(const ConstMatrix& c, int precision) {
    return {to_power_matrix(c, precision), to_power_matrix(c, precision)};
  }
  static NodalMatrix identity(int r, Residue p, int precision) {
    return constant(identity_const(r, p), precision);
  }

  int size() const { return u.rows(); }
  ConstMatrix residue() const { return constant_term(u); }

  NodalMatrix operator*(const NodalMatrix& o) const { return {u * o.u, v * o.v}; }
  NodalMatrix operator+(const NodalMatrix& o) const { return {u + o.u, v + o.v}; }
  bool operator==(const NodalMatrix& o) const { return u == o.u && v == o.v; }
  bool operator!=(const NodalMatrix& o) const { return !(*this == o); }

  bool is_invertible() const { return gieseker::is_invertible(residue()); }
  NodalMatrix inverse() const { return {gieseker::inverse(u), gieseker::inverse(v)}; }

  NodalQuotientElement entry(int i, int j) const { return {u(i, j).to_laurent(), v(i, j).to_laurent()}; }
};

/// Matrix over k((u)) x k((v)).
struct QuotientMatrix {
  LaurentMatrix u;
  LaurentMatrix v;

  static QuotientMatrix from(const NodalMatrix& a) { return {to_laurent_matrix(a.u), to_laurent_matrix(a.v)}; }
  static QuotientMatrix identity(int r, Residue p) {
    const auto id = LaurentMatrix::identity(r, LaurentSeries::exact_zero(p));
    return {id, id};
  }

  int size() const { return u.rows(); }
  QuotientMatrix operator*(const QuotientMatrix& o) const { return {u * o.u, v * o.v}; }
  bool operator==(const QuotientMatrix& o) const { return u == o.u && v == o.v; }
  bool operator!=(const QuotientMatrix& o) const { return !(*this == o); }

  bool is_invertible() const { return gieseker::is_invertible(u) && gieseker::is_invertible(v); }
  QuotientMatrix inverse() const { return {gieseker::inverse(u), gieseker::inverse(v)}; }
  QuotientMatrix permute_columns(std::span<const int> perm) const {
    return {u.permute_columns(perm), v.permute_columns(perm)};
  }
  NodalQuotientElement entry(int i, int j) const { return {u(i, j), v(i, j)}; }
};

}  // namespace gieseker
