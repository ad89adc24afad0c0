#pragma once

// Truncated power and Laurent series over F_p.
//
// Every series carries an absolute precision N: coefficients of exponents
// <= N are known exactly, everything above N is unknown. Results of
// arithmetic carry the largest precision that the inputs actually
// determine, so an identity checked "up to precision" is an exact statement
// about the underlying infinite series.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "gieseker/error.hpp"
#include "gieseker/field.hpp"

namespace gieseker {

/// Precision assigned to values that are exact (polynomials such as the
/// identity or a monomial). Arithmetic saturates at this bound.
inline constexpr int kExactPrecision = 1 << 28;

class LaurentSeries;

class PowerSeries {
 public:
  PowerSeries() = default;
  /// The zero series in F_p[[s]] known up to s^precision.
  PowerSeries(Residue p, int precision) : p_(p), c_(check_precision(precision) + 1, 0) {}

  static PowerSeries from_coeffs(Residue p, const std::vector<std::int64_t>& coeffs, int precision) {
    PowerSeries x(p, precision);
    for (std::size_t n = 0; n < coeffs.size() && static_cast<int>(n) <= precision; ++n)
      x.c_[n] = modp::reduce(coeffs[n], p);
    return x;
  }
  static PowerSeries constant(const Fp& c, int precision) {
    PowerSeries x(c.modulus(), precision);
    x.c_[0] = c.value();
    return x;
  }
  static PowerSeries one(Residue p, int precision) { return constant(Fp::one(p), precision); }
  /// The series s.
  static PowerSeries variable(Residue p, int precision) {
    PowerSeries x(p, precision);
    if (precision >= 1) x.c_[1] = 1 % p;
    return x;
  }

  Residue modulus() const { return p_; }
  int precision() const { return static_cast<int>(c_.size()) - 1; }

  Fp coeff(int n) const {
    if (n < 0) return Fp::zero(p_);
    if (n > precision())
      throw DomainError("coefficient of s^" + std::to_string(n) + " is beyond precision " +
                        std::to_string(precision()));
    return Fp(c_[n], p_);
  }
  Fp constant_term() const { return coeff(0); }
  const std::vector<Residue>& raw() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](Residue r) { return r == 0; });
  }
  bool is_unit() const { return c_[0] != 0; }
  /// Exponent of the lowest nonzero coefficient; precision()+1 for zero.
  int valuation() const {
    for (std::size_t n = 0; n < c_.size(); ++n)
      if (c_[n] != 0) return static_cast<int>(n);
    return precision() + 1;
  }

  PowerSeries truncated(int precision) const {
    PowerSeries x(p_, std::min(precision, this->precision()));
    std::copy_n(c_.begin(), x.c_.size(), x.c_.begin());
    return x;
  }

  PowerSeries operator+(const PowerSeries& o) const {
    PowerSeries x(same_field(o), std::min(precision(), o.precision()));
    for (std::size_t n = 0; n < x.c_.size(); ++n) x.c_[n] = modp::add(c_[n], o.c_[n], p_);
    return x;
  }
  PowerSeries operator-(const PowerSeries& o) const { return *this + (-o); }
  PowerSeries operator-() const {
    PowerSeries x = *this;
    for (auto& r : x.c_) r = modp::neg(r, p_);
    return x;
  }
  PowerSeries operator*(const PowerSeries& o) const {
    PowerSeries x(same_field(o), std::min(precision(), o.precision()));
    const int N = x.precision();
    for (int i = 0; i <= N; ++i) {
      if (c_[i] == 0) continue;
      for (int j = 0; i + j <= N; ++j)
        x.c_[i + j] = modp::add(x.c_[i + j], modp::mul(c_[i], o.c_[j], p_), p_);
    }
    return x;
  }
  PowerSeries operator*(const Fp& a) const {
    PowerSeries x = *this;
    for (auto& r : x.c_) r = modp::mul(r, a.value(), p_);
    return x;
  }
  PowerSeries& operator+=(const PowerSeries& o) { return *this = *this + o; }
  PowerSeries& operator*=(const PowerSeries& o) { return *this = *this * o; }

  PowerSeries inverse() const {
    if (!is_unit())
      throw DomainError("power series with zero constant term is not invertible");
    const int N = precision();
    PowerSeries y(p_, N);
    const Residue inv0 = modp::inv(c_[0], p_);
    y.c_[0] = inv0;
    for (int n = 1; n <= N; ++n) {
      Residue acc = 0;
      for (int k = 1; k <= n; ++k) acc = modp::add(acc, modp::mul(c_[k], y.c_[n - k], p_), p_);
      y.c_[n] = modp::mul(modp::neg(acc, p_), inv0, p_);
    }
    return y;
  }

  PowerSeries pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    PowerSeries result = one(p_, precision()), base = *this;
    while (n) {
      if (n & 1) result *= base;
      base *= base;
      n >>= 1;
    }
    return result;
  }

  /// x(c*s).
  PowerSeries scale_variable(const Fp& c) const {
    PowerSeries x = *this;
    Residue cn = 1 % p_;
    for (auto& r : x.c_) {
      r = modp::mul(r, cn, p_);
      cn = modp::mul(cn, c.value(), p_);
    }
    return x;
  }

  /// x(s^e); known up to s^(e(N+1)-1).
  PowerSeries substitute_power(int e) const {
    if (e <= 0) throw DomainError("substitution exponent must be positive");
    PowerSeries x(p_, e * (precision() + 1) - 1);
    for (std::size_t n = 0; n < c_.size(); ++n) x.c_[n * e] = c_[n];
    return x;
  }

  LaurentSeries to_laurent() const;

  /// Coefficientwise agreement up to the smaller precision.
  bool operator==(const PowerSeries& o) const {
    if (p_ != o.p_) return false;
    const int N = std::min(precision(), o.precision());
    return std::equal(c_.begin(), c_.begin() + N + 1, o.c_.begin());
  }
  bool operator!=(const PowerSeries& o) const { return !(*this == o); }

  friend std::ostream& operator<<(std::ostream& os, const PowerSeries& x);

 private:
  static int check_precision(int precision) {
    if (precision < 0) throw DomainError("power series precision must be non-negative");
    return precision;
  }
  Residue same_field(const PowerSeries& o) const {
    if (p_ != o.p_) throw DomainError("series over different fields");
    return p_;
  }

  Residue p_ = 0;
  std::vector<Residue> c_{0};
};

class LaurentSeries {
 public:
  LaurentSeries() = default;
  /// The zero series known up to s^precision.
  LaurentSeries(Residue p, int precision) : p_(p), prec_(precision) {}

  /// Series sum_k coeffs[k] s^(lowest+k); terms above `precision` are dropped.
  static LaurentSeries from_coeffs(Residue p, int lowest, const std::vector<std::int64_t>& coeffs,
                                   int precision) {
    LaurentSeries x(p, precision);
    x.low_ = lowest;
    for (std::size_t k = 0; k < coeffs.size() && lowest + static_cast<int>(k) <= precision; ++k)
      x.c_.push_back(modp::reduce(coeffs[k], p));
    x.normalize();
    return x;
  }
  static LaurentSeries monomial(const Fp& c, int exponent, int precision) {
    LaurentSeries x(c.modulus(), precision);
    if (exponent <= precision && !c.is_zero()) {
      x.low_ = exponent;
      x.c_.push_back(c.value());
    }
    return x;
  }
  static LaurentSeries one(Residue p, int precision) { return monomial(Fp::one(p), 0, precision); }
  static LaurentSeries exact_zero(Residue p) { return LaurentSeries(p, kExactPrecision); }
  static LaurentSeries exact_monomial(const Fp& c, int exponent) {
    return monomial(c, exponent, kExactPrecision);
  }
  bool is_exact() const { return prec_ >= kExactPrecision; }

  Residue modulus() const { return p_; }
  int precision() const { return prec_; }
  bool is_zero() const { return c_.empty(); }
  /// Lowest stored exponent (0 for the zero series).
  int lowest() const { return low_; }
  /// Lowest exponent with nonzero coefficient; precision()+1 for zero.
  int valuation() const { return is_zero() ? prec_ + 1 : low_; }
  /// Highest exponent with nonzero coefficient, or lowest()-1 for zero.
  int highest() const { return low_ + static_cast<int>(c_.size()) - 1; }
  const std::vector<Residue>& raw() const { return c_; }

  Fp coeff(int n) const {
    if (n > prec_)
      throw DomainError("coefficient of s^" + std::to_string(n) + " is beyond precision " +
                        std::to_string(prec_));
    if (n < low_ || n > highest()) return Fp::zero(p_);
    return Fp(c_[n - low_], p_);
  }
  Residue raw_coeff(int n) const { return (n < low_ || n > highest()) ? 0 : c_[n - low_]; }

  LaurentSeries truncated(int precision) const {
    LaurentSeries x = *this;
    x.prec_ = std::min(precision, prec_);
    while (!x.c_.empty() && x.highest() > x.prec_) x.c_.pop_back();
    x.normalize();
    return x;
  }

  LaurentSeries operator+(const LaurentSeries& o) const {
    LaurentSeries x(same_field(o), std::min(prec_, o.prec_));
    if (is_zero() && o.is_zero()) return x;
    const int lo = is_zero() ? o.low_ : (o.is_zero() ? low_ : std::min(low_, o.low_));
    const int hi = std::min(x.prec_, std::max(highest(), o.highest()));
    if (hi < lo) return x;
    x.low_ = lo;
    x.c_.resize(hi - lo + 1);
    for (int n = lo; n <= hi; ++n) x.c_[n - lo] = modp::add(raw_coeff(n), o.raw_coeff(n), p_);
    x.normalize();
    return x;
  }
  LaurentSeries operator-() const {
    LaurentSeries x = *this;
    for (auto& r : x.c_) r = modp::neg(r, p_);
    return x;
  }
  LaurentSeries operator-(const LaurentSeries& o) const { return *this + (-o); }

  LaurentSeries operator*(const LaurentSeries& o) const {
    const Residue p = same_field(o);
    const int prec = sat_add_min(prec_, o.valuation(), o.prec_, valuation());
    LaurentSeries x(p, prec);
    if (is_zero() || o.is_zero()) return x;
    const int lo = low_ + o.low_;
    const int hi = std::min(prec, highest() + o.highest());
    if (hi < lo) return x;
    x.low_ = lo;
    x.c_.assign(hi - lo + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size() && static_cast<int>(i + j) <= hi - lo; ++j)
        x.c_[i + j] = modp::add(x.c_[i + j], modp::mul(c_[i], o.c_[j], p), p);
    }
    x.normalize();
    return x;
  }
  LaurentSeries operator*(const Fp& a) const {
    LaurentSeries x = *this;
    for (auto& r : x.c_) r = modp::mul(r, a.value(), p_);
    x.normalize();
    return x;
  }
  LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
  LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
  LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

  /// Multiplicative inverse; any series with a known nonzero coefficient is a
  /// unit of F_p((s)).
  LaurentSeries inverse() const {
    if (is_zero())
      throw DomainError("Laurent series is zero up to precision " + std::to_string(prec_) +
                        "; cannot invert");
    const int v = low_;
    if (is_exact()) {
      if (c_.size() == 1) return exact_monomial(Fp(c_[0], p_).inverse(), -v);
      throw DomainError("cannot invert an exact polynomial without a precision bound");
    }
    const int rel = prec_ - v;
    PowerSeries unit(p_, rel);
    std::vector<std::int64_t> u(rel + 1, 0);
    for (int k = 0; k <= rel; ++k) u[k] = raw_coeff(v + k);
    const PowerSeries inv = PowerSeries::from_coeffs(p_, u, rel).inverse();
    std::vector<std::int64_t> ic(inv.raw().begin(), inv.raw().end());
    return from_coeffs(p_, -v, ic, -v + rel);
  }

  LaurentSeries pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    LaurentSeries result = exact_monomial(Fp::one(p_), 0), base = *this;
    while (n) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return result;
  }

  /// x * s^k.
  LaurentSeries shifted(int k) const {
    LaurentSeries x = *this;
    if (!is_exact()) x.prec_ += k;
    if (!x.is_zero()) x.low_ += k;
    return x;
  }

  /// x(c*s) for nonzero c.
  LaurentSeries scale_variable(const Fp& c) const {
    if (c.is_zero()) throw DomainError("variable scaling by zero");
    LaurentSeries x = *this;
    for (std::size_t k = 0; k < x.c_.size(); ++k)
      x.c_[k] = modp::mul(x.c_[k], c.pow(low_ + static_cast<int>(k)).value(), p_);
    return x;
  }

  /// Conversion to F_p[[s]]; requires valuation >= 0 and precision >= 0.
  PowerSeries to_power_series() const {
    if (!is_zero() && low_ < 0) throw DomainError("series has a pole; not a power series");
    if (prec_ < 0) throw DomainError("series carries no known non-negative coefficients");
    PowerSeries x(p_, prec_);
    std::vector<std::int64_t> c(prec_ + 1, 0);
    for (int n = 0; n <= prec_; ++n) c[n] = raw_coeff(n);
    return PowerSeries::from_coeffs(p_, c, prec_);
  }

  /// Coefficientwise agreement up to the smaller precision.
  bool operator==(const LaurentSeries& o) const {
    if (p_ != o.p_) return false;
    const int N = std::min(prec_, o.prec_);
    const int lo = std::min(is_zero() ? N + 1 : low_, o.is_zero() ? N + 1 : o.low_);
    // beyond both stored ranges every coefficient is zero
    const int hi = std::min(N, std::max(is_zero() ? lo - 1 : highest(), o.is_zero() ? lo - 1 : o.highest()));
    for (int n = lo; n <= hi; ++n)
      if (raw_coeff(n) != o.raw_coeff(n)) return false;
    return true;
  }
  bool operator!=(const LaurentSeries& o) const { return !(*this == o); }

  friend std::ostream& operator<<(std::ostream& os, const LaurentSeries& x) {
    bool first = true;
    for (int n = x.low_; n <= x.highest(); ++n) {
      Residue c = x.raw_coeff(n);
      if (c == 0) continue;
      os << (first ? "" : " + ") << c << "*s^" << n;
      first = false;
    }
    if (first) os << "0";
    return os << " + O(s^" << x.prec_ + 1 << ")";
  }

 private:
  static int sat_add_min(int a1, int b1, int a2, int b2) {
    const auto m = std::min(std::int64_t{a1} + b1, std::int64_t{a2} + b2);
    const std::int64_t cap = kExactPrecision;
    return static_cast<int>(std::clamp<std::int64_t>(m, -cap, cap));
  }
  Residue same_field(const LaurentSeries& o) const {
    if (p_ != o.p_) throw DomainError("series over different fields");
    return p_;
  }
  void normalize() {
    std::size_t first = 0;
    while (first < c_.size() && c_[first] == 0) ++first;
    if (first == c_.size()) {
      c_.clear();
      low_ = 0;
      return;
    }
    c_.erase(c_.begin(), c_.begin() + first);
    low_ += static_cast<int>(first);
    while (c_.back() == 0) c_.pop_back();
  }

  Residue p_ = 0;
  int low_ = 0;
  int prec_ = 0;
  std::vector<Residue> c_;
};

inline LaurentSeries PowerSeries::to_laurent() const {
  std::vector<std::int64_t> c(c_.begin(), c_.end());
  return LaurentSeries::from_coeffs(p_, 0, c, precision());
}

inline std::ostream& operator<<(std::ostream& os, const PowerSeries& x) { return os << x.to_laurent(); }

/// x(arg) for arg = s * unit. The result is known up to
/// min(N_x, val(x) + N_arg - 1).
inline LaurentSeries compose(const LaurentSeries& x, const PowerSeries& arg) {
  if (arg.modulus() != x.modulus()) throw DomainError("series over different fields");
  if (arg.precision() < 1 || !arg.coeff(0).is_zero() || arg.coeff(1).is_zero())
    throw DomainError("substituted series must have valuation exactly 1");
  const Residue p = x.modulus();
  if (x.is_zero()) return LaurentSeries(p, x.precision());
  const int v = x.lowest();
  const int rel = std::min(x.precision() - v, arg.precision() - 1);
  if (rel < 0) return LaurentSeries(p, v + rel);

  std::vector<std::int64_t> wc(rel + 1);
  for (int k = 0; k <= rel; ++k) wc[k] = arg.coeff(k + 1).value();
  const PowerSeries w = PowerSeries::from_coeffs(p, wc, rel);
  const PowerSeries sw = PowerSeries::variable(p, rel) * w;

  PowerSeries y = PowerSeries::constant(x.coeff(v + rel), rel);
  for (int k = rel - 1; k >= 0; --k) y = y * sw + PowerSeries::constant(x.coeff(v + k), rel);
  const PowerSeries body = w.pow(v) * y;
  return body.to_laurent().shifted(v);
}

/// True iff every exponent carrying a nonzero coefficient is congruent to
/// a modulo e.
inline bool supported_in_residue(const LaurentSeries& x, std::int64_t a, std::int64_t e) {
  if (e <= 0) throw DomainError("modulus e must be positive");
  for (int n = x.lowest(); n <= x.highest(); ++n)
    if (x.raw_coeff(n) != 0 && floor_mod(n - a, e) != 0) return false;
  return true;
}

/// The series H with x(u) = u^a H(u^e); H is known up to floor((N-a)/e).
inline LaurentSeries extract_subseries(const LaurentSeries& x, int a, int e) {
  if (!supported_in_residue(x, a, e))
    throw DomainError("support violation: series has exponents not congruent to " +
                      std::to_string(a) + " mod " + std::to_string(e));
  const int prec = x.is_exact() ? kExactPrecision : static_cast<int>(floor_div(x.precision() - a, e));
  if (x.is_zero()) return LaurentSeries(x.modulus(), prec);
  const int lo = static_cast<int>((x.lowest() - a) / e);
  const int hi = std::min(prec, static_cast<int>((x.highest() - a) / e));
  std::vector<std::int64_t> c;
  for (int k = lo; k <= hi; ++k) c.push_back(x.raw_coeff(a + e * k));
  return LaurentSeries::from_coeffs(x.modulus(), lo, c, prec);
}

/// u^a H(u^e); known up to a + e(N_H + 1) - 1.
inline LaurentSeries expand_subseries(const LaurentSeries& h, int a, int e) {
  if (e <= 0) throw DomainError("modulus e must be positive");
  const int prec = h.is_exact() ? kExactPrecision : a + e * (h.precision() + 1) - 1;
  if (h.is_zero()) return LaurentSeries(h.modulus(), prec);
  std::vector<std::int64_t> c((h.highest() - h.lowest()) * e + 1, 0);
  for (int k = h.lowest(); k <= h.highest(); ++k) c[(k - h.lowest()) * e] = h.raw_coeff(k);
  return LaurentSeries::from_coeffs(h.modulus(), a + e * h.lowest(), c, prec);
}

}  // namespace gieseker
