#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "gieseker/error.hpp"

namespace gieseker {

using Residue = std::uint32_t;

namespace modp {

inline Residue reduce(std::int64_t x, Residue p) {
  std::int64_t m = x % static_cast<std::int64_t>(p);
  return static_cast<Residue>(m < 0 ? m + p : m);
}
inline Residue add(Residue a, Residue b, Residue p) {
  std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<Residue>(s >= p ? s - p : s);
}
inline Residue sub(Residue a, Residue b, Residue p) { return a >= b ? a - b : a + (p - b); }
inline Residue neg(Residue a, Residue p) { return a == 0 ? 0 : p - a; }
inline Residue mul(Residue a, Residue b, Residue p) {
  return static_cast<Residue>((std::uint64_t{a} * b) % p);
}
inline Residue pow(Residue a, std::uint64_t n, Residue p) {
  std::uint64_t result = 1 % p, base = a % p;
  while (n) {
    if (n & 1) result = result * base % p;
    base = base * base % p;
    n >>= 1;
  }
  return static_cast<Residue>(result);
}
inline Residue inv(Residue a, Residue p) {
  if (a % p == 0) throw DomainError("division by zero in F_" + std::to_string(p));
  // extended Euclid; p need not be checked for primality here
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw DomainError("element not invertible modulo " + std::to_string(p));
  return reduce(t, p);
}

}  // namespace modp

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (p > (1u << 31)) throw DomainError("prime " + std::to_string(p) + " exceeds 2^31");
}

/// Element of the prime field F_p. The modulus travels with the value;
/// mixing moduli is an error.
class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t value, Residue p) : v_(modp::reduce(value, p)), p_(p) {}

  static Fp zero(Residue p) { return Fp(0, p); }
  static Fp one(Residue p) { return Fp(1, p); }

  Residue value() const { return v_; }
  Residue modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  Fp operator+(const Fp& o) const { return {modp::add(v_, o.v_, common(o)), p_, raw_tag{}}; }
  Fp operator-(const Fp& o) const { return {modp::sub(v_, o.v_, common(o)), p_, raw_tag{}}; }
  Fp operator*(const Fp& o) const { return {modp::mul(v_, o.v_, common(o)), p_, raw_tag{}}; }
  Fp operator/(const Fp& o) const { return *this * o.inverse(); }
  Fp operator-() const { return {modp::neg(v_, p_), p_, raw_tag{}}; }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp inverse() const { return {modp::inv(v_, p_), p_, raw_tag{}}; }

  /// Integer power; negative exponents invert first.
  Fp pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    return {modp::pow(v_, static_cast<std::uint64_t>(n), p_), p_, raw_tag{}};
  }

  bool operator==(const Fp& o) const { return v_ == o.v_ && p_ == o.p_; }
  bool operator!=(const Fp& o) const { return !(*this == o); }

  friend std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.v_; }

 private:
  struct raw_tag {};
  Fp(Residue v, Residue p, raw_tag) : v_(v), p_(p) {}

  Residue common(const Fp& o) const {
    if (p_ != o.p_)
      throw DomainError("field mismatch: F_" + std::to_string(p_) + " vs F_" + std::to_string(o.p_));
    return p_;
  }

  Residue v_ = 0;
  Residue p_ = 0;
};

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Smallest generator of the multiplicative group of F_p, by exhaustive search.
inline Residue smallest_primitive_root(Residue p) {
  require_prime(p);
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (Residue g = 2; g < p; ++g) {
    bool generator = true;
    for (auto q : factors) {
      if (modp::pow(g, (p - 1) / q, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw DomainError("no primitive root found modulo " + std::to_string(p));
}

/// The canonical primitive e-th root of unity g^((p-1)/e), g the smallest
/// primitive root. Requires e | p-1.
inline Fp primitive_eth_root(Residue p, std::int64_t e) {
  require_prime(p);
  if (e <= 0) throw DomainError("root order must be positive, got " + std::to_string(e));
  if (std::gcd<std::int64_t>(e, p) != 1)
    throw DomainError("root order " + std::to_string(e) + " is divisible by the characteristic");
  if ((p - 1) % e != 0)
    throw DomainError("F_" + std::to_string(p) + " has no primitive " + std::to_string(e) +
                      "-th root of unity (" + std::to_string(e) + " does not divide " +
                      std::to_string(p - 1) + ")");
  const Residue g = smallest_primitive_root(p);
  return Fp(modp::pow(g, (p - 1) / static_cast<std::uint64_t>(e), p), p);
}

/// Multiplicative order of a nonzero element.
inline std::int64_t multiplicative_order(const Fp& x) {
  if (x.is_zero()) throw DomainError("zero has no multiplicative order");
  Fp y = x;
  std::int64_t n = 1;
  while (!(y == Fp::one(x.modulus()))) {
    y *= x;
    ++n;
  }
  return n;
}

/// The exponent k in [0, e) with zeta^k == x, where zeta has order e.
inline int discrete_log(const Fp& x, const Fp& zeta, int e) {
  Fp y = Fp::one(zeta.modulus());
  for (int k = 0; k < e; ++k) {
    if (y == x) return k;
    y *= zeta;
  }
  throw DomainError(std::to_string(x.value()) + " is not a power of " + std::to_string(zeta.value()));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

}  // namespace gieseker
