#pragma once

// Points of the strata O_{I,J} of the compactification KGL(V, W) of
// Isom(V, W). A point is stored through adapted bases of V and W (columns
// ordered along the flags) together with the subquotient isomorphisms
// written in the coordinates of those bases. Two descriptions are compared
// by the change of basis between them.

#include <string>
#include <utility>
#include <vector>

#include "gieseker/chain.hpp"

namespace gieseker {

/// An isomorphism up to a nonzero scalar; the representative has its first
/// nonzero entry (row-major) equal to 1.
class HomothetyClass {
 public:
  HomothetyClass() = default;
  explicit HomothetyClass(const ConstMatrix& m) : rep_(m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero()) {
          rep_ = m.scaled(m(i, j).inverse());
          return;
        }
    if (m.rows() * m.cols() > 0) throw DomainError("homothety class of the zero map");
  }

  const ConstMatrix& rep() const { return rep_; }
  bool operator==(const HomothetyClass& o) const { return rep_ == o.rep_; }

 private:
  ConstMatrix rep_;
};

struct KGLPoint {
  int r = 0;
  Stratum stratum;
  std::vector<int> dims_V;  // dim F_nu(V), nu = 0..n1+n2+1
  std::vector<int> dims_W;
  ConstMatrix basis_V;  // first dims_V[nu] columns span F_nu(V)
  ConstMatrix basis_W;
  std::vector<HomothetyClass> phi;  // phi_nu: W slot n1-nu+1 -> V slot n2+nu+1
  std::vector<HomothetyClass> psi;  // psi_nu: V slot n2-nu+1 -> W slot n1+nu+1
  ConstMatrix middle;               // V slot n2+1 -> W slot n1+1

  int n1() const { return static_cast<int>(stratum.I.size()); }
  int n2() const { return static_cast<int>(stratum.J.size()); }
  Residue modulus() const { return basis_V.zero().modulus(); }

  // slot k (1-based) is F_k / F_{k-1}
  static int slot_size(const std::vector<int>& dims, int k) { return dims[k] - dims[k - 1]; }

  void validate() const;
};

/// Flag dimensions of a stratum; min of an empty index set is r.
inline std::pair<std::vector<int>, std::vector<int>> stratum_flag_dims(int r, const Stratum& s) {
  s.validate(r);
  const int n1 = static_cast<int>(s.I.size()), n2 = static_cast<int>(s.J.size());
  auto i_at = [&](int nu) { return nu == n1 + 1 ? r : s.I[nu - 1]; };
  auto j_at = [&](int nu) { return nu == n2 + 1 ? r : s.J[nu - 1]; };
  std::vector<int> v, w;
  for (int nu = 0; nu <= n2; ++nu) v.push_back(r - j_at(n2 + 1 - nu));
  for (int nu = n2 + 1; nu <= n1 + n2 + 1; ++nu) v.push_back(i_at(nu - n2));
  for (int nu = 0; nu <= n1; ++nu) w.push_back(r - i_at(n1 + 1 - nu));
  for (int nu = n1 + 1; nu <= n1 + n2 + 1; ++nu) w.push_back(j_at(nu - n1));
  return {v, w};
}

inline void KGLPoint::validate() const {
  stratum.validate(r);
  const auto [v, w] = stratum_flag_dims(r, stratum);
  if (dims_V != v || dims_W != w) throw DomainError("flag dimensions do not match the stratum");
  const int slots = n1() + n2() + 1;
  for (int k = 1; k <= slots; ++k) {
    const bool may_be_empty_v = k == n2() + 1, may_be_empty_w = k == n1() + 1;
    if (slot_size(dims_V, k) < (may_be_empty_v ? 0 : 1) || slot_size(dims_W, k) < (may_be_empty_w ? 0 : 1))
      throw DomainError("flag is not strictly increasing");
  }
  if (basis_V.rows() != r || basis_V.cols() != r || basis_W.rows() != r || basis_W.cols() != r)
    throw DomainError("adapted bases must be r x r");
  if (!is_invertible(basis_V) || !is_invertible(basis_W)) throw DomainError("adapted basis is singular");
  if (static_cast<int>(phi.size()) != n1() || static_cast<int>(psi.size()) != n2())
    throw DomainError("wrong number of homothety classes");
  auto check_iso = [](const ConstMatrix& m, int rows, int cols, const std::string& what) {
    if (m.rows() != rows || m.cols() != cols) throw DomainError(what + " has the wrong shape");
    if (rows > 0 && !is_invertible(m)) throw DomainError(what + " is not an isomorphism");
  };
  for (int nu = 1; nu <= n1(); ++nu)
    check_iso(phi[nu - 1].rep(), slot_size(dims_V, n2() + nu + 1), slot_size(dims_W, n1() - nu + 1),
              "phi_" + std::to_string(nu));
  for (int nu = 1; nu <= n2(); ++nu)
    check_iso(psi[nu - 1].rep(), slot_size(dims_W, n1() + nu + 1), slot_size(dims_V, n2() - nu + 1),
              "psi_" + std::to_string(nu));
  check_iso(middle, slot_size(dims_W, n1() + 1), slot_size(dims_V, n2() + 1), "middle isomorphism");
}

/// Basis of W whose slot k is spanned by the standard vectors of V slot
/// n1+n2+2-k, i.e. the V slots listed in reverse order.
inline ConstMatrix reversed_slot_basis(int r, const std::vector<int>& dims_V, Residue p) {
  const int slots = static_cast<int>(dims_V.size()) - 1;
  std::vector<int> order;
  for (int k = slots; k >= 1; --k)
    for (int i = dims_V[k - 1]; i < dims_V[k]; ++i) order.push_back(i);
  (void)r;
  return permutation_matrix(order, p);
}

/// The point of O_{I,J} with V in the standard basis, W in the reversed slot
/// basis and every subquotient map the identity.
inline KGLPoint standard_point(int r, const Stratum& s, Residue p) {
  KGLPoint pt;
  pt.r = r;
  pt.stratum = s;
  std::tie(pt.dims_V, pt.dims_W) = stratum_flag_dims(r, s);
  pt.basis_V = identity_const(r, p);
  pt.basis_W = reversed_slot_basis(r, pt.dims_V, p);
  const int n1 = pt.n1(), n2 = pt.n2();
  for (int nu = 1; nu <= n1; ++nu)
    pt.phi.emplace_back(identity_const(KGLPoint::slot_size(pt.dims_V, n2 + nu + 1), p));
  for (int nu = 1; nu <= n2; ++nu)
    pt.psi.emplace_back(identity_const(KGLPoint::slot_size(pt.dims_W, n1 + nu + 1), p));
  pt.middle = identity_const(KGLPoint::slot_size(pt.dims_V, n2 + 1), p);
  pt.validate();
  return pt;
}

/// I = {|D_1|, |D_1|+|D_2|, ..., |D_1|+...+|D_{m-1}|}, J empty.
inline Stratum stratum_of_partition(const Partition& part) {
  part.validate();
  Stratum s;
  const auto dims = part.dims_V();
  for (int nu = 1; nu < part.m(); ++nu) s.I.push_back(dims[nu]);
  return s;
}

inline KGLPoint kgl_point_from_partition(const Partition& part, Residue p) {
  return standard_point(part.r, stratum_of_partition(part), p);
}

/// Block sizes |D_1|, ..., |D_m| read off the V flag of a point with J empty.
inline Partition partition_of_point(const KGLPoint& pt) {
  if (!pt.stratum.J.empty()) throw DomainError("point does not lie in a stratum with J empty");
  Partition part{pt.r, {}};
  for (std::size_t k = 1; k < pt.dims_V.size(); ++k) part.block_sizes.push_back(pt.dims_V[k] - pt.dims_V[k - 1]);
  part.validate();
  return part;
}

/// Image of the point under the automorphisms gV of V and gW of W.
inline KGLPoint transport(const KGLPoint& pt, const ConstMatrix& gV, const ConstMatrix& gW) {
  if (!is_invertible(gV) || !is_invertible(gW)) throw DomainError("transport by a singular matrix");
  KGLPoint out = pt;
  out.basis_V = gV * pt.basis_V;
  out.basis_W = gW * pt.basis_W;
  return out;
}

namespace detail {

/// Diagonal blocks of t if t is block upper triangular for the flag dims.
inline std::optional<std::vector<ConstMatrix>> flag_blocks(const ConstMatrix& t, const std::vector<int>& dims) {
  const int slots = static_cast<int>(dims.size()) - 1;
  for (int k = 1; k <= slots; ++k)
    for (int l = 1; l < k; ++l)
      for (int i = dims[k - 1]; i < dims[k]; ++i)
        for (int j = dims[l - 1]; j < dims[l]; ++j)
          if (!t(i, j).is_zero()) return std::nullopt;
  std::vector<ConstMatrix> blocks;
  for (int k = 1; k <= slots; ++k) {
    const int n = dims[k] - dims[k - 1];
    blocks.push_back(t.block(dims[k - 1], dims[k - 1], n, n));
  }
  return blocks;
}

inline ConstMatrix conjugate(const ConstMatrix& left, const ConstMatrix& m, const ConstMatrix& right) {
  if (m.rows() == 0 || m.cols() == 0) return m;
  return left * m * inverse(right);
}

}  // namespace detail

/// Whether two descriptions define the same point of KGL(V, W): the bases
/// span the same flags and the subquotient maps agree, the classes up to a
/// scalar and the middle isomorphism exactly.
inline bool same_point(const KGLPoint& x, const KGLPoint& y) {
  if (x.r != y.r || !(x.stratum == y.stratum) || x.dims_V != y.dims_V || x.dims_W != y.dims_W) return false;
  const auto tv = detail::flag_blocks(inverse(x.basis_V) * y.basis_V, x.dims_V);
  const auto tw = detail::flag_blocks(inverse(x.basis_W) * y.basis_W, x.dims_W);
  if (!tv || !tw) return false;
  const int n1 = x.n1(), n2 = x.n2();
  // slot k of a point has block index k-1
  for (int nu = 1; nu <= n1; ++nu) {
    const ConstMatrix mapped =
        detail::conjugate((*tv)[n2 + nu], y.phi[nu - 1].rep(), (*tw)[n1 - nu]);
    if (!(HomothetyClass(mapped) == x.phi[nu - 1])) return false;
  }
  for (int nu = 1; nu <= n2; ++nu) {
    const ConstMatrix mapped =
        detail::conjugate((*tw)[n1 + nu], y.psi[nu - 1].rep(), (*tv)[n2 - nu]);
    if (!(HomothetyClass(mapped) == x.psi[nu - 1])) return false;
  }
  return detail::conjugate((*tw)[n1], y.middle, (*tv)[n2]) == x.middle;
}

/// Bases v_1..v_r of V and w_1..w_r of W indexed by [1, r] (not by flag
/// position) in which a J-empty point has identity subquotient maps;
/// block D_nu of the w's spans W slot m-nu+1.
struct AdaptedBases {
  Partition partition;
  ConstMatrix v;
  ConstMatrix w;
};

inline AdaptedBases adapted_bases(const KGLPoint& pt) {
  pt.validate();
  const Partition part = partition_of_point(pt);
  const Residue p = pt.modulus();
  for (const auto& c : pt.phi)
    if (!(c == HomothetyClass(identity_const(c.rep().rows(), p))))
      throw DomainError("homothety class is not the identity in the given bases");
  if (pt.middle != identity_const(pt.middle.rows(), p))
    throw DomainError("middle isomorphism is not the identity in the given bases");
  const ConstMatrix reorder = reversed_slot_basis(pt.r, pt.dims_V, p);
  return {part, pt.basis_V, pt.basis_W * reorder.transpose()};
}

}  // namespace gieseker
