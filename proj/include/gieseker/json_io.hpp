#pragma once

// JSON encoding of series, matrices, partitions, strata, points, germs and
// Gieseker data. Decoding reports the JSON pointer of the offending field.
// A series is {"lowest", "coeffs", "precision"}; precision null marks an
// exact value (exact zeros and monomials), and a missing precision means
// the job default.

#include <string>
#include <vector>

#include <json.hpp>

#include "gieseker/correspondence.hpp"

namespace gieseker::io {

using nlohmann::json;

// ---------------------------------------------------------------- encoding

inline json precision_json(int precision) {
  return precision >= kExactPrecision ? json(nullptr) : json(precision);
}

inline json to_json(const Fp& x) { return x.value(); }

inline json to_json(const LaurentSeries& x) {
  json c = json::array();
  if (!x.is_zero())
    for (int n = x.lowest(); n <= x.highest(); ++n) c.push_back(x.raw_coeff(n));
  return {{"lowest", x.is_zero() ? 0 : x.lowest()}, {"coeffs", c}, {"precision", precision_json(x.precision())}};
}

inline json to_json(const PowerSeries& x) { return to_json(x.to_laurent()); }

template <class T>
json to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const QuotientMatrix& m) { return {{"u", to_json(m.u)}, {"v", to_json(m.v)}}; }
inline json to_json(const NodalMatrix& m) { return {{"u", to_json(m.u)}, {"v", to_json(m.v)}}; }
inline json to_json(const GlueMatrices& h) { return {{"H1", to_json(h.h1)}, {"H2", to_json(h.h2)}}; }

inline json to_json(const Partition& part) { return {{"r", part.r}, {"block_sizes", part.block_sizes}}; }
inline json to_json(const Stratum& s) { return {{"I", s.I}, {"J", s.J}}; }

inline json one_based(const std::vector<int>& perm) {
  json out = json::array();
  for (int x : perm) out.push_back(x + 1);
  return out;
}

inline json to_json(const ExponentVector& exps) { return {{"e", exps.e}, {"alpha", exps.alpha}, {"a", exps.a}}; }

inline const char* summand_name(Summand s) {
  switch (s) {
    case Summand::trivial: return "O";
    case Summand::degree_one: return "O(1)";
    case Summand::degree_minus_one: return "O(-1)";
  }
  return "?";
}

inline json to_json(const ChainBundleDescription& c) {
  json comps = json::array();
  for (const auto& comp : c.components) {
    json row = json::array();
    for (Summand s : comp) row.push_back(summand_name(s));
    comps.push_back(row);
  }
  json glue = json::array();
  for (const auto& g : c.glue) glue.push_back(to_json(g));
  return {{"m", c.m()}, {"components", comps}, {"line_degrees", c.degrees()}, {"glue", glue}};
}

inline json to_json(const KGLPoint& pt) {
  json phi = json::array(), psi = json::array();
  for (const auto& c : pt.phi) phi.push_back(to_json(c.rep()));
  for (const auto& c : pt.psi) psi.push_back(to_json(c.rep()));
  return {{"r", pt.r},           {"I", pt.stratum.I},          {"J", pt.stratum.J},
          {"dims_V", pt.dims_V}, {"dims_W", pt.dims_W},        {"basis_V", to_json(pt.basis_V)},
          {"basis_W", to_json(pt.basis_W)}, {"phi", phi}, {"psi", psi}, {"middle", to_json(pt.middle)}};
}

inline json to_json(const LocalChartGerm& g) {
  json out = {{"p", g.p}, {"e", g.e}, {"zeta", g.zeta.value()}, {"alpha", g.alpha}, {"F", to_json(g.F)}};
  if (g.raw_action) out["raw_action"] = to_json(*g.raw_action);
  return out;
}

inline json to_json(const GiesekerGermDatum& d) {
  return {{"partition", to_json(d.partition)},
          {"exponents", to_json(d.exps)},
          {"zeta", d.action.zeta.value()},
          {"perm", one_based(d.perm)},
          {"chain", to_json(d.chain)},
          {"H1", to_json(d.H.h1)},
          {"H2", to_json(d.H.h2)},
          {"point", to_json(d.point)}};
}

// ---------------------------------------------------------------- decoding

/// A JSON value together with its pointer inside the job document.
class Node {
 public:
  Node(const json& value, std::string path) : v_(&value), path_(std::move(path)) {}

  const json& value() const { return *v_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const { throw InputError(path_.empty() ? "/" : path_, message); }

  bool has(const std::string& key) const { return v_->is_object() && v_->contains(key); }

  Node operator[](const std::string& key) const {
    if (!v_->is_object()) fail("expected an object");
    if (!v_->contains(key)) Node(*v_, path_ + "/" + key).fail("missing field");
    return Node(v_->at(key), path_ + "/" + key);
  }
  Node operator[](std::size_t i) const { return Node(v_->at(i), path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!v_->is_array()) fail("expected an array");
    return v_->size();
  }

  std::int64_t integer() const {
    if (!v_->is_number_integer()) fail("expected an integer");
    return v_->get<std::int64_t>();
  }
  int small_int(std::int64_t lo, std::int64_t hi) const {
    const auto x = integer();
    if (x < lo || x > hi) fail("value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
  }
  std::string string() const {
    if (!v_->is_string()) fail("expected a string");
    return v_->get<std::string>();
  }
  std::vector<int> int_list(std::int64_t lo, std::int64_t hi) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].small_int(lo, hi));
    return out;
  }

 private:
  const json* v_;
  std::string path_;
};

constexpr std::int64_t kIntLimit = 1'000'000'000;

inline LaurentSeries laurent_from(const Node& n, Residue p, int default_precision) {
  if (!n.value().is_object()) n.fail("expected a series object {lowest, coeffs, precision}");
  const int lowest = n.has("lowest") ? n["lowest"].small_int(-100000, 100000) : 0;
  const Node coeffs = n["coeffs"];
  std::vector<std::int64_t> c;
  for (std::size_t i = 0; i < coeffs.size(); ++i) c.push_back(coeffs[i].integer());
  int precision = default_precision;
  if (n.has("precision")) {
    const Node pn = n["precision"];
    precision = pn.value().is_null() ? kExactPrecision : pn.small_int(-100000, 100000);
  }
  if (precision < kExactPrecision && lowest + static_cast<int>(c.size()) - 1 > precision) {
    // coefficients past the precision carry no information; drop them
    c.resize(std::max(0, precision - lowest + 1));
  }
  return LaurentSeries::from_coeffs(p, lowest, c, precision);
}

inline PowerSeries power_from(const Node& n, Residue p, int default_precision) {
  const LaurentSeries x = laurent_from(n, p, default_precision);
  if (x.is_exact()) return x.truncated(default_precision).to_power_series();
  if (!x.is_zero() && x.lowest() < 0) n.fail("power series with a negative exponent");
  if (x.precision() < 0) n.fail("power series precision must be non-negative");
  return x.to_power_series();
}

inline Fp element_from(const Node& n, Residue p) { return Fp(n.integer(), p); }

template <class T, class F>
Matrix<T> matrix_from(const Node& n, T zero, F&& entry, int expect_rows = -1, int expect_cols = -1) {
  const int rows = static_cast<int>(n.size());
  if (expect_rows >= 0 && rows != expect_rows) n.fail("expected " + std::to_string(expect_rows) + " rows");
  int cols = expect_cols;
  for (int i = 0; i < rows; ++i) {
    const int c = static_cast<int>(n[i].size());
    if (cols < 0) cols = c;
    if (c != cols) n[i].fail("rows have different lengths");
  }
  Matrix<T> m(rows, std::max(cols, 0), zero);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = entry(n[i][j]);
  return m;
}

inline ConstMatrix const_matrix_from(const Node& n, Residue p, int rows = -1, int cols = -1) {
  return matrix_from<Fp>(n, Fp::zero(p), [p](const Node& x) { return element_from(x, p); }, rows, cols);
}

inline LaurentMatrix laurent_matrix_from(const Node& n, Residue p, int precision, int r = -1) {
  return matrix_from<LaurentSeries>(
      n, LaurentSeries::exact_zero(p), [&](const Node& x) { return laurent_from(x, p, precision); }, r, r);
}

inline PowerMatrix power_matrix_from(const Node& n, Residue p, int precision, int r = -1) {
  return matrix_from<PowerSeries>(
      n, PowerSeries(p, precision), [&](const Node& x) { return power_from(x, p, precision); }, r, r);
}

inline Partition partition_from(const Node& n) {
  Partition part{n["r"].small_int(1, 64), n["block_sizes"].int_list(0, 64)};
  try {
    part.validate();
  } catch (const DomainError& err) {
    n.fail(err.what());
  }
  return part;
}

inline Stratum stratum_from(const Node& n, int r) {
  Stratum s{n.has("I") ? n["I"].int_list(0, r - 1) : std::vector<int>{},
            n.has("J") ? n["J"].int_list(0, r - 1) : std::vector<int>{}};
  if (!s.is_valid(r)) n.fail("(I, J) is not a stratum: need increasing indices and min(I) + min(J) >= r");
  return s;
}

inline KGLPoint point_from(const Node& n, Residue p) {
  KGLPoint pt;
  pt.r = n["r"].small_int(1, 64);
  pt.stratum = stratum_from(n, pt.r);
  std::tie(pt.dims_V, pt.dims_W) = stratum_flag_dims(pt.r, pt.stratum);
  const KGLPoint standard = standard_point(pt.r, pt.stratum, p);
  pt.basis_V = n.has("basis_V") ? const_matrix_from(n["basis_V"], p, pt.r, pt.r) : standard.basis_V;
  pt.basis_W = n.has("basis_W") ? const_matrix_from(n["basis_W"], p, pt.r, pt.r) : standard.basis_W;
  auto classes = [&](const char* key, const std::vector<HomothetyClass>& fallback) {
    if (!n.has(key)) return fallback;
    const Node list = n[key];
    std::vector<HomothetyClass> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const ConstMatrix m = const_matrix_from(list[i], p);
      if (m.rows() == 0) list[i].fail("empty homothety class");
      try {
        out.emplace_back(m);
      } catch (const DomainError& err) {
        list[i].fail(err.what());
      }
    }
    return out;
  };
  pt.phi = classes("phi", standard.phi);
  pt.psi = classes("psi", standard.psi);
  if (n.has("middle")) {
    const Node mid = n["middle"];
    pt.middle = mid.size() == 0 ? ConstMatrix(0, 0, Fp::zero(p)) : const_matrix_from(mid, p);
  } else {
    pt.middle = standard.middle;
  }
  try {
    pt.validate();
  } catch (const DomainError& err) {
    n.fail(err.what());
  }
  return pt;
}

inline ProjectiveChain chain_from(const Node& n, Residue p) {
  ProjectiveChain chain;
  chain.r = n["r"].small_int(1, 16);
  const Node degrees = n["degrees"];
  if (degrees.size() == 0) degrees.fail("chain needs at least one component");
  for (std::size_t c = 0; c < degrees.size(); ++c) {
    if (degrees[c].size() != static_cast<std::size_t>(chain.r)) degrees[c].fail("need one degree per index");
    chain.degrees.push_back(degrees[c].int_list(0, 1));
  }
  if (n.has("glue")) {
    const Node glue = n["glue"];
    for (std::size_t c = 0; c < glue.size(); ++c) {
      chain.glue.push_back(const_matrix_from(glue[c], p, chain.r, chain.r));
      if (!is_invertible(chain.glue.back())) glue[c].fail("glue matrix is singular");
    }
  } else {
    for (std::size_t c = 1; c < degrees.size(); ++c) chain.glue.push_back(identity_const(chain.r, p));
  }
  if (chain.glue.size() + 1 != chain.degrees.size()) n["glue"].fail("need one glue matrix per inner node");
  return chain;
}

}  // namespace gieseker::io
