#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "linrel/schur.hpp"

namespace linrel::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void parse_error(const std::string& what) { raise(ErrorKind::Parse, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline Index count_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) parse_error(std::string("\"") + key + "\" must be a nonnegative integer");
  return static_cast<Index>(v.get<long long>());
}

}  // namespace detail

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

/// Accepts [re, im] or a plain real number.
inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  detail::parse_error("complex number must be [re, im] or a real number");
}

inline json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline ComplexVector vector_from_json(const json& j, Index len) {
  if (!j.is_array() || static_cast<Index>(j.size()) != len) {
    detail::parse_error("vector must be a list of " + std::to_string(len) + " complex numbers");
  }
  ComplexVector v(len);
  for (Index i = 0; i < len; ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

/// Matrices are lists of rows.
inline json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

inline ComplexMatrix matrix_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    detail::parse_error("matrix must have " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) m.row(i) = vector_from_json(j[static_cast<std::size_t>(i)], cols).transpose();
  return m;
}

inline ComplexMatrix columns_from_json(const json& j, Index len) {
  if (!j.is_array()) detail::parse_error("basis must be a list of vectors");
  ComplexMatrix m(len, static_cast<Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) m.col(static_cast<Index>(c)) = vector_from_json(j[c], len);
  return m;
}

inline json columns_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
  return out;
}

inline json to_json(const Subspace& u) {
  return {{"ambient_dim", u.ambient_dim()}, {"dim", u.dim()}, {"basis", columns_to_json(u.basis())}};
}

inline Subspace subspace_from_json(const json& j, const Tolerances& tol = {}) {
  const Index n = detail::count_field(j, "ambient_dim");
  const ComplexMatrix b = columns_from_json(detail::field(j, "basis"), n);
  if (!all_finite(b)) detail::parse_error("basis has non-finite entries");
  return Subspace::span(b, tol);
}

inline json to_json(const LinearRelation& t, const Tolerances& tol = {}) {
  return {{"dim_in", t.dim_in()},
          {"dim_out", t.dim_out()},
          {"repr", {{"type", "graph"}, {"basis", columns_to_json(t.graph().basis())}}},
          {"dims",
           {{"graph", t.graph().dim()},
            {"dom", t.dom(tol).dim()},
            {"ran", t.ran(tol).dim()},
            {"ker", t.ker(tol).dim()},
            {"mul", t.mul(tol).dim()}}}};
}

inline LinearRelation relation_from_json(const json& j, const Tolerances& tol = {}) {
  const Index n = detail::count_field(j, "dim_in");
  const Index m = detail::count_field(j, "dim_out");
  const json& repr = detail::field(j, "repr");
  const json& type = detail::field(repr, "type");
  if (!type.is_string()) detail::parse_error("repr.type must be a string");
  const std::string kind = type.get<std::string>();
  ComplexMatrix check;
  LinearRelation out;
  if (kind == "graph") {
    check = columns_from_json(detail::field(repr, "basis"), n + m);
    if (!all_finite(check)) detail::parse_error("non-finite entries");
    out = LinearRelation::from_graph(check, n, m, tol);
  } else if (kind == "matrix") {
    check = matrix_from_json(detail::field(repr, "matrix"), m, n);
    if (!all_finite(check)) detail::parse_error("non-finite entries");
    out = LinearRelation::from_matrix(check, tol);
  } else if (kind == "operator_mul") {
    const ComplexMatrix dom = columns_from_json(detail::field(repr, "domain_basis"), n);
    const ComplexMatrix mul = columns_from_json(detail::field(repr, "mul_basis"), m);
    const ComplexMatrix op = matrix_from_json(detail::field(repr, "matrix_on_domain"), m, dom.cols());
    if (!all_finite(dom) || !all_finite(mul) || !all_finite(op)) detail::parse_error("non-finite entries");
    // the matrix acts on coordinates of the basis as given; re-express it on
    // an orthonormal basis of the same span
    const Subspace domain = Subspace::span(dom, tol);
    const ComplexMatrix coeff = pseudo_apply_inverse(dom, domain.basis(), tol);
    out = LinearRelation::from_operator_and_mul(domain, op * coeff, Subspace::span(mul, tol), tol);
  } else {
    detail::parse_error("unknown repr.type \"" + kind + "\"");
  }
  return out;
}

inline json to_json(const NonnegSelfAdjointRelation& a, const Tolerances& tol = {}) {
  json out = to_json(a.relation(), tol);
  out["validated"] = true;
  out["operator_part"] = matrix_to_json(a.op_matrix());
  return out;
}

inline json to_json(const BlockRepresentation& r, const Tolerances& tol = {}) {
  json out;
  out["S"] = to_json(r.S);
  for (const auto& [name, sub] : {std::pair<const char*, const Subspace*>{"D1", &r.D1}, {"D2", &r.D2}, {"M1", &r.M1},
                                  {"M2", &r.M2}, {"N1", &r.N1}, {"N2", &r.N2}}) {
    out[name] = to_json(*sub);
  }
  out["blocks"] = {{"a", to_json(r.a, tol)}, {"b", to_json(r.b, tol)}, {"c", to_json(r.c, tol)}, {"d", to_json(r.d, tol)}};
  out["operator_blocks"] = {{"a0", matrix_to_json(r.a0)},
                            {"b0", matrix_to_json(r.b0)},
                            {"c0", matrix_to_json(r.c0)},
                            {"d0", matrix_to_json(r.d0)}};
  out["f"] = matrix_to_json(r.f_ambient());
  out["g"] = matrix_to_json(r.g_ambient());
  out["V1"] = matrix_to_json(r.V1 * r.N1.basis().adjoint());
  out["V2"] = matrix_to_json(r.V2 * r.N2.basis().adjoint());
  return out;
}

inline json to_json(const std::map<std::string, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = v;
  return out;
}

inline json schur_to_json(const SchurResult& r, const Tolerances& tol = {}) {
  return {{"schur", to_json(r.schur, tol)},
          {"compression", to_json(r.compression, tol)},
          {"L", to_json(r.L)},
          {"diagnostics", to_json(r.diagnostics)}};
}

}  // namespace linrel::io
