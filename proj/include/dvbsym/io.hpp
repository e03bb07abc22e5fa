#pragma once

#include <string>

#include "dblcat.hpp"
#include "json.hpp"
#include "polymap.hpp"
#include "symmetry.hpp"

namespace dvbsym {

using Json = nlohmann::ordered_json;

// --- reading -------------------------------------------------------------------------------

inline Rational rationalFromJson(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<int64_t>());
  if (j.is_string()) {
    try {
      return parseRational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  throw ParseError(path + ": expected an integer or a \"p/q\" string");
}

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing \"" + key + "\"");
  return *it;
}

inline size_t dimFromJson(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<int64_t>() < 0) throw ParseError(path + ": expected a non-negative integer");
  return j.get<size_t>();
}

inline Matrix matrixFromJson(const Json& j, size_t rows, size_t cols, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected a list of rows");
  if (j.size() != rows)
    throw ParseError(path + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) throw ParseError(rp + ": expected a row");
    if (j[r].size() != cols)
      throw ParseError(rp + ": expected " + std::to_string(cols) + " entries, got " + std::to_string(j[r].size()));
    for (size_t c = 0; c < cols; ++c) m(r, c) = rationalFromJson(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline SquareDims spacesFromJson(const Json& doc) {
  const Json& sp = member(doc, "spaces", "$");
  return {dimFromJson(member(sp, "M1", "$.spaces"), "$.spaces.M1"),
          dimFromJson(member(sp, "M2", "$.spaces"), "$.spaces.M2"),
          dimFromJson(member(sp, "N1", "$.spaces"), "$.spaces.N1"),
          dimFromJson(member(sp, "N2", "$.spaces"), "$.spaces.N2")};
}

inline bool isPolyInput(const Json& doc) {
  auto it = doc.find("poly");
  return it != doc.end() && it->is_boolean() && it->get<bool>();
}

inline ImmersionSquare squareFromJson(const Json& doc) {
  if (!doc.is_object()) throw ParseError("$: expected an object");
  auto d = spacesFromJson(doc);
  const Json& maps = member(doc, "maps", "$");
  ImmersionSquare sq;
  sq.m1 = d.m1;
  sq.m2 = d.m2;
  sq.n1 = d.n1;
  sq.n2 = d.n2;
  sq.i1 = matrixFromJson(member(maps, "i1", "$.maps"), d.m2, d.m1, "$.maps.i1");
  sq.j1 = matrixFromJson(member(maps, "j1", "$.maps"), d.n1, d.m1, "$.maps.j1");
  sq.i2 = matrixFromJson(member(maps, "i2", "$.maps"), d.n2, d.n1, "$.maps.i2");
  sq.j2 = matrixFromJson(member(maps, "j2", "$.maps"), d.n2, d.m2, "$.maps.j2");
  return sq;
}

inline Polynomial polynomialFromJson(const Json& j, size_t arity, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected a list of terms");
  Polynomial p(arity);
  for (size_t t = 0; t < j.size(); ++t) {
    const std::string tp = path + "[" + std::to_string(t) + "]";
    Rational c = rationalFromJson(member(j[t], "coefficient", tp), tp + ".coefficient");
    const Json& ex = member(j[t], "exponents", tp);
    if (!ex.is_array() || ex.size() != arity)
      throw ParseError(tp + ".exponents: expected " + std::to_string(arity) + " exponents");
    Polynomial::Exponents e;
    for (size_t k = 0; k < arity; ++k) {
      if (!ex[k].is_number_integer() || ex[k].get<int64_t>() < 0)
        throw ParseError(tp + ".exponents[" + std::to_string(k) + "]: expected a non-negative integer");
      e.push_back(ex[k].get<unsigned>());
    }
    p.add(e, c);
  }
  return p;
}

inline PolyMap polyMapFromJson(const Json& j, size_t in, size_t out, const std::string& path) {
  if (!j.is_array() || j.size() != out)
    throw ParseError(path + ": expected " + std::to_string(out) + " component polynomials");
  PolyMap p{in, {}};
  for (size_t k = 0; k < out; ++k) p.components.push_back(polynomialFromJson(j[k], in, path + "[" + std::to_string(k) + "]"));
  return p;
}

struct PolyInput {
  PolySquare square;
  std::vector<Rational> point;
};

inline PolyInput polyInputFromJson(const Json& doc) {
  auto d = spacesFromJson(doc);
  const Json& maps = member(doc, "maps", "$");
  PolyInput in;
  in.square.i1 = polyMapFromJson(member(maps, "i1", "$.maps"), d.m1, d.m2, "$.maps.i1");
  in.square.j1 = polyMapFromJson(member(maps, "j1", "$.maps"), d.m1, d.n1, "$.maps.j1");
  in.square.i2 = polyMapFromJson(member(maps, "i2", "$.maps"), d.n1, d.n2, "$.maps.i2");
  in.square.j2 = polyMapFromJson(member(maps, "j2", "$.maps"), d.m2, d.n2, "$.maps.j2");
  const Json& pt = member(doc, "point", "$");
  if (!pt.is_array() || pt.size() != d.m1)
    throw ParseError("$.point: expected " + std::to_string(d.m1) + " coordinates");
  for (size_t k = 0; k < pt.size(); ++k) in.point.push_back(rationalFromJson(pt[k], "$.point[" + std::to_string(k) + "]"));
  return in;
}

// Parses text; syntax errors carry the byte offset.
inline Json parseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// --- writing -------------------------------------------------------------------------------

// integers as JSON numbers, everything else as "p/q"
inline Json toJson(const Rational& r) {
  std::string s = r.get_str();
  if (s.find('/') == std::string::npos && r.isSmall()) return Json(std::stoll(s));
  return Json(s);
}

inline Json toJson(const Matrix& m) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(toJson(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Json toJson(const ImmersionSquare& sq) {
  Json j;
  j["spaces"] = {{"M1", sq.m1}, {"M2", sq.m2}, {"N1", sq.n1}, {"N2", sq.n2}};
  j["maps"] = {{"i1", toJson(sq.i1)}, {"j1", toJson(sq.j1)}, {"i2", toJson(sq.i2)}, {"j2", toJson(sq.j2)}};
  return j;
}

inline Json toJson(const RegularityReport& r) {
  return {{"nu2J_vb_immersion", r.criterion1},
          {"nu2I_vb_immersion", r.criterion2},
          {"tangent_sequence_exact", r.criterion3},
          {"agree", r.agree},
          {"normal_ranks", {{"i1", r.rankNuI1}, {"i2", r.rankNuI2}, {"j1", r.rankNuJ1}, {"j2", r.rankNuJ2}}},
          {"diagnostics", r.diagnostics}};
}

inline Json dvsDims(const DVS& d) {
  const size_t base = d.base().rank();
  return {{"ambient", d.ambientDim},
          {"base", base},
          {"side_h", d.sideA().rank() - base},
          {"side_v", d.sideB().rank() - base},
          {"core", d.coreRank()}};
}

inline Json toJson(const SymmetryCertificate& c) {
  Json j;
  j["regular"] = c.regular;
  j["criteria"] = toJson(c.regularity);
  Json dims = {{"M1", c.square.m1}, {"M2", c.square.m2}, {"N1", c.square.n1}, {"N2", c.square.n2},
               {"core_oracle", coreRankOracle(c.square)}};
  if (c.dnJ) dims["dnJ"] = dvsDims(*c.dnJ);
  if (c.dnI) dims["dnI"] = dvsDims(*c.dnI);
  j["dims"] = dims;
  j["lambda"] = c.lambda ? toJson(*c.lambda) : Json(nullptr);
  j["bijective"] = c.bijective;
  j["flip_equivariant"] = c.flipEquivariant;
  j["sides_match"] = c.sidesMatch;
  Json lemmas = Json::array();
  for (const auto& l : c.lemmas) {
    Json e = {{"name", l.name}, {"pass", l.pass}};
    if (!l.pass && !l.detail.empty()) e["detail"] = l.detail;
    lemmas.push_back(e);
  }
  j["lemmas"] = lemmas;
  j["alt_agreement"] = c.altAgreement;
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

inline Json toJson(const LawReport& r) {
  return {{"axiom", r.axiom},
          {"trials", r.trials},
          {"failures", r.failures},
          {"first_witness", r.firstWitness ? Json(*r.firstWitness) : Json(nullptr)}};
}

}  // namespace dvbsym
