#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wco/classify.hpp"
#include "wco/oracle.hpp"
#include "wco/space.hpp"

namespace wco {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class FieldMode { rational, floating };

inline std::string_view field_mode_name(FieldMode m) { return m == FieldMode::rational ? "rational" : "float"; }

/// Run options that may travel inside a spec document; command-line flags win.
struct RunOptions {
  std::optional<unsigned> max_order;
  std::optional<unsigned> alt_shifts;
  std::optional<unsigned> alt_depth;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> trials;

  friend bool operator==(const RunOptions&, const RunOptions&) = default;
};

struct SpecDocument {
  std::variant<ValidatedSystem<Rational>, ValidatedSystem<double>> system;
  RunOptions options;

  FieldMode field() const { return system.index() == 0 ? FieldMode::rational : FieldMode::floating; }
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::parse_error, where + ": " + what);
}

inline bool looks_irrational(const std::string& s) {
  static const std::regex re(R"(^\s*[+-]?(sqrt\(.*\)|pi|e|inf|infinity|nan)\s*$)", std::regex::icase);
  return std::regex_match(s, re);
}

/// Exact value of an integer, p/q or decimal (optionally with exponent) literal.
inline std::optional<Rational> exact_literal(const std::string& s) {
  static const std::regex fraction(R"(^\s*([+-]?\d+)\s*/\s*(\d+)\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, fraction)) {
    Integer den(m[2].str(), 10);
    if (den == 0) return std::nullopt;
    Rational r(Integer(m[1].str(), 10), den);
    r.canonicalize();
    return r;
  }
  if (std::regex_match(s, m, decimal)) {
    const std::string whole = m[2].str(), frac = m[3].str();
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (m[4].length() > 6) return std::nullopt;
    Integer digits((whole + frac).empty() ? std::string("0") : whole + frac, 10);
    long exponent = m[4].matched ? std::stol(m[4].str()) : 0;
    exponent -= static_cast<long>(frac.size());
    Rational r(digits);
    r *= Field<Rational>::pow(Rational(10), exponent);
    if (m[1].str() == "-") r = -r;
    return r;
  }
  return std::nullopt;
}

inline std::optional<double> float_literal(const std::string& raw) {
  static const std::regex root(R"(^\s*sqrt\((.*)\)\s*$)", std::regex::icase);
  std::smatch m;
  if (std::regex_match(raw, m, root)) {
    auto inner = float_literal(m[1].str());
    if (!inner) return std::nullopt;
    return std::sqrt(*inner);
  }
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "pi") return 3.141592653589793;
  if (s == "e") return 2.718281828459045;
  const auto q = exact_literal(raw);
  if (!q) return std::nullopt;
  // Decimal text goes through strtod so that shortest-form output reads back exactly.
  if (s.find('/') == std::string::npos) return std::strtod(s.c_str(), nullptr);
  const Integer& num = q->get_num();
  const Integer& den = q->get_den();
  constexpr double kExact = 9007199254740992.0;  // 2^53
  if (abs(num) <= kExact && den <= kExact) return num.get_d() / den.get_d();
  return q->get_d();
}

template <class S>
S parse_scalar(const Json& j, const std::string& where) {
  if constexpr (std::is_same_v<S, Rational>) {
    if (j.is_number_integer()) return Rational(Integer(j.dump(), 10));
    if (j.is_number_float()) throw Error(ErrorKind::mixed_field, where + ": binary float literal under exact-rational mode; quote it as \"p/q\"");
    if (!j.is_string()) parse_fail(where, "expected a number or a string literal");
    const std::string s = j.get<std::string>();
    if (auto q = exact_literal(s)) return *q;
    if (looks_irrational(s)) throw Error(ErrorKind::mixed_field, where + ": \"" + s + "\" is not rational");
    parse_fail(where, "cannot read \"" + s + "\" as a rational");
  } else {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) parse_fail(where, "expected a number or a string literal");
    const std::string s = j.get<std::string>();
    const auto v = float_literal(s);
    if (!v) parse_fail(where, "cannot read \"" + s + "\" as a number");
    if (!std::isfinite(*v)) parse_fail(where, "\"" + s + "\" is not a finite number");
    return *v;
  }
}

template <class S>
std::vector<S> parse_scalars(const Json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  std::vector<S> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_scalar<S>(j[i], where + "/" + std::to_string(i)));
  return out;
}

inline std::vector<Atom> parse_atoms(const Json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0) parse_fail(where + "/" + std::to_string(i), "expected a nonnegative atom index");
    out.push_back(j[i].get<Atom>());
  }
  return out;
}

inline const Json& field_of(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) parse_fail(where, std::string("missing \"") + key + "\"");
  return j.at(key);
}

template <class S>
Geometric<S> parse_geometric(const Json& j, const std::string& where) {
  return Geometric<S>{parse_scalar<S>(field_of(j, "a", where), where + "/a"), parse_scalar<S>(field_of(j, "r", where), where + "/r")};
}

inline TailMap parse_map(const Json& j, const std::string& where) {
  const auto& type = field_of(j, "type", where);
  if (!type.is_string()) parse_fail(where + "/type", "expected a string");
  const std::string t = type.get<std::string>();
  auto index = [&](const char* key) {
    const auto& v = field_of(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() < 0) parse_fail(where + "/" + key, "expected a nonnegative integer");
    return v.get<Atom>();
  };
  if (t == "constant") return TailMap::constant(index("c"));
  if (t == "shift_down") return TailMap::shift_down(index("d"));
  if (t == "shift_up") return TailMap::shift_up(index("d"));
  parse_fail(where + "/type", "unknown tail map \"" + t + "\"");
}

template <class S>
WeightedSystem<S> parse_system(const Json& doc) {
  const auto& kind_j = field_of(doc, "kind", "");
  if (!kind_j.is_string()) parse_fail("/kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  WeightedSystem<S> w;
  if (kind == "finite") {
    w.masses = parse_scalars<S>(field_of(doc, "masses", ""), "/masses");
    w.phi = parse_atoms(field_of(doc, "phi", ""), "/phi");
    w.usq = parse_scalars<S>(field_of(doc, "usq", ""), "/usq");
    return w;
  }
  if (kind == "geometric_tail") {
    const auto& head = field_of(doc, "head", "");
    w.masses = parse_scalars<S>(field_of(head, "masses", "/head"), "/head/masses");
    w.phi = parse_atoms(field_of(head, "phi", "/head"), "/head/phi");
    w.usq = parse_scalars<S>(field_of(head, "usq", "/head"), "/head/usq");
    const auto& tail = field_of(doc, "tail", "");
    w.tail = TailSpec<S>{parse_geometric<S>(field_of(tail, "mass", "/tail"), "/tail/mass"),
                         parse_geometric<S>(field_of(tail, "usq", "/tail"), "/tail/usq"),
                         parse_map(field_of(tail, "map", "/tail"), "/tail/map")};
    return w;
  }
  parse_fail("/kind", "unknown kind \"" + kind + "\"");
}

inline RunOptions parse_options(const Json& doc) {
  RunOptions o;
  if (!doc.contains("options")) return o;
  const auto& j = doc.at("options");
  if (!j.is_object()) parse_fail("/options", "expected an object");
  auto count = [&](const char* key) -> std::optional<unsigned> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_unsigned()) parse_fail(std::string("/options/") + key, "expected a nonnegative integer");
    return j.at(key).get<unsigned>();
  };
  o.max_order = count("max_order");
  o.alt_shifts = count("alt_shifts");
  o.alt_depth = count("alt_depth");
  o.trials = count("trials");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) parse_fail("/options/seed", "expected a nonnegative integer");
    o.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tolerance")) {
    if (!j.at("tolerance").is_number()) parse_fail("/options/tolerance", "expected a number");
    o.tolerance = j.at("tolerance").get<double>();
  }
  return o;
}

template <class S>
Json scalars_json(const std::vector<S>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(Field<S>::format(x));
  return out;
}

template <class S>
Json geometric_json(const Geometric<S>& g) {
  return Json{{"a", Field<S>::format(g.scale)}, {"r", Field<S>::format(g.ratio)}};
}

inline Json map_json(const TailMap& m) {
  switch (m.kind) {
    case TailMap::Kind::constant: return Json{{"type", "constant"}, {"c", m.value}};
    case TailMap::Kind::shift_down: return Json{{"type", "shift_down"}, {"d", m.value}};
    case TailMap::Kind::shift_up: return Json{{"type", "shift_up"}, {"d", m.value}};
  }
  return {};
}

template <class S>
Json system_json(const WeightedSystem<S>& w) {
  Json out;
  const std::string field(Field<S>::name);
  if (!w.tail) {
    out["kind"] = "finite";
    out["field"] = field;
    out["masses"] = scalars_json(w.masses);
    out["phi"] = w.phi;
    out["usq"] = scalars_json(w.usq);
    return out;
  }
  out["kind"] = "geometric_tail";
  out["field"] = field;
  out["head"] = Json{{"masses", scalars_json(w.masses)}, {"phi", w.phi}, {"usq", scalars_json(w.usq)}};
  out["tail"] = Json{{"mass", geometric_json(w.tail->mass)}, {"usq", geometric_json(w.tail->usq)}, {"map", map_json(w.tail->map)}};
  return out;
}

}  // namespace detail

/// Reads a spec document; the system is validated before it is returned.
inline SpecDocument parse_spec(const Json& doc) {
  if (!doc.is_object()) detail::parse_fail("", "document must be a JSON object");
  std::string field = "rational";
  if (doc.contains("field")) {
    if (!doc.at("field").is_string()) detail::parse_fail("/field", "expected a string");
    field = doc.at("field").get<std::string>();
  }
  RunOptions options = detail::parse_options(doc);
  if (field == "rational") return SpecDocument{validate(detail::parse_system<Rational>(doc)), options};
  if (field == "float") return SpecDocument{validate(detail::parse_system<double>(doc)), options};
  detail::parse_fail("/field", "unknown field mode \"" + field + "\"");
}

inline SpecDocument parse_spec_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse_error, "byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  return parse_spec(doc);
}

inline Json serialize_spec(const SpecDocument& spec) {
  Json out = std::visit([](const auto& sys) { return detail::system_json(sys.description()); }, spec.system);
  const auto& o = spec.options;
  Json opts = Json::object();
  if (o.max_order) opts["max_order"] = *o.max_order;
  if (o.alt_shifts) opts["alt_shifts"] = *o.alt_shifts;
  if (o.alt_depth) opts["alt_depth"] = *o.alt_depth;
  if (o.tolerance) opts["tolerance"] = *o.tolerance;
  if (o.seed) opts["seed"] = *o.seed;
  if (o.trials) opts["trials"] = *o.trials;
  if (!opts.empty()) out["options"] = opts;
  return out;
}

/// "sha256:<hex>" of the canonical serialization of the document.
inline std::string input_digest(const SpecDocument& spec) {
  const std::string canonical = serialize_spec(spec).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

template <class S>
Json opt_scalar(const std::optional<S>& v) {
  return v ? Json(Field<S>::format(*v)) : Json(nullptr);
}

template <class T>
Json opt_index(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class S>
Json function_json(const AtomFunction<S>& f) {
  Json values = Json::array();
  for (const auto& v : f.prefix()) values.push_back(v.str());
  return Json{{"values", values}, {"tail", f.has_tail() ? Json(f.tail()->str()) : Json(nullptr)}};
}

}  // namespace detail

template <class S>
Json classification_json(const ValidatedSystem<S>& sys, const ClassificationReport<S>& r, const ClassifyOptions& opt) {
  Json out;
  out["kind"] = sys.is_finite() ? "finite" : "geometric_tail";
  out["atoms"] = sys.head_size();

  Json jt = Json::array();
  const unsigned shown = std::min(r.jt.max_order(), std::max(opt.max_order, opt.alt_shifts + opt.alt_depth));
  for (unsigned n = 0; n <= shown; ++n) {
    Json row{{"order", n}};
    row.update(detail::function_json(r.jt[n]));
    jt.push_back(row);
  }
  out["j_table"] = Json{{"method", jmethod_name(r.jt.method)}, {"orders", jt}};

  out["densely_defined"] = Json{{"verdict", r.dense.dense ? "yes" : "no"}, {"witness", detail::opt_index(r.dense.witness)}};
  const auto& inv = r.invariance;
  out["domain_invariance"] = Json{{"verdict", status_name(inv.status)},
                                  {"c_star", detail::opt_scalar(inv.c_star)},
                                  {"c_star_atom", inv.c_star ? Json(inv.c_star_atom) : Json(nullptr)},
                                  {"c_certified", detail::opt_scalar(inv.c_certified)},
                                  {"tail_limit", detail::opt_scalar(inv.tail_limit)},
                                  {"witness", detail::opt_index(inv.witness)}};

  Json orders = Json::array();
  for (const auto& v : r.orders) {
    Json o{{"order", v.order}};
    if (v.status != Status::yes) {
      o["status"] = "blocked";
      o["blocked_at"] = detail::opt_index(v.blocked_at);
    } else {
      o["status"] = "decided";
      o["isometry"] = v.isometry;
      o["expansive"] = v.expansive;
      o["margin"] = detail::opt_scalar(v.margin);
      o["worst_atom"] = detail::opt_index(v.worst_atom);
      o["witness"] = detail::opt_index(v.witness);
      o["tail_sign"] = v.tail_sign ? Json(sign_kind_name(*v.tail_sign)) : Json(nullptr);
      if (!is_exact_v<S>) o["zero_within_tolerance"] = v.zero_within_tolerance;
    }
    orders.push_back(o);
  }
  out["orders"] = orders;
  out["hyperexpansive_up_to"] = r.dense.dense ? Json(r.hyperexpansive_up_to) : Json(nullptr);

  const auto& alt = r.alternating;
  Json atoms = Json::array();
  for (const auto& a : alt.atoms) {
    Json w = nullptr;
    if (a.witness)
      w = Json{{"atom", detail::opt_index(a.witness_atom)}, {"shift", a.witness->shift}, {"depth", a.witness->depth}, {"value", Field<S>::format(a.witness->value)}};
    atoms.push_back(Json{{"atom", a.atom}, {"segment", a.tail_segment}, {"pass", a.pass}, {"certified", a.certified}, {"witness", w}});
  }
  out["completely_alternating"] = Json{{"shifts", alt.max_shift},
                                       {"depth", alt.max_depth},
                                       {"status", alt.blocked ? "blocked" : (alt.pass ? "pass" : "fail")},
                                       {"scope", alt.certified ? "certified for all shifts and depths" : "bounded depth"},
                                       {"atoms", atoms}};

  Json audits = Json::array();
  for (const auto& a : r.audits)
    audits.push_back(Json{{"name", a.name}, {"statement", a.statement}, {"applicable", a.applicable}, {"holds", a.holds}, {"detail", a.detail}});
  out["audits"] = audits;
  out["findings"] = r.findings();
  return out;
}

template <class S>
Json oracle_json(const OracleReport<S>& r) {
  Json orders = Json::array();
  for (const auto& o : r.orders) {
    orders.push_back(Json{{"order", o.order},
                          {"expansive", o.expansive},
                          {"isometry", o.isometry},
                          {"gram_diagonal", detail::scalars_json(o.gram_diagonal)},
                          {"max_theta", detail::opt_scalar(o.max_theta)},
                          {"positive_theta_found", o.positive_theta_found},
                          {"basis_witness", detail::opt_index(o.basis_witness)},
                          {"classify_agrees", o.classify_agrees}});
  }
  Json out;
  out["trials"] = r.trials;
  out["seed"] = r.seed;
  out["orders"] = orders;
  out["agreement"] = r.full_agreement() ? "full" : "partial";
  out["mismatches"] = r.mismatches;
  Json findings = Json::array();
  for (const auto& m : r.mismatch_details) findings.push_back("ORACLE-MISMATCH: " + m);
  out["findings"] = findings;
  return out;
}

/// Indented `key: value` rendering of a report.
inline void render_text(const Json& j, std::string& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto is_leaf = [](const Json& v) {
    if (v.is_array()) return std::none_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); });
    return !v.is_structured() || v.empty();
  };
  auto inline_array = [&](const Json& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar(v[i]);
    return s + "]";
  };
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (is_leaf(value)) out += pad + key + ": " + (value.is_array() ? inline_array(value) : value.is_structured() ? value.dump() : scalar(value)) + "\n";
      else {
        out += pad + key + ":\n";
        render_text(value, out, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& value : j) {
      if (is_leaf(value)) out += pad + "- " + (value.is_array() ? inline_array(value) : value.is_structured() ? value.dump() : scalar(value)) + "\n";
      else {
        out += pad + "-\n";
        render_text(value, out, indent + 2);
      }
    }
  } else {
    out += pad + scalar(j) + "\n";
  }
}

// ---------------------------------------------------------------------------
// Built-in examples

namespace detail {

inline Rational example_rational(const std::string& s, const std::string& what) {
  auto q = exact_literal(s);
  if (!q) throw Error(ErrorKind::parse_error, what + ": \"" + s + "\" is not a rational literal");
  return *q;
}

inline std::size_t example_count(const std::string& s, const std::string& what) {
  auto q = exact_literal(s);
  if (!q || q->get_den() != 1 || *q < 1 || *q > 4096) throw Error(ErrorKind::parse_error, what + ": expected an atom count in [1, 4096]");
  return q->get_num().get_ui();
}

}  // namespace detail

/// Ready-to-run documents: identity [N], constant-mult <c> [N], dirichlet <N>,
/// star-tail <rho> <beta>, two-cycle.
inline Json generate_example(const std::string& name, const std::vector<std::string>& params) {
  auto param = [&](std::size_t i) -> std::optional<std::string> {
    return i < params.size() ? std::optional<std::string>(params[i]) : std::nullopt;
  };
  auto too_many = [&](std::size_t allowed) {
    if (params.size() > allowed) throw Error(ErrorKind::parse_error, name + ": too many parameters");
  };
  WeightedSystem<Rational> w;
  if (name == "identity" || name == "constant-mult") {
    Rational usq(1);
    std::size_t next = 0;
    if (name == "constant-mult") {
      if (!param(0)) throw Error(ErrorKind::parse_error, "constant-mult: missing multiplier c");
      const Rational c = detail::example_rational(*param(0), "constant-mult c");
      usq = c * c;
      next = 1;
    }
    too_many(next + 1);
    const std::size_t n = param(next) ? detail::example_count(*param(next), name + " N") : 3;
    for (std::size_t k = 0; k < n; ++k) {
      w.masses.emplace_back(1);
      w.phi.push_back(k);
      w.usq.push_back(usq);
    }
  } else if (name == "dirichlet") {
    too_many(1);
    if (!param(0)) throw Error(ErrorKind::parse_error, "dirichlet: missing atom count N");
    const std::size_t n = detail::example_count(*param(0), "dirichlet N");
    for (std::size_t k = 0; k < n; ++k) {
      w.masses.emplace_back(1);
      w.phi.push_back(k == 0 ? 0 : k - 1);
      if (k == 0) w.usq.emplace_back(0);
      else {
        Rational q(static_cast<long>(k + 1), static_cast<long>(k));
        q.canonicalize();
        w.usq.push_back(q);
      }
    }
  } else if (name == "star-tail") {
    too_many(2);
    if (!param(0) || !param(1)) throw Error(ErrorKind::parse_error, "star-tail: expected <rho> <beta>");
    const Rational rho = detail::example_rational(*param(0), "star-tail rho");
    const Rational beta = detail::example_rational(*param(1), "star-tail beta");
    w.masses = {Rational(1)};
    w.phi = {0};
    w.usq = {Rational(0)};
    w.tail = TailSpec<Rational>{Geometric<Rational>{Rational(1), rho}, Geometric<Rational>{beta, Rational(1)}, TailMap::constant(0)};
  } else if (name == "two-cycle") {
    too_many(0);
    w.masses = {Rational(1), Rational(1)};
    w.phi = {1, 0};
    w.usq = {Rational(1), Rational(1)};
  } else {
    throw Error(ErrorKind::unknown_example, "\"" + name + "\" (known: identity, constant-mult, dirichlet, star-tail, two-cycle)");
  }
  return serialize_spec(SpecDocument{validate(std::move(w)), {}});
}

}  // namespace wco
