#pragma once

#include <tropmod/combtypes.hpp>
#include <tropmod/irreducibility.hpp>
#include <tropmod/jsonio.hpp>
#include <tropmod/modulifan.hpp>
#include <tropmod/paramcurves.hpp>

#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropmod::cli {

// Everything a subcommand produces. `result` is the payload documented per
// command; the JSON envelope and the text rendering are built from it so the
// two formats always describe the same run.
struct Outcome {
  std::string command;
  Json params;
  Json result;
  std::string text;
  int exit_code = 0;
};

inline std::string render_json(const Outcome& o) {
  Json envelope{
      {"command", o.command}, {"params", o.params}, {"result", o.result}, {"exit", o.exit_code}};
  return envelope.dump(2) + "\n";
}

inline std::string render_text(const Outcome& o) { return o.text; }

// ---------------------------------------------------------------------------
// Spec-string parsing. All failures throw std::invalid_argument; the driver
// maps that to a usage error.

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

inline long long parse_int(const std::string& token, const std::string& what) {
  const std::string t = trim(token);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": expected an integer, got '" + token + "'");
  }
  if (used != t.size() || t.empty())
    throw std::invalid_argument(what + ": expected an integer, got '" + token + "'");
  return v;
}

inline std::vector<int> parse_label_list(const std::string& s, const std::string& what) {
  std::vector<int> labels;
  for (const std::string& tok : split_on(s, ','))
    labels.push_back(static_cast<int>(parse_int(tok, what)));
  return labels;
}

}  // namespace detail

// "d:<k>" for the standard degree-k set, or explicit vectors "a,b;c,d;...".
inline Degree parse_degree(const std::string& spec) {
  const std::string s = detail::trim(spec);
  if (s.rfind("d:", 0) == 0) {
    const long long d = detail::parse_int(s.substr(2), "degree");
    if (d < 1 || d > 1000) throw std::invalid_argument("degree: d must be between 1 and 1000");
    return Degree::standard(static_cast<int>(d));
  }
  std::vector<Vec2> dirs;
  for (const std::string& part : detail::split_on(s, ';')) {
    const auto pair = detail::split_on(part, ',');
    if (pair.size() != 2)
      throw std::invalid_argument("degree: each direction needs two coordinates, got '" + part + "'");
    dirs.push_back({detail::parse_int(pair[0], "degree"), detail::parse_int(pair[1], "degree")});
  }
  return Degree(std::move(dirs));
}

// Semicolon-separated splits, each a comma list of labels: "1,3;1,3,4".
inline std::vector<Split> parse_splits(int n, const std::string& spec) {
  std::vector<Split> splits;
  for (const std::string& part : detail::split_on(spec, ';'))
    splits.emplace_back(n, detail::parse_label_list(part, "type"));
  return splits;
}

// One named divisor: "psi:i", "psi-natural:i", "vital:a,b,..." or
// "psi-skeleton:i,codim:k".
inline Cycle parse_divisor_term(int n, const std::string& term) {
  const std::string t = detail::trim(term);
  const auto colon = t.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("divisor: expected 'kind:...', got '" + term + "'");
  const std::string kind = detail::trim(t.substr(0, colon));
  const std::string rest = t.substr(colon + 1);
  if (kind == "psi") return psi(static_cast<int>(detail::parse_int(rest, "psi")), n);
  if (kind == "psi-natural") {
    const int i = static_cast<int>(detail::parse_int(rest, "psi-natural"));
    return add_cycles(skeleton(n, 1), scale_cycle(psi(i, n), -1));
  }
  if (kind == "vital") return vital(Split(n, detail::parse_label_list(rest, "vital")), n);
  if (kind == "psi-skeleton") {
    const auto parts = detail::split_on(rest, ',');
    if (parts.size() != 2 || detail::trim(parts[1]).rfind("codim:", 0) != 0)
      throw std::invalid_argument("divisor: psi-skeleton needs 'psi-skeleton:i,codim:k'");
    const int i = static_cast<int>(detail::parse_int(parts[0], "psi-skeleton"));
    const int k = static_cast<int>(detail::parse_int(detail::trim(parts[1]).substr(6), "codim"));
    return psi_skeleton(i, n, k);
  }
  throw std::invalid_argument("divisor: unknown kind '" + kind + "'");
}

// A '+'-separated sum of divisor terms, e.g. "psi:1+psi:2".
inline Cycle parse_divisor_spec(int n, const std::string& spec) {
  const auto terms = detail::split_on(spec, '+');
  Cycle total = parse_divisor_term(n, terms[0]);
  for (std::size_t i = 1; i < terms.size(); ++i)
    total = add_cycles(total, parse_divisor_term(n, terms[i]));
  return total;
}

// ---------------------------------------------------------------------------
// Shared rendering helpers.

namespace detail {

inline std::string cone_label(const CombType& t) {
  std::ostringstream os;
  for (std::size_t k = 0; k < t.splits().size(); ++k) {
    if (k) os << ' ';
    os << '{';
    const auto members = t.splits()[k].members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) os << ',';
      os << members[i];
    }
    os << '}';
  }
  if (t.splits().empty()) os << "{}";
  return os.str();
}

inline std::string join_values(const std::set<long long>& vals) {
  std::ostringstream os;
  bool first = true;
  for (long long v : vals) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands.

// Builds the requested skeleton (of the whole space, or of one marking's
// psi-class) and checks the balancing condition at every codimension-one
// face. With `verbose`, also reports the coordinate totals of the summed ray
// vectors, grouped by whether the coordinate pair touches the chosen marking.
inline Outcome run_skeleton_check(int n, int codim, std::optional<int> psi_marking, bool verbose) {
  Outcome o;
  o.command = "skeleton-check";
  o.params = Json{{"n", n},
                  {"codim", codim},
                  {"psi", psi_marking ? Json(*psi_marking) : Json(nullptr)},
                  {"verbose", verbose}};

  const Cycle cycle =
      psi_marking ? psi_skeleton(*psi_marking, n, codim) : skeleton(n, codim);
  const BalancingCertificate cert = is_balanced(cycle);

  Json violations = Json::array();
  for (const FaceBalance& fb : cert.faces) {
    if (fb.balanced) break;  // violating faces come first
    violations.push_back(Json{{"face", combtype_json(fb.face)}, {"defect", Json(fb.sum.coords)}});
  }

  o.result = Json{{"n", n},
                  {"codim", codim},
                  {"psi", psi_marking ? Json(*psi_marking) : Json(nullptr)},
                  {"dim", cycle.dim()},
                  {"cones", cycle.weights().size()},
                  {"balanced", cert.balanced},
                  {"faces_checked", cert.faces.size()},
                  {"violations", std::move(violations)}};

  std::ostringstream text;
  text << "skeleton-check: n=" << n << " codim=" << codim;
  if (psi_marking) text << " psi=" << *psi_marking;
  text << '\n';
  text << "cones: " << cycle.weights().size() << "  dim: " << cycle.dim() << '\n';

  if (verbose) {
    std::vector<long long> sums(static_cast<std::size_t>(pair_count(n)), 0);
    for (const auto& [cone, weight] : cycle.weights())
      for (const Split& s : cone.splits()) {
        const LatticeVector v = tilde_v(s);
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += weight * v.coords[i];
      }
    std::set<long long> marked, other;
    std::size_t idx = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j, ++idx) {
        const bool touches = psi_marking && (i == *psi_marking || j == *psi_marking);
        (touches ? marked : other).insert(sums[idx]);
      }
    Json sums_json;
    if (psi_marking) {
      sums_json = Json{{"marked_pairs", Json(marked)}, {"other_pairs", Json(other)}};
      text << "coordinate sums: pairs with marking " << *psi_marking << ": "
           << detail::join_values(marked) << "; other pairs: " << detail::join_values(other)
           << '\n';
    } else {
      sums_json = Json{{"all_pairs", Json(other)}};
      text << "coordinate sums: all pairs: " << detail::join_values(other) << '\n';
    }
    o.result["coordinate_sums"] = std::move(sums_json);
  }

  text << "balanced: " << (cert.balanced ? "yes" : "no") << '\n';
  if (!cert.balanced)
    for (const FaceBalance& fb : cert.faces) {
      if (fb.balanced) break;
      text << "violation at face " << detail::cone_label(fb.face) << '\n';
    }

  o.text = text.str();
  o.exit_code = cert.balanced ? 0 : 1;
  return o;
}

// Builds a named divisor and lists its cones and weights.
inline Outcome run_divisor(int n, const std::string& spec) {
  Outcome o;
  o.command = "divisor";
  o.params = Json{{"n", n}, {"divisor", spec}};
  const Cycle d = parse_divisor_spec(n, spec);
  o.result = cycle_json(d);

  std::ostringstream text;
  text << "divisor: n=" << n << " dim=" << d.dim() << " cones=" << d.weights().size() << '\n';
  for (const auto& [cone, weight] : d.weights())
    text << "  " << detail::cone_label(cone) << " -> " << weight << '\n';
  o.text = text.str();
  o.exit_code = 0;
  return o;
}

// Runs the irreducibility analysis on a named divisor; exits zero exactly
// when the cycle is irreducible as a weighted fan.
inline Outcome run_irreducible(int n, const std::string& spec) {
  Outcome o;
  o.command = "irreducible";
  o.params = Json{{"n", n}, {"divisor", spec}};
  const Cycle d = parse_divisor_spec(n, spec);
  const IrreducibilityReport rep = is_globally_irreducible(d);
  o.result = irreducibility_json(rep);

  std::ostringstream text;
  text << "local: " << (rep.locally_irreducible ? "yes" : "no") << '\n';
  text << "connected: " << (rep.connected ? "yes" : "no") << '\n';
  text << "weight_space_dim: " << rep.weight_space_dim << '\n';
  text << "global: " << (rep.globally_irreducible ? "yes" : "no") << '\n';
  for (const auto& row : rep.weight_space_basis) {
    text << "basis:";
    for (const Int& e : row) text << ' ' << e;
    text << '\n';
  }
  o.text = text.str();
  o.exit_code = rep.globally_irreducible ? 0 : 1;
  return o;
}

// Pushes the chosen codimension-one cycle forward along the evaluation of
// the extra marking and lists the image cells with their weights.
inline Outcome run_special(const std::string& degree_spec, const std::string& version) {
  Outcome o;
  o.command = "special";
  o.params = Json{{"degree", degree_spec}, {"version", version}};

  SpecialVersion v;
  if (version == "v1")
    v = SpecialVersion::v1;
  else if (version == "v2")
    v = SpecialVersion::v2;
  else
    throw std::invalid_argument("special: version must be v1 or v2");

  const Degree degree = parse_degree(degree_spec);
  const PushforwardResult pf = special_position(degree, v);

  Json warnings = Json::array();
  for (const auto& [a, b] : pf.overlap_warnings) warnings.push_back(Json::array({a, b}));
  o.result = Json{{"cells", image_cells_json(pf.cells)}, {"overlap_warnings", std::move(warnings)}};

  std::ostringstream text;
  text << "cells: " << pf.cells.size() << '\n';
  for (const ImageCell& c : pf.cells) {
    text << "  ";
    for (std::size_t r = 0; r < c.rays.size(); ++r) {
      if (r) text << ' ';
      text << '[';
      for (std::size_t i = 0; i < c.rays[r].size(); ++i) {
        if (i) text << ' ';
        text << c.rays[r][i];
      }
      text << ']';
    }
    text << " w=" << c.weight << '\n';
  }
  for (const auto& [a, b] : pf.overlap_warnings)
    text << "overlap warning: cells " << a << " and " << b << '\n';
  o.text = text.str();
  o.exit_code = 0;
  return o;
}

// Computes the lattice multiplicity of one codimension-one type both ways:
// from the evaluation map directly and from the closed form, and reports
// whether they agree. Exits nonzero when a defined closed form disagrees.
inline Outcome run_mult(const std::string& degree_spec, const std::string& type_spec) {
  Outcome o;
  o.command = "mult";
  o.params = Json{{"degree", degree_spec}, {"type", type_spec}};

  const Degree degree = parse_degree(degree_spec);
  const int n = degree.size() - 1;
  if (n < 1) throw std::invalid_argument("mult: the degree must have at least two directions");
  const int total = n + degree.size();
  const CombType type(total, parse_splits(total, type_spec));
  if (type.dim() != total - 4)
    throw std::invalid_argument("mult: the type must be one contraction away from trivalent");

  const ParamType p(n, degree, type);
  const RegionDecomposition decomp = analyze_regions(p);
  const long long direct = mult_direct(p);

  std::string cls;
  switch (decomp.classification) {
    case CurveClass::Interior: cls = "interior"; break;
    case CurveClass::NonInjective: cls = "non-injective"; break;
    case CurveClass::A: cls = "A"; break;
    case CurveClass::B: cls = "B"; break;
    case CurveClass::C: cls = "C"; break;
  }
  const bool has_closed = decomp.classification == CurveClass::A ||
                          decomp.classification == CurveClass::B ||
                          decomp.classification == CurveClass::C;
  std::optional<long long> closed;
  if (has_closed) closed = mult_closed(p);

  o.result = Json{{"n", n},
                  {"type", combtype_json(type)},
                  {"classification", cls},
                  {"direct", direct},
                  {"closed", closed ? Json(*closed) : Json(nullptr)},
                  {"agree", closed ? Json(*closed == direct) : Json(nullptr)}};

  std::ostringstream text;
  text << "classification: " << cls << '\n';
  text << "direct: " << direct << '\n';
  if (closed) {
    text << "closed: " << *closed << '\n';
    text << "agree: " << (*closed == direct ? "yes" : "no") << '\n';
  } else {
    text << "closed: n/a\n";
    text << "agree: n/a\n";
  }
  o.text = text.str();
  o.exit_code = (closed && *closed != direct) ? 1 : 0;
  return o;
}

}  // namespace tropmod::cli
