#pragma once

#include <tropmod/combtypes.hpp>
#include <tropmod/exactlin.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropmod {

// Coordinates live in Z^C(n,2), one entry per unordered pair of markings, in
// lexicographic pair order (1,2),(1,3),...,(n-1,n).
inline int pair_count(int n) { return n * (n - 1) / 2; }

inline int pair_index(int n, int i, int j) {
  if (i < 1 || j <= i || j > n) throw std::invalid_argument("pair_index: need 1 <= i < j <= n");
  return (i - 1) * (2 * n - i) / 2 + (j - i - 1);
}

struct LatticeVector {
  int n = 0;
  std::vector<long long> coords;

  friend bool operator==(const LatticeVector& a, const LatticeVector& b) {
    return a.n == b.n && a.coords == b.coords;
  }
  friend bool operator!=(const LatticeVector& a, const LatticeVector& b) { return !(a == b); }
};

inline LatticeVector zero_vector(int n) { return {n, std::vector<long long>(static_cast<std::size_t>(pair_count(n)), 0)}; }

namespace detail {

// coords[(i,j)] += coef wherever exactly one of i,j lies in `side`
inline void add_side_vector(int n, std::uint32_t side, long long coef, std::vector<long long>& coords) {
  std::size_t idx = 0;
  for (int i = 1; i <= n; ++i) {
    const bool ii = (side >> (i - 1)) & 1u;
    for (int j = i + 1; j <= n; ++j, ++idx)
      if (ii != (((side >> (j - 1)) & 1u) != 0)) coords[idx] += coef;
  }
}

}  // namespace detail

// Ray generator of a split: entry (i,j) is 1 iff the split separates i from j.
inline LatticeVector tilde_v(const Split& s) {
  LatticeVector v = zero_vector(s.n());
  detail::add_side_vector(s.n(), s.mask(), 1, v.coords);
  return v;
}

// Generator d_i of the lineality space, the would-be ray of the singleton
// {i}: entry 1 exactly on the pairs containing i.
inline LatticeVector lineality_vector(int n, int i) {
  if (i < 1 || i > n) throw std::invalid_argument("lineality_vector: label out of range");
  LatticeVector v = zero_vector(n);
  detail::add_side_vector(n, std::uint32_t{1} << (i - 1), 1, v.coords);
  return v;
}

// Point of the cone of T with all bounded edges of length one; entry (i,j)
// is the tree distance between ends i and j.
inline LatticeVector distance_vector(const CombType& t) {
  LatticeVector v = zero_vector(t.n());
  for (const Split& s : t.splits()) detail::add_side_vector(t.n(), s.mask(), 1, v.coords);
  return v;
}

// A weighted subfan of the simplicial M_{0,n} structure: integer weights on
// cones of one fixed dimension. Zero weights are dropped on construction; the
// fan flag additionally demands positivity.
class Cycle {
 public:
  Cycle(int n, int dim, std::map<CombType, long long> weights, bool fan = false)
      : n_(n), dim_(dim), weights_(std::move(weights)), fan_(fan) {
    if (n < 3 || n > 31) throw std::invalid_argument("Cycle: marking count out of range");
    if (dim < 0 || dim > n - 3) throw std::invalid_argument("Cycle: dimension out of range");
    for (auto it = weights_.begin(); it != weights_.end();) {
      if (it->first.n() != n_) throw std::invalid_argument("Cycle: cone for a different marking count");
      if (it->first.dim() != dim_) throw std::invalid_argument("Cycle: cone of the wrong dimension");
      if (it->second == 0)
        it = weights_.erase(it);
      else if (fan_ && it->second < 0)
        throw std::invalid_argument("Cycle: a fan needs positive weights");
      else
        ++it;
    }
  }

  int n() const { return n_; }
  int dim() const { return dim_; }
  bool is_fan() const { return fan_; }
  const std::map<CombType, long long>& weights() const { return weights_; }

  friend bool operator==(const Cycle& a, const Cycle& b) {
    return a.n_ == b.n_ && a.dim_ == b.dim_ && a.weights_ == b.weights_;
  }
  friend bool operator!=(const Cycle& a, const Cycle& b) { return !(a == b); }

 private:
  int n_;
  int dim_;
  std::map<CombType, long long> weights_;
  bool fan_;
};

// The codimension-`codim` skeleton of M_{0,n}: every type of the matching
// dimension with weight one.
inline Cycle skeleton(int n, int codim) {
  if (codim < 0 || codim > n - 3) throw std::invalid_argument("skeleton: codimension out of range");
  std::map<CombType, long long> w;
  for (CombType& t : enumerate_types(n, n - 3 - codim)) w.emplace(std::move(t), 1);
  return Cycle(n, n - 3 - codim, std::move(w), true);
}

// Codimension-`codim` skeleton of the i-th Psi-class: the types of dimension
// n-4-codim whose tree keeps marking i on a vertex of valence at least 4.
inline Cycle psi_skeleton(int i, int n, int codim) {
  if (n < 4) throw std::invalid_argument("psi_skeleton: need at least 4 markings");
  if (i < 1 || i > n) throw std::invalid_argument("psi_skeleton: label out of range");
  if (codim < 0 || codim > n - 4) throw std::invalid_argument("psi_skeleton: codimension out of range");
  std::map<CombType, long long> w;
  for (CombType& t : enumerate_types(n, n - 4 - codim)) {
    const MarkedTree tree = tree_from_splits(t);
    if (tree.valence[static_cast<std::size_t>(tree.marking_vertex[static_cast<std::size_t>(i - 1)])] >= 4)
      w.emplace(std::move(t), 1);
  }
  return Cycle(n, n - 4 - codim, std::move(w), true);
}

inline Cycle psi(int i, int n) { return psi_skeleton(i, n, 0); }

// A function that is linear on every cone, determined by its (rational)
// values on the ray generators; rays not listed take the value zero.
class RationalFunctionOnFan {
 public:
  RationalFunctionOnFan(int n, std::map<Split, Rat> ray_values)
      : n_(n), ray_values_(std::move(ray_values)) {
    for (const auto& [s, v] : ray_values_)
      if (s.n() != n_) throw std::invalid_argument("RationalFunctionOnFan: ray for a different marking count");
  }

  // the function cutting out the vital divisor of S: value 1 on the ray of S,
  // 0 on every other ray
  static RationalFunctionOnFan indicator(const Split& s) {
    return RationalFunctionOnFan(s.n(), {{s, Rat(1)}});
  }

  int n() const { return n_; }
  const std::map<Split, Rat>& ray_values() const { return ray_values_; }

  Rat value_on_ray(const Split& s) const {
    auto it = ray_values_.find(s);
    return it == ray_values_.end() ? Rat(0) : it->second;
  }

 private:
  int n_;
  std::map<Split, Rat> ray_values_;
};

// One codimension-1 face's balancing record: the weighted sum of the normal
// vectors around it and, when the sum lies in span(rays) + lineality, the
// unique expansion coefficients witnessing that.
struct FaceBalance {
  CombType face;
  LatticeVector sum;
  bool balanced = false;
  std::vector<Rat> ray_coefficients;        // over face.splits(), in order
  std::vector<Rat> lineality_coefficients;  // over d_1..d_n
};

struct BalancingCertificate {
  bool balanced = false;
  std::vector<FaceBalance> faces;  // violating faces first, each group ordered
};

class balancing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct FaceAccum {
  std::vector<long long> sum;
  Rat top_value;  // Sigma w(sigma) * f(extra ray), when a function is given
};

// For every codim-1 face of every cone of x: accumulate w(sigma) times the
// ray vector of the split that sigma adds over the face.
inline std::map<CombType, FaceAccum> accumulate_faces(const Cycle& x, const RationalFunctionOnFan* f) {
  std::map<CombType, FaceAccum> acc;
  const int np = pair_count(x.n());
  for (const auto& [sigma, w] : x.weights()) {
    const auto& splits = sigma.splits();
    for (std::size_t k = 0; k < splits.size(); ++k) {
      std::vector<Split> rest;
      rest.reserve(splits.size() - 1);
      for (std::size_t j = 0; j < splits.size(); ++j)
        if (j != k) rest.push_back(splits[j]);
      CombType tau(x.n(), std::move(rest));
      FaceAccum& a = acc.try_emplace(std::move(tau)).first->second;
      if (a.sum.empty()) a.sum.assign(static_cast<std::size_t>(np), 0);
      add_side_vector(x.n(), splits[k].mask(), w, a.sum);
      if (f) a.top_value += Rat(w) * f->value_on_ray(splits[k]);
    }
  }
  return acc;
}

// Expands `sum` over the rays of `face` plus the lineality generators; the
// rays of a cone are independent modulo lineality, so a solution is unique.
inline std::optional<RatVector> expand_over_face(const CombType& face, const std::vector<long long>& sum) {
  const int n = face.n();
  const int np = pair_count(n);
  const int nrays = face.dim();
  IntMatrix a(np, nrays + n);
  for (int r = 0; r < nrays; ++r) {
    std::vector<long long> col(static_cast<std::size_t>(np), 0);
    add_side_vector(n, face.splits()[static_cast<std::size_t>(r)].mask(), 1, col);
    for (int i = 0; i < np; ++i) a(i, r) = col[static_cast<std::size_t>(i)];
  }
  for (int d = 0; d < n; ++d) {
    std::vector<long long> col(static_cast<std::size_t>(np), 0);
    add_side_vector(n, std::uint32_t{1} << d, 1, col);
    for (int i = 0; i < np; ++i) a(i, nrays + d) = col[static_cast<std::size_t>(i)];
  }
  std::vector<Int> b;
  b.reserve(sum.size());
  for (long long v : sum) b.emplace_back(v);
  return solve_q(a, b);
}

inline std::string face_description(const CombType& face) {
  std::string out = "{";
  for (const Split& s : face.splits()) {
    if (out.size() > 1) out += ", ";
    out += "{";
    bool first = true;
    for (int m : s.members()) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(m);
    }
    out += "}";
  }
  return out + "}";
}

}  // namespace detail

// Checks the balancing condition of x around every codimension-1 face of its
// cones: the weighted sum of the added-ray vectors must lie in the span of
// the face's rays plus the lineality space. A 0-dimensional cycle has no
// faces and is balanced outright.
inline BalancingCertificate is_balanced(const Cycle& x) {
  BalancingCertificate cert;
  cert.balanced = true;
  if (x.dim() == 0) return cert;

  auto acc = detail::accumulate_faces(x, nullptr);
  for (auto& [face, data] : acc) {
    FaceBalance fb{face, LatticeVector{x.n(), data.sum}, false, {}, {}};
    auto coeffs = detail::expand_over_face(face, data.sum);
    fb.balanced = coeffs.has_value();
    if (coeffs) {
      fb.ray_coefficients.assign(coeffs->begin(), coeffs->begin() + face.dim());
      fb.lineality_coefficients.assign(coeffs->begin() + face.dim(), coeffs->end());
    } else {
      cert.balanced = false;
    }
    cert.faces.push_back(std::move(fb));
  }
  std::stable_partition(cert.faces.begin(), cert.faces.end(),
                        [](const FaceBalance& fb) { return !fb.balanced; });
  return cert;
}

// The Weil divisor of f on x: on each codimension-1 face the weight is
// Sigma w(sigma) f(added ray) minus f evaluated on the expansion of
// Sigma w(sigma) v(added ray) over the face's own rays (lineality counts 0).
inline Cycle weil_divisor(const RationalFunctionOnFan& f, const Cycle& x) {
  if (f.n() != x.n()) throw std::invalid_argument("weil_divisor: marking counts differ");
  if (x.dim() < 1) throw std::invalid_argument("weil_divisor: cycle has no codimension-1 faces");

  auto acc = detail::accumulate_faces(x, &f);
  std::map<CombType, long long> weights;
  for (auto& [face, data] : acc) {
    auto coeffs = detail::expand_over_face(face, data.sum);
    if (!coeffs)
      throw balancing_error("weil_divisor: input not balanced around face " + detail::face_description(face));
    Rat w = data.top_value;
    for (int r = 0; r < face.dim(); ++r)
      w -= (*coeffs)[static_cast<std::size_t>(r)] * f.value_on_ray(face.splits()[static_cast<std::size_t>(r)]);
    if (w.is_zero()) continue;
    if (boost::multiprecision::denominator(w) != 1)
      throw std::domain_error("weil_divisor: non-integer weight on face " + detail::face_description(face));
    weights.emplace(face, boost::multiprecision::numerator(w).convert_to<long long>());
  }
  return Cycle(x.n(), x.dim() - 1, std::move(weights));
}

// Closed form for the weight the vital divisor of S places on a
// codimension-1 type: with A,B,C,D the marking sets behind the four edges of
// the unique 4-valent vertex, the weight is +1 if S unites two of them, -1 if
// S (or its complement) is one of them, 0 otherwise.
inline int vital_weight(const CombType& t, const Split& s) {
  if (s.n() != t.n()) throw std::invalid_argument("vital_weight: marking counts differ");
  if (t.dim() != t.n() - 4) throw std::invalid_argument("vital_weight: type not of codimension 1");

  const MarkedTree tree = tree_from_splits(t);
  int v4 = -1;
  for (int v = 0; v < tree.num_vertices; ++v)
    if (tree.valence[static_cast<std::size_t>(v)] == 4) v4 = v;

  const std::uint32_t full = (std::uint32_t{1} << t.n()) - 1;
  std::vector<std::uint32_t> sides;
  for (const auto& e : tree.edges) {
    // looking down the edge from the 4-valent vertex: the far endpoint owns
    // the split side, so standing at it the markings behind are complementary
    if (e.near == v4) sides.push_back(e.split.mask());
    if (e.far == v4) sides.push_back(full & ~e.split.mask());
  }
  for (int m = 1; m <= t.n(); ++m)
    if (tree.marking_vertex[static_cast<std::size_t>(m - 1)] == v4)
      sides.push_back(std::uint32_t{1} << (m - 1));

  const std::uint32_t sm = s.mask(), sc = full & ~s.mask();
  for (std::uint32_t side : sides)
    if (sm == side || sc == side) return -1;
  for (std::size_t i = 0; i < sides.size(); ++i)
    for (std::size_t j = i + 1; j < sides.size(); ++j)
      if (sm == (sides[i] | sides[j]) || sc == (sides[i] | sides[j])) return 1;
  return 0;
}

// The vital divisor of S: the Weil divisor of the indicator function of its
// ray on the full moduli fan.
inline Cycle vital(const Split& s) {
  return weil_divisor(RationalFunctionOnFan::indicator(s), skeleton(s.n(), 0));
}

inline Cycle vital(const Split& s, int n) {
  if (s.n() != n) throw std::invalid_argument("vital: marking counts differ");
  return vital(s);
}

inline Cycle add_cycles(const Cycle& x, const Cycle& y) {
  if (x.n() != y.n()) throw std::invalid_argument("add_cycles: marking counts differ");
  if (x.dim() != y.dim()) throw std::invalid_argument("add_cycles: dimensions differ");
  std::map<CombType, long long> w = x.weights();
  for (const auto& [t, v] : y.weights()) w[t] += v;
  return Cycle(x.n(), x.dim(), std::move(w));
}

inline Cycle scale_cycle(const Cycle& x, long long lambda) {
  std::map<CombType, long long> w;
  if (lambda != 0)
    for (const auto& [t, v] : x.weights()) w.emplace(t, v * lambda);
  return Cycle(x.n(), x.dim(), std::move(w));
}

}  // namespace tropmod
