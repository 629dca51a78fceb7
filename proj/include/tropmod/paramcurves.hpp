#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tropmod/arith.hpp"
#include "tropmod/combtypes.hpp"
#include "tropmod/exactlin.hpp"
#include "tropmod/modulifan.hpp"

namespace tropmod {

// Plane lattice direction of an edge or end.
struct Vec2 {
  long long x = 0;
  long long y = 0;

  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
  friend Vec2 operator+(const Vec2& a, const Vec2& b) {
    return {checked_add64(a.x, b.x), checked_add64(a.y, b.y)};
  }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) {
    return {checked_add64(a.x, -b.x), checked_add64(a.y, -b.y)};
  }
  Vec2 operator-() const { return {-x, -y}; }
  bool is_zero() const { return x == 0 && y == 0; }
};

// |det(w1|w2)|, the lattice area spanned at a trivalent vertex.
inline long long vertex_mult(const Vec2& w1, const Vec2& w2) {
  const __int128 d = static_cast<__int128>(w1.x) * w2.y - static_cast<__int128>(w1.y) * w2.x;
  const __int128 a = d < 0 ? -d : d;
  if (a > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()))
    throw std::overflow_error("vertex_mult: determinant exceeds 64 bits");
  return static_cast<long long>(a);
}

// The directions of the m unbounded non-contracted ends. A curve balanced
// at every vertex forces them to sum to zero, so construction rejects
// anything else.
class Degree {
 public:
  explicit Degree(std::vector<Vec2> directions) : directions_(std::move(directions)) {
    if (directions_.empty()) throw std::invalid_argument("Degree: needs at least one direction");
    Vec2 sum;
    for (const Vec2& v : directions_) {
      if (v.is_zero()) throw std::invalid_argument("Degree: zero direction");
      sum = sum + v;
    }
    if (!sum.is_zero()) throw std::invalid_argument("Degree: directions must sum to zero");
  }

  // Classical degree d: d copies each of (1,1), (-1,0), (0,-1).
  static Degree standard(int d) {
    if (d < 1) throw std::invalid_argument("Degree: classical degree must be positive");
    std::vector<Vec2> dirs;
    dirs.reserve(static_cast<std::size_t>(3 * d));
    for (int i = 0; i < d; ++i) dirs.push_back({1, 1});
    for (int i = 0; i < d; ++i) dirs.push_back({-1, 0});
    for (int i = 0; i < d; ++i) dirs.push_back({0, -1});
    return Degree(std::move(dirs));
  }

  int size() const { return static_cast<int>(directions_.size()); }
  const std::vector<Vec2>& directions() const { return directions_; }

 private:
  std::vector<Vec2> directions_;
};

// A combinatorial type of parametrized curve: an abstract (n+m)-marked type
// where markings 1..n are contracted points and marking n+i travels along
// degree direction v_i. The direction of every bounded edge is forced: it is
// the sum of the non-contracted end directions behind the edge. We orient
// edges away from the vertex carrying x_1, the deterministic root.
class ParamType {
 public:
  ParamType(int n, Degree degree, CombType type)
      : n_(n), degree_(std::move(degree)), type_(std::move(type)) {
    if (n_ < 1) throw std::invalid_argument("ParamType: needs a contracted marking to root at");
    if (type_.n() != n_ + degree_.size())
      throw std::invalid_argument("ParamType: type must carry one marking per point and per end");
    tree_ = tree_from_splits(type_);
    root_ = tree_.marking_vertex[0];

    const int k = type_.dim();
    directions_.resize(static_cast<std::size_t>(k));
    for (int e = 0; e < k; ++e) {
      const Split& s = type_.splits()[e];
      // Sum the end directions over the side away from x_1.
      const bool flip = s.contains(1);
      Vec2 u;
      for (int label = n_ + 1; label <= type_.n(); ++label)
        if (s.contains(label) != flip) u = u + degree_.directions()[static_cast<std::size_t>(label - n_ - 1)];
      directions_[static_cast<std::size_t>(e)] = u;
    }
    verify_balancing();
  }

  int n() const { return n_; }
  const Degree& degree() const { return degree_; }
  const CombType& type() const { return type_; }
  const MarkedTree& tree() const { return tree_; }
  int marking_count() const { return type_.n(); }
  int bounded_edge_count() const { return type_.dim(); }
  int root_vertex() const { return root_; }

  // Direction of bounded edge e, oriented away from the root vertex.
  const Vec2& edge_direction(int e) const { return directions_.at(static_cast<std::size_t>(e)); }

  // Whether a marking label sits behind edge e as seen from the root.
  bool label_behind(int e, int label) const {
    const Split& s = type_.splits()[static_cast<std::size_t>(e)];
    return s.contains(label) != s.contains(1);
  }

  // Whether a tree vertex lies behind edge e on the split side of the tree
  // (vertex v >= 1 owns splits[v-1]; nesting of masks decides containment).
  bool vertex_on_split_side(int e, int v) const {
    if (v == 0) return false;
    const std::uint32_t outer = type_.splits()[static_cast<std::size_t>(e)].mask();
    const std::uint32_t inner = type_.splits()[static_cast<std::size_t>(v - 1)].mask();
    return (inner & outer) == inner;
  }

  // Direction of edge e oriented away from an arbitrary vertex.
  Vec2 direction_away_from(int e, int v) const {
    const bool root_on_split_side = vertex_on_split_side(e, root_);
    const bool v_on_split_side = vertex_on_split_side(e, v);
    return v_on_split_side == root_on_split_side ? directions_[static_cast<std::size_t>(e)]
                                                 : -directions_[static_cast<std::size_t>(e)];
  }

 private:
  void verify_balancing() const {
    const int nv = tree_.num_vertices;
    std::vector<Vec2> sum(static_cast<std::size_t>(nv));
    for (int e = 0; e < bounded_edge_count(); ++e) {
      const MarkedTree::Edge& ed = tree_.edges[static_cast<std::size_t>(e)];
      sum[static_cast<std::size_t>(ed.near)] = sum[static_cast<std::size_t>(ed.near)] + direction_away_from(e, ed.near);
      sum[static_cast<std::size_t>(ed.far)] = sum[static_cast<std::size_t>(ed.far)] + direction_away_from(e, ed.far);
    }
    for (int label = n_ + 1; label <= type_.n(); ++label) {
      const int v = tree_.marking_vertex[static_cast<std::size_t>(label - 1)];
      sum[static_cast<std::size_t>(v)] =
          sum[static_cast<std::size_t>(v)] + degree_.directions()[static_cast<std::size_t>(label - n_ - 1)];
    }
    for (const Vec2& s : sum)
      if (!s.is_zero()) throw std::logic_error("ParamType: balancing violated at a vertex");
  }

  int n_;
  Degree degree_;
  CombType type_;
  MarkedTree tree_;
  int root_ = 0;
  std::vector<Vec2> directions_;  // aligned with type().splits()
};

// Edge directions oriented away from a chosen root vertex, aligned with
// P.type().splits(). Reversing the root side of an edge flips its sign.
inline std::vector<Vec2> directions(const ParamType& p, int root) {
  if (root < 0 || root >= p.tree().num_vertices)
    throw std::invalid_argument("directions: no such vertex");
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(p.bounded_edge_count()));
  for (int e = 0; e < p.bounded_edge_count(); ++e) out.push_back(p.direction_away_from(e, root));
  return out;
}

// Matrix of the total evaluation map on the cone of one type. Coordinates on
// the cone are the root position (two columns) followed by one length per
// bounded edge; row pair 2i-2, 2i-1 expresses h(x_i) for the contracted
// marking x_i.
struct EvaluationMatrix {
  IntMatrix matrix;
  std::vector<int> column_edges;  // column 2+j moves along bounded edge column_edges[j]
};

inline EvaluationMatrix ev_matrix(const ParamType& p, int root) {
  if (root < 0 || root >= p.tree().num_vertices)
    throw std::invalid_argument("ev_matrix: no such vertex");
  const int k = p.bounded_edge_count();
  EvaluationMatrix out{IntMatrix(2 * p.n(), 2 + k), {}};
  out.column_edges.reserve(static_cast<std::size_t>(k));
  const std::vector<Vec2> dirs = directions(p, root);
  for (int i = 1; i <= p.n(); ++i) {
    out.matrix(2 * i - 2, 0) = 1;
    out.matrix(2 * i - 1, 1) = 1;
  }
  for (int e = 0; e < k; ++e) {
    out.column_edges.push_back(e);
    for (int i = 1; i <= p.n(); ++i) {
      // Edge e stretches h(x_i) exactly when it separates x_i from the root.
      const int vi = p.tree().marking_vertex[static_cast<std::size_t>(i - 1)];
      if (p.vertex_on_split_side(e, vi) == p.vertex_on_split_side(e, root)) continue;
      out.matrix(2 * i - 2, 2 + e) = Int(dirs[static_cast<std::size_t>(e)].x);
      out.matrix(2 * i - 1, 2 + e) = Int(dirs[static_cast<std::size_t>(e)].y);
    }
  }
  return out;
}

inline EvaluationMatrix ev_matrix(const ParamType& p) { return ev_matrix(p, p.root_vertex()); }

namespace detail {

// gcd of the maximal minors of a (k+1) x k matrix: the index of its column
// lattice, i.e. the first determinantal divisor in codimension one. Bails to
// bignum entries on overflow like the rest of the linear algebra.
inline Int maximal_minor_gcd(const IntMatrix& a) {
  if (a.rows() != a.cols() + 1)
    throw std::invalid_argument("maximal_minor_gcd: expects one more row than columns");
  return with_escalation(a, [&](auto m) -> Int {
    using T = std::decay_t<decltype(m(0, 0))>;
    const int rows = m.rows(), cols = m.cols();
    Int g(0);
    for (int skip = 0; skip < rows && g != 1; ++skip) {
      Matrix<T> sub(rows - 1, cols);
      for (int i = 0, r = 0; i < rows; ++i) {
        if (i == skip) continue;
        for (int j = 0; j < cols; ++j) sub(r, j) = m(i, j);
        ++r;
      }
      auto e = bareiss(std::move(sub), cols);
      if (e.rank < cols) continue;
      auto d = abs_val(e.m(cols - 1, e.pivot_cols[static_cast<std::size_t>(cols - 1)]));
      if constexpr (std::is_same_v<std::decay_t<decltype(d)>, chk64>)
        g = boost::multiprecision::gcd(g, Int(d.v));
      else
        g = boost::multiprecision::gcd(g, d);
    }
    return g;
  });
}

}  // namespace detail

// Multiplicity of a codimension-one type as the index of the image lattice of
// its evaluation matrix, computed as the gcd of the maximal minors (equal to
// the product of the elementary divisors, hence to d_of of the matrix). Zero
// exactly when ev fails to be injective on the cone.
inline long long mult_direct(const ParamType& p) {
  if (p.n() != p.degree().size() - 1)
    throw std::invalid_argument("mult_direct: needs one contracted marking less than ends");
  if (p.type().dim() != p.marking_count() - 4)
    throw std::invalid_argument("mult_direct: type must have exactly one 4-valent vertex");
  const Int g = detail::maximal_minor_gcd(ev_matrix(p).matrix);
  if (g > std::numeric_limits<long long>::max())
    throw std::overflow_error("mult_direct: multiplicity exceeds 64 bits");
  return g.convert_to<long long>();
}

enum class CurveClass { Interior, NonInjective, A, B, C };

// One connected component of the curve minus the closures of the contracted
// markings. A component can consist of a single open edge (both endpoints
// removed) or a single dangling end, so the vertex list may be empty.
struct Region {
  std::vector<int> vertices;
  std::vector<int> bounded_edges;  // bounded edges meeting the region
  std::vector<int> end_markings;   // labels of non-contracted ends in the region
  bool bounded = false;            // no unbounded end at all
};

// An edge germ at a vertex: a bounded edge or a non-contracted end. It is
// free when, after removing the vertex and all contracted-marking closures,
// it still reaches an unmarked end; otherwise it is fixed.
struct EdgeGerm {
  int vertex = -1;
  bool is_end = false;
  int index = -1;  // bounded-edge index, or the marking label when is_end
  bool free_edge = false;
};

struct RegionDecomposition {
  std::vector<Region> regions;
  std::vector<int> region_of_vertex;  // -1 for vertices removed with a contracted marking
  std::vector<EdgeGerm> germs;
  bool has_string = false;  // some region keeps two or more ends
  CurveClass classification = CurveClass::Interior;
};

namespace detail {

inline bool vertex_has_contracted_marking(const ParamType& p, int v) {
  for (int label = 1; label <= p.n(); ++label)
    if (p.tree().marking_vertex[static_cast<std::size_t>(label - 1)] == v) return true;
  return false;
}

// Breadth-first reachability of an unmarked end from vertex `start`, walking
// only unremoved vertices and never through `banned`.
inline bool reaches_unmarked_end(const ParamType& p, const std::vector<char>& removed, int start,
                                 int banned) {
  const MarkedTree& tree = p.tree();
  std::vector<char> seen(static_cast<std::size_t>(tree.num_vertices), 0);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int label = p.n() + 1; label <= p.marking_count(); ++label)
      if (tree.marking_vertex[static_cast<std::size_t>(label - 1)] == v) return true;
    for (const MarkedTree::Edge& e : tree.edges) {
      if (e.near != v && e.far != v) continue;
      const int w = e.near == v ? e.far : e.near;
      if (w == banned || removed[static_cast<std::size_t>(w)] || seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

}  // namespace detail

// Cuts the curve along the contracted markings and reads off the resulting
// regions, strings, free and fixed germs, and (in codimension one) the shape
// of the type: NonInjective when the evaluation map drops rank on the cone,
// otherwise exactly one of A (marked 4-valent vertex, one bounded region),
// B (every region keeps one end) or C (two ends at the 4-valent region plus
// one bounded region). Top-dimensional types are Interior; the trichotomy
// does not apply to deeper faces, which are reported as Interior too unless
// rank drops.
inline RegionDecomposition analyze_regions(const ParamType& p) {
  const MarkedTree& tree = p.tree();
  const int nv = tree.num_vertices;
  const int ne = p.bounded_edge_count();
  RegionDecomposition out;

  std::vector<char> removed(static_cast<std::size_t>(nv), 0);
  for (int label = 1; label <= p.n(); ++label)
    removed[static_cast<std::size_t>(tree.marking_vertex[static_cast<std::size_t>(label - 1)])] = 1;

  // Union-find on the kept vertices along edges with both endpoints kept.
  std::vector<int> parent(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const MarkedTree::Edge& e : tree.edges)
    if (!removed[static_cast<std::size_t>(e.near)] && !removed[static_cast<std::size_t>(e.far)])
      parent[static_cast<std::size_t>(find(e.near))] = find(e.far);

  out.region_of_vertex.assign(static_cast<std::size_t>(nv), -1);
  for (int v = 0; v < nv; ++v) {
    if (removed[static_cast<std::size_t>(v)]) continue;
    const int r = find(v);
    if (out.region_of_vertex[static_cast<std::size_t>(r)] < 0) {
      out.region_of_vertex[static_cast<std::size_t>(r)] = static_cast<int>(out.regions.size());
      out.regions.emplace_back();
    }
    const int id = out.region_of_vertex[static_cast<std::size_t>(r)];
    out.region_of_vertex[static_cast<std::size_t>(v)] = id;
    out.regions[static_cast<std::size_t>(id)].vertices.push_back(v);
  }

  for (int e = 0; e < ne; ++e) {
    const MarkedTree::Edge& ed = tree.edges[static_cast<std::size_t>(e)];
    const bool near_kept = !removed[static_cast<std::size_t>(ed.near)];
    const bool far_kept = !removed[static_cast<std::size_t>(ed.far)];
    if (near_kept || far_kept) {
      const int v = near_kept ? ed.near : ed.far;
      out.regions[static_cast<std::size_t>(out.region_of_vertex[static_cast<std::size_t>(v)])]
          .bounded_edges.push_back(e);
    } else {
      // Both endpoints were cut away: the open edge is a region of its own.
      Region r;
      r.bounded_edges.push_back(e);
      out.regions.push_back(std::move(r));
    }
  }

  for (int label = p.n() + 1; label <= p.marking_count(); ++label) {
    const int v = tree.marking_vertex[static_cast<std::size_t>(label - 1)];
    if (!removed[static_cast<std::size_t>(v)]) {
      out.regions[static_cast<std::size_t>(out.region_of_vertex[static_cast<std::size_t>(v)])]
          .end_markings.push_back(label);
    } else {
      Region r;
      r.end_markings.push_back(label);
      out.regions.push_back(std::move(r));
    }
  }

  for (Region& r : out.regions) {
    r.bounded = r.end_markings.empty();
    if (r.end_markings.size() >= 2) out.has_string = true;
  }

  // Free/fixed flag for every germ: bounded edges at each vertex plus the
  // non-contracted ends (contracted markings are removed with their closure
  // and are trivially fixed, so they are not listed).
  for (int v = 0; v < nv; ++v) {
    for (int e = 0; e < ne; ++e) {
      const MarkedTree::Edge& ed = tree.edges[static_cast<std::size_t>(e)];
      if (ed.near != v && ed.far != v) continue;
      const int w = ed.near == v ? ed.far : ed.near;
      const bool free = !removed[static_cast<std::size_t>(w)] && detail::reaches_unmarked_end(p, removed, w, v);
      out.germs.push_back({v, false, e, free});
    }
    for (int label = p.n() + 1; label <= p.marking_count(); ++label)
      if (tree.marking_vertex[static_cast<std::size_t>(label - 1)] == v)
        out.germs.push_back({v, true, label, true});
  }

  const int codim = p.marking_count() - 3 - p.type().dim();
  if (codim == 0) {
    out.classification = CurveClass::Interior;
    return out;
  }
  const EvaluationMatrix ev = ev_matrix(p);
  if (rank_q(ev.matrix) < ev.matrix.cols()) {
    out.classification = CurveClass::NonInjective;
    return out;
  }
  if (codim != 1) {
    out.classification = CurveClass::Interior;
    return out;
  }

  int v4 = -1;
  for (int v = 0; v < nv; ++v)
    if (tree.valence[static_cast<std::size_t>(v)] == 4) v4 = v;
  std::size_t bounded_regions = 0, single_end = 0;
  for (const Region& r : out.regions) {
    if (r.bounded) ++bounded_regions;
    if (r.end_markings.size() == 1) ++single_end;
  }
  if (detail::vertex_has_contracted_marking(p, v4)) {
    if (bounded_regions == 1 && single_end + 1 == out.regions.size()) {
      out.classification = CurveClass::A;
      return out;
    }
  } else {
    if (single_end == out.regions.size()) {
      out.classification = CurveClass::B;
      return out;
    }
    const Region& rv4 = out.regions[static_cast<std::size_t>(out.region_of_vertex[static_cast<std::size_t>(v4)])];
    if (rv4.end_markings.size() == 2 && bounded_regions == 1 && single_end + 2 == out.regions.size()) {
      out.classification = CurveClass::C;
      return out;
    }
  }
  throw std::logic_error("analyze_regions: injective codim-1 type escaping the A/B/C trichotomy");
}

namespace detail {

inline long long weight_of_direction(const Vec2& u) { return gcd64(std::llabs(u.x), std::llabs(u.y)); }

// Product of |det| over the 3-valent vertices with no adjacent contracted
// marking, using any two of the three outgoing directions.
inline long long unmarked_vertex_product(const ParamType& p) {
  const MarkedTree& tree = p.tree();
  long long prod = 1;
  for (int v = 0; v < tree.num_vertices; ++v) {
    if (tree.valence[static_cast<std::size_t>(v)] != 3 || vertex_has_contracted_marking(p, v)) continue;
    std::vector<Vec2> dirs;
    for (int e = 0; e < p.bounded_edge_count(); ++e) {
      const MarkedTree::Edge& ed = tree.edges[static_cast<std::size_t>(e)];
      if (ed.near == v || ed.far == v) dirs.push_back(p.direction_away_from(e, v));
    }
    for (int label = p.n() + 1; label <= p.marking_count(); ++label)
      if (tree.marking_vertex[static_cast<std::size_t>(label - 1)] == v)
        dirs.push_back(p.degree().directions()[static_cast<std::size_t>(label - p.n() - 1)]);
    prod = checked_mul64(prod, vertex_mult(dirs[0], dirs[1]));
  }
  return prod;
}

// gcd of w(E) over the edges of a region whose far vertex was removed with a
// contracted marking.
inline long long marked_edge_gcd(const ParamType& p, const Region& region,
                                 const std::vector<int>& region_of_vertex) {
  const MarkedTree& tree = p.tree();
  long long g = 0;
  for (int e : region.bounded_edges) {
    const MarkedTree::Edge& ed = tree.edges[static_cast<std::size_t>(e)];
    const bool near_removed = region_of_vertex[static_cast<std::size_t>(ed.near)] < 0;
    const bool far_removed = region_of_vertex[static_cast<std::size_t>(ed.far)] < 0;
    if (!near_removed && !far_removed) continue;
    g = gcd64(g, weight_of_direction(p.edge_direction(e)));
  }
  return g;
}

}  // namespace detail

// Closed-form multiplicity of a codimension-one type of shape A, B or C,
// assembled from gcds of edge weights, the fixed directions at the 4-valent
// vertex, and the 3-valent vertex multiplicities.
inline long long mult_closed(const ParamType& p) {
  const RegionDecomposition rd = analyze_regions(p);
  if (rd.classification != CurveClass::A && rd.classification != CurveClass::B &&
      rd.classification != CurveClass::C)
    throw std::invalid_argument("mult_closed: type is not of shape A, B or C");

  const MarkedTree& tree = p.tree();
  int v4 = -1;
  for (int v = 0; v < tree.num_vertices; ++v)
    if (tree.valence[static_cast<std::size_t>(v)] == 4) v4 = v;
  const long long vertex_product = detail::unmarked_vertex_product(p);

  if (rd.classification == CurveClass::A || rd.classification == CurveClass::C) {
    const Region* bounded = nullptr;
    for (const Region& r : rd.regions)
      if (r.bounded) bounded = &r;
    long long g = detail::marked_edge_gcd(p, *bounded, rd.region_of_vertex);
    if (rd.classification == CurveClass::C) {
      // The two fixed germs at the 4-valent vertex contribute their lattice
      // area; the other two germs run toward the region's ends and are free.
      std::vector<Vec2> fixed;
      for (const EdgeGerm& germ : rd.germs)
        if (germ.vertex == v4 && !germ.free_edge) fixed.push_back(p.direction_away_from(germ.index, v4));
      if (fixed.size() != 2) throw std::logic_error("mult_closed: type C needs exactly two fixed germs");
      g = checked_mul64(g, vertex_mult(fixed[0], fixed[1]));
    }
    return checked_mul64(g, vertex_product);
  }

  // Type B: weight every marked edge behind one of the three fixed germs at
  // the 4-valent vertex by the lattice area of the other two fixed germs.
  std::vector<int> fixed_edges;
  for (const EdgeGerm& germ : rd.germs)
    if (germ.vertex == v4 && !germ.free_edge) fixed_edges.push_back(germ.index);
  if (fixed_edges.size() != 3) throw std::logic_error("mult_closed: type B needs exactly three fixed germs");
  const Region& rv4 = rd.regions[static_cast<std::size_t>(rd.region_of_vertex[static_cast<std::size_t>(v4)])];
  long long g = 0;
  for (int e : rv4.bounded_edges) {
    const MarkedTree::Edge& ed = tree.edges[static_cast<std::size_t>(e)];
    const bool near_removed = rd.region_of_vertex[static_cast<std::size_t>(ed.near)] < 0;
    const bool far_removed = rd.region_of_vertex[static_cast<std::size_t>(ed.far)] < 0;
    if (!near_removed && !far_removed) continue;
    for (std::size_t i = 0; i < 3; ++i) {
      // e lies behind fixed germ i when one of its sides nests inside the
      // side of that germ away from the 4-valent vertex.
      const int f = fixed_edges[i];
      const std::uint32_t full = (1u << p.marking_count()) - 1u;
      const std::uint32_t fmask = p.type().splits()[static_cast<std::size_t>(f)].mask();
      const std::uint32_t behind = p.vertex_on_split_side(f, v4) ? (full & ~fmask) : fmask;
      const std::uint32_t emask = p.type().splits()[static_cast<std::size_t>(e)].mask();
      const bool is_behind = (emask & behind) == emask || ((full & ~emask) & behind) == (full & ~emask);
      if (!is_behind) continue;
      const Vec2 v1 = p.direction_away_from(fixed_edges[(i + 1) % 3], v4);
      const Vec2 v2 = p.direction_away_from(fixed_edges[(i + 2) % 3], v4);
      const long long term =
          checked_mul64(detail::weight_of_direction(p.edge_direction(e)), vertex_mult(v1, v2));
      g = gcd64(g, term);
      break;
    }
  }
  if (g == 0) throw std::logic_error("mult_closed: type B found no marked edge behind a fixed germ");
  return checked_mul64(g, vertex_product);
}

// Image cone of one type under evaluation, after killing the two-dimensional
// translation lineality by moving h(x_1) to the origin: one primitive ray per
// bounded edge, recorded in the coordinates of h(x_2)..h(x_n) and lex-sorted.
struct ImageCell {
  std::vector<std::vector<long long>> rays;
  long long weight = 0;
};

struct PushforwardResult {
  std::vector<ImageCell> cells;
  // Pairs of distinct cells where a ray of one passes strictly inside the
  // other: the image is then not a fan of the listed cones without further
  // refinement. Detection only; no subdivision is attempted.
  std::vector<std::pair<std::size_t, std::size_t>> overlap_warnings;
};

namespace detail {

inline std::vector<std::vector<long long>> image_rays(const ParamType& p) {
  std::vector<std::vector<long long>> rays;
  rays.reserve(static_cast<std::size_t>(p.bounded_edge_count()));
  for (int e = 0; e < p.bounded_edge_count(); ++e) {
    std::vector<long long> ray(static_cast<std::size_t>(2 * (p.n() - 1)), 0);
    const Vec2& u = p.edge_direction(e);
    for (int i = 2; i <= p.n(); ++i) {
      if (!p.label_behind(e, i)) continue;
      ray[static_cast<std::size_t>(2 * (i - 2))] = u.x;
      ray[static_cast<std::size_t>(2 * (i - 2) + 1)] = u.y;
    }
    long long g = 0;
    for (long long c : ray) g = gcd64(g, std::llabs(c));
    if (g > 1)
      for (long long& c : ray) c /= g;
    rays.push_back(std::move(ray));
  }
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

// Does some ray of `a` point strictly into the relative interior of the
// simplicial cone spanned by `b`?
inline bool ray_strictly_inside(const ImageCell& a, const ImageCell& b) {
  if (b.rays.empty()) return false;
  const int dim = static_cast<int>(b.rays[0].size());
  IntMatrix m(dim, static_cast<int>(b.rays.size()));
  for (int j = 0; j < static_cast<int>(b.rays.size()); ++j)
    for (int i = 0; i < dim; ++i) m(i, j) = Int(b.rays[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
  for (const std::vector<long long>& r : a.rays) {
    std::vector<Int> rhs;
    rhs.reserve(r.size());
    for (long long c : r) rhs.emplace_back(c);
    const std::optional<RatVector> sol = solve_q(m, rhs);
    if (!sol) continue;
    bool all_positive = true;
    for (const Rat& c : *sol)
      if (!(c > 0)) {
        all_positive = false;
        break;
      }
    if (all_positive) return true;
  }
  return false;
}

}  // namespace detail

// Push a codimension-one cycle on M_{0,n+m} x R^2 forward along the total
// evaluation map: each cone with injective ev contributes its canonical image
// cell weighted by (cycle weight) x (lattice index of the evaluation image);
// equal cells merge by adding weights and cells with weight zero disappear.
inline PushforwardResult pushforward_codim1(const Cycle& z, const Degree& degree) {
  const int n = degree.size() - 1;
  if (n < 1) throw std::invalid_argument("pushforward_codim1: degree needs at least two ends");
  if (z.n() != n + degree.size())
    throw std::invalid_argument("pushforward_codim1: cycle lives on the wrong marking count");
  if (z.dim() != z.n() - 4)
    throw std::invalid_argument("pushforward_codim1: cycle must be of codimension one");

  std::map<std::vector<std::vector<long long>>, long long> acc;
  for (const auto& [type, weight] : z.weights()) {
    ParamType p(n, degree, type);
    const long long mult = mult_direct(p);
    if (mult == 0) continue;
    auto& slot = acc[detail::image_rays(p)];
    slot = checked_add64(slot, checked_mul64(weight, mult));
  }

  PushforwardResult out;
  for (auto& [rays, weight] : acc) {
    if (weight == 0) continue;
    out.cells.push_back({rays, weight});
  }
  for (std::size_t i = 0; i < out.cells.size(); ++i)
    for (std::size_t j = 0; j < out.cells.size(); ++j) {
      if (i == j) continue;
      if (detail::ray_strictly_inside(out.cells[i], out.cells[j])) out.overlap_warnings.emplace_back(i, j);
    }
  return out;
}

enum class SpecialVersion { v1, v2 };

// The locus of point configurations in special position, as a weighted
// collection of codimension-one cells in R^{2n}: v1 pushes the psi-divisor
// sum forward, v2 the full codimension-one skeleton.
inline PushforwardResult special_position(const Degree& degree, SpecialVersion version) {
  const int m = degree.size();
  const int n = m - 1;
  if (n < 2) throw std::invalid_argument("special_position: needs at least two contracted markings");
  const int total = n + m;
  if (version == SpecialVersion::v2) return pushforward_codim1(skeleton(total, 1), degree);
  Cycle sum = psi(1, total);
  for (int i = 2; i <= n; ++i) sum = add_cycles(sum, psi(i, total));
  return pushforward_codim1(sum, degree);
}

}  // namespace tropmod
