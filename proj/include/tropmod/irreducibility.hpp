#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tropmod/combtypes.hpp"
#include "tropmod/exactlin.hpp"
#include "tropmod/modulifan.hpp"

namespace tropmod {

// The space of weightings allowed around one face: all coefficient vectors
// (a_sigma) over the adjacent cones sigma with
//   Sigma a_sigma * tilde_v(split that sigma adds)
// lying in the span of the face's rays plus the lineality space.
struct LocalSolutionSpace {
  CombType face;
  std::vector<CombType> cones;  // adjacent cones of the support, sorted
  std::vector<Split> normals;   // the split each cone adds over the face
  int dimension = 0;
  // Basis of the possible (a_sigma), primitive integers, leading entry > 0.
  std::vector<std::vector<Int>> basis;
  // For each basis vector the full solution (a | b | c) of
  //   Sigma a_i tilde_v(normal_i) = Sigma b_j ray_j + Sigma c_l d_l,
  // normalized separately; coordinates are cones, then face rays, then d_1..d_n.
  std::vector<std::vector<Int>> full_basis;
};

struct LocalIrreducibility {
  bool locally_irreducible = false;
  std::map<CombType, int> face_dimensions;  // codim-1 face -> solution dimension
};

struct Connectivity {
  int component_count = 0;
  std::vector<std::vector<CombType>> components;  // ordered by least member
};

struct WeightSpace {
  std::vector<CombType> cones;  // sorted support, the coordinate order
  int dimension = 0;
  std::vector<std::vector<Int>> basis;  // primitive integers, leading entry > 0
};

struct IrreducibilityReport {
  std::vector<CombType> support;
  bool locally_irreducible = false;
  std::map<CombType, int> face_dimensions;
  bool connected = false;
  int component_count = 0;
  int weight_space_dim = 0;
  std::vector<std::vector<Int>> weight_space_basis;
  bool weights_span = false;  // the cycle's own weights generate the weight space
  bool globally_irreducible = false;
};

// A minimal rationally dependent subset of a list of lattice vectors.
struct Circuit {
  std::vector<int> support;        // indices into the input list, increasing
  std::vector<Int> coefficients;   // primitive integers, leading entry > 0
};

inline std::vector<CombType> support_cones(const Cycle& x) {
  std::vector<CombType> out;
  out.reserve(x.weights().size());
  for (const auto& [cone, w] : x.weights()) out.push_back(cone);
  return out;
}

namespace detail {

inline std::vector<Int> primitive_ints(RatVector v) {
  v = make_primitive(std::move(v));
  std::vector<Int> out;
  out.reserve(v.size());
  for (const Rat& x : v) out.push_back(Int(numerator(x)));
  return out;
}

inline std::vector<CombType> sorted_support(std::vector<CombType> support, const char* who) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (const CombType& t : support) {
    if (t.n() != support.front().n())
      throw std::invalid_argument(std::string(who) + ": mixed marking counts in the support");
    if (t.dim() != support.front().dim())
      throw std::invalid_argument(std::string(who) + ": support is not pure-dimensional");
  }
  return support;
}

// Columns: the added-ray vector of every adjacent cone, then the face's rays
// and the lineality generators with flipped sign, so that a kernel vector
// literally solves  Sigma a * normal = Sigma b * ray + Sigma c * d.
inline IntMatrix face_system_matrix(const CombType& face, const std::vector<Split>& normals) {
  const int n = face.n();
  const int np = pair_count(n);
  const int m = static_cast<int>(normals.size());
  const int k = face.dim();
  IntMatrix a(np, m + k + n);
  auto put = [&](int col, std::uint32_t mask, long long coef) {
    std::vector<long long> v(static_cast<std::size_t>(np), 0);
    add_side_vector(n, mask, coef, v);
    for (int i = 0; i < np; ++i) a(i, col) = v[static_cast<std::size_t>(i)];
  };
  for (int j = 0; j < m; ++j) put(j, normals[static_cast<std::size_t>(j)].mask(), 1);
  for (int j = 0; j < k; ++j) put(m + j, face.splits()[static_cast<std::size_t>(j)].mask(), -1);
  for (int l = 0; l < n; ++l) put(m + k + l, std::uint32_t{1} << l, -1);
  return a;
}

inline LocalSolutionSpace face_solution_space(CombType face, std::vector<CombType> cones,
                                              std::vector<Split> normals) {
  const int m = static_cast<int>(cones.size());
  const std::vector<RatVector> ker = nullspace_q(face_system_matrix(face, normals));
  LocalSolutionSpace out{std::move(face), std::move(cones), std::move(normals),
                         static_cast<int>(ker.size()), {}, {}};
  // The face rays together with the lineality generators are independent, so
  // restricting a solution to its a-part loses nothing: the projected vectors
  // below are again a basis.
  for (const RatVector& v : ker) {
    out.basis.push_back(primitive_ints(RatVector(v.begin(), v.begin() + m)));
    out.full_basis.push_back(primitive_ints(v));
  }
  return out;
}

// For every codim-1 face of a support cone: which cones touch it, and with
// which added split.
struct FaceStar {
  std::vector<int> cone_index;
  std::vector<Split> extra;
};

inline std::map<CombType, FaceStar> support_face_stars(const std::vector<CombType>& support) {
  std::map<CombType, FaceStar> stars;
  for (std::size_t ci = 0; ci < support.size(); ++ci) {
    const auto& splits = support[ci].splits();
    for (std::size_t k = 0; k < splits.size(); ++k) {
      std::vector<Split> rest;
      rest.reserve(splits.size() - 1);
      for (std::size_t j = 0; j < splits.size(); ++j)
        if (j != k) rest.push_back(splits[j]);
      CombType tau(support[ci].n(), std::move(rest));
      FaceStar& st = stars.try_emplace(std::move(tau)).first->second;
      st.cone_index.push_back(static_cast<int>(ci));
      st.extra.push_back(splits[k]);
    }
  }
  return stars;
}

inline LocalSolutionSpace star_solution_space(const std::vector<CombType>& support,
                                              const CombType& face, const FaceStar& star) {
  std::vector<CombType> cones;
  cones.reserve(star.cone_index.size());
  for (int ci : star.cone_index) cones.push_back(support[static_cast<std::size_t>(ci)]);
  return face_solution_space(face, std::move(cones), star.extra);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Incremental row echelon over Q for sparse rows. Rows are kept sorted by
// column with a unit leading entry; only forward elimination is performed,
// which is enough to read off rank and kernel.
class SparseEchelon {
 public:
  using Row = std::vector<std::pair<int, Rat>>;

  explicit SparseEchelon(int cols) : cols_(cols) {}

  void add_row(Row row) {
    while (!row.empty()) {
      auto it = rows_.find(row.front().first);
      if (it == rows_.end()) {
        const Rat lead = row.front().second;
        for (auto& [c, v] : row) v /= lead;
        rows_.emplace(row.front().first, std::move(row));
        return;
      }
      const Rat f = row.front().second;
      row = subtract_multiple(std::move(row), it->second, f);
    }
  }

  int rank() const { return static_cast<int>(rows_.size()); }

  std::vector<RatVector> kernel() const {
    std::vector<RatVector> out;
    for (int f = 0; f < cols_; ++f) {
      if (rows_.count(f)) continue;
      RatVector x(static_cast<std::size_t>(cols_), Rat(0));
      x[static_cast<std::size_t>(f)] = 1;
      for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
        if (it->first > f) continue;  // those coordinates stay zero
        Rat s = 0;
        for (const auto& [c, v] : it->second)
          if (c != it->first) s += v * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(it->first)] = -s;
      }
      out.push_back(std::move(x));
    }
    return out;
  }

 private:
  static Row subtract_multiple(Row row, const Row& pivot, const Rat& f) {
    Row out;
    out.reserve(row.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < pivot.size()) {
      if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
        out.push_back(std::move(row[i++]));
      } else if (i == row.size() || pivot[j].first < row[i].first) {
        out.emplace_back(pivot[j].first, -f * pivot[j].second);
        ++j;
      } else {
        Rat v = row[i].second - f * pivot[j].second;
        if (!v.is_zero()) out.emplace_back(row[i].first, std::move(v));
        ++i, ++j;
      }
    }
    return out;
  }

  int cols_;
  std::map<int, Row> rows_;
};

}  // namespace detail

// All weightings of the support cones adjacent to `tau` that balance there.
inline LocalSolutionSpace local_solution_space(const std::vector<CombType>& support,
                                               const CombType& tau) {
  std::vector<CombType> sorted = detail::sorted_support(support, "local_solution_space");
  std::vector<CombType> cones;
  std::vector<Split> extras;
  for (const CombType& sigma : sorted) {
    if (sigma.n() != tau.n())
      throw std::invalid_argument("local_solution_space: face for a different marking count");
    if (sigma.dim() != tau.dim() + 1) continue;
    if (!std::includes(sigma.splits().begin(), sigma.splits().end(), tau.splits().begin(),
                       tau.splits().end()))
      continue;
    for (const Split& s : sigma.splits())
      if (!std::binary_search(tau.splits().begin(), tau.splits().end(), s)) extras.push_back(s);
    cones.push_back(sigma);
  }
  if (cones.empty())
    throw std::invalid_argument("local_solution_space: not a face of any support cone");
  return detail::face_solution_space(tau, std::move(cones), std::move(extras));
}

// A cycle is locally irreducible when every codim-1 face of its support
// admits exactly one balanced weighting up to scale.
inline LocalIrreducibility is_locally_irreducible(const Cycle& x) {
  if (x.dim() < 1)
    throw std::invalid_argument("is_locally_irreducible: needs a cycle of dimension at least 1");
  const std::vector<CombType> support = support_cones(x);
  LocalIrreducibility out;
  out.locally_irreducible = true;
  for (const auto& [face, star] : detail::support_face_stars(support)) {
    const int dim = detail::star_solution_space(support, face, star).dimension;
    out.face_dimensions.emplace(face, dim);
    if (dim != 1) out.locally_irreducible = false;
  }
  return out;
}

// Components of the support under the relation of sharing a (dim-1)-face,
// i.e. of having all but one split in common.
inline Connectivity connectivity_components(const Cycle& x) {
  const std::vector<CombType> support = support_cones(x);
  Connectivity out;
  if (support.empty()) return out;
  detail::UnionFind uf(static_cast<int>(support.size()));
  if (x.dim() >= 1) {
    for (const auto& [face, star] : detail::support_face_stars(support))
      for (std::size_t i = 1; i < star.cone_index.size(); ++i)
        uf.unite(star.cone_index[0], star.cone_index[i]);
  }
  std::map<int, int> component_of_root;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int root = uf.find(static_cast<int>(i));
    auto [it, fresh] = component_of_root.try_emplace(root, static_cast<int>(out.components.size()));
    if (fresh) out.components.emplace_back();
    out.components[static_cast<std::size_t>(it->second)].push_back(support[i]);
  }
  out.component_count = static_cast<int>(out.components.size());
  return out;
}

// All rational weight functions on the support that balance at every codim-1
// face, as a primitive integer basis. A cycle with support S is irreducible
// exactly when this space is one-dimensional.
inline WeightSpace weight_space(const std::vector<CombType>& support) {
  WeightSpace out;
  out.cones = detail::sorted_support(support, "weight_space");
  const int count = static_cast<int>(out.cones.size());
  if (count == 0) return out;
  if (out.cones.front().dim() == 0) {
    // a point has no faces, so any weight works
    out.dimension = count;
    for (int i = 0; i < count; ++i) {
      std::vector<Int> unit(static_cast<std::size_t>(count), 0);
      unit[static_cast<std::size_t>(i)] = 1;
      out.basis.push_back(std::move(unit));
    }
    return out;
  }

  detail::SparseEchelon ech(count);
  for (const auto& [face, star] : detail::support_face_stars(out.cones)) {
    const LocalSolutionSpace local = detail::star_solution_space(out.cones, face, star);
    const int m = static_cast<int>(star.cone_index.size());
    if (local.dimension == m) continue;  // no condition at this face
    // rows annihilating the local space, spread out to the support coordinates
    IntMatrix b(local.dimension, m);
    for (int i = 0; i < local.dimension; ++i)
      for (int j = 0; j < m; ++j)
        b(i, j) = local.basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (RatVector& y : nullspace_q(b)) {
      y = detail::make_primitive(std::move(y));
      detail::SparseEchelon::Row row;
      for (int j = 0; j < m; ++j)
        if (!y[static_cast<std::size_t>(j)].is_zero())
          row.emplace_back(star.cone_index[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(j)]);
      ech.add_row(std::move(row));
    }
  }
  for (const RatVector& v : ech.kernel()) out.basis.push_back(detail::primitive_ints(v));
  out.dimension = static_cast<int>(out.basis.size());
  return out;
}

// Full verdict: global irreducibility is decided by the weight space being a
// line; local irreducibility plus connectedness is the sufficient criterion
// and is reported alongside.
inline IrreducibilityReport is_globally_irreducible(const Cycle& x) {
  IrreducibilityReport r;
  r.support = support_cones(x);
  if (r.support.empty()) return r;  // the zero cycle: nothing holds

  if (x.dim() == 0) {
    r.locally_irreducible = true;  // no faces to obstruct
  } else {
    LocalIrreducibility local = is_locally_irreducible(x);
    r.locally_irreducible = local.locally_irreducible;
    r.face_dimensions = std::move(local.face_dimensions);
  }

  r.component_count = connectivity_components(x).component_count;
  r.connected = r.component_count == 1;

  WeightSpace ws = weight_space(r.support);
  r.weight_space_dim = ws.dimension;
  r.weight_space_basis = std::move(ws.basis);
  r.globally_irreducible = r.weight_space_dim == 1;

  if (r.weight_space_dim == 1) {
    RatVector w, gen;
    w.reserve(r.support.size());
    for (const CombType& cone : r.support) w.emplace_back(x.weights().at(cone));
    for (const Int& c : r.weight_space_basis.front()) gen.emplace_back(c);
    r.weights_span = in_span_q(w, {gen});
  }
  return r;
}

// All minimal dependent subsets of the given vectors, by exhaustive search in
// order of size; a dependent set that contains no smaller circuit is itself
// one, with a unique dependency up to scale.
inline std::vector<Circuit> circuits(const std::vector<LatticeVector>& vectors,
                                     bool modulo_lineality) {
  const int count = static_cast<int>(vectors.size());
  if (count == 0) return {};
  if (count > 16) throw std::invalid_argument("circuits: too many vectors for exhaustive search");
  const int n = vectors.front().n;
  for (const LatticeVector& v : vectors)
    if (v.n != n) throw std::invalid_argument("circuits: mixed marking counts");
  const int np = pair_count(n);
  const int extra = modulo_lineality ? n : 0;

  std::vector<Circuit> found;
  std::vector<std::uint32_t> masks;
  for (int s = 1; s <= count; ++s) {
    std::vector<int> idx(static_cast<std::size_t>(s));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::uint32_t mask = 0;
      for (int i : idx) mask |= std::uint32_t{1} << i;
      bool contains_circuit = false;
      for (std::uint32_t c : masks) contains_circuit = contains_circuit || (mask & c) == c;
      if (!contains_circuit) {
        IntMatrix a(np, s + extra);
        for (int j = 0; j < s; ++j) {
          const auto& coords = vectors[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].coords;
          for (int i = 0; i < np; ++i) a(i, j) = coords[static_cast<std::size_t>(i)];
        }
        for (int l = 0; l < extra; ++l) {
          std::vector<long long> col(static_cast<std::size_t>(np), 0);
          detail::add_side_vector(n, std::uint32_t{1} << l, 1, col);
          for (int i = 0; i < np; ++i) a(i, s + l) = col[static_cast<std::size_t>(i)];
        }
        const std::vector<RatVector> ker = nullspace_q(a);
        if (!ker.empty()) {
          found.push_back(
              {idx, detail::primitive_ints(RatVector(ker.front().begin(), ker.front().begin() + s))});
          masks.push_back(mask);
        }
      }
      int i = s - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == count - s + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < s; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return found;
}

}  // namespace tropmod
