#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropmod {

namespace detail {

// Lexicographic order on the sorted member lists of two label sets given as
// bitmasks. At the smallest differing label l the owning list shows l while
// the other shows either a larger label (so the owner is smaller) or nothing
// at all (a strict prefix, which is smaller instead).
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t d = a ^ b;
  if (d == 0) return false;
  const int pos = std::countr_zero(d);
  if ((a >> pos) & 1u) return (b >> pos) != 0;
  return (a >> pos) == 0;
}

}  // namespace detail

// One bounded edge's partition of the markings {1..n}. Cutting the edge
// leaves the labels I on one side and I^c on the other; both describe the
// same edge, so we always store the side that avoids label n.
class Split {
 public:
  Split(int n, std::uint32_t side_mask) : n_(n), mask_(side_mask) {
    if (n < 4 || n > 31) throw std::invalid_argument("Split: marking count out of range");
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    if (mask_ & ~full) throw std::invalid_argument("Split: label outside {1..n}");
    if (mask_ >> (n - 1)) mask_ = full & ~mask_;  // stored side must avoid n
    const int sz = std::popcount(mask_);
    if (sz < 2 || sz > n - 2) throw std::invalid_argument("Split: side size outside [2, n-2]");
  }

  Split(int n, const std::vector<int>& labels) : Split(n, labels_to_mask(n, labels)) {}

  int n() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  int size() const { return std::popcount(mask_); }
  bool contains(int label) const { return (mask_ >> (label - 1)) & 1u; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 1; i <= n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const Split& a, const Split& b) { return a.n_ == b.n_ && a.mask_ == b.mask_; }
  friend bool operator!=(const Split& a, const Split& b) { return !(a == b); }
  friend bool operator<(const Split& a, const Split& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return detail::mask_lex_less(a.mask_, b.mask_);
  }

 private:
  static std::uint32_t labels_to_mask(int n, const std::vector<int>& labels) {
    std::uint32_t m = 0;
    for (int l : labels) {
      if (l < 1 || l > n) throw std::invalid_argument("Split: label outside {1..n}");
      const std::uint32_t bit = std::uint32_t{1} << (l - 1);
      if (m & bit) throw std::invalid_argument("Split: repeated label");
      m |= bit;
    }
    return m;
  }

  int n_;
  std::uint32_t mask_;
};

// Two splits coexist in one tree iff their stored sides are nested or
// disjoint. (The general criterion also allows the union to be everything,
// but both stored sides avoid label n, so that case cannot occur here.)
inline bool splits_compatible(const Split& a, const Split& b) {
  if (a.n() != b.n()) throw std::invalid_argument("splits_compatible: marking counts differ");
  const std::uint32_t m = a.mask() & b.mask();
  return m == 0 || m == a.mask() || m == b.mask();
}

// A combinatorial type of an n-marked curve: the set of splits of its bounded
// edges. The corresponding cone has dimension |splits|.
class CombType {
 public:
  CombType(int n, std::vector<Split> splits) : n_(n), splits_(std::move(splits)) {
    if (n < 3 || n > 31) throw std::invalid_argument("CombType: marking count out of range");
    for (const Split& s : splits_)
      if (s.n() != n_) throw std::invalid_argument("CombType: split for a different marking count");
    std::sort(splits_.begin(), splits_.end());
    for (std::size_t i = 0; i + 1 < splits_.size(); ++i)
      if (splits_[i] == splits_[i + 1]) throw std::invalid_argument("CombType: repeated split");
    if (static_cast<int>(splits_.size()) > n_ - 3)
      throw std::invalid_argument("CombType: more splits than the dimension bound allows");
    for (std::size_t i = 0; i < splits_.size(); ++i)
      for (std::size_t j = i + 1; j < splits_.size(); ++j)
        if (!splits_compatible(splits_[i], splits_[j]))
          throw std::invalid_argument("CombType: incompatible splits");
  }

  int n() const { return n_; }
  int dim() const { return static_cast<int>(splits_.size()); }
  const std::vector<Split>& splits() const { return splits_; }

  friend bool operator==(const CombType& a, const CombType& b) { return a.n_ == b.n_ && a.splits_ == b.splits_; }
  friend bool operator!=(const CombType& a, const CombType& b) { return !(a == b); }
  friend bool operator<(const CombType& a, const CombType& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return std::lexicographical_compare(a.splits_.begin(), a.splits_.end(), b.splits_.begin(), b.splits_.end());
  }

 private:
  int n_;
  std::vector<Split> splits_;
};

// The tree realizing a combinatorial type, rooted at the vertex carrying
// marking n. Derived view only; all fan logic stays on the split sets.
struct MarkedTree {
  struct Edge {
    int near = 0;  // endpoint on the root side
    int far = 0;   // endpoint on the split side
    Split split;
  };

  int n = 0;
  int num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<int> valence;         // per vertex: incident edges plus markings
  std::vector<int> marking_vertex;  // marking_vertex[i-1] = vertex carrying x_i
};

namespace detail {

// All canonical split masks for n markings, in the order of Split::operator<.
inline std::vector<std::uint32_t> all_split_masks(int n) {
  std::vector<std::uint32_t> out;
  const std::uint32_t lim = std::uint32_t{1} << (n - 1);
  for (std::uint32_t m = 0; m < lim; ++m) {
    const int sz = std::popcount(m);
    if (sz >= 2 && sz <= n - 2) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), mask_lex_less);
  return out;
}

inline bool masks_compatible(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t m = a & b;
  return m == 0 || m == a || m == b;
}

// Appends to `out` every extension of `chosen` by `remaining` further splits
// drawn from candidates[from..], kept in increasing order to visit each set
// once. The candidate list is lex-sorted, so output order is deterministic.
inline void extend_types(int n, const std::vector<std::uint32_t>& candidates, std::size_t from,
                         std::vector<std::uint32_t>& chosen, int remaining, std::vector<CombType>& out) {
  if (remaining == 0) {
    std::vector<Split> splits;
    splits.reserve(chosen.size());
    for (std::uint32_t m : chosen) splits.emplace_back(n, m);
    out.emplace_back(n, std::move(splits));
    return;
  }
  for (std::size_t i = from; i < candidates.size(); ++i) {
    const std::uint32_t c = candidates[i];
    bool ok = true;
    for (std::uint32_t m : chosen)
      if (!masks_compatible(c, m)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    chosen.push_back(c);
    extend_types(n, candidates, i + 1, chosen, remaining - 1, out);
    chosen.pop_back();
  }
}

}  // namespace detail

// All combinatorial types with exactly `dim` bounded edges, in lexicographic
// order on their sorted split lists.
inline std::vector<CombType> enumerate_types(int n, int dim) {
  if (n < 3) throw std::invalid_argument("enumerate_types: need at least 3 markings");
  if (dim < 0 || dim > n - 3) throw std::invalid_argument("enumerate_types: dimension out of range");
  if (dim == 0) return {CombType(n, {})};
  const auto candidates = detail::all_split_masks(n);
  std::vector<CombType> out;
  std::vector<std::uint32_t> chosen;
  detail::extend_types(n, candidates, 0, chosen, dim, out);
  return out;
}

// Reconstructs the unique tree whose bounded-edge splits are T.splits. Each
// split owns the vertex on its far side; the root collects everything that no
// split separates from marking n.
inline MarkedTree tree_from_splits(const CombType& t) {
  const int n = t.n();
  const auto& splits = t.splits();
  const int k = t.dim();

  MarkedTree tree;
  tree.n = n;
  tree.num_vertices = k + 1;
  tree.valence.assign(static_cast<std::size_t>(k) + 1, 0);
  tree.marking_vertex.assign(static_cast<std::size_t>(n), 0);

  // vertex i+1 belongs to splits[i]; its parent is the smallest strict
  // superset, unique because the family is laminar
  for (int i = 0; i < k; ++i) {
    int parent = -1;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const std::uint32_t a = splits[i].mask(), b = splits[j].mask();
      if ((a & b) == a && a != b)
        if (parent < 0 || (splits[j].mask() & splits[parent].mask()) == splits[j].mask()) parent = j;
    }
    MarkedTree::Edge e{parent < 0 ? 0 : parent + 1, i + 1, splits[i]};
    tree.valence[static_cast<std::size_t>(e.near)]++;
    tree.valence[static_cast<std::size_t>(e.far)]++;
    tree.edges.push_back(std::move(e));
  }

  // each marking sits at the vertex of the smallest split containing it
  for (int label = 1; label <= n; ++label) {
    int best = -1;
    for (int i = 0; i < k; ++i)
      if (splits[i].contains(label))
        if (best < 0 || (splits[i].mask() & splits[best].mask()) == splits[i].mask()) best = i;
    const int v = best < 0 ? 0 : best + 1;
    tree.marking_vertex[static_cast<std::size_t>(label - 1)] = v;
    tree.valence[static_cast<std::size_t>(v)]++;
  }
  return tree;
}

// The faces one dimension down: contract one bounded edge, i.e. drop one
// split.
inline std::vector<CombType> codim1_faces(const CombType& t) {
  if (t.dim() < 1) throw std::invalid_argument("codim1_faces: type has no splits to remove");
  std::vector<CombType> out;
  out.reserve(t.splits().size());
  for (std::size_t i = 0; i < t.splits().size(); ++i) {
    std::vector<Split> rest;
    rest.reserve(t.splits().size() - 1);
    for (std::size_t j = 0; j < t.splits().size(); ++j)
      if (j != i) rest.push_back(t.splits()[j]);
    out.emplace_back(t.n(), std::move(rest));
  }
  return out;
}

// All types refining T by `by` additional splits; for by=1 these are exactly
// the cones adjacent to T from one dimension up.
inline std::vector<CombType> resolutions(const CombType& t, int by) {
  if (by < 0 || t.dim() + by > t.n() - 3)
    throw std::invalid_argument("resolutions: requested dimension exceeds the bound");
  if (by == 0) return {t};
  const auto candidates = detail::all_split_masks(t.n());
  std::vector<std::uint32_t> base;
  for (const Split& s : t.splits()) base.push_back(s.mask());

  std::vector<CombType> out;
  std::vector<std::uint32_t> fresh;
  // recursion over fresh splits in increasing order; skip ones already present
  auto step = [&](auto&& self, std::size_t from, int remaining) -> void {
    if (remaining == 0) {
      std::vector<Split> splits;
      splits.reserve(base.size() + fresh.size());
      for (std::uint32_t m : base) splits.emplace_back(t.n(), m);
      for (std::uint32_t m : fresh) splits.emplace_back(t.n(), m);
      out.emplace_back(t.n(), std::move(splits));
      return;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      const std::uint32_t c = candidates[i];
      if (std::find(base.begin(), base.end(), c) != base.end()) continue;
      bool ok = true;
      for (std::uint32_t m : base)
        if (!detail::masks_compatible(c, m)) {
          ok = false;
          break;
        }
      for (std::uint32_t m : fresh)
        if (ok && !detail::masks_compatible(c, m)) ok = false;
      if (!ok) continue;
      fresh.push_back(c);
      self(self, i + 1, remaining - 1);
      fresh.pop_back();
    }
  };
  step(step, 0, by);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tropmod
