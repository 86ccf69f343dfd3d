#pragma once

// Local Moebius function of a pattern set, its generating polynomial, the
// universal torsor class and the local density identity.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "toricurves/error.hpp"
#include "toricurves/fan.hpp"
#include "toricurves/int_poly.hpp"
#include "toricurves/laurent.hpp"

namespace toricurves {

/// mu on {0,1}^k, indexed by support bitmask. Values outside {0,1}^k are zero.
class MobiusTable {
 public:
  MobiusTable() = default;
  MobiusTable(std::size_t nvars, std::vector<long long> values) : nvars_(nvars), values_(std::move(values)) {}

  std::size_t nvars() const { return nvars_; }
  long long at_mask(std::uint32_t mask) const { return values_.at(mask); }

  /// mu(n) for any n in N^k (zero when some entry exceeds 1).
  long long operator()(const Exponent& n) const {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] < 0 || n[i] > 1) return 0;
      if (n[i] == 1) mask |= 1U << i;
    }
    return values_.at(mask);
  }

  /// Masks ordered by Hamming weight then lexicographically on the 0/1 vector.
  std::vector<std::uint32_t> ordered_masks() const {
    std::vector<std::uint32_t> masks(values_.size());
    std::iota(masks.begin(), masks.end(), 0U);
    const std::size_t k = nvars_;
    std::stable_sort(masks.begin(), masks.end(), [k](std::uint32_t a, std::uint32_t b) {
      const int wa = std::popcount(a), wb = std::popcount(b);
      if (wa != wb) return wa < wb;
      for (std::size_t i = 0; i < k; ++i) {
        const unsigned ba = (a >> i) & 1U, bb = (b >> i) & 1U;
        if (ba != bb) return ba > bb;
      }
      return false;
    });
    return masks;
  }

  const std::vector<long long>& values() const { return values_; }

  friend bool operator==(const MobiusTable&, const MobiusTable&) = default;

 private:
  std::size_t nvars_ = 0;
  std::vector<long long> values_;
};

/// Inverts the indicator of "lies above no pattern" with the subset Moebius transform.
inline MobiusTable mobius_table(const PatternSet& patterns) {
  const std::size_t k = patterns.nvars;
  if (k > 24) throw BudgetError("mobius table limited to 24 rays");
  const std::uint32_t total = 1U << k;
  std::vector<long long> v(total);
  for (std::uint32_t m = 0; m < total; ++m) v[m] = patterns.lies_above_mask(m) ? 0 : 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::uint32_t m = 0; m < total; ++m)
      if ((m >> i) & 1U) v[m] -= v[m ^ (1U << i)];
  return MobiusTable(k, std::move(v));
}

inline IntPoly generating_polynomial(const MobiusTable& table) {
  IntPoly p(table.nvars());
  for (std::uint32_t m = 0; m < table.values().size(); ++m)
    if (table.values()[m] != 0) p.add(PatternSet::to_vector(m, table.nvars()), to_big(table.values()[m]));
  return p;
}

/// Complement in A^k of the coordinate subspaces {x_J = 0}, J minimal, by
/// inclusion-exclusion; checked against L^k P(L^{-1}).
inline LaurentClass torsor_class(const PatternSet& patterns, const IntPoly& generating) {
  const int k = static_cast<int>(patterns.nvars);
  // signed count of subfamilies of minimal members, keyed by their union
  std::map<std::uint32_t, long long> unions{{0U, 1}};
  for (std::uint32_t j : patterns.minimal) {
    auto next = unions;
    for (const auto& [u, c] : unions) next[u | j] -= c;
    unions = std::move(next);
  }
  LaurentClass out;
  for (const auto& [u, c] : unions) out += LaurentClass::monomial(k - std::popcount(u), to_big(c));
  const LaurentClass check = generating.specialize_all(-1).shifted(k);
  if (!(out == check))
    throw ConsistencyError("torsor class mismatch: inclusion-exclusion gives " + out.to_string() + ", generating polynomial gives " +
                           check.to_string());
  return out;
}

inline LaurentClass torsor_class(const PatternSet& patterns) {
  return torsor_class(patterns, generating_polynomial(mobius_table(patterns)));
}

struct LocalIdentityResult {
  bool holds = false;
  LaurentClass lhs;  // P(L^{-1}, ..., L^{-1})
  LaurentClass rhs;  // [V] L^{-n} (1 - L^{-1})^r
  LaurentClass diff;
};

inline LocalIdentityResult local_identity_check(const Fan& fan) {
  const PatternSet ps = pattern_set(fan);
  const IntPoly p = generating_polynomial(mobius_table(ps));
  const int n = fan.dim;
  const int r = static_cast<int>(fan.nrays()) - n;
  LocalIdentityResult res;
  res.lhs = p.specialize_all(-1);
  const LaurentClass one_minus = LaurentClass::constant(1) - LaurentClass::L(-1);
  res.rhs = class_of_variety(fan).shifted(-n) * one_minus.pow(static_cast<unsigned>(r));
  res.diff = res.lhs - res.rhs;
  res.holds = res.diff.is_zero();
  return res;
}

/// Pairs of rays spanning no cone: the edges of the nonintersection graph.
inline std::vector<std::vector<bool>> nonintersection_graph(const PatternSet& patterns) {
  const std::size_t k = patterns.nvars;
  std::vector<std::vector<bool>> adj(k, std::vector<bool>(k, false));
  for (std::uint32_t j : patterns.minimal)
    if (std::popcount(j) == 2) {
      const int a = std::countr_zero(j);
      const int b = std::countr_zero(j & (j - 1));
      adj[a][b] = adj[b][a] = true;
    }
  return adj;
}

/// mu values grouped by isomorphism type of the induced nonintersection subgraph.
struct MobiusIsoClass {
  int size = 0;
  std::string canonical;  // adjacency bits of the lexicographically largest relabeling
  int edges = 0;
  bool connected = false;
  std::set<long long> values;
  int members = 0;
};

inline std::vector<MobiusIsoClass> mobius_by_isomorphism_class(const MobiusTable& table, const PatternSet& patterns,
                                                               int max_support = 8) {
  const auto adj = nonintersection_graph(patterns);
  std::map<std::pair<int, std::string>, MobiusIsoClass> groups;
  for (std::uint32_t m = 0; m < table.values().size(); ++m) {
    const int sz = std::popcount(m);
    if (sz > max_support) continue;
    std::vector<int> verts;
    for (std::size_t i = 0; i < table.nvars(); ++i)
      if ((m >> i) & 1U) verts.push_back(static_cast<int>(i));
    std::vector<int> perm(verts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
      std::string bits;
      for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b) bits += adj[verts[perm[a]]][verts[perm[b]]] ? '1' : '0';
      best = std::max(best, bits);
    } while (std::next_permutation(perm.begin(), perm.end()));
    auto& g = groups[{sz, best}];
    g.size = sz;
    g.canonical = best;
    g.edges = static_cast<int>(std::count(best.begin(), best.end(), '1'));
    ++g.members;
    g.values.insert(table.at_mask(m));
    // connectivity of the induced subgraph
    std::uint32_t seen = verts.empty() ? 0U : (1U << verts[0]);
    for (bool grew = true; grew;) {
      grew = false;
      for (int a : verts)
        if ((seen >> a) & 1U)
          for (int b : verts)
            if (adj[a][b] && !((seen >> b) & 1U)) {
              seen |= 1U << b;
              grew = true;
            }
    }
    g.connected = verts.empty() || seen == m;
  }
  std::vector<MobiusIsoClass> out;
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace toricurves
