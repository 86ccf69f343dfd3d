#pragma once

// Smooth complete fans: ingestion, validation, faces, Picard lattice,
// the pattern set of non-cone supports, and the dual of the effective cone.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "toricurves/error.hpp"
#include "toricurves/integer_matrix.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/multi_series.hpp"

namespace toricurves {

/// Rays index variables in every downstream computation, in the given order.
struct Fan {
  int dim = 0;
  std::vector<std::vector<long long>> rays;
  std::vector<std::vector<int>> max_cones;  // each sorted ascending

  std::size_t nrays() const { return rays.size(); }

  std::uint32_t cone_mask(std::size_t i) const {
    std::uint32_t m = 0;
    for (int a : max_cones[i]) m |= 1U << a;
    return m;
  }

  friend bool operator==(const Fan&, const Fan&) = default;
};

inline Fan parse_fan(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("rays") || !doc.contains("max_cones"))
    throw ValidationError("malformed fan: expected an object with \"rays\" and \"max_cones\"");
  const auto& jr = doc.at("rays");
  const auto& jc = doc.at("max_cones");
  if (!jr.is_array() || jr.empty()) throw ValidationError("malformed fan: \"rays\" must be a nonempty list");
  if (!jc.is_array() || jc.empty()) throw ValidationError("malformed fan: \"max_cones\" must be a nonempty list");

  Fan fan;
  for (std::size_t i = 0; i < jr.size(); ++i) {
    const auto& ray = jr[i];
    if (!ray.is_array() || ray.empty()) throw ValidationError("malformed fan: ray " + std::to_string(i) + " is not a vector");
    std::vector<long long> v;
    for (const auto& x : ray) {
      if (!x.is_number_integer()) throw ValidationError("malformed fan: ray " + std::to_string(i) + " has a non-integer entry");
      v.push_back(x.get<long long>());
    }
    if (fan.rays.empty()) {
      fan.dim = static_cast<int>(v.size());
    } else if (static_cast<int>(v.size()) != fan.dim) {
      throw ValidationError("malformed fan: ray " + std::to_string(i) + " has the wrong length");
    }
    long long g = 0;
    for (long long x : v) g = std::gcd(g, x);
    if (g != 1) throw ValidationError("non-primitive ray at index " + std::to_string(i));
    if (std::find(fan.rays.begin(), fan.rays.end(), v) != fan.rays.end())
      throw ValidationError("duplicate ray at index " + std::to_string(i));
    fan.rays.push_back(std::move(v));
  }
  if (fan.rays.size() > 31) throw ValidationError("fan has more than 31 rays");

  for (std::size_t i = 0; i < jc.size(); ++i) {
    const auto& cone = jc[i];
    if (!cone.is_array() || cone.empty()) throw ValidationError("malformed fan: cone " + std::to_string(i) + " is not an index list");
    std::vector<int> idx;
    for (const auto& x : cone) {
      if (!x.is_number_integer()) throw ValidationError("malformed fan: cone " + std::to_string(i) + " has a non-integer index");
      const long long a = x.get<long long>();
      if (a < 0 || a >= static_cast<long long>(fan.rays.size()))
        throw ValidationError("cone " + std::to_string(i) + " references out-of-range ray index " + std::to_string(a));
      idx.push_back(static_cast<int>(a));
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      throw ValidationError("cone " + std::to_string(i) + " repeats a ray index");
    fan.max_cones.push_back(std::move(idx));
  }
  return fan;
}

inline Fan parse_fan_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed fan JSON: ") + e.what());
  }
  return parse_fan(doc);
}

inline Fan load_fan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read fan file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_fan_string(buf.str());
}

inline nlohmann::json fan_to_json(const Fan& fan) {
  return {{"rays", fan.rays}, {"max_cones", fan.max_cones}};
}

struct FanReport {
  bool smooth = false;
  bool complete = false;
  std::vector<std::string> details;
  std::vector<std::string> warnings;

  bool ok() const { return smooth && complete; }
};

namespace detail {

inline std::vector<std::vector<long long>> cone_columns(const Fan& fan, const std::vector<int>& cone) {
  std::vector<std::vector<long long>> cols;
  for (int a : cone) cols.push_back(fan.rays[a]);
  return cols;
}

inline bool direction_in_cone(const Fan& fan, const std::vector<int>& cone, const std::vector<long long>& v) {
  auto x = solve_columns(cone_columns(fan, cone), v);
  if (!x) return false;
  return std::all_of(x->begin(), x->end(), [](const Rational& c) { return c >= 0; });
}

}  // namespace detail

/// Smoothness, the wall condition, facet connectivity and a seeded sample of
/// random directions. Projectivity is not checked.
inline FanReport validate(const Fan& fan, std::uint64_t seed = 0, int samples = 256) {
  FanReport rep;
  const int n = fan.dim;
  rep.smooth = true;
  for (std::size_t i = 0; i < fan.max_cones.size(); ++i) {
    const auto& cone = fan.max_cones[i];
    if (static_cast<int>(cone.size()) != n) {
      rep.smooth = false;
      rep.details.push_back("cone " + std::to_string(i) + " has " + std::to_string(cone.size()) + " rays, expected " +
                            std::to_string(n));
      continue;
    }
    const BigInt det = determinant(transpose(detail::cone_columns(fan, cone)));
    if (abs(det) != 1) {
      rep.smooth = false;
      rep.details.push_back("cone " + std::to_string(i) + " has determinant " + det.get_str());
    }
  }

  bool complete = rep.smooth;
  if (!rep.smooth) rep.details.push_back("completeness not checked for a non-smooth fan");
  if (complete) {
    std::map<std::vector<int>, std::vector<std::size_t>> facets;
    for (std::size_t i = 0; i < fan.max_cones.size(); ++i) {
      const auto& cone = fan.max_cones[i];
      for (std::size_t drop = 0; drop < cone.size(); ++drop) {
        std::vector<int> f;
        for (std::size_t j = 0; j < cone.size(); ++j)
          if (j != drop) f.push_back(cone[j]);
        facets[f].push_back(i);
      }
    }
    std::vector<std::vector<std::size_t>> adj(fan.max_cones.size());
    for (const auto& [f, owners] : facets) {
      if (owners.size() != 2) {
        complete = false;
        std::string s = "facet {";
        for (std::size_t j = 0; j < f.size(); ++j) s += (j ? "," : "") + std::to_string(f[j]);
        rep.details.push_back(s + "} lies in " + std::to_string(owners.size()) + " maximal cone(s), expected 2");
        continue;
      }
      adj[owners[0]].push_back(owners[1]);
      adj[owners[1]].push_back(owners[0]);
    }
    std::vector<bool> seen(fan.max_cones.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      for (std::size_t o : adj[c])
        if (!seen[o]) {
          seen[o] = true;
          stack.push_back(o);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      complete = false;
      rep.details.push_back("facet adjacency graph is disconnected");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> dist(-1000, 1000);
    int missed = 0;
    for (int k = 0; k < samples; ++k) {
      std::vector<long long> v(n);
      do {
        for (auto& x : v) x = dist(rng);
      } while (std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; }));
      bool found = false;
      for (const auto& cone : fan.max_cones)
        if (detail::direction_in_cone(fan, cone, v)) {
          found = true;
          break;
        }
      if (!found) ++missed;
    }
    if (missed > 0) {
      complete = false;
      rep.details.push_back(std::to_string(missed) + " of " + std::to_string(samples) +
                            " sampled directions lie in no maximal cone");
    }
  }
  rep.complete = complete;
  if (rep.smooth && !rep.complete) rep.details.push_back("fan is not complete");
  if (rep.ok()) rep.warnings.push_back("projectivity is not checked; smooth complete fans are accepted as is");
  return rep;
}

/// Throws ValidationError unless the fan is smooth and complete.
inline void require_valid(const Fan& fan, std::uint64_t seed = 0) {
  const FanReport rep = validate(fan, seed);
  if (rep.ok()) return;
  std::string msg = rep.smooth ? "fan is not complete" : "fan is not smooth";
  for (const auto& d : rep.details) msg += "; " + d;
  throw ValidationError(msg);
}

/// f_k = number of k-element faces (the zero cone counts as f_0 = 1).
inline std::vector<long long> enumerate_cones(const Fan& fan) {
  for (const auto& c : fan.max_cones)
    if (static_cast<int>(c.size()) != fan.dim) throw ValidationError("fan is not simplicial");
  std::set<std::uint32_t> faces;
  for (std::size_t i = 0; i < fan.max_cones.size(); ++i) {
    const std::uint32_t m = fan.cone_mask(i);
    for (std::uint32_t sub = m;; sub = (sub - 1) & m) {
      faces.insert(sub);
      if (sub == 0) break;
    }
  }
  std::vector<long long> f(fan.dim + 1, 0);
  for (std::uint32_t s : faces) ++f[std::popcount(s)];
  return f;
}

/// Orbit-cone decomposition: sum_k f_k (L - 1)^{n-k}.
inline LaurentClass class_of_variety(const Fan& fan) {
  const auto f = enumerate_cones(fan);
  LaurentClass out;
  for (int k = 0; k <= fan.dim; ++k) out += torus_class(static_cast<unsigned>(fan.dim - k)) * to_big(f[k]);
  return out;
}

struct PicardData {
  int rank = 0;
  IntMatrix projection;  // rank x |rays|

  friend bool operator==(const PicardData&, const PicardData&) = default;
};

namespace detail {

// Row-style Hermite normal form with positive pivots; keeps the row lattice.
inline IntMatrix hermite_rows(IntMatrix m) {
  std::size_t row = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    while (true) {
      std::optional<std::size_t> piv;
      for (std::size_t i = row; i < m.size(); ++i)
        if (m[i][c] != 0 && (!piv || std::llabs(m[i][c]) < std::llabs(m[*piv][c]))) piv = i;
      if (!piv) break;
      std::swap(m[row], m[*piv]);
      bool done = true;
      for (std::size_t i = row + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        row_axpy(m, i, row, m[i][c] / m[row][c]);
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[row][c] == 0) continue;
    if (m[row][c] < 0)
      for (auto& x : m[row]) x = -x;
    for (std::size_t i = 0; i < row; ++i) {
      long long q = m[i][c] / m[row][c];
      if (m[i][c] - q * m[row][c] < 0) --q;
      if (q != 0) row_axpy(m, i, row, q);
    }
    ++row;
  }
  return m;
}

}  // namespace detail

/// Cokernel of chi -> (<chi, rho_alpha>)_alpha via Smith normal form, reduced to Hermite form.
inline PicardData picard_data(const Fan& fan) {
  const std::size_t nr = fan.nrays();
  const int n = fan.dim;
  IntMatrix ray_matrix = fan.rays;  // |rays| x n
  const SmithForm snf = smith_normal_form(ray_matrix);
  if (static_cast<int>(snf.invariant_factors.size()) != n)
    throw ValidationError("ray matrix has rank below the ambient dimension");
  for (long long d : snf.invariant_factors)
    if (d != 1) throw ValidationError("Picard group has torsion (invariant factor " + std::to_string(d) + ")");
  PicardData pd;
  pd.rank = static_cast<int>(nr) - n;
  IntMatrix rows(snf.left.begin() + n, snf.left.end());
  pd.projection = detail::hermite_rows(std::move(rows));
  return pd;
}

/// Supports contained in no maximal cone, as bitmasks over the rays.
struct PatternSet {
  std::size_t nvars = 0;
  std::vector<std::uint32_t> members;  // ascending
  std::vector<std::uint32_t> minimal;  // ascending

  /// m lies above the pattern set iff its support contains a minimal member.
  bool lies_above(const Exponent& m) const {
    std::uint32_t supp = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) supp |= 1U << i;
    return lies_above_mask(supp);
  }

  bool lies_above_mask(std::uint32_t supp) const {
    return std::any_of(minimal.begin(), minimal.end(), [supp](std::uint32_t j) { return (j & supp) == j; });
  }

  static Exponent to_vector(std::uint32_t mask, std::size_t n) {
    Exponent v(n, 0);
    for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1U;
    return v;
  }
};

inline PatternSet pattern_set(const Fan& fan, std::size_t max_rays = 24) {
  const std::size_t k = fan.nrays();
  if (k > max_rays)
    throw BudgetError("pattern set needs 2^" + std::to_string(k) + " supports; limit is " + std::to_string(max_rays) + " rays");
  std::vector<std::uint32_t> cones;
  for (std::size_t i = 0; i < fan.max_cones.size(); ++i) cones.push_back(fan.cone_mask(i));
  const std::uint32_t total = 1U << k;
  std::vector<bool> member(total, false);
  PatternSet ps;
  ps.nvars = k;
  for (std::uint32_t m = 0; m < total; ++m) {
    member[m] = std::none_of(cones.begin(), cones.end(), [m](std::uint32_t c) { return (m & c) == m; });
    if (member[m]) ps.members.push_back(m);
  }
  for (std::uint32_t m : ps.members) {
    bool minimal = true;
    for (std::size_t i = 0; i < k && minimal; ++i)
      if ((m >> i) & 1U) minimal = !member[m & ~(1U << i)];
    if (minimal) ps.minimal.push_back(m);
  }
  return ps;
}

/// d is in the dual of the effective cone iff sum_alpha d_alpha rho_alpha = 0.
inline bool eff_dual_contains(const Fan& fan, const std::vector<int>& d) {
  if (d.size() != fan.nrays()) throw ValidationError("degree has " + std::to_string(d.size()) + " entries, fan has " +
                                                     std::to_string(fan.nrays()) + " rays");
  for (int x : d)
    if (x < 0) throw ValidationError("degree entries must be nonnegative");
  for (int j = 0; j < fan.dim; ++j) {
    long long s = 0;
    for (std::size_t a = 0; a < d.size(); ++a) s += d[a] * fan.rays[a][j];
    if (s != 0) return false;
  }
  return true;
}

/// All members with total degree at most `bound`, lexicographic.
inline std::vector<std::vector<int>> eff_dual_enumerate(const Fan& fan, int bound) {
  std::vector<std::vector<int>> out;
  std::vector<int> d(fan.nrays(), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == d.size()) {
      if (eff_dual_contains(fan, d)) out.push_back(d);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      d[i] = v;
      self(self, i + 1, left - v);
    }
    d[i] = 0;
  };
  rec(rec, 0, bound);
  return out;
}

/// Rays of the first factor, then of the second, block-embedded.
inline Fan fan_product(const Fan& a, const Fan& b) {
  Fan out;
  out.dim = a.dim + b.dim;
  for (const auto& r : a.rays) {
    auto v = r;
    v.resize(out.dim, 0);
    out.rays.push_back(std::move(v));
  }
  for (const auto& r : b.rays) {
    std::vector<long long> v(a.dim, 0);
    v.insert(v.end(), r.begin(), r.end());
    out.rays.push_back(std::move(v));
  }
  const int off = static_cast<int>(a.nrays());
  for (const auto& ca : a.max_cones)
    for (const auto& cb : b.max_cones) {
      auto c = ca;
      for (int x : cb) c.push_back(x + off);
      out.max_cones.push_back(std::move(c));
    }
  return out;
}

}  // namespace toricurves
