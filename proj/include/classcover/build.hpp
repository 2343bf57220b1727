#pragma once

#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "classcover/detail/fp.hpp"
#include "classcover/detail/perm.hpp"
#include "classcover/error.hpp"
#include "classcover/group_spec.hpp"
#include "classcover/group_table.hpp"
#include "classcover/subgroup.hpp"

namespace classcover {

namespace detail {

inline Perm cycle_perm(int degree, const std::vector<int>& pts) {
  Perm p = identity_perm(degree);
  for (std::size_t k = 0; k < pts.size(); ++k)
    p[static_cast<std::size_t>(pts[k])] = static_cast<std::uint16_t>(pts[(k + 1) % pts.size()]);
  return p;
}

inline Perm range_cycle(int degree, int from, int to) {
  std::vector<int> pts;
  for (int i = from; i < to; ++i) pts.push_back(i);
  return cycle_perm(degree, pts);
}

inline Perm perm_product(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

inline std::vector<Perm> alternating_gens(int n) {
  if (n < 3) return {};
  std::vector<Perm> g{cycle_perm(n, {0, 1, 2})};
  if (n > 3) g.push_back(n % 2 ? range_cycle(n, 0, n) : range_cycle(n, 1, n));
  return g;
}

inline std::vector<Perm> symmetric_gens(int n) {
  if (n < 2) return {};
  return {cycle_perm(n, {0, 1}), range_cycle(n, 0, n)};
}

inline FpMatrix elementary(int n, int p, int i, int j) {
  FpMatrix m = FpMatrix::identity(n, p);
  m(i, j) = 1;
  return m;
}

inline std::vector<FpMatrix> sl_gens(int n, int p) {
  std::vector<FpMatrix> g;
  for (int i = 0; i + 1 < n; ++i) {
    g.push_back(elementary(n, p, i, i + 1));
    g.push_back(elementary(n, p, i + 1, i));
  }
  return g;
}

// Saturating products for projected orders.
inline double sl_order_estimate(int n, int p) {
  double o = std::pow(static_cast<double>(p), n * (n - 1) / 2.0);
  for (int i = 2; i <= n; ++i) o *= std::pow(static_cast<double>(p), i) - 1.0;
  return o;
}

inline void check_projected(double projected, std::size_t cap, const std::string& what) {
  if (projected > static_cast<double>(cap))
    throw Error(ErrorKind::CapExceeded,
                what + ": projected order " + std::to_string(projected) + " exceeds cap " + std::to_string(cap));
}

inline double factorial_estimate(int n) { return std::exp(std::lgamma(n + 1.0)); }

}  // namespace detail

// Rough order of a spec without enumerating it; files report 0 (unknown).
inline double projected_order(const GroupSpec& s) {
  using K = GroupSpec::Kind;
  switch (s.kind) {
    case K::Alternating: return s.n < 2 ? 1.0 : detail::factorial_estimate(s.n) / 2.0;
    case K::Symmetric: return detail::factorial_estimate(s.n);
    case K::Dihedral: return 2.0 * s.n;
    case K::Cyclic: return s.n;
    case K::SL: return detail::sl_order_estimate(s.n, s.p);
    case K::GL: return detail::sl_order_estimate(s.n, s.p) * (s.p - 1);
    case K::PSL: return detail::sl_order_estimate(s.n, s.p) / std::gcd(s.n, s.p - 1);
    case K::File: return 0.0;
    case K::Direct:
    case K::Central: {
      double o = 1.0;
      for (const auto& f : s.factors) o *= projected_order(f);
      return o;
    }
    case K::Tau: {
      double o = 2.0;
      for (int d : s.degrees) o *= detail::factorial_estimate(d) / 2.0;
      return o;
    }
  }
  return 0.0;
}

// Loads {"degree", "generators": [[images]]} or {"p", "n", "generators": [[[row]]]}.
// Permutation images may be 0- or 1-based; 1-based is assumed when no image is 0.
inline GroupTable load_generator_file(const std::string& path, std::size_t cap, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open generator file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  try {
    if (j.contains("degree")) {
      const int degree = j.at("degree").get<int>();
      if (degree < 1 || degree > 65535) throw Error(ErrorKind::InvalidSpec, path + ": bad degree");
      auto raw = j.at("generators").get<std::vector<std::vector<int>>>();
      bool has_zero = false;
      for (const auto& g : raw)
        for (int v : g) has_zero = has_zero || v == 0;
      const int base = has_zero ? 0 : 1;
      std::vector<detail::Perm> gens;
      for (const auto& g : raw) {
        if (static_cast<int>(g.size()) != degree) throw Error(ErrorKind::InvalidSpec, path + ": image length != degree");
        detail::Perm p(g.size());
        std::vector<bool> hit(g.size(), false);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const int v = g[i] - base;
          if (v < 0 || v >= degree || hit[static_cast<std::size_t>(v)])
            throw Error(ErrorKind::InvalidSpec, path + ": generator is not a permutation");
          hit[static_cast<std::size_t>(v)] = true;
          p[i] = static_cast<std::uint16_t>(v);
        }
        gens.push_back(std::move(p));
      }
      return GroupTable::from_permutations(degree, gens, cap, name);
    }
    const int p = j.at("p").get<int>();
    const int n = j.at("n").get<int>();
    if (!is_prime(p) || n < 1) throw Error(ErrorKind::InvalidSpec, path + ": need prime p and n >= 1");
    std::vector<detail::FpMatrix> gens;
    for (const auto& g : j.at("generators")) {
      auto rows = g.get<std::vector<std::vector<int>>>();
      if (static_cast<int>(rows.size()) != n) throw Error(ErrorKind::InvalidSpec, path + ": matrix row count");
      detail::FpMatrix m(n, p);
      for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n)
          throw Error(ErrorKind::InvalidSpec, path + ": matrix column count");
        for (int c = 0; c < n; ++c) m(r, c) = ((rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] % p) + p) % p;
      }
      if (detail::determinant(m) == 0) throw Error(ErrorKind::InvalidSpec, path + ": singular generator");
      gens.push_back(std::move(m));
    }
    return GroupTable::from_matrices(n, p, gens, cap, name);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

// Default identification element: the first centre element of largest order.
inline Index default_central_element(const GroupTable& G) {
  const Subgroup Z = center(G);
  Index best = GroupTable::identity();
  std::size_t best_order = 1;
  Z.members.for_each([&](Index z) {
    const std::size_t o = G.element_order(z);
    if (o > best_order) {
      best_order = o;
      best = z;
    }
  });
  return best;
}

// Direct product modulo D = <z_1 z_i^-1>, with z_i central in factor i.
// Passing no identification picks default_central_element of each factor.
inline GroupTable central_product(const std::vector<GroupTable>& factors,
                                  std::optional<std::vector<Index>> identification, std::size_t cap,
                                  std::string name) {
  if (factors.size() < 2) throw Error(ErrorKind::InvalidSpec, "central product needs at least two factors");
  std::vector<Index> z;
  if (identification) {
    z = *identification;
    if (z.size() != factors.size())
      throw Error(ErrorKind::IdentificationNotIsomorphism, "one identified element per factor is required");
  } else {
    for (const auto& f : factors) z.push_back(default_central_element(f));
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (z[i] >= factors[i].order()) throw Error(ErrorKind::OutOfRange, "identified element out of range");
    for (Index g : factors[i].generators())
      if (factors[i].mul(g, z[i]) != factors[i].mul(z[i], g))
        throw Error(ErrorKind::IdentificationNotCentral,
                    "identified element " + factors[i].render(z[i]) + " is not central in factor " + std::to_string(i + 1));
  }
  for (std::size_t i = 1; i < factors.size(); ++i)
    if (factors[i].element_order(z[i]) != factors[0].element_order(z[0]))
      throw Error(ErrorKind::IdentificationNotIsomorphism, "identified central subgroups have different orders");

  GroupTable P = GroupTable::direct_product(factors, cap, name);
  const auto& pf = P.factors();
  std::vector<Index> seeds;
  for (std::size_t i = 1; i < factors.size(); ++i)
    seeds.push_back(P.mul(pf[0].embedding[z[0]], P.inv(pf[i].embedding[z[i]])));
  const Subgroup D = generated_subgroup(P, seeds);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::size_t hits = 0;
    for (Index e : pf[i].embedding) hits += D.contains(e) ? 1 : 0;
    if (hits != 1)
      throw Error(ErrorKind::IdentificationNotIsomorphism,
                  "identification meets factor " + std::to_string(i + 1) + " nontrivially");
  }
  if (D.order() == 1) return P;
  GroupTable Q = GroupTable::quotient(P, D.members, name);
  std::vector<GroupTable::Factor> qf;
  for (const auto& f : pf) {
    GroupTable::Factor g;
    g.group = f.group;
    for (Index e : f.embedding) g.embedding.push_back(Q.from_parent(e));
    qf.push_back(std::move(g));
  }
  return Q.annotated(std::move(qf), std::nullopt);
}

// (prod_n A_n) x| C_2 on the disjoint union of the blocks, the C_2 generator
// acting as the transposition of the first two points of every block. With no
// degrees it is C_2 on two points. The generator is the distinguished element.
inline GroupTable build_tau_product(const std::vector<int>& degrees, std::size_t cap) {
  validate(GroupSpec::tau(degrees));
  const std::string name = render(GroupSpec::tau(degrees));
  detail::check_projected(projected_order(GroupSpec::tau(degrees)), cap, name);
  int degree = 0;
  for (int d : degrees) degree += d;
  if (degrees.empty()) degree = 2;
  std::vector<detail::Perm> gens;
  detail::Perm tau = detail::identity_perm(degree);
  int off = 0;
  for (int d : degrees) {
    for (const auto& g : detail::alternating_gens(d)) {
      detail::Perm big = detail::identity_perm(degree);
      for (int i = 0; i < d; ++i) big[static_cast<std::size_t>(off + i)] = static_cast<std::uint16_t>(off + g[static_cast<std::size_t>(i)]);
      gens.push_back(std::move(big));
    }
    std::swap(tau[static_cast<std::size_t>(off)], tau[static_cast<std::size_t>(off + 1)]);
    off += d;
  }
  if (degrees.empty()) std::swap(tau[0], tau[1]);
  gens.push_back(tau);
  GroupTable G = GroupTable::from_permutations(degree, gens, cap, name);
  const auto t = G.find_form(tau);
  return G.annotated({}, t);
}

inline GroupTable build_group(const GroupSpec& s, std::size_t cap = kDefaultEnumerationCap) {
  using K = GroupSpec::Kind;
  validate(s);
  const std::string name = render(s);
  detail::check_projected(projected_order(s), cap, name);
  switch (s.kind) {
    case K::Alternating:
      return GroupTable::from_permutations(s.n, detail::alternating_gens(s.n), cap, name);
    case K::Symmetric:
      return GroupTable::from_permutations(s.n, detail::symmetric_gens(s.n), cap, name);
    case K::Cyclic:
      return GroupTable::from_permutations(s.n, s.n > 1 ? std::vector<detail::Perm>{detail::range_cycle(s.n, 0, s.n)}
                                                        : std::vector<detail::Perm>{},
                                           cap, name);
    case K::Dihedral: {
      if (s.n == 1) return GroupTable::from_permutations(2, {detail::cycle_perm(2, {0, 1})}, cap, name);
      if (s.n == 2) {
        auto a = detail::perm_product(detail::cycle_perm(4, {0, 1}), detail::cycle_perm(4, {2, 3}));
        auto b = detail::perm_product(detail::cycle_perm(4, {0, 2}), detail::cycle_perm(4, {1, 3}));
        return GroupTable::from_permutations(4, {a, b}, cap, name);
      }
      detail::Perm refl(static_cast<std::size_t>(s.n));
      for (int i = 0; i < s.n; ++i) refl[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>((s.n - i) % s.n);
      return GroupTable::from_permutations(s.n, {detail::range_cycle(s.n, 0, s.n), refl}, cap, name);
    }
    case K::SL:
      return GroupTable::from_matrices(s.n, s.p, detail::sl_gens(s.n, s.p), cap, name);
    case K::GL: {
      auto g = detail::sl_gens(s.n, s.p);
      detail::FpMatrix d = detail::FpMatrix::identity(s.n, s.p);
      d(0, 0) = detail::primitive_root(s.p);
      if (!(d == detail::FpMatrix::identity(s.n, s.p))) g.push_back(d);
      return GroupTable::from_matrices(s.n, s.p, g, cap, name);
    }
    case K::PSL: {
      GroupTable S = GroupTable::from_matrices(s.n, s.p, detail::sl_gens(s.n, s.p), cap, render(GroupSpec::sl(s.n, s.p)));
      ElementSet Z(S.order());
      for (int c = 1; c < s.p; ++c) {
        if (detail::fp_pow(c, s.n, s.p) != 1) continue;
        const auto m = detail::FpMatrix::identity(s.n, s.p).scaled(c);
        std::vector<std::uint16_t> f(m.a.begin(), m.a.end());
        if (auto x = S.find_form(f)) Z.insert(*x);
      }
      return GroupTable::quotient(S, Z, name);
    }
    case K::File:
      return load_generator_file(s.path, cap, name);
    case K::Direct: {
      std::vector<GroupTable> fs;
      for (const auto& f : s.factors) fs.push_back(build_group(f, cap));
      return GroupTable::direct_product(std::move(fs), cap, name);
    }
    case K::Central: {
      std::vector<GroupTable> fs;
      for (const auto& f : s.factors) fs.push_back(build_group(f, cap));
      return central_product(fs, std::nullopt, cap, name);
    }
    case K::Tau:
      return build_tau_product(s.degrees, cap);
  }
  throw Error(ErrorKind::InvalidSpec, name);
}

inline GroupTable build_group(std::string_view text, std::size_t cap = kDefaultEnumerationCap) {
  return build_group(parse_spec(text), cap);
}

}  // namespace classcover
