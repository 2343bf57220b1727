#pragma once

#include <string>
#include <vector>

#include "classcover/build.hpp"
#include "classcover/detail/parallel.hpp"
#include "classcover/error.hpp"
#include "classcover/fingerprint.hpp"
#include "classcover/group_table.hpp"
#include "classcover/subgroup.hpp"

namespace classcover {

struct GStarDecomposition {
  Subgroup g_star;
  Subgroup derived;                         // kernel of the largest abelian quotient
  Fingerprint abelian_part;                 // G / G'
  std::vector<Subgroup> simple_kernels;     // N with G/N simple nonabelian
  std::vector<Fingerprint> simple_factors;  // G/N for those N
};

// Intersection of G' with every normal N such that G/N is simple nonabelian.
inline GStarDecomposition g_star(const GroupTable& G, std::size_t lattice_cap = kDefaultLatticeCap) {
  GStarDecomposition d;
  d.derived = derived_subgroup(G);
  d.abelian_part = fingerprint(GroupTable::quotient(G, d.derived.members, "G/G'"));
  ElementSet meet = d.derived.members;
  const Subgroup whole = whole_group(G);
  const auto lattice = normal_subgroups(G, lattice_cap);
  for (const auto& m : maximal_members(lattice, whole)) {
    const GroupTable Q = GroupTable::quotient(G, m.members, "G/N");
    if (is_abelian(Q)) continue;
    d.simple_kernels.push_back(m);
    d.simple_factors.push_back(fingerprint(Q));
    meet &= m.members;
  }
  d.g_star = {meet, generators_of(G, meet)};
  return d;
}

struct ClosureResult {
  bool is_whole = false;
  Subgroup closure;
};

inline ClosureResult dense_closure_check(const GroupTable& G, Index x) {
  ClosureResult r;
  r.closure = normal_closure(G, std::span<const Index>(&x, 1));
  r.is_whole = r.closure.order() == G.order();
  return r;
}

// G/N abelian iff G' ⊆ N.
inline bool abelian_quotient_check(const GroupTable& G, const ElementSet& N) {
  require_normal(G, N);
  return derived_subgroup(G).members.is_subset_of(N);
}

struct TauCoordinate {
  int degree = 0;
  std::size_t factor_order = 0;
  std::size_t closure_order = 0;
  bool full = false;
};

// For each degree, the normal closure of the swap in A_n x| C_2 alone. The
// image of the closure in that factor is the closure computed there.
inline std::vector<TauCoordinate> tau_projection_check(const std::vector<int>& degrees,
                                                       std::size_t cap = kDefaultEnumerationCap,
                                                       unsigned threads = 1) {
  validate(GroupSpec::tau(degrees));
  std::vector<TauCoordinate> out(degrees.size());
  detail::parallel_for(degrees.size(), threads, [&](std::size_t i) {
    const GroupTable F = build_tau_product({degrees[i]}, cap);
    const auto r = dense_closure_check(F, F.distinguished().value());
    out[i] = {degrees[i], F.order(), r.closure.order(), r.is_whole};
  });
  return out;
}

}  // namespace classcover
