#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "classcover/build.hpp"
#include "classcover/classes.hpp"
#include "classcover/error.hpp"
#include "classcover/group_table.hpp"
#include "classcover/subgroup.hpp"

namespace classcover {

inline constexpr std::size_t kDefaultSubgroupCap = 2000;

// Isomorphism invariants used in place of isomorphism testing.
struct Fingerprint {
  std::size_t order = 0;
  std::vector<std::size_t> class_sizes;
  std::size_t abelianization = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline Fingerprint fingerprint(const GroupTable& G) {
  Fingerprint f;
  f.order = G.order();
  f.class_sizes = class_size_multiset(class_table(G));
  f.abelianization = G.order() / derived_subgroup(G).order();
  return f;
}

inline std::string to_string(const Fingerprint& f) {
  std::string s = "order " + std::to_string(f.order) + ", classes {";
  for (std::size_t i = 0; i < f.class_sizes.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f.class_sizes[i]);
  }
  return s + "}, abelianization " + std::to_string(f.abelianization);
}

inline GroupTable subgroup_table(const GroupTable& G, const Subgroup& H, std::string name = "H") {
  return GroupTable::subgroup(G, H.members, H.gens, std::move(name));
}

// The section B/A for A ≤ B with A normal in B.
inline GroupTable section(const GroupTable& G, const Subgroup& B, const ElementSet& A) {
  GroupTable Bt = subgroup_table(G, B, "B");
  ElementSet local(Bt.order());
  A.for_each([&](Index a) { local.insert(Bt.from_parent(a)); });
  return GroupTable::quotient(Bt, local, "B/A");
}

inline bool is_simple_nonabelian(const GroupTable& Q) {
  if (Q.order() < 2 || is_abelian(Q)) return false;
  for (const auto& c : class_table(Q).classes) {
    if (c.rep == GroupTable::identity()) continue;
    const Index r = c.rep;
    if (normal_closure(Q, std::span<const Index>(&r, 1)).order() != Q.order()) return false;
  }
  return true;
}

// Q ≅ S × S for a nonabelian simple S: exactly four normal subgroups, the two
// middle ones simple, meeting trivially, spanning Q and sharing a fingerprint.
inline bool is_simple_square(const GroupTable& Q, std::size_t lattice_cap = kDefaultLatticeCap) {
  if (Q.order() < 3600 || is_abelian(Q)) return false;
  const auto lat = normal_subgroups(Q, lattice_cap);
  if (lat.size() != 4) return false;
  const Subgroup& m1 = lat[1];
  const Subgroup& m2 = lat[2];
  if (m1.order() != m2.order() || m1.order() * m2.order() != Q.order()) return false;
  if ((m1.members & m2.members).count() != 1) return false;
  const GroupTable t1 = subgroup_table(Q, m1);
  const GroupTable t2 = subgroup_table(Q, m2);
  return is_simple_nonabelian(t1) && is_simple_nonabelian(t2) && fingerprint(t1) == fingerprint(t2);
}

namespace detail {

inline const Fingerprint& alternating_fingerprint(int k) {
  static std::map<int, Fingerprint> cache;
  static std::mutex lock;
  const std::lock_guard<std::mutex> hold(lock);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, fingerprint(build_group(GroupSpec::alternating(k)))).first;
  return it->second;
}

inline std::size_t alternating_order(int k) {
  std::size_t o = 1;
  for (int i = 3; i <= k; ++i) o *= static_cast<std::size_t>(i);
  return o;
}

// Does some 2-generated subgroup of G have a quotient ≅ A_k? Sufficient since
// A_k is 2-generated: lifts of two generators span a subgroup mapping onto it.
inline bool involves_alternating(const GroupTable& G, int k, const ClassTable& classes) {
  const std::size_t ak = alternating_order(k);
  const Fingerprint& target = alternating_fingerprint(k);
  std::unordered_set<ElementSet, ElementSetHash> seen;
  for (const auto& c : classes.classes) {
    const Index x = c.rep;
    for (Index y = 0; y < G.order(); ++y) {
      const Index pair[2] = {x, y};
      Subgroup H = generated_subgroup(G, pair);
      if (H.order() % ak != 0 || !seen.insert(H.members).second) continue;
      if (H.order() == ak) {
        if (fingerprint(subgroup_table(G, H)) == target) return true;
        continue;
      }
      for (const auto& K : normal_subgroups_of(G, H, H.gens, std::max<std::size_t>(kDefaultLatticeCap, H.order()))) {
        if (K.order() * ak != H.order()) continue;
        if (fingerprint(section(G, H, K.members)) == target) return true;
      }
    }
  }
  return false;
}

}  // namespace detail

// Largest k such that some section H/K of G is isomorphic to A_k (via
// fingerprints), or 0 when not even C_3 = A_3 occurs.
inline int alpha(const GroupTable& G, std::size_t subgroup_cap = kDefaultSubgroupCap) {
  if (G.order() > subgroup_cap)
    throw Error(ErrorKind::CapExceeded, "alpha: order " + std::to_string(G.order()) + " exceeds subgroup cap " +
                                            std::to_string(subgroup_cap));
  if (G.order() % 3 != 0) return 0;
  if (G.order() % 12 != 0) return 3;
  const ClassTable classes = class_table(G);
  int best = 3;
  for (int k = 4; detail::alternating_order(k) <= G.order(); ++k) {
    if (G.order() % detail::alternating_order(k) != 0) break;
    if (!detail::involves_alternating(G, k, classes)) break;
    best = k;
  }
  return best;
}

}  // namespace classcover
