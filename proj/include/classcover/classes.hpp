#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "classcover/element_set.hpp"
#include "classcover/group_table.hpp"

namespace classcover {

struct ConjClass {
  Index rep = 0;  // least index in the class
  std::size_t size = 0;
  ElementSet members;
};

// Classes sorted by (size, rep); class_of maps an element to its position in
// `classes`, or kNoIndex for elements outside the acted-on subset.
struct ClassTable {
  std::vector<ConjClass> classes;
  std::vector<Index> class_of;

  std::size_t size() const noexcept { return classes.size(); }
  const ConjClass& of(Index x) const { return classes[class_of[x]]; }
};

// Orbits of the conjugation action of <conj_gens> on a subset H that the
// action preserves.
inline ClassTable orbits_under(const GroupTable& G, const ElementSet& H, std::span<const Index> conj_gens) {
  ClassTable t;
  std::vector<Index> raw_of(G.order(), kNoIndex);
  std::vector<std::vector<Index>> orbits;
  std::vector<Index> inv_gens;
  for (Index g : conj_gens) inv_gens.push_back(G.inv(g));
  H.for_each([&](Index x) {
    if (raw_of[x] != kNoIndex) return;
    const Index id = static_cast<Index>(orbits.size());
    std::vector<Index> orbit{x};
    raw_of[x] = id;
    for (std::size_t q = 0; q < orbit.size(); ++q) {
      for (std::size_t k = 0; k < conj_gens.size(); ++k) {
        const Index y = G.mul(inv_gens[k], G.mul(orbit[q], conj_gens[k]));
        if (raw_of[y] == kNoIndex) {
          raw_of[y] = id;
          orbit.push_back(y);
        }
      }
    }
    orbits.push_back(std::move(orbit));
  });

  std::vector<Index> order(orbits.size());
  for (Index i = 0; i < order.size(); ++i) order[i] = i;
  // Orbits were discovered in increasing order of their least member.
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return orbits[a].size() < orbits[b].size(); });
  std::vector<Index> rank(orbits.size());
  for (Index i = 0; i < order.size(); ++i) rank[order[i]] = i;

  t.class_of.assign(G.order(), kNoIndex);
  for (Index x = 0; x < G.order(); ++x)
    if (raw_of[x] != kNoIndex) t.class_of[x] = rank[raw_of[x]];
  t.classes.resize(orbits.size());
  for (Index i = 0; i < orbits.size(); ++i) {
    auto& o = orbits[order[i]];
    ConjClass& c = t.classes[i];
    c.rep = *std::min_element(o.begin(), o.end());
    c.size = o.size();
    c.members = ElementSet::from(G.order(), o);
  }
  return t;
}

inline ClassTable class_table(const GroupTable& G) {
  return orbits_under(G, ElementSet::full(G.order()), G.generators());
}

inline std::vector<ConjClass> conjugacy_classes(const GroupTable& G) { return class_table(G).classes; }

// Sorted class sizes, the isomorphism-invariant part of a class table.
inline std::vector<std::size_t> class_size_multiset(const ClassTable& t) {
  std::vector<std::size_t> s;
  for (const auto& c : t.classes) s.push_back(c.size);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace classcover
