#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "classcover/classes.hpp"
#include "classcover/element_set.hpp"
#include "classcover/error.hpp"
#include "classcover/group_table.hpp"

namespace classcover {

inline constexpr std::size_t kDefaultLatticeCap = 200;

struct Subgroup {
  ElementSet members;
  std::vector<Index> gens;

  std::size_t order() const noexcept { return members.count(); }
  bool contains(Index x) const noexcept { return members.contains(x); }
};

// Grows <gens> one generator at a time, reusing the elements found so far.
class SubgroupBuilder {
 public:
  explicit SubgroupBuilder(const GroupTable& G) : G_(G), members_(G.order()) {
    members_.insert(GroupTable::identity());
    elements_.push_back(GroupTable::identity());
  }

  // Returns true if g was not already in the subgroup.
  bool add(Index g) {
    if (members_.contains(g)) return false;
    gens_.push_back(g);
    std::vector<Index> frontier;
    const std::size_t old = elements_.size();
    for (std::size_t i = 0; i < old; ++i) push(G_.mul(elements_[i], g), frontier);
    for (std::size_t q = 0; q < frontier.size(); ++q)
      for (Index s : gens_) push(G_.mul(frontier[q], s), frontier);
    return true;
  }

  const ElementSet& members() const noexcept { return members_; }
  const std::vector<Index>& elements() const noexcept { return elements_; }
  const std::vector<Index>& gens() const noexcept { return gens_; }
  std::size_t order() const noexcept { return elements_.size(); }

  Subgroup result() const { return {members_, gens_}; }

 private:
  void push(Index y, std::vector<Index>& frontier) {
    if (members_.insert(y)) {
      elements_.push_back(y);
      frontier.push_back(y);
    }
  }

  const GroupTable& G_;
  ElementSet members_;
  std::vector<Index> elements_;
  std::vector<Index> gens_;
};

inline Subgroup trivial_subgroup(const GroupTable& G) {
  ElementSet s(G.order());
  s.insert(GroupTable::identity());
  return {std::move(s), {}};
}

inline Subgroup whole_group(const GroupTable& G) { return {ElementSet::full(G.order()), G.generators()}; }

inline Subgroup generated_subgroup(const GroupTable& G, std::span<const Index> gens) {
  SubgroupBuilder b(G);
  for (Index g : gens) b.add(g);
  return b.result();
}

// Smallest subgroup containing `seeds` and normalised by <conj_gens>.
inline Subgroup normal_closure(const GroupTable& G, std::span<const Index> seeds, std::span<const Index> conj_gens) {
  SubgroupBuilder b(G);
  std::vector<Index> work;
  for (Index s : seeds)
    if (b.add(s)) work.push_back(s);
  for (std::size_t q = 0; q < work.size(); ++q)
    for (Index c : conj_gens) {
      const Index t = G.conj(work[q], c);
      if (b.add(t)) work.push_back(t);
    }
  return b.result();
}

inline Subgroup normal_closure(const GroupTable& G, std::span<const Index> seeds) {
  return normal_closure(G, seeds, G.generators());
}

// Greedy generating set for a subset closed under multiplication. If S is not
// a subgroup the returned builder strictly contains it.
inline SubgroupBuilder closure_of(const GroupTable& G, const ElementSet& S) {
  SubgroupBuilder b(G);
  S.for_each([&](Index x) { b.add(x); });
  return b;
}

inline std::vector<Index> generators_of(const GroupTable& G, const ElementSet& H) { return closure_of(G, H).gens(); }

inline bool is_subgroup(const GroupTable& G, const ElementSet& S) {
  if (S.universe() != G.order() || !S.contains(GroupTable::identity())) return false;
  return closure_of(G, S).members() == S;
}

inline bool is_normalised_by(const GroupTable& G, const Subgroup& H, std::span<const Index> conj_gens) {
  for (Index h : H.gens)
    for (Index c : conj_gens)
      if (!H.members.contains(G.conj(h, c))) return false;
  return true;
}

inline bool is_normal(const GroupTable& G, const ElementSet& S) {
  if (!is_subgroup(G, S)) return false;
  return is_normalised_by(G, {S, generators_of(G, S)}, G.generators());
}

// Throws NotSubgroup / NotNormal, otherwise returns S with generators.
inline Subgroup require_normal(const GroupTable& G, const ElementSet& S, ErrorKind not_normal = ErrorKind::NotNormal) {
  if (S.universe() != G.order()) throw Error(ErrorKind::NotSubgroup, "subset universe does not match group order");
  if (!is_subgroup(G, S)) throw Error(ErrorKind::NotSubgroup, "subset is not a subgroup");
  Subgroup H{S, generators_of(G, S)};
  if (!is_normalised_by(G, H, G.generators())) throw Error(not_normal, "subgroup is not normal");
  return H;
}

// [<X>, <Y>] as the normal closure of {[x, y]} under X and Y.
inline Subgroup commutator_subgroup(const GroupTable& G, std::span<const Index> X, std::span<const Index> Y) {
  std::vector<Index> seeds;
  for (Index x : X)
    for (Index y : Y) seeds.push_back(G.comm(x, y));
  std::vector<Index> both(X.begin(), X.end());
  both.insert(both.end(), Y.begin(), Y.end());
  return normal_closure(G, seeds, both);
}

inline Subgroup derived_subgroup(const GroupTable& G, const Subgroup& H) {
  return commutator_subgroup(G, H.gens, H.gens);
}

inline Subgroup derived_subgroup(const GroupTable& G) { return derived_subgroup(G, whole_group(G)); }

inline std::vector<Subgroup> derived_series(const GroupTable& G) {
  std::vector<Subgroup> s{whole_group(G)};
  while (true) {
    Subgroup next = derived_subgroup(G, s.back());
    if (next.order() == s.back().order()) break;
    s.push_back(std::move(next));
  }
  return s;
}

inline bool is_abelian(const GroupTable& G) {
  const auto& g = G.generators();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (G.mul(g[i], g[j]) != G.mul(g[j], g[i])) return false;
  return true;
}

inline bool is_soluble(const GroupTable& G) { return derived_series(G).back().order() == 1; }

inline bool is_perfect(const GroupTable& G) { return derived_subgroup(G).order() == G.order(); }

inline Subgroup centralizer(const GroupTable& G, std::span<const Index> xs) {
  ElementSet c(G.order());
  for (Index g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Index x : xs)
      if (G.mul(g, x) != G.mul(x, g)) {
        ok = false;
        break;
      }
    if (ok) c.insert(g);
  }
  return {c, generators_of(G, c)};
}

inline Subgroup centralizer(const GroupTable& G, Index x) { return centralizer(G, std::span<const Index>(&x, 1)); }

inline Subgroup center(const GroupTable& G) { return centralizer(G, G.generators()); }

namespace detail {

inline bool set_less(const ElementSet& a, const ElementSet& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  return a.words() < b.words();
}

}  // namespace detail

// Subgroups of H that are normalised by <conj_gens>; H itself must be
// normalised by them. Each is generated by conjugacy orbits, so the lattice is
// the join-closure of orbit closures. Sorted by (order, members).
inline std::vector<Subgroup> normal_subgroups_of(const GroupTable& G, const Subgroup& H,
                                                 std::span<const Index> conj_gens,
                                                 std::size_t lattice_cap = kDefaultLatticeCap) {
  const ClassTable orbits = orbits_under(G, H.members, conj_gens);
  if (orbits.size() > lattice_cap)
    throw Error(ErrorKind::LatticeCapExceeded,
                std::to_string(orbits.size()) + " orbits exceed lattice cap " + std::to_string(lattice_cap));
  std::vector<Subgroup> out;
  std::unordered_set<ElementSet, ElementSetHash> seen;
  auto add = [&](Subgroup s) {
    if (seen.insert(s.members).second) out.push_back(std::move(s));
  };
  add(trivial_subgroup(G));
  for (const auto& c : orbits.classes) {
    const Index r = c.rep;
    add(normal_closure(G, std::span<const Index>(&r, 1), conj_gens));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (out[j].members.is_subset_of(out[i].members) || out[i].members.is_subset_of(out[j].members)) continue;
      std::vector<Index> gens = out[i].gens;
      gens.insert(gens.end(), out[j].gens.begin(), out[j].gens.end());
      Subgroup join = generated_subgroup(G, gens);
      if (!seen.contains(join.members)) add(std::move(join));
    }
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return detail::set_less(a.members, b.members); });
  return out;
}

inline std::vector<Subgroup> normal_subgroups(const GroupTable& G, std::size_t lattice_cap = kDefaultLatticeCap) {
  return normal_subgroups_of(G, whole_group(G), G.generators(), lattice_cap);
}

// Members of `lattice` that are proper in H and maximal among proper ones.
inline std::vector<Subgroup> maximal_members(const std::vector<Subgroup>& lattice, const Subgroup& H) {
  std::vector<Subgroup> out;
  for (const auto& a : lattice) {
    if (a.order() == H.order()) continue;
    bool maximal = true;
    for (const auto& b : lattice)
      if (b.order() > a.order() && b.order() < H.order() && a.members.is_subset_of(b.members)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(a);
  }
  return out;
}

struct QuotientResult {
  GroupTable group;
  std::vector<Index> projection;  // parent index -> quotient index
};

inline QuotientResult quotient(const GroupTable& G, const ElementSet& N) {
  require_normal(G, N);
  GroupTable Q = GroupTable::quotient(G, N, G.name() + "/N");
  std::vector<Index> proj(G.order());
  for (Index x = 0; x < G.order(); ++x) proj[x] = Q.from_parent(x);
  return {Q, std::move(proj)};
}

struct Residuals {
  Subgroup g1;  // last term of the derived series
  Subgroup g2;  // intersection of the maximal normal subgroups of g1
  Subgroup g3;  // stable term of [g2, G, G, ...]
};

inline Residuals residuals(const GroupTable& G, std::size_t lattice_cap = kDefaultLatticeCap) {
  Residuals r;
  r.g1 = derived_series(G).back();
  if (r.g1.order() == 1) {
    r.g2 = r.g1;
  } else {
    const auto lattice = normal_subgroups_of(G, r.g1, r.g1.gens, lattice_cap);
    ElementSet meet = r.g1.members;
    for (const auto& m : maximal_members(lattice, r.g1)) meet &= m.members;
    r.g2 = {meet, generators_of(G, meet)};
  }
  r.g3 = r.g2;
  while (r.g3.order() > 1) {
    Subgroup next = commutator_subgroup(G, r.g3.gens, G.generators());
    if (next.order() == r.g3.order()) break;
    r.g3 = std::move(next);
  }
  return r;
}

}  // namespace classcover
