#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "classcover/automorphism.hpp"
#include "classcover/classes.hpp"
#include "classcover/error.hpp"
#include "classcover/fingerprint.hpp"
#include "classcover/group_table.hpp"
#include "classcover/products.hpp"
#include "classcover/subgroup.hpp"

namespace classcover {

// [H, a] = {h^-1 a^-1 h a} or [H, f] = {h^-1 f(h)} over h in H.
struct TwistedSet {
  ElementSet members;
};

inline TwistedSet twisted_commutator_set(const GroupTable& G, const ElementSet& H, Index a) {
  TwistedSet t{ElementSet(G.order())};
  H.for_each([&](Index h) { t.members.insert(G.comm(h, a)); });
  return t;
}

inline TwistedSet twisted_commutator_set(const GroupTable& G, const ElementSet& H, const Automorphism& f) {
  TwistedSet t{ElementSet(G.order())};
  H.for_each([&](Index h) { t.members.insert(G.mul(G.inv(h), f(h))); });
  return t;
}

inline TwistedSet twisted_commutator_set(const GroupTable& G, Index a) {
  return twisted_commutator_set(G, ElementSet::full(G.order()), a);
}

inline TwistedSet twisted_commutator_set(const GroupTable& G, const Automorphism& f) {
  return twisted_commutator_set(G, ElementSet::full(G.order()), f);
}

struct WidthReport {
  std::optional<std::size_t> minimal_t;  // nullopt means unreachable
  std::optional<std::size_t> paper_bound;
  ElementSet reached;
  std::size_t d = 0;
  int alpha = -1;  // -1 when not computed
};

// Least t with (F_1 ⋯ F_k)^{*t} · M ⊇ target. Every factor must contain the
// identity, so the powers increase; `ceiling` caps the ascent (0 = none).
inline WidthReport minimal_width(const GroupTable& G, const ElementSet& target, const std::vector<TwistedSet>& factors,
                                 const ElementSet* modulo = nullptr, std::size_t ceiling = 0) {
  if (!is_subgroup(G, target)) throw Error(ErrorKind::TargetNotSubgroup, "width target is not a subgroup");
  ElementSet M(G.order());
  M.insert(GroupTable::identity());
  if (modulo) {
    if (!is_subgroup(G, *modulo)) throw Error(ErrorKind::ModuloNotNormal, "modulo set is not a subgroup");
    if (!is_normal(G, *modulo)) throw Error(ErrorKind::ModuloNotNormal, "modulo subgroup is not normal");
    M = *modulo;
  }
  for (const auto& f : factors)
    if (!f.members.contains(GroupTable::identity()))
      throw Error(ErrorKind::PreconditionViolated, "width factors must contain the identity");
  std::vector<ElementSet> sets;
  for (const auto& f : factors) sets.push_back(f.members);
  sets.push_back(M);
  const ElementSet Q = product(G, sets);
  auto r = reach_power(G, Q, target, M, ceiling);
  WidthReport w;
  w.minimal_t = r.exponent;
  w.reached = std::move(r.reached);
  w.d = factors.size();
  return w;
}

inline std::size_t segal_bound(std::size_t d) { return 72 * d + 46; }

// Target G' with factors [G, a_i], for soluble G with <a> G' = G.
inline WidthReport segal_check(const GroupTable& G, const std::vector<Index>& a) {
  if (!is_soluble(G)) throw Error(ErrorKind::NotSoluble, G.name() + " is not soluble");
  const Subgroup D = derived_subgroup(G);
  SubgroupBuilder b(G);
  for (Index g : D.gens) b.add(g);
  for (Index g : a) b.add(g);
  if (b.order() != G.order())
    throw Error(ErrorKind::NotGeneratingAbelianization, "elements do not generate G modulo G'");
  std::vector<TwistedSet> factors;
  for (Index g : a) factors.push_back(twisted_commutator_set(G, g));
  const std::size_t bound = segal_bound(a.size());
  WidthReport w = minimal_width(G, D.members, factors, nullptr, 2 * bound);
  w.paper_bound = bound;
  w.d = a.size();
  return w;
}

struct UsefulViolation {
  Index a = 0;
  Index conjugate = 0;  // a member of a^G outside [G,f][G,f^-1]
};

// Checks a^G ⊆ [G,f][G,f^-1] for every a in [G,f^-1]; a nonempty result
// means a bug.
inline std::vector<UsefulViolation> lemma_useful_check(const GroupTable& G, const Automorphism& f,
                                                       const ClassTable* classes = nullptr) {
  std::optional<ClassTable> own;
  if (!classes) classes = &own.emplace(class_table(G));
  const Automorphism finv = f.inverse();
  const ElementSet fwd = twisted_commutator_set(G, f).members;
  const ElementSet back = twisted_commutator_set(G, finv).members;
  const ElementSet P = product(G, fwd, back);
  std::vector<UsefulViolation> out;
  std::vector<bool> checked(classes->size(), false);
  back.for_each([&](Index a) {
    const Index c = classes->class_of[a];
    if (checked[c]) return;
    checked[c] = true;
    classes->classes[c].members.for_each([&](Index x) {
      if (!P.contains(x)) out.push_back({a, x});
    });
  });
  return out;
}

inline Subgroup generated_mod(const GroupTable& G, const std::vector<Index>& gens, const Subgroup& N) {
  SubgroupBuilder b(G);
  for (Index g : N.gens) b.add(g);
  for (Index g : gens) b.add(g);
  return b.result();
}

// Least c with (∏ [T, a_i])^{*c} = T when the a_i generate T modulo Z(T).
inline std::size_t inner_check(const GroupTable& T, const std::vector<Index>& a) {
  if (is_abelian(T)) throw Error(ErrorKind::NotQuasisemisimple, T.name() + " is abelian");
  const Subgroup Z = center(T);
  if (generated_mod(T, a, Z).order() != T.order())
    throw Error(ErrorKind::NotGeneratingModCenter, "elements do not generate T modulo its centre");
  std::vector<TwistedSet> factors;
  for (Index g : a) factors.push_back(twisted_commutator_set(T, g));
  auto w = minimal_width(T, ElementSet::full(T.order()), factors);
  if (!w.minimal_t) throw Error(ErrorKind::PreconditionViolated, "inner products never cover T");
  return *w.minimal_t;
}

struct QsimpleWitness {
  std::vector<Index> t;          // one element per automorphism
  std::vector<std::size_t> via;  // for each factor j, an i with pi_j([t_i, a_i^-1]) nontrivial
};

struct QsimpleResult {
  bool eligible = false;
  bool perfect = false;  // equality needs T perfect
  std::optional<std::size_t> minimal_c;
  std::optional<QsimpleWitness> witness;
};

inline std::vector<ElementSet> factor_sets(const GroupTable& T) {
  if (T.factors().empty()) throw Error(ErrorKind::FactorDataMissing, T.name() + " carries no factor data");
  std::vector<ElementSet> out;
  for (const auto& f : T.factors()) out.push_back(ElementSet::from(T.order(), f.embedding));
  return out;
}

// Automorphism exchanging two factors built from the same spec.
inline Automorphism factor_swap(const GroupTable& T, std::size_t i = 0, std::size_t j = 1) {
  const auto& fs = T.factors();
  if (fs.size() <= std::max(i, j)) throw Error(ErrorKind::FactorDataMissing, "factor index out of range");
  if (fs[i].group->order() != fs[j].group->order())
    throw Error(ErrorKind::PreconditionViolated, "swapped factors differ in order");
  std::vector<Index> gens, images;
  for (std::size_t k = 0; k < fs.size(); ++k)
    for (Index g : fs[k].group->generators()) {
      gens.push_back(fs[k].embedding[g]);
      const std::size_t to = k == i ? j : k == j ? i : k;
      images.push_back(fs[to].embedding[g]);
    }
  return automorphism_from_images(T, gens, images);
}

// Eligibility: ∩ C_T(a_i) contains no factor. Then the least c with
// (∏ [T,a_i][T,a_i^-1])^{*c} = T, and elements t_i such that every factor
// sees some [t_i, a_i^-1] outside its centralizer.
inline QsimpleResult qsimple_check(const GroupTable& T, const std::vector<Automorphism>& autos) {
  const auto S = factor_sets(T);
  QsimpleResult res;
  res.perfect = is_perfect(T);
  ElementSet fixed = ElementSet::full(T.order());
  for (const auto& a : autos) {
    ElementSet fa(T.order());
    for (Index x = 0; x < T.order(); ++x)
      if (a(x) == x) fa.insert(x);
    fixed &= fa;
  }
  res.eligible = std::none_of(S.begin(), S.end(), [&](const ElementSet& s) { return s.is_subset_of(fixed); });
  if (!res.eligible) return res;

  std::vector<TwistedSet> factors;
  for (const auto& a : autos) {
    factors.push_back(twisted_commutator_set(T, a));
    factors.push_back(twisted_commutator_set(T, a.inverse()));
  }
  res.minimal_c = minimal_width(T, ElementSet::full(T.order()), factors).minimal_t;

  // C_T(S_j): elements commuting with every generator of factor j.
  std::vector<ElementSet> cent;
  for (const auto& f : T.factors()) {
    std::vector<Index> gens;
    for (Index g : f.group->generators()) gens.push_back(f.embedding[g]);
    cent.push_back(centralizer(T, gens).members);
  }
  const std::size_t m = S.size(), d = autos.size();
  // For each automorphism, the distinct factor masks reachable and one t for each.
  std::vector<std::vector<std::pair<std::uint64_t, Index>>> options(d);
  for (std::size_t i = 0; i < d; ++i) {
    const Automorphism inv = autos[i].inverse();
    std::unordered_set<std::uint64_t> seen;
    for (Index t = 0; t < T.order(); ++t) {
      const Index v = T.mul(T.inv(t), inv(t));
      std::uint64_t mask = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (!cent[j].contains(v)) mask |= std::uint64_t{1} << j;
      if (mask && seen.insert(mask).second) options[i].push_back({mask, t});
    }
  }
  const std::uint64_t all = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::vector<std::size_t> pick(d, 0);
  std::vector<Index> chosen(d, GroupTable::identity());
  std::vector<std::uint64_t> masks(d, 0);
  // Depth-first over option choices, allowing an automorphism to contribute nothing.
  auto search = [&](auto&& self, std::size_t i, std::uint64_t covered) -> bool {
    if (covered == all) return true;
    if (i == d) return false;
    for (const auto& [mask, t] : options[i]) {
      if ((covered | mask) == covered) continue;
      chosen[i] = t;
      masks[i] = mask;
      if (self(self, i + 1, covered | mask)) return true;
    }
    chosen[i] = GroupTable::identity();
    masks[i] = 0;
    return self(self, i + 1, covered);
  };
  if (search(search, 0, 0)) {
    QsimpleWitness w;
    w.t = chosen;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < d; ++i)
        if (masks[i] >> j & 1) {
          w.via.push_back(i);
          break;
        }
    res.witness = std::move(w);
  }
  return res;
}

// Least number of generators, by growing the distinct subgroups generated by
// i elements one element at a time.
inline std::size_t min_generators(const GroupTable& G, std::size_t limit = 8) {
  if (G.order() == 1) return 0;
  std::vector<Subgroup> level{trivial_subgroup(G)};
  for (std::size_t i = 1; i <= limit; ++i) {
    std::unordered_set<ElementSet, ElementSetHash> seen;
    std::vector<Subgroup> next;
    for (const auto& H : level) {
      for (Index z = 0; z < G.order(); ++z) {
        if (H.contains(z)) continue;
        std::vector<Index> gens = H.gens;
        gens.push_back(z);
        Subgroup K = generated_subgroup(G, gens);
        if (K.order() == G.order()) return i;
        if (seen.insert(K.members).second) next.push_back(std::move(K));
      }
    }
    level = std::move(next);
  }
  throw Error(ErrorKind::CapExceeded, "generator search limit reached");
}

// Elements g_i' in g_i M generating G. Random tuples first, then every tuple.
inline std::optional<std::vector<Index>> gaschutz_lift(const GroupTable& G, const ElementSet& M_set,
                                                       std::vector<Index> g, std::size_t k,
                                                       std::uint64_t seed = 0, std::size_t random_tries = 4096) {
  const Subgroup M = require_normal(G, M_set);
  if (g.size() > k) throw Error(ErrorKind::PreconditionViolated, "more elements than k");
  g.resize(k, GroupTable::identity());
  if (generated_mod(G, g, M).order() != G.order())
    throw Error(ErrorKind::NotGeneratingMod, "elements do not generate G modulo M");
  if (k < min_generators(G, k + 1)) throw Error(ErrorKind::PreconditionViolated, "k is below the generator number");
  auto generates = [&](const std::vector<Index>& t) { return generated_subgroup(G, t).order() == G.order(); };
  if (generates(g)) return g;
  const auto mm = M.members.members();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, mm.size() - 1);
  std::vector<Index> t(k);
  for (std::size_t r = 0; r < random_tries; ++r) {
    for (std::size_t i = 0; i < k; ++i) t[i] = G.mul(g[i], mm[pick(rng)]);
    if (generates(t)) return t;
  }
  std::vector<std::size_t> digit(k, 0);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) t[i] = G.mul(g[i], mm[digit[i]]);
    if (generates(t)) return t;
    std::size_t i = 0;
    while (i < k && ++digit[i] == mm.size()) digit[i++] = 0;
    if (i == k) break;
  }
  return std::nullopt;
}

struct AcceptableResult {
  bool acceptable = false;
  std::string reason;
};

// [N,Γ] = N and no Γ-normal section A < B ≤ N is simple or simple-squared.
inline AcceptableResult acceptable_check(const GroupTable& G, const ElementSet& N_set,
                                         std::size_t lattice_cap = kDefaultLatticeCap) {
  const Subgroup N = require_normal(G, N_set);
  if (commutator_subgroup(G, N.gens, G.generators()).order() != N.order())
    return {false, "[N,G] != N"};
  const auto lat = normal_subgroups_of(G, N, G.generators(), lattice_cap);
  for (std::size_t b = 0; b < lat.size(); ++b)
    for (std::size_t a = 0; a < b; ++a) {
      const Subgroup& B = lat[b];
      const Subgroup& A = lat[a];
      const std::size_t q = B.order() / A.order();
      if (q < 60 || q % 4 != 0 || !A.members.is_subset_of(B.members)) continue;
      const GroupTable Q = section(G, B, A.members);
      if (is_simple_nonabelian(Q))
        return {false, "section of order " + std::to_string(q) + " is simple nonabelian"};
      if (is_simple_square(Q, lattice_cap))
        return {false, "section of order " + std::to_string(q) + " is S x S for simple S"};
    }
  return {true, "acceptable"};
}

// Least t with H = ([H,g_1] ⋯ [H,g_r])^{*t} for acceptable H with <g> H = Γ.
inline WidthReport key_c_check(const GroupTable& G, const ElementSet& H_set, const std::vector<Index>& g,
                               std::size_t lattice_cap = kDefaultLatticeCap) {
  const auto acc = acceptable_check(G, H_set, lattice_cap);
  if (!acc.acceptable) throw Error(ErrorKind::NotAcceptable, "subgroup is not acceptable: " + acc.reason);
  const Subgroup H{H_set, generators_of(G, H_set)};
  if (generated_mod(G, g, H).order() != G.order())
    throw Error(ErrorKind::NotGeneratingMod, "elements do not generate G modulo H");
  std::vector<TwistedSet> factors;
  for (Index x : g) factors.push_back(twisted_commutator_set(G, H_set, x));
  WidthReport w = minimal_width(G, H_set, factors);
  w.d = min_generators(G);
  if (G.order() <= kDefaultSubgroupCap) w.alpha = alpha(G);
  return w;
}

}  // namespace classcover
