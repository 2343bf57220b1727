#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "classcover/classes.hpp"
#include "classcover/element_set.hpp"
#include "classcover/group_table.hpp"

namespace classcover {

// A·B, looping over the members of the smaller factor.
inline ElementSet product(const GroupTable& G, const ElementSet& A, const ElementSet& B) {
  ElementSet out(G.order());
  if (A.empty() || B.empty()) return out;
  if (B.count() <= A.count()) {
    const auto am = A.members();
    B.for_each([&](Index b) {
      for (Index a : am) out.insert(G.mul(a, b));
    });
  } else {
    const auto bm = B.members();
    A.for_each([&](Index a) {
      for (Index b : bm) out.insert(G.mul(a, b));
    });
  }
  return out;
}

inline ElementSet product(const GroupTable& G, const std::vector<ElementSet>& sets) {
  ElementSet acc(G.order());
  acc.insert(GroupTable::identity());
  for (const auto& s : sets) acc = product(G, acc, s);
  return acc;
}

inline ElementSet singleton(const GroupTable& G, Index x) {
  ElementSet s(G.order());
  s.insert(x);
  return s;
}

inline bool is_normal_set(const GroupTable& G, const ElementSet& S) {
  bool ok = true;
  S.for_each([&](Index x) {
    if (!ok) return;
    for (Index g : G.generators())
      if (!S.contains(G.conj(x, g))) {
        ok = false;
        return;
      }
  });
  return ok;
}

// Products of unions of conjugacy classes, done one class representative at a
// time: a class L lies in X·Y iff l·y^-1 is in X for some y in Y.
class ClassProducts {
 public:
  ClassProducts(const GroupTable& G, const ClassTable& t) : G_(G), t_(t) {}

  std::vector<bool> classes_of(const ElementSet& S) const {
    std::vector<bool> r(t_.size(), false);
    S.for_each([&](Index x) { r[t_.class_of[x]] = true; });
    return r;
  }

  ElementSet members(const std::vector<bool>& cls) const {
    ElementSet s(G_.order());
    for (std::size_t i = 0; i < cls.size(); ++i)
      if (cls[i]) s |= t_.classes[i].members;
    return s;
  }

  ElementSet product(const ElementSet& X, const ElementSet& Y) const {
    const ElementSet& small = Y.count() <= X.count() ? Y : X;
    const ElementSet& big = Y.count() <= X.count() ? X : Y;
    const bool right = &small == &Y;
    const auto sm = small.members();
    ElementSet out(G_.order());
    for (const auto& c : t_.classes) {
      const Index l = c.rep;
      bool hit = false;
      for (Index s : sm) {
        const Index other = right ? G_.mul(l, G_.inv(s)) : G_.mul(G_.inv(s), l);
        if (big.contains(other)) {
          hit = true;
          break;
        }
      }
      if (hit) out |= c.members;
    }
    return out;
  }

 private:
  const GroupTable& G_;
  const ClassTable& t_;
};

struct PowerResult {
  std::optional<std::size_t> exponent;  // least t with S^{*t} = target, if any
  ElementSet reached;                   // the set where the search stopped
};

// Least t >= 1 with S^{*t} = G. The sequence of powers is eventually periodic,
// so a repeat without reaching G means it never does.
inline PowerResult covering_power(const GroupTable& G, const ElementSet& S, const ClassTable* classes = nullptr,
                                  std::size_t max_steps = 0) {
  std::unordered_set<ElementSet, ElementSetHash> seen;
  std::optional<ClassProducts> cp;
  if (classes && is_normal_set(G, S)) cp.emplace(G, *classes);
  ElementSet cur = S;
  for (std::size_t t = 1;; ++t) {
    if (cur.count() == G.order()) return {t, cur};
    if (!seen.insert(cur).second || cur.empty() || (max_steps && t >= max_steps)) return {std::nullopt, cur};
    cur = cp ? cp->product(cur, S) : product(G, cur, S);
  }
}

// Least t >= 0 with Q^{*t} ⊇ target when identity ∈ Q; grows by frontier
// since Q^{*(t+1)} = Q^{*t} ∪ (Q^{*t} \ Q^{*(t-1)})·Q.
inline PowerResult reach_power(const GroupTable& G, const ElementSet& Q, const ElementSet& target,
                               const ElementSet& start, std::size_t max_steps = 0) {
  ElementSet cur = start;
  ElementSet frontier = start;
  const auto qm = Q.members();
  for (std::size_t t = 0;; ++t) {
    if (target.is_subset_of(cur)) return {t, cur};
    if (frontier.empty() || (max_steps && t >= max_steps)) return {std::nullopt, cur};
    ElementSet next(G.order());
    frontier.for_each([&](Index x) {
      for (Index q : qm) {
        const Index y = G.mul(x, q);
        if (!cur.contains(y)) next.insert(y);
      }
    });
    cur |= next;
    frontier = std::move(next);
  }
}

}  // namespace classcover
