#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "classcover/build.hpp"
#include "classcover/classes.hpp"
#include "classcover/error.hpp"
#include "classcover/group_spec.hpp"
#include "classcover/group_table.hpp"
#include "classcover/perm_spectrum.hpp"
#include "classcover/products.hpp"

namespace classcover {

// Alternating coordinates above this degree are handled by formulas only.
inline constexpr int kSymbolicAbove = 8;

struct FamilyMember {
  GroupSpec spec;
  bool symbolic = false;
};

struct Family {
  std::vector<FamilyMember> members;
  std::size_t size() const noexcept { return members.size(); }
};

inline FamilyMember family_member(GroupSpec s) {
  const bool sym = s.kind == GroupSpec::Kind::Alternating && s.n > kSymbolicAbove;
  return {std::move(s), sym};
}

inline Family alternating_family(int from, int to) {
  Family f;
  for (int n = from; n <= to; ++n) f.members.push_back(family_member(GroupSpec::alternating(n)));
  return f;
}

// {"members": ["A_5", "PSL(2,7)", {"range": "A_n", "from": 5, "to": 2000}]}
inline Family parse_family(const nlohmann::json& j) {
  Family f;
  try {
    for (const auto& m : j.at("members")) {
      if (m.is_string()) {
        f.members.push_back(family_member(parse_spec(m.get<std::string>())));
        continue;
      }
      const auto range = m.at("range").get<std::string>();
      if (range != "A_n") throw Error(ErrorKind::InvalidSpec, "only A_n ranges are supported");
      const int from = m.at("from").get<int>(), to = m.at("to").get<int>();
      if (from < 5 || to < from) throw Error(ErrorKind::InvalidSpec, "A_n range needs 5 <= from <= to");
      for (int n = from; n <= to; ++n) f.members.push_back(family_member(GroupSpec::alternating(n)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("family file: ") + e.what());
  }
  return f;
}

// A coordinate is a cycle type (alternating members) or an element index.
using Coordinate = std::variant<CycleType, Index>;
using TupleElement = std::vector<Coordinate>;

// Lazily built tables for the enumerable members of a family.
class FamilyTables {
 public:
  struct Entry;
  using Store = std::map<std::string, std::shared_ptr<Entry>>;

  // `shared` lets several families reuse built tables.
  explicit FamilyTables(const Family& f, std::size_t cap = kDefaultEnumerationCap, std::shared_ptr<Store> shared = {})
      : family_(f), cap_(cap), cache_(shared ? std::move(shared) : std::make_shared<Store>()) {}

  const Family& family() const noexcept { return family_; }

  struct Entry {
    GroupTable group;
    ClassTable classes;
  };

  const Entry& entry(std::size_t j) {
    const auto& m = family_.members.at(j);
    if (m.symbolic) throw Error(ErrorKind::PreconditionViolated, render(m.spec) + " is symbolic");
    const std::string key = render(m.spec);
    auto it = cache_->find(key);
    if (it == cache_->end()) {
      auto e = std::make_shared<Entry>();
      e->group = build_group(m.spec, cap_);
      e->classes = class_table(e->group);
      it = cache_->emplace(key, std::move(e)).first;
    }
    return *it->second;
  }

  // Element of an enumerable coordinate; cycle types map to a permutation
  // with consecutive cycles.
  Index element(std::size_t j, const Coordinate& c) {
    const Entry& e = entry(j);
    if (const Index* x = std::get_if<Index>(&c)) {
      if (*x >= e.group.order()) throw Error(ErrorKind::OutOfRange, "coordinate element out of range");
      return *x;
    }
    const CycleType& t = std::get<CycleType>(c);
    if (!e.group.has_forms() || e.group.form_kind() != FormKind::Permutation || e.group.form_degree() != t.n)
      throw Error(ErrorKind::PreconditionViolated, "cycle type given for a non-permutation coordinate");
    detail::Perm p = detail::identity_perm(t.n);
    int off = 0;
    for (int len : t.parts) {
      for (int i = 0; i < len; ++i) p[static_cast<std::size_t>(off + i)] = static_cast<std::uint16_t>(off + (i + 1) % len);
      off += len;
    }
    auto x = e.group.find_form(p);
    if (!x) throw Error(ErrorKind::OddParity, "cycle type " + to_string(t) + " is not in " + render(family_.members[j].spec));
    return *x;
  }

  SpectrumValue value(std::size_t j, const Coordinate& c) {
    const auto& m = family_.members.at(j);
    if (m.symbolic) {
      const CycleType* t = std::get_if<CycleType>(&c);
      if (!t) throw Error(ErrorKind::PreconditionViolated, "symbolic coordinates need a cycle type");
      if (t->n != m.spec.n) throw Error(ErrorKind::PreconditionViolated, "cycle type degree mismatch");
      return spectrum_value_an(*t);
    }
    const Entry& e = entry(j);
    const Index x = element(j, c);
    return make_spectrum_value(std::log(static_cast<double>(e.classes.of(x).size)),
                               std::log(static_cast<double>(e.group.order())));
  }

  double h(std::size_t j, const Coordinate& c) { return value(j, c).h; }

 private:
  const Family& family_;
  std::size_t cap_;
  std::shared_ptr<Store> cache_;
};

inline void require_length(const Family& f, const TupleElement& t) {
  if (t.size() != f.size())
    throw Error(ErrorKind::LengthMismatch, "tuple has " + std::to_string(t.size()) + " coordinates, family has " +
                                               std::to_string(f.size()));
}

struct HSequence {
  std::vector<SpectrumValue> values;
  LimitReport limit;
};

inline HSequence h_sequence(FamilyTables& ft, const TupleElement& t, double tolerance = 0.05) {
  require_length(ft.family(), t);
  HSequence s;
  std::vector<double> hs;
  for (std::size_t j = 0; j < t.size(); ++j) {
    s.values.push_back(ft.value(j, t[j]));
    hs.push_back(s.values.back().h);
  }
  s.limit = limit_report(hs, tolerance);
  return s;
}

// A(t, eps) = {j : h_j(t_j) < eps}, 0-based.
inline std::vector<std::size_t> a_set(FamilyTables& ft, const TupleElement& t, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::OutOfRange, "eps must be positive");
  require_length(ft.family(), t);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < t.size(); ++j)
    if (ft.h(j, t[j]) < eps) out.push_back(j);
  return out;
}

struct FipResult {
  bool has_fip = false;
  std::optional<std::size_t> witness;  // a common index
  // When empty: for each index j, some pair i with h_j(t_i) >= eps_min.
  std::vector<std::pair<std::size_t, double>> certificate;
};

inline FipResult fip_check(FamilyTables& ft, const std::vector<std::pair<TupleElement, double>>& pairs) {
  if (pairs.empty()) throw Error(ErrorKind::PreconditionViolated, "fip_check needs at least one pair");
  const std::size_t n = ft.family().size();
  std::vector<bool> in_all(n, true);
  double eps_min = pairs.front().second;
  for (const auto& [t, eps] : pairs) {
    eps_min = std::min(eps_min, eps);
    std::vector<bool> in(n, false);
    for (std::size_t j : a_set(ft, t, eps)) in[j] = true;
    for (std::size_t j = 0; j < n; ++j) in_all[j] = in_all[j] && in[j];
  }
  FipResult r;
  for (std::size_t j = 0; j < n; ++j)
    if (in_all[j]) {
      r.has_fip = true;
      r.witness = j;
      return r;
    }
  for (std::size_t j = 0; j < n; ++j) {
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double h = ft.h(j, pairs[i].first[j]);
      if (h >= eps_min && (!best || h > best->second)) best = std::pair{i, h};
    }
    // With unequal eps a coordinate may miss every A-set yet stay below eps_min.
    r.certificate.push_back(best.value_or(std::pair{pairs.size(), 0.0}));
  }
  return r;
}

struct CoverCertificate {
  std::size_t N = 0;
  bool verified = false;
  std::vector<std::optional<std::size_t>> per_coordinate;  // nullopt for symbolic or never
  std::size_t verified_coordinates = 0;
  std::size_t symbolic_coordinates = 0;
};

// Least N with ∏_i (C_i)^{*N} = S, C_i the classes of the given elements.
inline std::optional<std::size_t> class_power_product_cover(const GroupTable& S, const ClassTable& ct,
                                                            const std::vector<Index>& elems, std::size_t limit = 64) {
  const ClassProducts cp(S, ct);
  std::vector<ElementSet> base, power;
  for (Index x : elems) {
    base.push_back(ct.of(x).members);
    power.push_back(base.back());
  }
  for (std::size_t N = 1; N <= limit; ++N) {
    ElementSet acc = power[0];
    for (std::size_t i = 1; i < power.size(); ++i) acc = cp.product(acc, power[i]);
    if (acc.count() == S.order()) return N;
    for (std::size_t i = 0; i < power.size(); ++i) power[i] = cp.product(power[i], base[i]);
  }
  return std::nullopt;
}

inline bool class_power_product_covers(const GroupTable& S, const ClassTable& ct, const std::vector<Index>& elems,
                                       std::size_t N) {
  const ClassProducts cp(S, ct);
  ElementSet acc = singleton(S, GroupTable::identity());
  for (Index x : elems) {
    const ElementSet& c = ct.of(x).members;
    ElementSet pw = c;
    for (std::size_t k = 1; k < N && pw.count() < S.order(); ++k) pw = cp.product(pw, c);
    acc = cp.product(acc, pw);
  }
  return acc.count() == S.order();
}

// Every coordinate needs some tuple with h >= eps. Enumerable coordinates get
// exact minimal exponents and a check with the common N; symbolic ones are
// counted but not verified.
inline CoverCertificate cover_certificate(FamilyTables& ft, const std::vector<TupleElement>& tuples, double eps) {
  if (tuples.empty()) throw Error(ErrorKind::PreconditionViolated, "cover_certificate needs at least one tuple");
  const std::size_t n = ft.family().size();
  for (const auto& t : tuples) require_length(ft.family(), t);
  for (std::size_t j = 0; j < n; ++j) {
    bool big = false;
    for (const auto& t : tuples) big = big || ft.h(j, t[j]) >= eps;
    if (!big)
      throw Error(ErrorKind::PreconditionViolated,
                  "coordinate " + std::to_string(j + 1) + " has only classes with h < eps");
  }
  CoverCertificate c;
  c.per_coordinate.assign(n, std::nullopt);
  bool all_found = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (ft.family().members[j].symbolic) {
      ++c.symbolic_coordinates;
      continue;
    }
    const auto& e = ft.entry(j);
    std::vector<Index> elems;
    for (const auto& t : tuples) elems.push_back(ft.element(j, t[j]));
    c.per_coordinate[j] = class_power_product_cover(e.group, e.classes, elems);
    if (c.per_coordinate[j]) c.N = std::max(c.N, *c.per_coordinate[j]);
    else all_found = false;
  }
  c.verified = all_found;
  for (std::size_t j = 0; j < n && all_found; ++j) {
    if (ft.family().members[j].symbolic) continue;
    const auto& e = ft.entry(j);
    std::vector<Index> elems;
    for (const auto& t : tuples) elems.push_back(ft.element(j, t[j]));
    if (class_power_product_covers(e.group, e.classes, elems, c.N)) ++c.verified_coordinates;
    else c.verified = false;
  }
  return c;
}

struct PrincipalQuotient {
  GroupSpec spec;
  std::size_t index = 0;
  // For enumerable members: every nonidentity class has h > 0, so the kernel
  // restricted to the truncation is {g : g_j = e}.
  std::optional<bool> kernel_is_coordinate_trivial;
};

inline PrincipalQuotient principal_quotient(FamilyTables& ft, std::size_t j) {
  if (j >= ft.family().size())
    throw Error(ErrorKind::OutOfRange, "index " + std::to_string(j + 1) + " outside the truncation");
  PrincipalQuotient q{ft.family().members[j].spec, j, std::nullopt};
  if (!ft.family().members[j].symbolic) {
    const auto& e = ft.entry(j);
    bool ok = true;
    for (const auto& c : e.classes.classes)
      if (c.rep != GroupTable::identity() && !(std::log(static_cast<double>(c.size)) > 0)) ok = false;
    q.kernel_is_coordinate_trivial = ok;
  }
  return q;
}

// g lies in K for the principal ultrafilter at j iff h_j(g_j) = 0.
inline bool in_principal_kernel(FamilyTables& ft, std::size_t j, const TupleElement& g) {
  require_length(ft.family(), g);
  return ft.h(j, g[j]) == 0.0;
}

struct SubadditivityResult {
  std::size_t pairs_checked = 0;  // class pairs
  std::size_t violations = 0;
};

// h(ab) <= h(a) + h(b) over all a, b, evaluated one class pair at a time.
inline SubadditivityResult subadditivity_check(const GroupTable& G, const ClassTable& ct) {
  SubadditivityResult r;
  const double lg = std::log(static_cast<double>(G.order()));
  auto h = [&](std::size_t c) { return lg > 0 ? std::log(static_cast<double>(ct.classes[c].size)) / lg : 0.0; };
  const ClassProducts cp(G, ct);
  for (std::size_t a = 0; a < ct.size(); ++a)
    for (std::size_t b = 0; b < ct.size(); ++b) {
      ++r.pairs_checked;
      const ElementSet prod = cp.product(ct.classes[a].members, ct.classes[b].members);
      for (std::size_t c = 0; c < ct.size(); ++c)
        if (prod.contains(ct.classes[c].rep) && h(c) > h(a) + h(b) + 1e-12) ++r.violations;
    }
  return r;
}

// Least h over nonidentity classes.
inline double min_nontrivial_h(const GroupTable& G, const ClassTable& ct) {
  double best = 1.0;
  const double lg = std::log(static_cast<double>(G.order()));
  for (const auto& c : ct.classes)
    if (c.rep != GroupTable::identity()) best = std::min(best, std::log(static_cast<double>(c.size)) / lg);
  return best;
}

struct DichotomyTrial {
  std::size_t length = 0;
  std::size_t tuples = 0;
  std::size_t blocked = 0;  // coordinates where every tuple has h < eps
  bool fip = false;
  bool cover = false;       // precondition holds and every enumerable coordinate verified
  std::string cover_error;
  bool consistent() const { return fip != cover && fip == (blocked > 0); }
};

// A random alternating family of the given length (half of the trials start
// with the enumerable degrees 5..8) and 1..3 tuples. With probability 1/2 a
// few coordinates are blocked; every other coordinate gets a tuple with
// h >= eps.
inline DichotomyTrial dichotomy_trial(std::uint64_t seed, std::size_t length, double eps,
                                      std::shared_ptr<FamilyTables::Store> shared = {}) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::set<int> degrees;
  if (uniform(0, 1) == 1)
    for (int n = 5; n <= 8 && degrees.size() < length; ++n) degrees.insert(n);
  const std::size_t top = 5 + 20 * length;
  while (degrees.size() < length) degrees.insert(static_cast<int>(uniform(9, top)));
  Family fam;
  for (int n : degrees) fam.members.push_back(family_member(GroupSpec::alternating(n)));

  const std::size_t k = uniform(1, 3);
  std::vector<bool> blocked(length, false);
  DichotomyTrial t;
  t.length = length;
  t.tuples = k;
  if (uniform(0, 1) == 1) {
    const std::size_t b = uniform(1, 3);
    for (std::size_t i = 0; i < b; ++i) blocked[uniform(0, length - 1)] = true;
  }
  for (bool b : blocked) t.blocked += b;

  auto small = [&](int n) {
    // a few moved points; kept only when its h is below eps
    std::vector<int> parts;
    const int moved = static_cast<int>(uniform(0, 2));
    if (moved == 1) parts = {3};
    if (moved == 2) parts = {2, 2};
    CycleType c = CycleType::of(n, parts);
    return spectrum_value_an(c).h < eps ? c : CycleType::identity(n);
  };
  auto large = [&](int n) {
    for (int tries = 0; tries < 8; ++tries) {
      const double beta = std::uniform_real_distribution<double>(std::min(1.0, eps + 0.1), 1.0)(rng);
      CycleType c = CycleType::of(n, {nearest_odd_length(beta * n, n)});
      if (spectrum_value_an(c).h >= eps) return c;
    }
    return CycleType::of(n, {n % 2 ? n : n - 1});
  };
  std::vector<TupleElement> tuples(k, TupleElement(length));
  for (std::size_t j = 0; j < length; ++j) {
    const int n = fam.members[j].spec.n;
    const std::size_t forced = uniform(0, k - 1);
    for (std::size_t i = 0; i < k; ++i) {
      const bool big = !blocked[j] && (i == forced || uniform(0, 1) == 1);
      tuples[i][j] = big ? large(n) : small(n);
    }
  }

  FamilyTables ft(fam, kDefaultEnumerationCap, std::move(shared));
  std::vector<std::pair<TupleElement, double>> pairs;
  for (const auto& tu : tuples) pairs.push_back({tu, eps});
  t.fip = fip_check(ft, pairs).has_fip;
  try {
    t.cover = cover_certificate(ft, tuples, eps).verified;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PreconditionViolated) throw;
    t.cover_error = e.what();
  }
  return t;
}

inline std::string h_csv(const HSequence& s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(6);
  o << "index,h\n";
  for (std::size_t j = 0; j < s.values.size(); ++j) o << j + 1 << ',' << s.values[j].h << '\n';
  return o.str();
}

}  // namespace classcover
