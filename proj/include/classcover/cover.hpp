#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "classcover/build.hpp"
#include "classcover/classes.hpp"
#include "classcover/detail/parallel.hpp"
#include "classcover/error.hpp"
#include "classcover/fingerprint.hpp"
#include "classcover/group_table.hpp"
#include "classcover/products.hpp"
#include "classcover/subgroup.hpp"

namespace classcover {

struct CoveringResult {
  std::optional<std::size_t> cn;  // nullopt means "never"
  ElementSet stabilized;
};

inline CoveringResult covering_number(const GroupTable& G, const ClassTable& classes, std::size_t class_index) {
  auto r = covering_power(G, classes.classes.at(class_index).members, &classes);
  return {r.exponent, std::move(r.reached)};
}

inline CoveringResult covering_number(const GroupTable& G, const ConjClass& C) {
  const ClassTable t = class_table(G);
  return covering_number(G, t, t.class_of[C.rep]);
}

struct ProductCoverResult {
  bool covers = false;
  ElementSet achieved;
};

// Whether (S_1 ⋯ S_k)^{*t} = G.
inline ProductCoverResult product_covers(const GroupTable& G, const std::vector<ElementSet>& sets, std::size_t t) {
  if (sets.empty()) throw Error(ErrorKind::PreconditionViolated, "product_covers needs at least one set");
  if (t == 0) throw Error(ErrorKind::PreconditionViolated, "product_covers needs t >= 1");
  bool normal = true;
  for (const auto& s : sets) {
    if (s.empty()) throw Error(ErrorKind::PreconditionViolated, "product_covers needs nonempty sets");
    normal = normal && is_normal_set(G, s);
  }
  ElementSet P(G.order());
  std::optional<ClassTable> classes;
  std::optional<ClassProducts> cp;
  if (normal) {
    classes = class_table(G);
    cp.emplace(G, *classes);
  }
  auto mul = [&](const ElementSet& a, const ElementSet& b) { return cp ? cp->product(a, b) : product(G, a, b); };
  P = sets[0];
  for (std::size_t i = 1; i < sets.size(); ++i) P = mul(P, sets[i]);
  ElementSet acc = P;
  for (std::size_t i = 1; i < t && acc.count() < G.order(); ++i) acc = mul(acc, P);
  return {acc.count() == G.order(), acc};
}

struct CoverRow {
  std::string group;
  Index class_rep = 0;
  std::string class_rep_text;
  std::size_t class_size = 0;
  std::optional<std::size_t> cn;
  bool central = false;
  double ratio = 0;  // cn * log|C| / log|S|, noncentral classes only
};

struct CoverReport {
  std::vector<CoverRow> rows;
  double c_ls = 0;                           // max ratio over noncentral rows
  std::map<int, std::size_t> c_alpha;        // alpha -> max cn over noncentral rows
  std::map<std::string, int> member_alpha;   // group -> alpha
};

inline std::vector<CoverRow> cover_rows(const GroupTable& G, const ClassTable& classes, const std::string& name,
                                        unsigned threads = 1) {
  std::vector<CoverRow> rows(classes.size());
  const double log_order = std::log(static_cast<double>(G.order()));
  detail::parallel_for(classes.size(), threads, [&](std::size_t i) {
    const ConjClass& c = classes.classes[i];
    CoverRow& r = rows[i];
    r.group = name;
    r.class_rep = c.rep;
    r.class_rep_text = G.render(c.rep);
    r.class_size = c.size;
    r.central = c.size == 1;
    r.cn = covering_number(G, classes, i).cn;
    if (!r.central && r.cn && log_order > 0)
      r.ratio = static_cast<double>(*r.cn) * std::log(static_cast<double>(c.size)) / log_order;
  });
  return rows;
}

// Simple nonabelian, or perfect with simple nonabelian central quotient.
inline bool is_simple_or_quasisimple(const GroupTable& G) {
  if (is_simple_nonabelian(G)) return true;
  if (!is_perfect(G)) return false;
  const Subgroup Z = center(G);
  return is_simple_nonabelian(GroupTable::quotient(G, Z.members, "G/Z"));
}

// alpha with the A_n / S_n shortcut for members beyond the subgroup cap.
inline int alpha_of(const GroupSpec& s, const GroupTable& G, std::size_t subgroup_cap = kDefaultSubgroupCap) {
  if (s.kind == GroupSpec::Kind::Alternating || s.kind == GroupSpec::Kind::Symmetric) return s.n >= 3 ? s.n : 0;
  return alpha(G, subgroup_cap);
}

inline CoverReport ls_ratio(const std::vector<GroupSpec>& corpus, std::size_t cap = kDefaultEnumerationCap,
                            unsigned threads = 1) {
  CoverReport rep;
  for (const auto& spec : corpus) {
    const GroupTable G = build_group(spec, cap);
    const std::string name = render(spec);
    if (!is_simple_or_quasisimple(G))
      throw Error(ErrorKind::PreconditionViolated, name + " is not simple or quasisimple nonabelian");
    const int a = alpha_of(spec, G);
    rep.member_alpha[name] = a;
    const ClassTable classes = class_table(G);
    for (auto& r : cover_rows(G, classes, name, threads)) {
      if (!r.central) {
        if (!r.cn) throw Error(ErrorKind::PreconditionViolated, name + ": noncentral class never covers");
        rep.c_ls = std::max(rep.c_ls, r.ratio);
        rep.c_alpha[a] = std::max(rep.c_alpha[a], *r.cn);
      }
      rep.rows.push_back(std::move(r));
    }
  }
  return rep;
}

inline std::string cover_csv(const std::vector<CoverRow>& rows) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(6);
  s << "group,class_rep,class_size,cn,ratio\n";
  for (const auto& r : rows) {
    s << '"' << r.group << "\",\"" << r.class_rep_text << "\"," << r.class_size << ',';
    if (r.cn) s << *r.cn;
    else s << "never";
    s << ',';
    if (r.central) s << "central";
    else s << r.ratio;
    s << '\n';
  }
  return s.str();
}

}  // namespace classcover
