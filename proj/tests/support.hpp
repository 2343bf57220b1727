#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "classcover/error.hpp"
#include "classcover/group_table.hpp"
#include "oracle.hpp"

// An oracle copy of a permutation table, closed from the same generators,
// with the index correspondence.
struct Mirror {
  oracle::Group group;
  std::vector<oracle::Perm> elems;
  std::vector<std::size_t> of;  // table index -> oracle index

  std::set<std::size_t> image(const classcover::ElementSet& s) const {
    std::set<std::size_t> r;
    s.for_each([&](classcover::Index x) { r.insert(of[x]); });
    return r;
  }
};

inline oracle::Perm perm_of(const classcover::GroupTable& G, classcover::Index x) {
  const auto f = G.form(x);
  return oracle::Perm(f.begin(), f.end());
}

inline Mirror mirror(const classcover::GroupTable& G) {
  std::vector<oracle::Perm> gens;
  for (auto g : G.generators()) gens.push_back(perm_of(G, g));
  const auto all = oracle::closure(gens, G.form_degree());
  Mirror m;
  m.group = oracle::from_perms(all);
  m.elems.assign(all.begin(), all.end());
  std::map<oracle::Perm, std::size_t> idx;
  for (std::size_t i = 0; i < m.elems.size(); ++i) idx[m.elems[i]] = i;
  m.of.resize(G.order());
  for (classcover::Index x = 0; x < G.order(); ++x) m.of[x] = idx.at(perm_of(G, x));
  return m;
}

template <class F>
std::optional<classcover::ErrorKind> thrown(F&& f) {
  try {
    f();
  } catch (const classcover::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}
