// One line per acceptance criterion. `--record` also prints the measured
// values that the pinned constants below were taken from. `--expect-fail N`
// names a criterion documented as unattainable: its line still reads FAIL,
// and the exit status is zero only when the failing set is exactly the
// expected one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "classcover/automorphism.hpp"
#include "classcover/build.hpp"
#include "classcover/corpus.hpp"
#include "classcover/cover.hpp"
#include "classcover/density.hpp"
#include "classcover/filterbase.hpp"
#include "classcover/matgrp.hpp"
#include "classcover/perm_spectrum.hpp"
#include "classcover/widths.hpp"

using namespace classcover;

namespace {

// Tolerances.
constexpr double kSpectrumTol = 0.1;
constexpr double kRatioSlack = 1e-9;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kSweepSeconds = 600.0;
constexpr double kDichotomyEps = 0.3;
constexpr std::size_t kDichotomyTrials = 128;
constexpr std::size_t kDichotomyLength = 200;
constexpr std::size_t kSegalExpectedMax = 4;

// Regression values from oracle runs.
constexpr double kPinnedCLS = 2.595207243474015;
const std::map<int, std::size_t> kPinnedCAlpha = {{4, 3}, {5, 5}, {6, 3}, {7, 3}, {8, 4}};
const std::map<std::pair<std::size_t, int>, std::size_t> kPinnedT = {{{2, 0}, 1}, {{2, 3}, 1}, {{2, 4}, 2}};

bool record = false;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(prec);
  o << v;
  return o.str();
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const CoverReport rep = ls_ratio(covering_corpus(), kDefaultEnumerationCap, detail::default_threads());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t noncentral = 0, finite = 0;
  double worst = 0;
  for (const auto& r : rep.rows) {
    if (r.central) continue;
    ++noncentral;
    if (r.cn) ++finite;
    worst = std::max(worst, r.ratio);
  }
  if (record) {
    std::cout << "  record: cLS " << fmt(rep.c_ls, 15) << "; c(alpha)";
    for (const auto& [a, c] : rep.c_alpha) std::cout << ' ' << a << ':' << c;
    std::cout << '\n';
  }
  const bool ok = noncentral == finite && worst <= kPinnedCLS + kRatioSlack && secs < kSweepSeconds &&
                  rep.c_alpha == kPinnedCAlpha;
  return {ok, std::to_string(finite) + "/" + std::to_string(noncentral) + " noncentral classes finite, max ratio " +
                  fmt(worst) + " <= " + fmt(kPinnedCLS) + ", sweep " + fmt(secs, 2) + " s"};
}

Outcome criterion2() {
  bool ok = true;
  double worst4 = 0, worst_alpha = 0;
  for (int i = 0; i <= 10; ++i) {
    const double b = i / 10.0;
    const auto e4 = spectrum_row(10000, b).abs_error;
    const auto e5 = spectrum_row(100000, b).abs_error;
    ok = ok && e4 <= kSpectrumTol && e5 < e4;
    worst4 = std::max(worst4, e4);
    // literal (1-beta)n recipe: close to 1-beta and improving with n
    const auto a4 = spectrum_row(10000, b, CycleRule::Alpha).abs_error;
    const auto a5 = spectrum_row(100000, b, CycleRule::Alpha).abs_error;
    ok = ok && a4 <= kSpectrumTol && a5 <= a4;
    worst_alpha = std::max(worst_alpha, a5);
    if (record)
      std::cout << "  record: beta " << fmt(b, 1) << " err(1e4) " << fmt(e4) << " err(1e5) " << fmt(e5)
                << " literal err(1e5) to 1-beta " << fmt(a5) << '\n';
  }
  return {ok, "max |h-beta| at 1e4 " + fmt(worst4) + ", literal recipe within " + fmt(worst_alpha) + " of 1-beta at 1e5"};
}

// |C_G(g)| by direct matrix multiplication over the enumerated group.
std::size_t brute_centralizer(const GroupTable& G, Index g) {
  const int n = G.form_degree(), p = G.form_modulus();
  auto mat = [&](Index x) {
    FpMatrix m = FpMatrix::identity(n, p);
    const auto f = G.form(x);
    for (int i = 0; i < n * n; ++i) m.a[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)];
    return m;
  };
  const FpMatrix a = mat(g);
  std::size_t c = 0;
  for (Index x = 0; x < G.order(); ++x) {
    const FpMatrix b = mat(x);
    if (a * b == b * a) ++c;
  }
  return c;
}

Outcome criterion3() {
  bool ok = true;
  std::string detail;
  for (auto [n, p] : {std::pair{4, 3}, std::pair{6, 3}}) {
    double prev = -1;
    bool mono = true;
    for (int i = 0; i <= 10; ++i) {
      const double h = spectrum_element_sl(n, p, i / 10.0).value.h;
      mono = mono && h + kMonotoneSlack >= prev;
      prev = h;
    }
    ok = ok && mono;
    detail += "SL(" + std::to_string(n) + "," + std::to_string(p) + ") " + (mono ? "monotone" : "NOT monotone") + "; ";
  }
  std::size_t mismatches = 0, checked = 0;
  for (const char* s : {"SL(2,3)", "SL(2,5)", "SL(3,2)"}) {
    const GroupTable G = build_group(s);
    for (Index x = 0; x < G.order(); ++x) {
      const std::size_t want = brute_centralizer(G, x);
      FpMatrix m = FpMatrix::identity(G.form_degree(), G.form_modulus());
      const auto f = G.form(x);
      for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = f[i];
      for (auto route : {CentralizerRoute::Enumerate, CentralizerRoute::Formula}) {
        ++checked;
        if (centralizer_order_sl(m, route) != want) ++mismatches;
      }
    }
  }
  ok = ok && mismatches == 0;
  return {ok, detail + std::to_string(mismatches) + " centralizer mismatches in " + std::to_string(checked) + " checks"};
}

std::vector<std::pair<GroupSpec, GroupTable>> small_groups(std::size_t max_order = 500) {
  std::vector<std::pair<GroupSpec, GroupTable>> out;
  for (const auto& s : small_corpus()) {
    GroupTable G = build_group(s);
    if (G.order() <= max_order) out.emplace_back(s, std::move(G));
  }
  return out;
}

Outcome criterion4() {
  std::mt19937_64 rng(0);
  std::size_t members = 0, tuples = 0, worst = 0;
  bool ok = true;
  for (const auto& [s, G] : small_groups()) {
    if (!is_soluble(G) || G.order() == 1) continue;
    ++members;
    const Subgroup D = derived_subgroup(G);
    std::vector<std::vector<Index>> cands{G.generators()};
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(G.order() - 1));
    for (int r = 0; r < 24; ++r) {
      std::vector<Index> t(1 + r % 3);
      for (auto& x : t) x = pick(rng);
      if (generated_mod(G, t, D).order() == G.order()) cands.push_back(t);
    }
    std::size_t local = 0;
    for (const auto& t : cands) {
      const WidthReport w = segal_check(G, t);
      ++tuples;
      const bool fine = w.minimal_t && *w.minimal_t <= segal_bound(t.size()) && *w.minimal_t <= kSegalExpectedMax;
      ok = ok && fine;
      if (w.minimal_t) local = std::max(local, *w.minimal_t);
    }
    worst = std::max(worst, local);
    if (record) std::cout << "  record: " << render(s) << " max minimal t " << local << " over " << cands.size() << " tuples\n";
  }
  return {ok, std::to_string(tuples) + " tuples over " + std::to_string(members) + " soluble groups, max minimal t " +
                  std::to_string(worst) + " (bound 72d+46 >= 118, expected <= " + std::to_string(kSegalExpectedMax) + ")"};
}

Outcome criterion5() {
  const GroupTable A4 = build_group("A_4");
  const Subgroup V = derived_subgroup(A4);
  const auto base = key_c_check(A4, V.members, {A4.parse_element("(1,2,3)").value()});
  bool ok = base.minimal_t && *base.minimal_t == 1;
  std::size_t pairs = 0;
  std::map<std::pair<std::size_t, int>, std::size_t> seen;
  for (const auto& [s, G] : small_groups()) {
    for (const auto& H : normal_subgroups(G)) {
      if (H.order() == 1 || !acceptable_check(G, H.members).acceptable) continue;
      const WidthReport w = key_c_check(G, H.members, G.generators());
      ++pairs;
      const auto key = std::pair{w.d, w.alpha};
      if (!w.minimal_t) {
        ok = false;
        continue;
      }
      seen[key] = std::max(seen[key], *w.minimal_t);
      const auto it = kPinnedT.find(key);
      ok = ok && it != kPinnedT.end() && *w.minimal_t <= it->second;
      if (record)
        std::cout << "  record: " << render(s) << " |H|=" << H.order() << " d=" << w.d << " alpha=" << w.alpha
                  << " t=" << *w.minimal_t << '\n';
    }
  }
  std::string table;
  for (const auto& [k, t] : seen) table += " t(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")=" + std::to_string(t);
  return {ok, "keyC(A_4,V_4,(123)) = " + (base.minimal_t ? std::to_string(*base.minimal_t) : "unreachable") + "; " +
                  std::to_string(pairs) + " acceptable pairs," + table};
}

Outcome criterion6() {
  std::size_t autos = 0, violations = 0;
  for (const auto& [s, G] : small_groups()) {
    const ClassTable t = class_table(G);
    std::vector<Automorphism> fs;
    for (Index a = 0; a < G.order(); ++a) fs.push_back(inner_automorphism(G, a));
    if (G.factors().size() >= 2 && G.factors()[0].group->order() == G.factors()[1].group->order() &&
        fingerprint(*G.factors()[0].group) == fingerprint(*G.factors()[1].group)) {
      try {
        fs.push_back(factor_swap(G));
      } catch (const Error&) {
      }
    }
    std::vector<std::size_t> counts(fs.size(), 0);
    detail::parallel_for(fs.size(), detail::default_threads(),
                         [&](std::size_t i) { counts[i] = lemma_useful_check(G, fs[i], &t).size(); });
    autos += fs.size();
    for (auto c : counts) violations += c;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(autos) + " automorphisms"};
}

Outcome criterion7() {
  const GroupTable T = build_group("SL(2,3) o SL(2,3)");
  const auto r = qsimple_check(T, {factor_swap(T)});
  const int a = alpha(T);
  const auto bound = kPinnedCAlpha.at(a);
  const bool witness = r.witness && r.witness->via.size() == T.factors().size();
  const bool ok = r.eligible && witness && r.minimal_c && *r.minimal_c <= bound;
  // The same check on a central product of quasisimple factors.
  const GroupTable U = build_group("SL(2,5) o SL(2,5)");
  const auto u = qsimple_check(U, {factor_swap(U)});
  std::string d = std::string("eligible ") + (r.eligible ? "yes" : "no") + ", witness " + (witness ? "found" : "missing") +
                  ", minimal c " + (r.minimal_c ? std::to_string(*r.minimal_c) : "never") + " (bound c(" +
                  std::to_string(a) + ")=" + std::to_string(bound) + ")";
  if (!r.minimal_c && !r.perfect)
    d += "; SL(2,3) is not perfect, so the products stay inside a proper subgroup";
  d += "; SL(2,5) o SL(2,5): minimal c " + (u.minimal_c ? std::to_string(*u.minimal_c) : std::string("never")) +
       " (bound c(5)=" + std::to_string(kPinnedCAlpha.at(5)) + ")";
  return {ok, d};
}

Outcome criterion8() {
  std::size_t instances = 0, lifted = 0;
  for (const auto& [s, G] : small_groups(200)) {
    if (G.order() == 1) continue;
    const std::size_t k = min_generators(G);
    for (const auto& M : normal_subgroups(G)) {
      // least element of each coset
      std::vector<Index> reps;
      ElementSet seen(G.order());
      for (Index x = 0; x < G.order(); ++x) {
        if (seen.contains(x)) continue;
        reps.push_back(x);
        M.members.for_each([&](Index m) { seen.insert(G.mul(x, m)); });
      }
      std::vector<std::size_t> digit(k, 0);
      while (true) {
        std::vector<Index> g(k);
        for (std::size_t i = 0; i < k; ++i) g[i] = reps[digit[i]];
        if (generated_mod(G, g, M).order() == G.order()) {
          ++instances;
          if (auto L = gaschutz_lift(G, M.members, g, k)) {
            bool in_cosets = true;
            for (std::size_t i = 0; i < k; ++i) in_cosets = in_cosets && M.contains(G.mul(G.inv(g[i]), (*L)[i]));
            if (in_cosets && generated_subgroup(G, *L).order() == G.order()) ++lifted;
          }
        }
        std::size_t i = 0;
        while (i < k && ++digit[i] == reps.size()) digit[i++] = 0;
        if (i == k) break;
      }
    }
  }
  return {instances > 0 && lifted == instances,
          std::to_string(lifted) + "/" + std::to_string(instances) + " instances lifted"};
}

Outcome criterion9() {
  auto store = std::make_shared<FamilyTables::Store>();
  std::size_t bad = 0, fip = 0, cover = 0;
  for (std::size_t i = 0; i < kDichotomyTrials; ++i) {
    const auto t = dichotomy_trial(1000 + i, kDichotomyLength, kDichotomyEps, store);
    bad += !t.consistent();
    fip += t.fip;
    cover += t.cover;
  }
  std::size_t pairs = 0, violations = 0;
  for (const char* s : {"A_5", "A_6", "A_7", "A_8", "PSL(2,7)", "SL(2,5)"}) {
    const GroupTable G = build_group(s);
    const auto r = subadditivity_check(G, class_table(G));
    pairs += r.pairs_checked;
    violations += r.violations;
  }
  const bool ok = bad == 0 && fip > 0 && cover > 0 && violations == 0;
  return {ok, std::to_string(kDichotomyTrials) + " families: " + std::to_string(bad) + " inconsistent (" +
                  std::to_string(fip) + " fip, " + std::to_string(cover) + " cover); subadditivity " +
                  std::to_string(violations) + " violations over " + std::to_string(pairs) + " class pairs"};
}

Outcome criterion10() {
  const GroupTable G = build_group("tau(5,6)");
  const std::size_t ab = G.order() / derived_subgroup(G).order();
  const auto cl = dense_closure_check(G, G.distinguished().value());
  const GroupTable S4 = build_group("S_4");
  const auto gs = g_star(S4);
  std::size_t moved_parity_ok = 0;
  gs.g_star.members.for_each([&](Index x) {
    const auto f = S4.form(x);
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j) inversions += f[i] > f[j];
    moved_parity_ok += inversions % 2 == 0;
  });
  const bool a4 = gs.g_star.order() == 12 && moved_parity_ok == 12;
  const bool ok = G.order() == 43200 && ab == 2 && cl.is_whole && a4;
  return {ok, "|tau(5,6)| = " + std::to_string(G.order()) + ", |G/G'| = " + std::to_string(ab) + ", closure of tau " +
                  std::to_string(cl.closure.order()) + ", gStar(S_4) " + (a4 ? "= A_4" : "!= A_4")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::size_t> expected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--record") == 0) record = true;
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) expected.insert(std::stoul(argv[++i]));
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"covering ratio", criterion1},
      {"alternating spectrum", criterion2},
      {"SL spectrum", criterion3},
      {"soluble widths", criterion4},
      {"acceptable-subgroup width", criterion5},
      {"twisted class inclusion", criterion6},
      {"qsimple", criterion7},
      {"Gaschutz lifting", criterion8},
      {"filter base dichotomy", criterion9},
      {"density example", criterion10}};
  int failed = 0;
  std::set<std::size_t> failing;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    if (!o.pass) failing.insert(i + 1);
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << ": "
              << o.detail << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria pass";
  if (!expected.empty()) {
    std::cout << "; expected failures:";
    for (auto e : expected) std::cout << ' ' << e;
  }
  std::cout << std::endl;
  return failing == expected ? 0 : 1;
}
