#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "classcover/automorphism.hpp"
#include "classcover/build.hpp"
#include "classcover/cache.hpp"
#include "classcover/classes.hpp"
#include "classcover/corpus.hpp"
#include "classcover/cover.hpp"
#include "classcover/density.hpp"
#include "classcover/detail/parallel.hpp"
#include "classcover/error.hpp"
#include "classcover/filterbase.hpp"
#include "classcover/fingerprint.hpp"
#include "classcover/matgrp.hpp"
#include "classcover/perm_spectrum.hpp"
#include "classcover/subgroup.hpp"
#include "classcover/widths.hpp"

namespace classcover::cli {

inline constexpr const char* kVersion = "1.0.0";

using json = nlohmann::json;
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

struct RunConfig {
  std::string config_file;
  std::string cache_dir;
  std::string format = "csv";
  std::string out;
  std::string meta;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultEnumerationCap;
  std::size_t lattice_cap = kDefaultLatticeCap;
  std::size_t subgroup_cap = kDefaultSubgroupCap;
  std::size_t algebra_cap = kDefaultAlgebraCap;

  std::vector<std::string> groups;
  std::string corpus;
  bool default_corpus = false;
  bool all_classes = false;
  std::string class_rep;

  std::vector<int> ns{10000};
  std::vector<double> betas;
  std::string rule = "beta";
  std::vector<int> sl;
  std::string route = "auto";

  std::string gens;
  std::string mode = "segal";
  std::string target;
  bool swap = false;

  std::string family;
  std::vector<int> range;
  double beta = 0.5;
  bool dichotomy = false;
  std::size_t trials = 100;
  std::size_t length = 200;
  double eps = 0.3;

  std::vector<int> tau_product;
  bool check_closure = false;
  bool gstar = false;
  bool projection = false;
};

// Splits an element list at top-level commas, or at '/' when present
// (matrix entries use commas themselves).
inline std::vector<std::string> split_elements(const std::string& text) {
  std::vector<std::string> out;
  const char sep = text.find('/') != std::string::npos ? '/' : ',';
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

inline Index parse_one(const GroupTable& G, const std::string& text) {
  std::optional<Index> x;
  try {
    x = G.parse_element(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
  }
  if (!x) throw Error(ErrorKind::ParseError, "cannot parse element '" + text + "' in " + G.name());
  return *x;
}

inline std::vector<Index> parse_elements(const GroupTable& G, const std::string& text) {
  std::vector<Index> out;
  for (const auto& s : split_elements(text)) out.push_back(parse_one(G, s));
  return out;
}

// whole | derived | V4 | normal:<order> | closure:<elements>
inline ElementSet parse_target(const GroupTable& G, const std::string& t, std::size_t lattice_cap) {
  if (t.empty() || t == "whole") return ElementSet::full(G.order());
  if (t == "derived") return derived_subgroup(G).members;
  if (t == "V4" || t.rfind("normal:", 0) == 0) {
    const std::size_t want = t == "V4" ? 4 : std::stoul(t.substr(7));
    std::optional<ElementSet> found;
    for (const auto& N : normal_subgroups(G, lattice_cap))
      if (N.order() == want) {
        if (found) throw Error(ErrorKind::PreconditionViolated, "several normal subgroups of order " + std::to_string(want));
        found = N.members;
      }
    if (!found) throw Error(ErrorKind::PreconditionViolated, "no normal subgroup of order " + std::to_string(want));
    return *found;
  }
  if (t.rfind("closure:", 0) == 0) {
    const auto xs = parse_elements(G, t.substr(8));
    return normal_closure(G, xs).members;
  }
  throw Error(ErrorKind::ParseError, "unknown target '" + t + "'");
}

inline std::vector<GroupSpec> selected_groups(const RunConfig& c) {
  std::vector<GroupSpec> specs;
  if (c.default_corpus) specs = covering_corpus();
  if (!c.corpus.empty())
    for (auto& s : load_corpus(c.corpus)) specs.push_back(std::move(s));
  for (const auto& g : c.groups) specs.push_back(parse_spec(g));
  if (specs.empty()) throw Error(ErrorKind::PreconditionViolated, "no group given (use --group, --corpus or --default-corpus)");
  return specs;
}

inline ClassTable classes_for(const RunConfig& c, const GroupSpec& s, const GroupTable& G) {
  if (c.cache_dir.empty()) return class_table(G);
  return ClassTableCache(c.cache_dir).get(s, G);
}

inline json optional_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

// One report: CSV text or a JSON document.
struct Report {
  std::string csv;
  json doc;
};

inline Report cmd_cover(const RunConfig& c) {
  const auto specs = selected_groups(c);
  if (specs.size() == 1 && !c.all_classes && c.class_rep.empty())
    throw Error(ErrorKind::PreconditionViolated, "give --all-classes or --class");
  std::vector<CoverRow> rows;
  json members = json::array();
  double c_ls = 0;
  std::map<int, std::size_t> c_alpha;
  bool all_qs = true;
  for (const auto& s : specs) {
    const GroupTable G = build_group(s, c.cap);
    const ClassTable t = classes_for(c, s, G);
    auto r = cover_rows(G, t, render(s), c.threads);
    if (!c.class_rep.empty()) {
      const Index x = parse_one(G, c.class_rep);
      const Index rep = t.of(x).rep;
      std::erase_if(r, [&](const CoverRow& row) { return row.class_rep != rep; });
    }
    const bool qs = is_simple_or_quasisimple(G);
    all_qs = all_qs && qs;
    int a = -1;
    if (qs) {
      a = alpha_of(s, G, c.subgroup_cap);
      for (const auto& row : r)
        if (!row.central && row.cn) {
          c_ls = std::max(c_ls, row.ratio);
          c_alpha[a] = std::max(c_alpha[a], *row.cn);
        }
    }
    members.push_back({{"group", render(s)}, {"order", G.order()}, {"alpha", a >= 0 ? json(a) : json(nullptr)}});
    rows.insert(rows.end(), r.begin(), r.end());
  }
  Report rep;
  rep.csv = cover_csv(rows);
  json jr = json::array();
  for (const auto& r : rows)
    jr.push_back({{"group", r.group},
                  {"classRep", r.class_rep_text},
                  {"classSize", r.class_size},
                  {"cn", r.cn ? json(*r.cn) : json("never")},
                  {"central", r.central},
                  {"ratio", r.central ? json(nullptr) : json(r.ratio)}});
  rep.doc = {{"rows", jr}, {"members", members}};
  if (all_qs) {
    rep.doc["cLS"] = c_ls;
    json ca = json::object();
    for (const auto& [a, v] : c_alpha) ca[std::to_string(a)] = v;
    rep.doc["cAlpha"] = ca;
  }
  return rep;
}

inline CentralizerRoute parse_route(const std::string& r) {
  if (r == "auto") return CentralizerRoute::Auto;
  if (r == "enumerate") return CentralizerRoute::Enumerate;
  if (r == "formula") return CentralizerRoute::Formula;
  throw Error(ErrorKind::ParseError, "unknown route '" + r + "'");
}

inline std::vector<double> beta_grid(const RunConfig& c) {
  if (!c.betas.empty()) return c.betas;
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

inline Report cmd_spectrum(const RunConfig& c) {
  Report rep;
  const auto betas = beta_grid(c);
  if (!c.sl.empty()) {
    if (c.sl.size() != 2) throw Error(ErrorKind::ParseError, "--sl takes n,p");
    std::vector<SLSpectrumRow> rows;
    json jr = json::array();
    for (double b : betas) {
      const auto e = spectrum_element_sl(c.sl[0], c.sl[1], b, parse_route(c.route), c.algebra_cap);
      rows.push_back({c.sl[0], c.sl[1], b, e.blocks.dim_v0, e.value.h});
      jr.push_back({{"n", c.sl[0]}, {"p", c.sl[1]}, {"beta", b}, {"dimV0", e.blocks.dim_v0}, {"h", e.value.h},
                    {"element", render_matrix(e.g)}, {"centralizer", e.centralizer.str()},
                    {"sandwich", e.sandwich_holds}});
    }
    rep.csv = sl_spectrum_csv(rows);
    rep.doc = {{"rows", jr}};
    return rep;
  }
  CycleRule rule;
  if (c.rule == "beta") rule = CycleRule::Beta;
  else if (c.rule == "alpha") rule = CycleRule::Alpha;
  else throw Error(ErrorKind::ParseError, "unknown rule '" + c.rule + "'");
  std::vector<SpectrumRow> rows;
  json jr = json::array();
  for (int n : c.ns)
    for (double b : betas) {
      rows.push_back(spectrum_row(n, b, rule));
      const auto& r = rows.back();
      jr.push_back({{"n", r.n}, {"beta", r.beta}, {"cycleLength", r.cycle_length}, {"h", r.h}, {"absError", r.abs_error}});
    }
  rep.csv = spectrum_csv(rows);
  rep.doc = {{"rule", c.rule}, {"rows", jr}};
  return rep;
}

inline GroupSpec single_group(const RunConfig& c) {
  if (c.groups.size() != 1) throw Error(ErrorKind::PreconditionViolated, "give exactly one --group");
  return parse_spec(c.groups.front());
}

inline std::vector<Automorphism> automorphisms(const RunConfig& c, const GroupTable& G) {
  std::vector<Automorphism> autos;
  if (!c.gens.empty())
    for (Index a : parse_elements(G, c.gens)) autos.push_back(inner_automorphism(G, a));
  if (c.swap) autos.push_back(factor_swap(G));
  if (autos.empty()) throw Error(ErrorKind::PreconditionViolated, "give --gens and/or --swap");
  return autos;
}

inline Report qsimple_report(const RunConfig& c, const GroupSpec& s, const GroupTable& G) {
  const auto r = qsimple_check(G, automorphisms(c, G));
  json witness = nullptr;
  if (r.witness) {
    json ts = json::array();
    for (Index t : r.witness->t) ts.push_back(G.render(t));
    witness = {{"t", ts}, {"via", r.witness->via}};
  }
  Report rep;
  rep.doc = {{"group", render(s)}, {"eligible", r.eligible}, {"perfect", r.perfect},
             {"minimalC", optional_json(r.minimal_c)}, {"witness", witness}};
  rep.csv = "group,eligible,perfect,minimal_c,witness\n\"" + render(s) + "\"," + (r.eligible ? "true" : "false") + ',' +
            (r.perfect ? "true" : "false") + ',' + (r.minimal_c ? std::to_string(*r.minimal_c) : "never") + ',' +
            (r.witness ? "found" : "none") + '\n';
  return rep;
}

inline Report cmd_width(const RunConfig& c) {
  const GroupSpec s = single_group(c);
  const GroupTable G = build_group(s, c.cap);
  if (c.mode == "qsimple") return qsimple_report(c, s, G);
  const auto gens = c.gens.empty() ? std::vector<Index>{} : parse_elements(G, c.gens);
  WidthReport w;
  if (c.mode == "segal") {
    w = segal_check(G, gens);
  } else if (c.mode == "keyc") {
    w = key_c_check(G, parse_target(G, c.target, c.lattice_cap), gens, c.lattice_cap);
  } else if (c.mode == "inner") {
    w.minimal_t = inner_check(G, gens);
    w.d = gens.size();
  } else {
    throw Error(ErrorKind::ParseError, "unknown mode '" + c.mode + "'");
  }
  if (w.alpha < 0 && G.order() <= c.subgroup_cap) w.alpha = alpha(G, c.subgroup_cap);
  Report rep;
  rep.doc = {{"group", render(s)},
             {"mode", c.mode},
             {"d", w.d},
             {"alpha", w.alpha >= 0 ? json(w.alpha) : json(nullptr)},
             {"minimalT", optional_json(w.minimal_t)},
             {"paperBound", optional_json(w.paper_bound)}};
  rep.csv = "group,mode,d,alpha,minimal_t,paper_bound\n\"" + render(s) + "\"," + c.mode + ',' + std::to_string(w.d) + ',' +
            (w.alpha >= 0 ? std::to_string(w.alpha) : "") + ',' +
            (w.minimal_t ? std::to_string(*w.minimal_t) : "unreachable") + ',' +
            (w.paper_bound ? std::to_string(*w.paper_bound) : "") + '\n';
  return rep;
}

inline Report cmd_qsimple(const RunConfig& c) {
  const GroupSpec s = single_group(c);
  return qsimple_report(c, s, build_group(s, c.cap));
}

// Inner automorphisms by one element of each coset of the centre, unless
// --gens narrows them; --swap adds the factor swap.
inline Report cmd_lemma(const RunConfig& c) {
  const auto specs = selected_groups(c);
  std::ostringstream csv;
  csv << "group,automorphisms,violations\n";
  json jr = json::array();
  for (const auto& s : specs) {
    const GroupTable G = build_group(s, c.cap);
    const ClassTable t = classes_for(c, s, G);
    std::vector<Automorphism> autos;
    if (!c.gens.empty()) {
      for (Index a : parse_elements(G, c.gens)) autos.push_back(inner_automorphism(G, a));
    } else {
      const Subgroup Z = center(G);
      ElementSet seen(G.order());
      for (Index a = 0; a < G.order(); ++a) {
        if (seen.contains(a)) continue;
        Z.members.for_each([&](Index z) { seen.insert(G.mul(a, z)); });
        autos.push_back(inner_automorphism(G, a));
      }
    }
    if (c.swap) autos.push_back(factor_swap(G));
    std::vector<std::size_t> counts(autos.size(), 0);
    detail::parallel_for(autos.size(), c.threads,
                         [&](std::size_t i) { counts[i] = lemma_useful_check(G, autos[i], &t).size(); });
    std::size_t total = 0;
    for (auto n : counts) total += n;
    csv << '"' << render(s) << "\"," << autos.size() << ',' << total << '\n';
    jr.push_back({{"group", render(s)}, {"automorphisms", autos.size()}, {"violations", total}});
  }
  return {csv.str(), {{"rows", jr}}};
}

inline Report cmd_filterbase(const RunConfig& c) {
  Report rep;
  if (c.dichotomy) {
    std::ostringstream csv;
    csv << "trial,tuples,blocked,fip,cover,consistent\n";
    json jr = json::array();
    auto store = std::make_shared<FamilyTables::Store>();
    std::size_t bad = 0;
    for (std::size_t i = 0; i < c.trials; ++i) {
      const auto t = dichotomy_trial(c.seed + i, c.length, c.eps, store);
      bad += !t.consistent();
      csv << i << ',' << t.tuples << ',' << t.blocked << ',' << t.fip << ',' << t.cover << ',' << t.consistent() << '\n';
      jr.push_back({{"trial", i}, {"tuples", t.tuples}, {"blocked", t.blocked}, {"fip", t.fip}, {"cover", t.cover},
                    {"consistent", t.consistent()}});
    }
    rep.csv = csv.str();
    rep.doc = {{"trials", jr}, {"inconsistent", bad}, {"eps", c.eps}, {"length", c.length}, {"seed", c.seed}};
    return rep;
  }
  Family fam;
  if (!c.family.empty()) {
    std::ifstream in(c.family);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + c.family);
    const auto j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::ParseError, c.family + " is not JSON");
    fam = parse_family(j);
  } else if (c.range.size() == 2) {
    if (c.range[0] < 5 || c.range[1] < c.range[0]) throw Error(ErrorKind::OutOfRange, "--range needs 5 <= from <= to");
    fam = alternating_family(c.range[0], c.range[1]);
  } else {
    throw Error(ErrorKind::PreconditionViolated, "give --family, --range or --dichotomy");
  }
  if (!(c.beta >= 0 && c.beta <= 1)) throw Error(ErrorKind::OutOfRange, "beta must lie in [0,1]");
  TupleElement t;
  for (const auto& m : fam.members) {
    if (m.spec.kind != GroupSpec::Kind::Alternating)
      throw Error(ErrorKind::PreconditionViolated, "h-sequences along beta need alternating members");
    t.push_back(CycleType::of(m.spec.n, {nearest_odd_length(c.beta * m.spec.n, m.spec.n)}));
  }
  FamilyTables ft(fam, c.cap);
  const auto hs = h_sequence(ft, t);
  rep.csv = h_csv(hs);
  json vals = json::array();
  for (const auto& v : hs.values) vals.push_back(v.h);
  rep.doc = {{"beta", c.beta},
             {"h", vals},
             {"converged", hs.limit.converged},
             {"limit", hs.limit.value},
             {"oscillation", hs.limit.oscillation}};
  return rep;
}

inline Report cmd_alpha(const RunConfig& c) {
  std::ostringstream csv;
  csv << "group,order,alpha\n";
  json jr = json::array();
  for (const auto& s : selected_groups(c)) {
    const GroupTable G = build_group(s, c.cap);
    const int a = alpha_of(s, G, c.subgroup_cap);
    csv << '"' << render(s) << "\"," << G.order() << ',' << a << '\n';
    jr.push_back({{"group", render(s)}, {"order", G.order()}, {"alpha", a}});
  }
  return {csv.str(), {{"rows", jr}}};
}

inline Report cmd_density(const RunConfig& c) {
  Report rep;
  std::ostringstream csv;
  if (c.gstar) {
    csv << "group,order,g_star,derived,simple_quotients\n";
    json jr = json::array();
    for (const auto& s : selected_groups(c)) {
      const GroupTable G = build_group(s, c.cap);
      const auto d = g_star(G, c.lattice_cap);
      csv << '"' << render(s) << "\"," << G.order() << ',' << d.g_star.order() << ',' << d.derived.order() << ','
          << d.simple_kernels.size() << '\n';
      json sf = json::array();
      for (const auto& f : d.simple_factors) sf.push_back(to_string(f));
      jr.push_back({{"group", render(s)}, {"order", G.order()}, {"gStar", d.g_star.order()},
                    {"derived", d.derived.order()}, {"abelianPart", to_string(d.abelian_part)}, {"simpleFactors", sf}});
    }
    rep.csv = csv.str();
    rep.doc = {{"rows", jr}};
    return rep;
  }
  if (c.projection) {
    csv << "degree,factor_order,closure_order,full\n";
    json jr = json::array();
    for (const auto& r : tau_projection_check(c.tau_product, c.cap, c.threads)) {
      csv << r.degree << ',' << r.factor_order << ',' << r.closure_order << ',' << r.full << '\n';
      jr.push_back({{"degree", r.degree}, {"factorOrder", r.factor_order}, {"closureOrder", r.closure_order}, {"full", r.full}});
    }
    rep.csv = csv.str();
    rep.doc = {{"rows", jr}};
    return rep;
  }
  const GroupTable G = build_tau_product(c.tau_product, c.cap);
  const std::size_t ab = G.order() / derived_subgroup(G).order();
  json doc = {{"group", G.name()}, {"order", G.order()}, {"abelianization", ab}};
  csv << "group,order,abelianization";
  std::string row = '"' + G.name() + "\"," + std::to_string(G.order()) + ',' + std::to_string(ab);
  if (c.check_closure) {
    const auto r = dense_closure_check(G, G.distinguished().value());
    doc["closureOrder"] = r.closure.order();
    doc["isWhole"] = r.is_whole;
    csv << ",closure_order,is_whole";
    row += ',' + std::to_string(r.closure.order()) + ',' + (r.is_whole ? "1" : "0");
  }
  csv << '\n' << row << '\n';
  rep.csv = csv.str();
  rep.doc = doc;
  return rep;
}

inline Report cmd_residuals(const RunConfig& c) {
  std::ostringstream csv;
  csv << "group,order,g1,g2,g3\n";
  json jr = json::array();
  for (const auto& s : selected_groups(c)) {
    const GroupTable G = build_group(s, c.cap);
    const auto r = residuals(G, c.lattice_cap);
    csv << '"' << render(s) << "\"," << G.order() << ',' << r.g1.order() << ',' << r.g2.order() << ',' << r.g3.order() << '\n';
    jr.push_back({{"group", render(s)}, {"order", G.order()}, {"g1", r.g1.order()}, {"g2", r.g2.order()}, {"g3", r.g3.order()}});
  }
  return {csv.str(), {{"rows", jr}}};
}

namespace detail {

inline std::string env_name(const std::string& option) {
  std::string s = "CLASSCOVER_";
  for (char ch : option) s += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

inline std::string long_name(const CLI::Option* o) {
  const auto& ln = o->get_lnames();
  return ln.empty() ? std::string{} : ln.front();
}

struct FileEntry {
  std::string section;  // empty for top level
  std::string name;
  std::string value;
};

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

inline std::string joined(const json& v) {
  if (!v.is_array()) return scalar_text(v);
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + scalar_text(v[i]);
  return s;
}

// JSON: {"key": value, "subcommand": {"key": value}}; anything else is read
// as TOML.
inline std::vector<FileEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config " + path);
  std::vector<FileEntry> out;
  if (std::filesystem::path(path).extension() == ".json") {
    const auto j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::ParseError, "config " + path + " is not a JSON object");
    for (const auto& [k, v] : j.items()) {
      if (v.is_object()) {
        for (const auto& [k2, v2] : v.items()) out.push_back({k, k2, joined(v2)});
      } else {
        out.push_back({"", k, joined(v)});
      }
    }
    return out;
  }
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(ErrorKind::ParseError, std::string("config ") + path + ": " + e.what());
  }
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;  // section markers
    std::string value;
    for (std::size_t i = 0; i < it.inputs.size(); ++i) value += (i ? "," : "") + it.inputs[i];
    out.push_back({it.parents.empty() ? "" : it.parents.front(), it.name, value});
  }
  return out;
}

}  // namespace detail

struct Command {
  CLI::App* app;
  std::function<Report(const RunConfig&)> fn;
};

// Runs the tool. Flags take precedence over CLASSCOVER_* variables, which
// take precedence over the config file.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, const EnvLookup& env = process_env) {
  RunConfig c;
  CLI::App app{"Conjugacy-class covering, class-size spectra and twisted commutator widths", "classcover"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--config", c.config_file, "TOML or JSON configuration file");
  app.add_option("--cache-dir", c.cache_dir, "Directory for cached class tables");
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "Report file (standard output when absent)");
  app.add_option("--meta", c.meta, "Metadata sidecar (default <out>.meta.json)");
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", c.seed, "Seed for sampled checks");
  app.add_option("--cap", c.cap, "Enumeration cap")->check(CLI::PositiveNumber);
  app.add_option("--lattice-cap", c.lattice_cap, "Normal-lattice cap")->check(CLI::PositiveNumber);
  app.add_option("--subgroup-cap", c.subgroup_cap, "Group order cap for alpha")->check(CLI::PositiveNumber);
  app.add_option("--algebra-cap", c.algebra_cap, "Centralizer-algebra cap")->check(CLI::PositiveNumber);

  std::vector<Command> commands;
  auto add = [&](const char* name, const char* help, std::function<Report(const RunConfig&)> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    commands.push_back({sub, std::move(fn)});
    return sub;
  };
  auto group_opts = [&](CLI::App* sub) {
    sub->add_option("--group", c.groups, "Group spec, e.g. A_5, SL(2,3) o SL(2,3)");
    sub->add_option("--corpus", c.corpus, "Corpus file");
  };

  auto* cover = add("cover", "Covering numbers of conjugacy classes", cmd_cover);
  group_opts(cover);
  cover->add_flag("--default-corpus", c.default_corpus, "Add the built-in simple and quasisimple corpus");
  cover->add_flag("--all-classes", c.all_classes, "Report every class");
  cover->add_option("--class", c.class_rep, "Report the class of this element");

  auto* spectrum = add("spectrum", "Class-size spectrum elements", cmd_spectrum);
  spectrum->add_option("--n", c.ns, "Degrees of A_n")->delimiter(',');
  spectrum->add_option("--beta", c.betas, "Targets in [0,1] (default 0,0.1,...,1)")->delimiter(',');
  spectrum->add_option("--rule", c.rule, "Cycle length rule")->check(CLI::IsMember({"beta", "alpha"}));
  spectrum->add_option("--sl", c.sl, "Use SL(n,p) instead: n,p")->delimiter(',');
  spectrum->add_option("--route", c.route, "Centralizer route")->check(CLI::IsMember({"auto", "enumerate", "formula"}));

  auto* width = add("width", "Twisted commutator widths", cmd_width);
  group_opts(width);
  width->add_option("--gens", c.gens, "Elements, e.g. \"(12),(1234)\"; '/' separates matrices");
  width->add_option("--mode", c.mode, "Check")->check(CLI::IsMember({"segal", "keyc", "inner", "qsimple"}));
  width->add_option("--target", c.target, "whole, derived, V4, normal:<order> or closure:<elements>");
  width->add_flag("--swap", c.swap, "Add the swap of the first two factors (qsimple)");

  auto* lemma = add("lemma-check", "Check a^G within [G,f][G,f^-1] for a in [G,f^-1]", cmd_lemma);
  group_opts(lemma);
  lemma->add_flag("--default-corpus", c.default_corpus, "Add the built-in simple and quasisimple corpus");
  lemma->add_option("--gens", c.gens, "Inner automorphisms by these elements (default: all)");
  lemma->add_flag("--swap", c.swap, "Add the swap of the first two factors");

  auto* qsimple = add("qsimple", "Products of [T,a][T,a^-1] in central products", cmd_qsimple);
  qsimple->add_option("--group", c.groups, "Central product spec");
  qsimple->add_option("--gens", c.gens, "Inner automorphisms by these elements");
  qsimple->add_flag("--swap", c.swap, "Swap of the first two factors");

  auto* filter = add("filterbase", "h-sequences, FIP and cover certificates", cmd_filterbase);
  filter->add_option("--family", c.family, "Family JSON file");
  filter->add_option("--range", c.range, "Alternating family from,to")->delimiter(',');
  filter->add_option("--beta", c.beta, "Cycle length fraction for the h-sequence");
  filter->add_flag("--dichotomy", c.dichotomy, "Run randomized dichotomy trials");
  filter->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
  filter->add_option("--length", c.length, "Family length")->check(CLI::PositiveNumber);
  filter->add_option("--eps", c.eps, "Threshold")->check(CLI::Range(1e-9, 1.0));

  auto* alpha_cmd = add("alpha", "Largest k with A_k involved", cmd_alpha);
  group_opts(alpha_cmd);
  alpha_cmd->add_flag("--default-corpus", c.default_corpus, "Add the built-in simple and quasisimple corpus");

  auto* density = add("density", "G_*, normal closures and the tau product", cmd_density);
  group_opts(density);
  density->add_option("--tau-product", c.tau_product, "Degrees n of the A_n factors")->delimiter(',');
  density->add_flag("--check-closure", c.check_closure, "Normal closure of the swap");
  density->add_flag("--gstar", c.gstar, "G_* for the given groups");
  density->add_flag("--projection", c.projection, "Closure of the swap in each factor separately");

  auto* resid = add("residuals", "Derived, semisimple and commutator residuals", cmd_residuals);
  group_opts(resid);

  const std::vector<std::string> given = args;
  auto parse = [&](std::vector<std::string> a) {
    std::reverse(a.begin(), a.end());
    app.parse(std::move(a));
  };

  try {
    parse(args);
    CLI::App* active = app.get_subcommands().front();

    std::map<std::string, std::string> fallback;
    auto options_of = [](CLI::App* a) { return a->get_options([](const CLI::Option* o) { return !o->get_lnames().empty(); }); };
    auto known = [&](CLI::App* a, const std::string& name) {
      for (const auto* o : options_of(a))
        if (detail::long_name(o) == name) return true;
      return false;
    };
    if (!c.config_file.empty()) {
      for (const auto& e : detail::read_config_file(c.config_file)) {
        bool ok = false;
        if (e.section.empty()) {
          ok = known(&app, e.name);
          for (const auto& cmd : commands) ok = ok || known(cmd.app, e.name);
        } else {
          for (const auto& cmd : commands)
            if (cmd.app->get_name() == e.section) ok = known(cmd.app, e.name);
        }
        if (!ok || e.name == "config")
          throw Error(ErrorKind::PreconditionViolated,
                      "unknown configuration key '" + (e.section.empty() ? "" : e.section + ".") + e.name + "'");
        if (e.section.empty() || e.section == active->get_name()) {
          // a sectioned entry overrides a top-level one
          if (!e.section.empty() || !fallback.count(e.name)) fallback[e.name] = e.value;
        }
      }
    }
    std::vector<std::string> extra;
    for (CLI::App* a : {&app, active}) {
      for (const auto* o : options_of(a)) {
        const std::string name = detail::long_name(o);
        if (o->count() > 0 || name == "config" || name == "help" || name == "version") continue;
        if (auto v = env(detail::env_name(name))) extra.push_back("--" + name + "=" + *v);
        else if (auto it = fallback.find(name); it != fallback.end() && (a == active || known(&app, name)))
          extra.push_back("--" + name + "=" + it->second);
      }
    }
    if (!extra.empty()) {
      app.clear();
      c = RunConfig{};
      std::vector<std::string> merged = given;
      merged.insert(merged.end(), extra.begin(), extra.end());
      parse(merged);
    }

    const auto started = std::chrono::system_clock::now();
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    for (const auto& cmd : commands)
      if (cmd.app == active) rep = cmd.fn(c);
    const std::string body = c.format == "json" ? rep.doc.dump(2) + "\n" : rep.csv;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (c.out.empty()) {
      out << body;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw Error(ErrorKind::IoError, "cannot write " + c.out);
      f << body;
    }
    const std::string meta = !c.meta.empty() ? c.meta : c.out.empty() ? std::string{} : c.out + ".meta.json";
    if (!meta.empty()) {
      const std::time_t tt = std::chrono::system_clock::to_time_t(started);
      std::ostringstream ts;
      ts << std::put_time(std::gmtime(&tt), "%Y-%m-%dT%H:%M:%SZ");
      json m = {{"version", kVersion}, {"command", given}, {"started", ts.str()}, {"elapsedSeconds", elapsed},
                {"seed", c.seed}, {"threads", c.threads}, {"format", c.format}};
      std::ofstream f(meta, std::ios::binary);
      if (!f) throw Error(ErrorKind::IoError, "cannot write " + meta);
      f << m.dump(2) << '\n';
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "classcover: " << e.what() << '\n';
    return is_cap_error(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << "classcover: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace classcover::cli
