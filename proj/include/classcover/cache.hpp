#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "classcover/classes.hpp"
#include "classcover/error.hpp"
#include "classcover/group_spec.hpp"
#include "classcover/group_table.hpp"

namespace classcover {

inline constexpr int kCacheFormat = 1;

namespace detail {

inline void hash_spec_files(const GroupSpec& s, std::uint64_t& h) {
  if (s.kind == GroupSpec::Kind::File) {
    std::ifstream in(s.path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + s.path);
    std::ostringstream buf;
    buf << in.rdbuf();
    h = fnv1a(buf.str(), h);
  }
  for (const auto& f : s.factors) hash_spec_files(f, h);
}

}  // namespace detail

// Changes whenever the rendered spec or any generator file it reads changes.
inline std::uint64_t spec_hash(const GroupSpec& s) {
  std::uint64_t h = fnv1a(render(s) + "#" + std::to_string(kCacheFormat));
  detail::hash_spec_files(s, h);
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline nlohmann::json class_table_json(const GroupSpec& s, const GroupTable& G, const ClassTable& t) {
  nlohmann::json j;
  j["format"] = kCacheFormat;
  j["spec"] = render(s);
  j["hash"] = hex64(spec_hash(s));
  j["order"] = G.order();
  auto& cls = j["classes"] = nlohmann::json::array();
  for (const auto& c : t.classes) cls.push_back(c.members.members());
  return j;
}

// Rebuilds a table from JSON; nullopt when the entry is stale or malformed.
inline std::optional<ClassTable> class_table_from_json(const nlohmann::json& j, const GroupSpec& s,
                                                       const GroupTable& G) {
  try {
    if (j.at("format").get<int>() != kCacheFormat || j.at("spec").get<std::string>() != render(s) ||
        j.at("hash").get<std::string>() != hex64(spec_hash(s)) || j.at("order").get<std::size_t>() != G.order())
      return std::nullopt;
    ClassTable t;
    t.class_of.assign(G.order(), kNoIndex);
    std::size_t seen = 0;
    for (const auto& members : j.at("classes")) {
      ConjClass c;
      c.members = ElementSet(G.order());
      for (const auto& m : members) {
        const auto x = m.get<Index>();
        if (x >= G.order() || t.class_of[x] != kNoIndex) return std::nullopt;
        c.members.insert(x);
        t.class_of[x] = static_cast<Index>(t.classes.size());
      }
      if (c.members.empty()) return std::nullopt;
      c.size = c.members.count();
      c.rep = c.members.members().front();
      seen += c.size;
      t.classes.push_back(std::move(c));
    }
    if (seen != G.order()) return std::nullopt;
    return t;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

class ClassTableCache {
 public:
  explicit ClassTableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const GroupSpec& s) const { return dir_ / ("classes-" + hex64(spec_hash(s)) + ".json"); }

  std::optional<ClassTable> load(const GroupSpec& s, const GroupTable& G) const {
    std::ifstream in(path_for(s));
    if (!in) return std::nullopt;
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return class_table_from_json(j, s, G);
  }

  void store(const GroupSpec& s, const GroupTable& G, const ClassTable& t) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const auto target = path_for(s);
    const auto tmp = target.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp);
      out << class_table_json(s, G, t).dump() << '\n';
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot write " + target.string());
  }

  // Loads or computes and stores; `hit` reports which happened.
  ClassTable get(const GroupSpec& s, const GroupTable& G, bool* hit = nullptr) const {
    if (auto t = load(s, G)) {
      if (hit) *hit = true;
      return *t;
    }
    if (hit) *hit = false;
    ClassTable t = class_table(G);
    store(s, G, t);
    return t;
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace classcover
