#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "classcover/error.hpp"
#include "classcover/group_spec.hpp"

namespace classcover {

// Simple and quasisimple groups for covering sweeps.
inline std::vector<GroupSpec> covering_corpus() {
  std::vector<GroupSpec> out;
  for (const char* s : {"A_5", "A_6", "A_7", "A_8", "PSL(2,7)", "PSL(2,11)", "PSL(2,13)", "SL(2,5)"})
    out.push_back(parse_spec(s));
  return out;
}

// Groups with at most 500 elements.
inline std::vector<GroupSpec> small_corpus() {
  std::vector<std::string> names = {
      "trivial", "S_3",     "S_4",        "A_4",       "SL(2,3)",   "GL(2,3)",   "A_5",
      "S_5",     "SL(2,5)", "PSL(2,7)",   "SL(2,7)",   "GL(2,5)",   "C_2 x C_2", "C_2 x C_4",
      "C_3 x S_3", "S_3 x S_3", "D_4 x C_2", "A_4 x C_2", "S_4 x C_2", "S_4 x C_3", "SL(2,3) x C_2",
      "A_4 x C_3", "A_4 x A_4", "GL(2,3) x C_2", "A_5 x C_2", "SL(2,3) o SL(2,3)", "SL(3,2)", "C_2 x C_2 x C_2"};
  for (int n = 2; n <= 12; ++n) names.push_back("C_" + std::to_string(n));
  for (int n = 3; n <= 16; ++n) names.push_back("D_" + std::to_string(n));
  std::vector<GroupSpec> out;
  for (const auto& n : names) out.push_back(parse_spec(n));
  return out;
}

// A JSON array of spec strings, or one spec per line ('#' starts a comment).
inline std::vector<GroupSpec> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read corpus " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<GroupSpec> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw Error(ErrorKind::ParseError, "corpus " + path + " is not a JSON array");
    for (const auto& s : j) {
      if (!s.is_string()) throw Error(ErrorKind::ParseError, "corpus entries must be strings");
      out.push_back(parse_spec(s.get<std::string>()));
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const auto b = line.find_last_not_of(" \t\r");
    out.push_back(parse_spec(line.substr(a, b - a + 1)));
  }
  return out;
}

}  // namespace classcover
