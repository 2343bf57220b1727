#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "classcover/error.hpp"

namespace classcover::detail {

using Perm = std::vector<std::uint16_t>;

inline Perm identity_perm(int degree) {
  Perm p(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) p[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i);
  return p;
}

// Points are 1-based in text. "(123)(45)" is accepted when every point is a
// single digit; otherwise cycles must be comma separated: "(1,12,3)".
inline Perm parse_cycles(std::string_view text, int degree) {
  Perm p = identity_perm(degree);
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::ParseError, "permutation '" + std::string(text) + "': " + why);
  };
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (text.substr(i) == "e" || text.substr(i) == "id") return p;
  std::vector<bool> used(static_cast<std::size_t>(degree), false);
  while (true) {
    skip();
    if (i >= text.size()) break;
    if (text[i] != '(') fail("expected '('");
    std::size_t close = text.find(')', i);
    if (close == std::string_view::npos) fail("unterminated cycle");
    std::string_view body = text.substr(i + 1, close - i - 1);
    std::vector<int> pts;
    const bool commas = body.find(',') != std::string_view::npos;
    if (commas) {
      std::size_t s = 0;
      while (s <= body.size()) {
        std::size_t e = body.find(',', s);
        if (e == std::string_view::npos) e = body.size();
        std::string tok;
        for (char c : body.substr(s, e - s))
          if (!std::isspace(static_cast<unsigned char>(c))) tok += c;
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) fail("bad point");
        pts.push_back(std::stoi(tok));
        s = e + 1;
      }
    } else {
      for (char c : body) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) fail("bad point");
        pts.push_back(c - '0');
      }
    }
    for (int pt : pts) {
      if (pt < 1 || pt > degree) fail("point out of range");
      if (used[static_cast<std::size_t>(pt - 1)]) fail("point repeated");
      used[static_cast<std::size_t>(pt - 1)] = true;
    }
    for (std::size_t k = 0; k < pts.size(); ++k)
      p[static_cast<std::size_t>(pts[k] - 1)] = static_cast<std::uint16_t>(pts[(k + 1) % pts.size()] - 1);
    i = close + 1;
  }
  return p;
}

inline std::string render_cycles(const std::uint16_t* img, int degree) {
  std::string out;
  std::vector<bool> seen(static_cast<std::size_t>(degree), false);
  const bool compact = degree <= 9;
  for (int s = 0; s < degree; ++s) {
    if (seen[static_cast<std::size_t>(s)] || img[s] == s) continue;
    out += '(';
    int x = s;
    bool first = true;
    while (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = true;
      if (!first && !compact) out += ',';
      out += std::to_string(x + 1);
      first = false;
      x = img[x];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

// Cycle lengths including fixed points, sorted descending.
inline std::vector<int> cycle_type(const std::uint16_t* img, int degree) {
  std::vector<int> parts;
  std::vector<bool> seen(static_cast<std::size_t>(degree), false);
  for (int s = 0; s < degree; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    int len = 0;
    for (int x = s; !seen[static_cast<std::size_t>(x)]; x = img[x]) {
      seen[static_cast<std::size_t>(x)] = true;
      ++len;
    }
    parts.push_back(len);
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

}  // namespace classcover::detail
