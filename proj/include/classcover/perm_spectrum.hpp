#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "classcover/error.hpp"

namespace classcover {

using BigInt = boost::multiprecision::cpp_int;

// Partition of n; parts sorted descending and include fixed points.
struct CycleType {
  int n = 0;
  std::vector<int> parts;

  // Pads `cycles` (nontrivial lengths) with fixed points up to degree n.
  static CycleType of(int n, std::vector<int> cycles) {
    CycleType t;
    t.n = n;
    int used = 0;
    for (int c : cycles) {
      if (c < 1) throw Error(ErrorKind::InvalidSpec, "cycle lengths must be positive");
      used += c;
    }
    if (used > n) throw Error(ErrorKind::InvalidSpec, "cycle lengths exceed degree");
    t.parts = std::move(cycles);
    t.parts.insert(t.parts.end(), static_cast<std::size_t>(n - used), 1);
    std::sort(t.parts.rbegin(), t.parts.rend());
    return t;
  }

  static CycleType identity(int n) { return of(n, {}); }

  bool is_even() const { return (n - static_cast<int>(parts.size())) % 2 == 0; }

  std::map<int, int> multiplicities() const {
    std::map<int, int> m;
    for (int p : parts) ++m[p];
    return m;
  }

  // The S_n class splits into two A_n classes.
  bool splits_in_an() const {
    auto m = multiplicities();
    return std::all_of(m.begin(), m.end(), [](auto kv) { return kv.first % 2 == 1 && kv.second == 1; });
  }

  friend bool operator==(const CycleType&, const CycleType&) = default;
};

inline std::string to_string(const CycleType& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t.parts[i]);
  }
  return s + ")";
}

struct SpectrumValue {
  double log_class_size = 0;
  double log_group_size = 0;
  double h = 0;
};

inline SpectrumValue make_spectrum_value(double log_class, double log_group) {
  SpectrumValue v{log_class, log_group, 0.0};
  v.h = log_group > 0 ? std::clamp(log_class / log_group, 0.0, 1.0) : 0.0;
  return v;
}

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt alternating_group_order(int n) { return n < 2 ? BigInt(1) : factorial(n) / 2; }

inline double log_alternating_order(int n) { return n < 2 ? 0.0 : std::lgamma(n + 1.0) - std::log(2.0); }

inline void require_even(const CycleType& t) {
  if (!t.is_even()) throw Error(ErrorKind::OddParity, "cycle type " + to_string(t) + " is odd");
}

// |class of t in A_n| = n!/z_t, halved when the class splits.
inline BigInt class_size_an(const CycleType& t) {
  require_even(t);
  BigInt z = 1;
  for (auto [len, mult] : t.multiplicities()) {
    z *= factorial(mult);
    for (int i = 0; i < mult; ++i) z *= len;
  }
  BigInt size = factorial(t.n) / z;
  if (t.splits_in_an() && t.n > 1) size /= 2;
  return size;
}

inline double log_class_size_an(const CycleType& t) {
  require_even(t);
  double z = 0;
  for (auto [len, mult] : t.multiplicities()) z += std::lgamma(mult + 1.0) + mult * std::log(static_cast<double>(len));
  double l = std::lgamma(t.n + 1.0) - z;
  if (t.splits_in_an() && t.n > 1) l -= std::log(2.0);
  return std::max(l, 0.0);
}

inline SpectrumValue spectrum_value_an(const CycleType& t) {
  return make_spectrum_value(log_class_size_an(t), log_alternating_order(t.n));
}

enum class CycleRule {
  Beta,   // cycle length about beta*n
  Alpha,  // cycle length about (1-beta)*n, the literal recipe
};

// Odd integer nearest x, ties going down, clamped to [3, largest odd <= n].
inline int nearest_odd_length(double x, int n) {
  const double lower = 2.0 * std::floor((x - 1.0) / 2.0) + 1.0;
  double pick = (x - lower) <= (lower + 2.0 - x) ? lower : lower + 2.0;
  const int hi = n % 2 ? n : n - 1;
  return static_cast<int>(std::clamp(pick, 3.0, static_cast<double>(hi)));
}

struct SpectrumElement {
  CycleType type;
  int cycle_length = 0;
  SpectrumValue value;
};

inline SpectrumElement spectrum_element_an(int n, double beta, CycleRule rule = CycleRule::Beta) {
  if (n < 5) throw Error(ErrorKind::PreconditionViolated, "spectrum element needs n >= 5");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorKind::OutOfRange, "beta must lie in [0,1]");
  const double target = (rule == CycleRule::Beta ? beta : 1.0 - beta) * n;
  SpectrumElement e;
  e.cycle_length = nearest_odd_length(target, n);
  e.type = CycleType::of(n, {e.cycle_length});
  e.value = spectrum_value_an(e.type);
  return e;
}

struct LimitReport {
  bool converged = false;
  double value = 0;        // mean over the tail
  double oscillation = 0;  // max - min over the tail
  std::size_t tail_start = 0;
};

// The tail is the last `tail_fraction` of the sequence (at least one entry).
inline LimitReport limit_report(const std::vector<double>& hs, double tolerance = 0.05, double tail_fraction = 0.25) {
  LimitReport r;
  if (hs.empty()) return r;
  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(hs.size() * tail_fraction)));
  r.tail_start = hs.size() - tail;
  const auto [lo, hi] = std::minmax_element(hs.begin() + static_cast<std::ptrdiff_t>(r.tail_start), hs.end());
  r.oscillation = *hi - *lo;
  double sum = 0;
  for (std::size_t i = r.tail_start; i < hs.size(); ++i) sum += hs[i];
  r.value = sum / static_cast<double>(tail);
  r.converged = r.oscillation < tolerance;
  return r;
}

inline std::string to_string(const LimitReport& r) {
  if (!r.converged) return "no cofinite limit";
  std::ostringstream s;
  s << "converged to " << r.value;
  return s.str();
}

struct SpectrumRow {
  int n = 0;
  double beta = 0;
  int cycle_length = 0;
  double h = 0;
  double abs_error = 0;
};

inline SpectrumRow spectrum_row(int n, double beta, CycleRule rule = CycleRule::Beta) {
  const auto e = spectrum_element_an(n, beta, rule);
  const double goal = rule == CycleRule::Beta ? beta : 1.0 - beta;
  return {n, beta, e.cycle_length, e.value.h, std::abs(e.value.h - goal)};
}

inline std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(6);
  s << "n,beta,cycle_length,h,abs_error\n";
  for (const auto& r : rows) s << r.n << ',' << r.beta << ',' << r.cycle_length << ',' << r.h << ',' << r.abs_error << '\n';
  return s.str();
}

}  // namespace classcover
